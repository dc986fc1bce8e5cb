#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pulseblind/params.hpp"

namespace pulseblind {

// Photocurrent-monitor model. Every blinding pulse injects a charge that
// decays exponentially through the readout; the monitor low-passes the
// resulting current and alarms on the extracted value.
struct MonitorParams {
    double baseline_current_a = 1.4e-6;       // normal working state
    double alarm_threshold_a = 10e-6;
    double constant_blind_threshold_a = 31e-6;
    double charge_per_pulse_c = 2.8e-12;      // at the reference pulse energy
    double reference_pulse_energy_j = 13.32e-12;
    double decay_tau_s = 1e-6;                // hysteresis decay of injected current
    double cutoff_freq_hz = 1e4;              // monitor low-pass cutoff
};

void validate(const MonitorParams& m);

// Sampled detector photocurrent. `group_interval_s` records the blinding
// schedule period (0 when the trace is aperiodic) so the steady-state
// average can span whole periods.
struct PhotocurrentTrace {
    double sample_period_s = 0.0;
    double group_interval_s = 0.0;
    std::vector<double> samples;
};

// One injected charge at a point in time; the public schedule synthesis is
// built on this, and it lets superposition tests combine schedules.
struct ChargeInjection {
    double time_s = 0.0;
    double charge_c = 0.0;
};

PhotocurrentTrace synthesize_from_injections(std::span<const ChargeInjection> injections,
                                             const MonitorParams& m, double span_s,
                                             double sample_period_s, double group_interval_s = 0.0);

// Detector photocurrent over `n_groups` blinding-group intervals:
// baseline plus one exponentially decaying charge per pulse.
PhotocurrentTrace synthesize_photocurrent(const DetectorTiming& timing,
                                          const BlindingConfig& blinding, const MonitorParams& m,
                                          std::int64_t n_groups, double sample_period_s);

// Low-passes the trace and returns the steady-state time average of the
// filtered signal, the value the monitor reports.
double reported_current(const PhotocurrentTrace& trace, const MonitorParams& m);

// The alarm fires when the reported current reaches the threshold.
bool alarm(double reported_a, const MonitorParams& m);

struct ReportedCurrentRow {
    std::int64_t cycle_count = 0;
    double interval_s = 0.0;
    double reported_a = 0.0;
};

// Least-squares fit of reported = baseline + cycles * q / interval over the
// given rows; returns the charge per pulse q.
double fit_charge_per_pulse(std::span<const ReportedCurrentRow> rows, const MonitorParams& m);

// Smallest total group energy whose reported current reaches the
// constant-blinding threshold, located by bisection to relative 1e-6.
double constant_blinding_energy(double interval_s, std::int64_t cycles_per_group,
                                const MonitorParams& m, const DetectorTiming& timing);

// CSV with header t_s,i_amp.
std::string trace_csv(const PhotocurrentTrace& trace, std::span<const std::string> comment_lines = {});

struct MonitorReportRow {
    std::int64_t cycle_count = 0;
    double interval_s = 0.0;
    double reported_a = 0.0;
    bool alarmed = false;
};

// CSV with header cycle_count,interval_s,reported_uA,alarm.
std::string monitor_report_csv(std::span<const MonitorReportRow> rows,
                               std::span<const std::string> comment_lines = {});

} // namespace pulseblind
