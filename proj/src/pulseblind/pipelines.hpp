#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pulseblind/config.hpp"
#include "pulseblind/scan.hpp"

namespace pulseblind {

inline constexpr const char* kVersion = "0.1.0";

struct SweepOptions {
    double l_start_km = 0.0;
    double l_end_km = 170.0;
    double l_step_km = 0.25;
    bool no_attack = false;
};

// Distance sweep of the full pipeline, as CSV with the effective
// configuration echoed in '#' comment lines.
std::string run_sweep_csv(const Config& cfg, const SweepOptions& opt);

CrossoverReport run_crossovers(const Config& cfg, double l_min_km = 0.0, double l_max_km = 170.0);

// {"l_overestimate_km": ..., "l_insecure_km": ..., "feasible_min_km": ...,
//  "feasible_max_km": ...}; absent values print as "NONE".
std::string crossover_report_json(const CrossoverReport& report);

struct MonteCarloOptions {
    std::vector<double> lengths_km{30.0, 50.0, 100.0};
    std::uint64_t intervals = 100000;
    std::uint64_t seed = 1;
};

struct MonteCarloOutcome {
    std::string json;
    double max_abs_z = 0.0;
    bool all_within_4_sigma = true;
};

// Simulation-versus-closed-form agreement at the requested distances.
// Infeasible distances are reported as such and carry no z-scores.
MonteCarloOutcome run_montecarlo(const Config& cfg, const MonteCarloOptions& opt);

struct MonitorOutcome {
    std::string csv;
    double fitted_charge_c = 0.0;
    bool unexpected_alarm = false;
};

// Replays the built-in blinded-range dataset through the photocurrent model
// with a freshly fitted per-pulse charge and reports current plus alarm
// state per cycle count.
MonitorOutcome run_monitor(const Config& cfg);

struct CalibrateOutcome {
    std::string csv;
    std::string verdict_json;
    std::int64_t configured_n_blind = 0;
    std::int64_t measured_n_blind = 0;
    bool round_trip_ok = false;
};

// Re-runs the blinded-period and control-energy calibration against the
// simulated detector built from the configuration.
CalibrateOutcome run_calibrate(const Config& cfg, std::uint64_t seed);

// Photocurrent trace CSV over the configured blinding schedule.
std::string run_trace_csv(const Config& cfg, std::int64_t n_groups, double sample_period_s);

} // namespace pulseblind
