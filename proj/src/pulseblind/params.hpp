#pragma once

#include <cstdint>
#include <span>

namespace pulseblind {

// Source, protocol and receiver constants of the decoy-state BB84 link.
// Defaults follow the GYS detection parameters with a 0.21 dB/km fibre.
struct ProtocolParams {
    double mu = 0.6;                    // signal-state mean photon number
    double nu = 0.2;                    // decoy-state mean photon number
    double q_sift = 0.5;                // sifting factor
    double f_ec = 1.2;                  // error-correction inefficiency
    double e0 = 0.5;                    // background error rate
    double e_det = 0.033;               // optical misalignment error rate
    double y0 = 1.7e-6;                 // background yield per gate
    double eta_bob = 0.045;             // receiver transmittance
    double loss_coeff_db_per_km = 0.21; // fibre attenuation
};

void validate(const ProtocolParams& p);

// Gated-detector timing. The after-pulse probability is recorded but takes
// no part in the simulation.
struct DetectorTiming {
    double gate_frequency_hz = 40e6;
    double dead_time_s = 5e-6;
    double dark_count_per_gate = 5e-6;
    double afterpulse_prob = 0.03;
};

void validate(const DetectorTiming& t);

// One group of blinding pulses, repeated every `interval_s`.
struct BlindingConfig {
    std::int64_t cycle_count = 500; // pulses per group, at gate spacing
    double pulse_energy_j = 13.32e-12;
    double pulse_width_s = 4e-9;
    double interval_s = 2e-3;
};

void validate(const BlindingConfig& b, const DetectorTiming& t);

// Gate-count decomposition of one blinding-group interval.
struct AttackWindowProfile {
    std::int64_t n_interval = 0;
    std::int64_t n_blind = 0;
    std::int64_t n_dead = 0;
    std::int64_t n_control = 0;
    double alpha = 0.0; // n_control / n_interval
    double beta = 0.0;  // (n_blind + n_dead) / n_interval
};

// Converts timing quantities into gate counts (round-half-up on
// duration / gate period) and derives the alpha/beta proportions.
AttackWindowProfile derive_window_profile(const DetectorTiming& timing,
                                          const BlindingConfig& blinding,
                                          double blinded_period_s,
                                          std::int64_t controllable_gates);

// 10^(-loss * L / 10), in (0, 1].
double channel_transmittance(double length_km, double loss_coeff_db_per_km);

// Measured blinded period / controllable gates / reported photocurrent per
// cycle count, shipped as a built-in dataset so the CLI runs without files.
// All rows were taken with 2 ms between pulse groups.
struct BlindedRangeRow {
    std::int64_t cycle_count;
    double interval_s;
    double blinded_period_s;
    std::int64_t controllable_gates; // 0 where no data was taken
    double reported_current_a;
    bool has_control_data;
};

std::span<const BlindedRangeRow> blinded_range_table();
const BlindedRangeRow& blinded_range_row(std::int64_t cycle_count);

} // namespace pulseblind
