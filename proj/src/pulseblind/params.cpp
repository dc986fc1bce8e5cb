#include "pulseblind/params.hpp"

#include <array>
#include <cmath>
#include <string>

#include "pulseblind/errors.hpp"

namespace pulseblind {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::InvalidArgument, what);
}

// round-half-up of a duration expressed in gate periods
std::int64_t gates_of(double duration_s, double gate_frequency_hz) {
    return static_cast<std::int64_t>(std::floor(duration_s * gate_frequency_hz + 0.5));
}

} // namespace

void validate(const ProtocolParams& p) {
    require(p.nu > 0.0 && p.nu < p.mu, "require 0 < nu < mu");
    require(p.q_sift > 0.0 && p.q_sift <= 1.0, "q_sift must be in (0, 1]");
    require(p.f_ec >= 1.0, "f_ec must be >= 1");
    require(p.e0 >= 0.0 && p.e0 <= 1.0, "e0 must be in [0, 1]");
    require(p.e_det >= 0.0 && p.e_det <= 1.0, "e_det must be in [0, 1]");
    require(p.y0 >= 0.0 && p.y0 <= 1.0, "y0 must be in [0, 1]");
    require(p.eta_bob > 0.0 && p.eta_bob <= 1.0, "eta_bob must be in (0, 1]");
    require(p.loss_coeff_db_per_km > 0.0, "loss coefficient must be positive");
}

void validate(const DetectorTiming& t) {
    require(t.gate_frequency_hz > 0.0, "gate frequency must be positive");
    require(t.dead_time_s >= 0.0, "dead time must be non-negative");
    require(t.dark_count_per_gate >= 0.0 && t.dark_count_per_gate <= 1.0,
            "dark count probability must be in [0, 1]");
    require(t.afterpulse_prob >= 0.0 && t.afterpulse_prob <= 1.0,
            "after-pulse probability must be in [0, 1]");
}

void validate(const BlindingConfig& b, const DetectorTiming& t) {
    require(b.cycle_count >= 1, "cycle count must be >= 1");
    require(b.pulse_energy_j > 0.0, "pulse energy must be positive");
    require(b.pulse_width_s > 0.0, "pulse width must be positive");
    require(b.interval_s > static_cast<double>(b.cycle_count) / t.gate_frequency_hz,
            "interval must exceed the blinding-pulse group duration");
}

AttackWindowProfile derive_window_profile(const DetectorTiming& timing,
                                          const BlindingConfig& blinding,
                                          double blinded_period_s,
                                          std::int64_t controllable_gates) {
    validate(timing);
    validate(blinding, timing);
    require(blinded_period_s >= 0.0, "blinded period must be non-negative");
    require(controllable_gates >= 0, "controllable gate count must be non-negative");

    AttackWindowProfile w;
    w.n_interval = gates_of(blinding.interval_s, timing.gate_frequency_hz);
    w.n_dead = gates_of(timing.dead_time_s, timing.gate_frequency_hz);
    w.n_blind = gates_of(blinded_period_s, timing.gate_frequency_hz);
    w.n_control = controllable_gates;

    if (w.n_blind + w.n_dead > w.n_interval)
        fail(Errc::InvalidArgument, "blinded period plus dead time exceeds the group interval");
    if (w.n_control > w.n_blind)
        fail(Errc::InvalidArgument, "controllable gates exceed the blinded period");

    w.alpha = static_cast<double>(w.n_control) / static_cast<double>(w.n_interval);
    w.beta = static_cast<double>(w.n_blind + w.n_dead) / static_cast<double>(w.n_interval);
    return w;
}

double channel_transmittance(double length_km, double loss_coeff_db_per_km) {
    require(length_km >= 0.0, "channel length must be non-negative");
    require(loss_coeff_db_per_km > 0.0, "loss coefficient must be positive");
    return std::pow(10.0, -loss_coeff_db_per_km * length_km / 10.0);
}

namespace {

constexpr std::array<BlindedRangeRow, 6> kBlindedRange{{
    {250, 2e-3, 2.025e-6, 0, 1.8e-6, false},
    {300, 2e-3, 20.025e-6, 0, 1.8e-6, false},
    {350, 2e-3, 45.025e-6, 72, 1.9e-6, true},
    {400, 2e-3, 100.05e-6, 150, 1.9e-6, true},
    {450, 2e-3, 135.05e-6, 330, 2.0e-6, true},
    {500, 2e-3, 195.05e-6, 690, 2.1e-6, true},
}};

} // namespace

std::span<const BlindedRangeRow> blinded_range_table() { return kBlindedRange; }

const BlindedRangeRow& blinded_range_row(std::int64_t cycle_count) {
    for (const auto& row : kBlindedRange)
        if (row.cycle_count == cycle_count) return row;
    fail(Errc::Config, "no blinded-range data for cycle count " + std::to_string(cycle_count));
}

} // namespace pulseblind
