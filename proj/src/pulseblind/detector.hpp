#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pulseblind/params.hpp"

namespace pulseblind {

// Photon energy at 1550 nm, used to convert photon counts to joules.
inline constexpr double kPhotonEnergy1550J = 1.282e-19;

// Linear-mode transfer of the blinded APD: output amplitude is
// gain_slope * energy plus a bounded-uniform jitter of +-noise_halfwidth,
// compared against the click threshold. Hard noise bounds make the
// never/always energies exact.
struct LinearModeResponse {
    double gain_slope = 1e14;          // output units per joule
    double noise_halfwidth = 0.5;      // output units
    double comparator_threshold = 3.5; // output units
};

// Trigger energies that click with probability 0 / 0.5 / 1 in linear mode.
struct ControlEnergies {
    double e_never = 0.0;
    double e_half = 0.0;
    double e_always = 0.0;
};

enum class GateTag : std::uint8_t {
    BlindPulse,
    Dead,
    BlindedControllable,
    BlindedUncontrollable,
    Normal,
};

// Per-gate state tags over one blinding-group interval. The first gate of
// the group carries the click that starts the dead time.
struct GateTimeline {
    std::vector<GateTag> tags;

    std::int64_t count(GateTag tag) const;
};

// P(click) for a trigger pulse of the given energy in linear mode: exactly 0
// below (threshold - noise)/slope, exactly 1 above (threshold + noise)/slope,
// linear in between.
double click_probability_linear(double trigger_energy_j, const LinearModeResponse& resp);

// Closed-form never/half/always energies of a linear-mode response.
ControlEnergies control_energies(const LinearModeResponse& resp);

// Deterministic fake-state control requires e_always < 2 * e_never (strict),
// so that half a trigger pulse stays below the never energy.
bool full_control_condition(const ControlEnergies& c);

// Arranges the attack phases into per-gate tags: the blinding-pulse group
// (which the dead time from the group-initial click overlaps), then the
// blinded window with its controllable prefix, then normal gates.
GateTimeline build_timeline(const AttackWindowProfile& profile, const BlindingConfig& blinding);

// Gate-level behavioural model of the detector under one blinding group.
// Blinded gates respond in linear mode; uncontrollable blinded gates get a
// degraded response that fails the full-control condition, so an energy scan
// can tell the two regions apart. Normal gates respond in Geiger mode.
class SimulatedDetector {
public:
    SimulatedDetector(const AttackWindowProfile& profile, const BlindingConfig& blinding,
                      LinearModeResponse controllable = {},
                      LinearModeResponse uncontrollable = degraded_response({}));

    // Click outcome of a trigger pulse of the given energy inside gate `gate`.
    bool trigger_click(std::int64_t gate, double energy_j, std::mt19937_64& rng) const;

    double click_probability(std::int64_t gate, double energy_j) const;

    const GateTimeline& timeline() const { return timeline_; }
    const AttackWindowProfile& profile() const { return profile_; }
    const LinearModeResponse& controllable_response() const { return controllable_; }
    const LinearModeResponse& uncontrollable_response() const { return uncontrollable_; }

    // First gate past the blinding-pulse group and the dead time, where the
    // blinded-period scan starts.
    std::int64_t first_probe_gate() const;

    // A response with the noise widened past threshold/3, which breaks the
    // full-control condition while keeping the never energy positive.
    static LinearModeResponse degraded_response(const LinearModeResponse& base);

private:
    AttackWindowProfile profile_;
    GateTimeline timeline_;
    LinearModeResponse controllable_;
    LinearModeResponse uncontrollable_;
};

// Default calibration probe: 67 photons at 1550 nm.
inline constexpr double kDefaultProbeEnergyJ = 67 * kPhotonEnergy1550J;

// Re-runs the blinded-period scan against the simulated detector: the probe
// walks gate-by-gate from the end of the pulse group and the count of
// consecutive no-click gates is returned.
std::int64_t calibrate_blinded_period(const SimulatedDetector& det, double probe_energy_j,
                                      std::mt19937_64& rng);

// Empirical never/half/always energies at one gate from repeated trials over
// a monotone energy grid.
ControlEnergies calibrate_control_energies(const SimulatedDetector& det, std::int64_t gate,
                                           std::span<const double> energy_grid, int trials,
                                           std::mt19937_64& rng);

struct CalibrationRow {
    std::int64_t gate_index = 0;
    double e_never_j = 0.0;
    double e_half_j = 0.0;
    double e_always_j = 0.0;
    bool fully_controllable = false;
};

// CSV with header gate_index,e_never_j,e_half_j,e_always_j,fully_controllable.
std::string calibration_csv(std::span<const CalibrationRow> rows,
                            std::span<const std::string> comment_lines = {});

} // namespace pulseblind
