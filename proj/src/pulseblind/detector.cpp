#include "pulseblind/detector.hpp"

#include <algorithm>
#include <cmath>

#include "pulseblind/errors.hpp"
#include "pulseblind/format.hpp"

namespace pulseblind {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::InvalidArgument, what);
}

void validate(const LinearModeResponse& r) {
    require(r.gain_slope > 0.0, "gain slope must be positive");
    require(r.noise_halfwidth >= 0.0, "noise halfwidth must be non-negative");
    require(r.comparator_threshold > 0.0, "comparator threshold must be positive");
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Geiger-mode click probability for a pulse of the given energy, with unit
// detection efficiency per photon.
double geiger_click_probability(double energy_j) {
    if (energy_j <= 0.0) return 0.0;
    return 1.0 - std::exp(-energy_j / kPhotonEnergy1550J);
}

} // namespace

std::int64_t GateTimeline::count(GateTag tag) const {
    return std::count(tags.begin(), tags.end(), tag);
}

double click_probability_linear(double trigger_energy_j, const LinearModeResponse& resp) {
    validate(resp);
    require(trigger_energy_j >= 0.0, "trigger energy must be non-negative");
    const double amplitude = resp.gain_slope * trigger_energy_j;
    if (resp.noise_halfwidth == 0.0)
        return amplitude > resp.comparator_threshold ? 1.0 : 0.0;
    const double p =
        (amplitude - (resp.comparator_threshold - resp.noise_halfwidth)) / (2.0 * resp.noise_halfwidth);
    return std::clamp(p, 0.0, 1.0);
}

ControlEnergies control_energies(const LinearModeResponse& resp) {
    validate(resp);
    ControlEnergies c;
    c.e_never = (resp.comparator_threshold - resp.noise_halfwidth) / resp.gain_slope;
    c.e_half = resp.comparator_threshold / resp.gain_slope;
    c.e_always = (resp.comparator_threshold + resp.noise_halfwidth) / resp.gain_slope;
    if (c.e_never <= 0.0)
        fail(Errc::DegenerateResponse, "noise reaches the comparator threshold; never-energy is not positive");
    return c;
}

bool full_control_condition(const ControlEnergies& c) {
    return c.e_always < 2.0 * c.e_never;
}

GateTimeline build_timeline(const AttackWindowProfile& profile, const BlindingConfig& blinding) {
    require(profile.n_interval > 0, "profile has no gates");
    require(blinding.cycle_count >= 1, "cycle count must be >= 1");
    // the dead time overlaps the pulse group, so the blinded window starts
    // after whichever of the two ends last
    const std::int64_t blind_start = std::max(blinding.cycle_count, profile.n_dead);
    if (blind_start + profile.n_blind > profile.n_interval)
        fail(Errc::InvalidArgument, "pulse group, dead time and blinded window exceed the interval");
    if (profile.n_control > profile.n_blind)
        fail(Errc::InvalidArgument, "controllable gates exceed the blinded window");

    GateTimeline tl;
    tl.tags.assign(static_cast<std::size_t>(profile.n_interval), GateTag::Normal);
    for (std::int64_t g = 0; g < blind_start; ++g)
        tl.tags[static_cast<std::size_t>(g)] =
            g < blinding.cycle_count ? GateTag::BlindPulse : GateTag::Dead;
    for (std::int64_t g = 0; g < profile.n_blind; ++g)
        tl.tags[static_cast<std::size_t>(blind_start + g)] =
            g < profile.n_control ? GateTag::BlindedControllable : GateTag::BlindedUncontrollable;
    return tl;
}

SimulatedDetector::SimulatedDetector(const AttackWindowProfile& profile,
                                     const BlindingConfig& blinding, LinearModeResponse controllable,
                                     LinearModeResponse uncontrollable)
    : profile_(profile),
      timeline_(build_timeline(profile, blinding)),
      controllable_(controllable),
      uncontrollable_(uncontrollable) {
    validate(controllable_);
    validate(uncontrollable_);
}

LinearModeResponse SimulatedDetector::degraded_response(const LinearModeResponse& base) {
    LinearModeResponse r = base;
    if (r.gain_slope <= 0.0) r = LinearModeResponse{};
    // noise at threshold/2 sits past the threshold/3 full-control limit
    r.noise_halfwidth = std::max(r.noise_halfwidth, r.comparator_threshold / 2.0);
    return r;
}

double SimulatedDetector::click_probability(std::int64_t gate, double energy_j) const {
    require(gate >= 0 && gate < profile_.n_interval, "gate index outside the interval");
    switch (timeline_.tags[static_cast<std::size_t>(gate)]) {
    case GateTag::BlindPulse:
    case GateTag::Dead:
        return 0.0;
    case GateTag::BlindedControllable:
        return click_probability_linear(energy_j, controllable_);
    case GateTag::BlindedUncontrollable:
        return click_probability_linear(energy_j, uncontrollable_);
    case GateTag::Normal:
        return geiger_click_probability(energy_j);
    }
    return 0.0;
}

bool SimulatedDetector::trigger_click(std::int64_t gate, double energy_j,
                                      std::mt19937_64& rng) const {
    const double p = click_probability(gate, energy_j);
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01(rng) < p;
}

std::int64_t SimulatedDetector::first_probe_gate() const {
    std::int64_t g = 0;
    const auto& tags = timeline_.tags;
    while (g < profile_.n_interval) {
        const GateTag t = tags[static_cast<std::size_t>(g)];
        if (t != GateTag::BlindPulse && t != GateTag::Dead) break;
        ++g;
    }
    return g;
}

std::int64_t calibrate_blinded_period(const SimulatedDetector& det, double probe_energy_j,
                                      std::mt19937_64& rng) {
    require(probe_energy_j > 0.0, "probe energy must be positive");
    if (click_probability_linear(probe_energy_j, det.controllable_response()) > 0.0 ||
        click_probability_linear(probe_energy_j, det.uncontrollable_response()) > 0.0)
        fail(Errc::CalibrationAmbiguous, "probe clicks in linear mode; it cannot discriminate blinding");
    if (geiger_click_probability(probe_energy_j) < 0.999)
        fail(Errc::CalibrationAmbiguous, "probe too weak to click reliably in Geiger mode");

    std::int64_t count = 0;
    for (std::int64_t g = det.first_probe_gate(); g < det.profile().n_interval; ++g) {
        if (det.trigger_click(g, probe_energy_j, rng)) break;
        ++count;
    }
    return count;
}

ControlEnergies calibrate_control_energies(const SimulatedDetector& det, std::int64_t gate,
                                           std::span<const double> energy_grid, int trials,
                                           std::mt19937_64& rng) {
    require(trials >= 1000, "control-energy calibration needs at least 1000 trials per energy");
    require(energy_grid.size() >= 2, "energy grid needs at least two points");
    for (std::size_t i = 1; i < energy_grid.size(); ++i)
        require(energy_grid[i] > energy_grid[i - 1], "energy grid must be strictly increasing");

    std::vector<int> clicks(energy_grid.size(), 0);
    for (std::size_t i = 0; i < energy_grid.size(); ++i)
        for (int t = 0; t < trials; ++t)
            clicks[i] += det.trigger_click(gate, energy_grid[i], rng) ? 1 : 0;

    // never: top of the all-quiet prefix; always: bottom of the all-click suffix
    std::ptrdiff_t never_idx = -1;
    for (std::size_t i = 0; i < clicks.size() && clicks[i] == 0; ++i) never_idx = static_cast<std::ptrdiff_t>(i);
    std::ptrdiff_t always_idx = -1;
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(clicks.size()) - 1; i >= 0 && clicks[i] == trials; --i)
        always_idx = i;

    if (never_idx < 0 || always_idx < 0 || never_idx >= always_idx)
        fail(Errc::GridTooNarrow, "energy grid does not bracket the click transition");

    // nearest to p = 1/2; a hard step ties everywhere, so ties resolve
    // toward the middle of the transition
    const double mid_energy = 0.5 * (energy_grid[static_cast<std::size_t>(never_idx)] +
                                     energy_grid[static_cast<std::size_t>(always_idx)]);
    std::size_t half_idx = 0;
    double best = 2.0;
    double best_mid_dist = 0.0;
    for (std::size_t i = 0; i < clicks.size(); ++i) {
        const double dist = std::abs(static_cast<double>(clicks[i]) / trials - 0.5);
        const double mid_dist = std::abs(energy_grid[i] - mid_energy);
        if (dist < best - 1e-12 || (std::abs(dist - best) <= 1e-12 && mid_dist < best_mid_dist)) {
            best = dist;
            best_mid_dist = mid_dist;
            half_idx = i;
        }
    }

    ControlEnergies c;
    c.e_never = energy_grid[static_cast<std::size_t>(never_idx)];
    c.e_half = energy_grid[half_idx];
    c.e_always = energy_grid[static_cast<std::size_t>(always_idx)];
    return c;
}

std::string calibration_csv(std::span<const CalibrationRow> rows,
                            std::span<const std::string> comment_lines) {
    std::string out;
    for (const auto& line : comment_lines) out += "# " + line + "\n";
    out += "gate_index,e_never_j,e_half_j,e_always_j,fully_controllable\n";
    for (const auto& r : rows) {
        out += fmt_int(r.gate_index) + ",";
        out += fmt_sci(r.e_never_j) + ",";
        out += fmt_sci(r.e_half_j) + ",";
        out += fmt_sci(r.e_always_j) + ",";
        out += r.fully_controllable ? "1" : "0";
        out += "\n";
    }
    return out;
}

} // namespace pulseblind
