#include <random>
#include <vector>

#include <doctest.h>

#include "pulseblind/detector.hpp"
#include "pulseblind/errors.hpp"

using namespace pulseblind;

namespace {

AttackWindowProfile profile_for(std::int64_t cycles) {
    const auto& row = blinded_range_row(cycles);
    BlindingConfig b;
    b.cycle_count = row.cycle_count;
    return derive_window_profile(DetectorTiming{}, b, row.blinded_period_s,
                                 row.controllable_gates);
}

BlindingConfig blinding_for(std::int64_t cycles) {
    BlindingConfig b;
    b.cycle_count = cycles;
    return b;
}

const LinearModeResponse kUnitResponse{1.0, 0.5, 3.5};

} // namespace

TEST_CASE("linear-mode click probability") {
    CHECK(click_probability_linear(0.0, kUnitResponse) == 0.0);
    CHECK(click_probability_linear(3.5, kUnitResponse) == 0.5);
    CHECK(click_probability_linear(4.2, kUnitResponse) == 1.0);
    CHECK(click_probability_linear(3.0, kUnitResponse) == 0.0);
    CHECK(click_probability_linear(4.0, kUnitResponse) == 1.0);
    CHECK(click_probability_linear(3.25, kUnitResponse) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("linear-mode click probability is a non-decreasing ramp") {
    double prev = -1.0;
    for (double e = 0.0; e < 6.0; e += 0.05) {
        const double p = click_probability_linear(e, kUnitResponse);
        CHECK(p >= prev);
        if (e < 3.0) CHECK(p == 0.0);
        if (e > 4.0) CHECK(p == 1.0);
        prev = p;
    }
    // noiseless response is a hard step
    const LinearModeResponse step{1.0, 0.0, 3.5};
    CHECK(click_probability_linear(3.49, step) == 0.0);
    CHECK(click_probability_linear(3.51, step) == 1.0);
}

TEST_CASE("control energies in closed form") {
    const auto c = control_energies(kUnitResponse);
    CHECK(c.e_never == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(c.e_half == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(c.e_always == doctest::Approx(4.0).epsilon(1e-15));

    const auto steep = control_energies(LinearModeResponse{2.0, 0.5, 3.5});
    CHECK(steep.e_never == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(steep.e_half == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(steep.e_always == doctest::Approx(2.0).epsilon(1e-15));

    const auto flat = control_energies(LinearModeResponse{1.0, 0.0, 3.5});
    CHECK(flat.e_never == flat.e_half);
    CHECK(flat.e_half == flat.e_always);

    CHECK_THROWS_AS(control_energies(LinearModeResponse{1.0, 3.5, 3.5}), Error);
}

TEST_CASE("full-control condition") {
    CHECK(full_control_condition({3.0, 3.5, 4.0}));        // 4.0 < 6.0
    CHECK_FALSE(full_control_condition({1.0, 1.5, 2.0}));  // boundary, strict
    CHECK(full_control_condition({1.0, 1.0, 1.0}));        // noiseless
}

TEST_CASE("full control holds exactly below noise = threshold/3") {
    for (double noise = 0.05; noise < 3.4; noise += 0.11) {
        const auto c = control_energies(LinearModeResponse{1.0, noise, 3.5});
        CHECK(full_control_condition(c) == (noise < 3.5 / 3.0));
    }
}

TEST_CASE("timeline arranges the attack phases") {
    const auto w500 = profile_for(500);
    const auto tl = build_timeline(w500, blinding_for(500));
    CHECK(tl.tags.size() == 80000);
    CHECK(tl.count(GateTag::BlindPulse) == 500);
    CHECK(tl.count(GateTag::BlindedControllable) == 690);
    CHECK(tl.count(GateTag::BlindedControllable) + tl.count(GateTag::BlindedUncontrollable) ==
          w500.n_blind);
    // dead window sits inside the 500-gate pulse group
    CHECK(tl.count(GateTag::Dead) == 0);
    CHECK(tl.tags[0] == GateTag::BlindPulse);
    CHECK(tl.tags[500] == GateTag::BlindedControllable);
    CHECK(tl.tags[500 + 690] == GateTag::BlindedUncontrollable);
    CHECK(tl.tags[79999] == GateTag::Normal);

    const auto tl350 = build_timeline(profile_for(350), blinding_for(350));
    CHECK(tl350.count(GateTag::BlindedControllable) == 72);

    // no blinded window at all
    const auto none = derive_window_profile(DetectorTiming{}, blinding_for(500), 0.0, 0);
    const auto tlz = build_timeline(none, blinding_for(500));
    CHECK(tlz.count(GateTag::BlindedControllable) == 0);
    CHECK(tlz.count(GateTag::BlindedUncontrollable) == 0);
    CHECK(tlz.count(GateTag::Normal) == 80000 - 500);

    // dead time longer than the pulse group shows up as explicit dead gates
    DetectorTiming slow;
    slow.dead_time_s = 20e-6; // 800 gates
    const auto wslow = derive_window_profile(slow, blinding_for(500), 100e-6, 0);
    const auto tls = build_timeline(wslow, blinding_for(500));
    CHECK(tls.count(GateTag::Dead) == 300);
    CHECK(tls.tags[500] == GateTag::Dead);
}

TEST_CASE("blinded-period calibration round-trips every measured profile") {
    std::mt19937_64 rng(42);
    for (const auto& row : blinded_range_table()) {
        const SimulatedDetector det(profile_for(row.cycle_count), blinding_for(row.cycle_count));
        const auto measured = calibrate_blinded_period(det, kDefaultProbeEnergyJ, rng);
        CHECK(measured == profile_for(row.cycle_count).n_blind);
    }

    const auto none = derive_window_profile(DetectorTiming{}, blinding_for(500), 0.0, 0);
    const SimulatedDetector det(none, blinding_for(500));
    CHECK(calibrate_blinded_period(det, kDefaultProbeEnergyJ, rng) == 0);
}

TEST_CASE("an overstrong probe is rejected as ambiguous") {
    std::mt19937_64 rng(7);
    const SimulatedDetector det(profile_for(500), blinding_for(500));
    CHECK_THROWS_AS(calibrate_blinded_period(det, 5.0e-14, rng), Error);
    CHECK_THROWS_AS(calibrate_blinded_period(det, 0.0, rng), Error);
}

TEST_CASE("control-energy calibration approaches the closed form") {
    std::mt19937_64 rng(11);
    const SimulatedDetector det(profile_for(500), blinding_for(500));

    std::vector<double> grid;
    const double step = 0.05e-14;
    for (double e = 2.6e-14; e <= 4.4e-14 + 1e-22; e += step) grid.push_back(e);

    const auto c = calibrate_control_energies(det, 600, grid, 10000, rng);
    const auto exact = control_energies(det.controllable_response());
    CHECK(std::abs(c.e_never - exact.e_never) <= 2 * step);
    CHECK(std::abs(c.e_half - exact.e_half) <= 2 * step);
    CHECK(std::abs(c.e_always - exact.e_always) <= 2 * step);
    CHECK(full_control_condition(c));
}

TEST_CASE("a noiseless detector calibrates to its step within one grid point") {
    std::mt19937_64 rng(29);
    const LinearModeResponse step{1.0, 0.0, 3.5};
    const SimulatedDetector det(profile_for(500), blinding_for(500), step,
                                SimulatedDetector::degraded_response(step));
    std::vector<double> grid;
    for (double e = 3.0; e <= 4.0 + 1e-9; e += 0.1) grid.push_back(e);
    const auto c = calibrate_control_energies(det, 600, grid, 1000, rng);
    CHECK(std::abs(c.e_never - 3.5) <= 0.1 + 1e-9);
    CHECK(std::abs(c.e_half - 3.5) <= 0.1 + 1e-9);
    CHECK(std::abs(c.e_always - 3.5) <= 0.1 + 1e-9);
}

TEST_CASE("control-energy calibration flags a grid that does not bracket") {
    std::mt19937_64 rng(13);
    const SimulatedDetector det(profile_for(500), blinding_for(500));

    std::vector<double> low{1.0e-14, 1.5e-14, 2.0e-14}; // all below the never energy
    CHECK_THROWS_AS(calibrate_control_energies(det, 600, low, 1000, rng), Error);

    // a normal (Geiger) gate clicks on the whole grid
    std::vector<double> wide;
    for (double e = 1.0e-14; e <= 6.0e-14; e += 0.5e-14) wide.push_back(e);
    CHECK_THROWS_AS(calibrate_control_energies(det, 20000, wide, 1000, rng), Error);
    CHECK_THROWS_AS(calibrate_control_energies(det, 600, wide, 10, rng), Error); // too few trials
}

TEST_CASE("uncontrollable blinded gates fail the full-control test") {
    std::mt19937_64 rng(17);
    const SimulatedDetector det(profile_for(500), blinding_for(500));
    std::vector<double> grid;
    for (double e = 1.0e-14; e <= 6.5e-14 + 1e-22; e += 0.25e-14) grid.push_back(e);

    const auto ctl = calibrate_control_energies(det, 600, grid, 2000, rng);
    CHECK(full_control_condition(ctl));
    const auto unc = calibrate_control_energies(det, 3000, grid, 2000, rng);
    CHECK_FALSE(full_control_condition(unc));
}

TEST_CASE("calibration CSV carries the expected columns") {
    std::vector<CalibrationRow> rows{{500, 3.0e-14, 3.5e-14, 4.0e-14, true}};
    const auto csv = calibration_csv(rows);
    CHECK(csv.find("gate_index,e_never_j,e_half_j,e_always_j,fully_controllable\n") !=
          std::string::npos);
    CHECK(csv.find("500,3.00000000e-14,3.50000000e-14,4.00000000e-14,1\n") != std::string::npos);
}
