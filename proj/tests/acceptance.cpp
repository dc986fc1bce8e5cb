// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion also enforces its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pulseblind/detector.hpp"
#include "pulseblind/keyrate.hpp"
#include "pulseblind/monitor.hpp"
#include "pulseblind/montecarlo.hpp"
#include "pulseblind/scan.hpp"

using namespace pulseblind;

namespace {

const ProtocolParams kParams{};
const DetectorTiming kTiming{};

AttackWindowProfile profile_for(std::int64_t cycles) {
    const auto& row = blinded_range_row(cycles);
    BlindingConfig b;
    b.cycle_count = row.cycle_count;
    return derive_window_profile(kTiming, b, row.blinded_period_s, row.controllable_gates);
}

BlindingConfig blinding_for(std::int64_t cycles) {
    BlindingConfig b;
    b.cycle_count = cycles;
    return b;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

bool within(double value, double target, double rel_tol) {
    return std::abs(value - target) <= rel_tol * target;
}

int run(int index, const std::string& name, double budget_s,
        const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > budget_s) {
        out.pass = false;
        out.detail += (out.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("[%s] %d. %s (%.2fs / %.0fs)%s%s\n", out.pass ? "PASS" : "FAIL", index,
                name.c_str(), elapsed, budget_s, out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    std::fflush(stdout);
    return out.pass ? 0 : 1;
}

void criterion_crossover_500(Outcome& out) {
    const auto report = find_crossovers(profile_for(500), kParams, 0.0, 170.0);
    out.expect(report.l_overestimate_km.has_value(), "no overestimation crossover found");
    out.expect(report.l_insecure_km.has_value(), "no insecurity crossover found");
    if (!report.l_overestimate_km || !report.l_insecure_km) return;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "l_over=%.2f km (target 20), l_insec=%.2f km (target 43)",
                  *report.l_overestimate_km, *report.l_insecure_km);
    out.detail = buf;
    out.expect(within(*report.l_overestimate_km, 20.0, 0.15), "overestimation off by >15%");
    out.expect(within(*report.l_insecure_km, 43.0, 0.15), "insecurity off by >15%");
}

void criterion_crossover_family(Outcome& out) {
    const std::vector<std::pair<std::int64_t, std::pair<double, double>>> targets{
        {350, {96.0, 99.5}}, {400, {62.0, 79.0}}, {450, {37.0, 60.0}}, {500, {20.0, 43.0}}};
    double prev_over = 1e9;
    double prev_insec = 1e9;
    for (const auto& [cycles, t] : targets) {
        const auto report = find_crossovers(profile_for(cycles), kParams, 0.0, 170.0);
        out.expect(report.l_overestimate_km.has_value() && report.l_insecure_km.has_value(),
                   std::to_string(cycles) + ": crossover missing");
        if (!report.l_overestimate_km || !report.l_insecure_km) return;
        const double over = *report.l_overestimate_km;
        const double insec = *report.l_insecure_km;
        out.expect(within(over, t.first, 0.15),
                   std::to_string(cycles) + ": overestimation off target");
        out.expect(within(insec, t.second, 0.15),
                   std::to_string(cycles) + ": insecurity off target");
        out.expect(over < prev_over && insec < prev_insec,
                   std::to_string(cycles) + ": not decreasing in cycle count");
        prev_over = over;
        prev_insec = insec;
    }
}

void criterion_no_attack_baseline(Outcome& out) {
    for (const auto& row : sweep_no_attack(kParams, 0.0, 170.0, 0.25)) {
        const double rate = row.r_est.value_or(0.0);
        if (row.length_km <= 120.0)
            out.expect(rate > 1e-7, "rate fell below 1e-7 at " + std::to_string(row.length_km));
        if (row.length_km >= 140.0)
            out.expect(rate < 1e-7, "rate stayed above 1e-7 at " + std::to_string(row.length_km));
        if (!out.pass) return;
    }
}

void criterion_gain_match(Outcome& out) {
    double worst = 0.0;
    for (const auto& row : blinded_range_table()) {
        const auto profile = profile_for(row.cycle_count);
        for (double l = 0.0; l <= 170.0; l += 0.25) {
            const auto sol = solve_strategy(l, profile, kParams);
            if (!sol.feasible()) continue;
            const double attacked = total_gain(kParams.mu, sol, profile, kParams);
            const double normal = normal_gain(kParams.mu, l, kParams);
            worst = std::max(worst, std::abs(attacked - normal) / normal);
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max relative mismatch %.2e", worst);
    out.detail = buf;
    out.expect(worst <= 1e-12, "gain match exceeds 1e-12");
}

void criterion_montecarlo(Outcome& out) {
    const auto profile = profile_for(500);
    double max_z = 0.0;
    for (double length : {30.0, 50.0, 100.0}) {
        SessionConfig cfg;
        cfg.length_km = length;
        cfg.profile = profile;
        cfg.solution = solve_strategy(length, profile, kParams);
        out.expect(cfg.solution.feasible(), std::to_string(length) + " km infeasible");
        if (!cfg.solution.feasible()) continue;
        cfg.intervals = 100000;
        cfg.seed = 20200908;
        const auto stats = simulate_session(cfg, kParams);
        for (const auto& row : agreement(stats, cfg, kParams)) {
            max_z = std::max({max_z, std::abs(row.z_gain), std::abs(row.z_error)});
            out.expect(std::abs(row.z_gain) <= 4.0,
                       "gain z-score " + std::to_string(row.z_gain) + " at " +
                           std::to_string(length) + " km");
            out.expect(std::abs(row.z_error) <= 4.0,
                       "error z-score " + std::to_string(row.z_error) + " at " +
                           std::to_string(length) + " km");
        }
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "max |z| = %.2f", max_z);
    out.detail = buf + (out.detail.empty() ? "" : "; " + out.detail);
}

void criterion_monitor_fit(Outcome& out) {
    std::vector<ReportedCurrentRow> rows;
    for (const auto& r : blinded_range_table())
        rows.push_back({r.cycle_count, r.interval_s, r.reported_current_a});
    MonitorParams m;
    m.charge_per_pulse_c = fit_charge_per_pulse(rows, m);
    out.expect(within(m.charge_per_pulse_c, 2.8e-12, 0.05), "fitted charge far from 2.8 pC");

    double worst = 0.0;
    for (const auto& r : blinded_range_table()) {
        BlindingConfig b = blinding_for(r.cycle_count);
        b.interval_s = r.interval_s;
        const auto trace = synthesize_photocurrent(kTiming, b, m, 8, 6.25e-9);
        const double reported = reported_current(trace, m);
        worst = std::max(worst, std::abs(reported - r.reported_current_a));
        out.expect(std::abs(reported - r.reported_current_a) <= 0.1e-6,
                   std::to_string(r.cycle_count) + ": reported current off by >0.1 uA");
        out.expect(!alarm(reported, m), std::to_string(r.cycle_count) + ": unexpected alarm");
    }

    // a near-continuous schedule must trip the constant-blinding threshold
    BlindingConfig cw;
    cw.cycle_count = 400;
    cw.interval_s = 400.5 / kTiming.gate_frequency_hz;
    const auto trace = synthesize_photocurrent(kTiming, cw, m, 40, 6.25e-9);
    const double reported = reported_current(trace, m);
    out.expect(reported >= m.constant_blind_threshold_a,
               "continuous-equivalent schedule stayed below 31 uA");
    out.expect(alarm(reported, m), "continuous-equivalent schedule did not alarm");

    char buf[96];
    std::snprintf(buf, sizeof(buf), "q=%.3f pC, worst residual %.3f uA, cw reported %.1f uA",
                  m.charge_per_pulse_c * 1e12, worst * 1e6, reported * 1e6);
    out.detail = buf + (out.detail.empty() ? "" : "; " + out.detail);
}

void criterion_properties(Outcome& out) {
    // binary entropy: symmetry, concavity, maximum
    for (double x = 0.02; x < 0.5; x += 0.015) {
        out.expect(std::abs(binary_entropy(x) - binary_entropy(1.0 - x)) < 1e-12,
                   "entropy asymmetry");
        out.expect(binary_entropy(x) < 1.0, "entropy above 1");
        const double mid = binary_entropy(0.5 * (x + 0.5));
        out.expect(mid >= 0.5 * (binary_entropy(x) + 1.0) - 1e-12, "entropy not concave");
    }
    out.expect(binary_entropy(0.5) == 1.0 && binary_entropy(0.0) == 0.0, "entropy endpoints");

    // decoy bound directions under honest statistics
    for (double l = 0.0; l <= 150.0; l += 1.0) {
        const double eta = kParams.eta_bob * channel_transmittance(l, kParams.loss_coeff_db_per_km);
        const double q_mu = kParams.y0 + 1.0 - std::exp(-eta * kParams.mu);
        const double q_nu = kParams.y0 + 1.0 - std::exp(-eta * kParams.nu);
        const double e_nu =
            (kParams.e0 * kParams.y0 + kParams.e_det * (1.0 - std::exp(-eta * kParams.nu))) / q_nu;
        const auto est = decoy_bounds(q_mu, q_nu, e_nu, kParams);
        if (est.degenerate) continue;
        const double y1_true = kParams.y0 + eta - kParams.y0 * eta;
        const double e1_true = (kParams.e_det * eta + kParams.e0 * kParams.y0) / y1_true;
        out.expect(est.y1_lower <= y1_true + 1e-15, "yield bound not a lower bound");
        out.expect(est.e1_upper >= e1_true - 1e-15, "error bound not an upper bound");
    }

    // real bounds ordered over every feasible sweep point of every profile
    for (const auto& row : blinded_range_table()) {
        for (const auto& point : sweep(profile_for(row.cycle_count), kParams, 0.0, 170.0, 0.5)) {
            if (!point.r_real_lower) continue;
            out.expect(*point.r_real_lower <= *point.r_real_upper + 1e-18,
                       "real bounds out of order");
        }
    }

    // calibration round trip across the measured rows
    std::mt19937_64 rng(31337);
    for (const auto& row : blinded_range_table()) {
        const SimulatedDetector det(profile_for(row.cycle_count), blinding_for(row.cycle_count));
        const auto measured = calibrate_blinded_period(det, kDefaultProbeEnergyJ, rng);
        out.expect(measured == profile_for(row.cycle_count).n_blind,
                   std::to_string(row.cycle_count) + ": blinded period does not round-trip");
    }

    // full-control predicate boundary is strict
    out.expect(!full_control_condition({1.0, 1.5, 2.0}), "boundary must not count as control");
    out.expect(full_control_condition({1.0 + 1e-9, 1.5, 2.0}), "just inside must count");

    // monitor monotonicity in interval and energy
    MonitorParams m;
    const auto reported_of = [&](double interval, double energy) {
        BlindingConfig b;
        b.cycle_count = 1;
        b.interval_s = interval;
        b.pulse_energy_j = energy;
        // enough groups to outlast the filter transient
        const auto groups = static_cast<std::int64_t>(std::ceil(8.0 * 1.59155e-5 / interval)) + 6;
        const auto trace = synthesize_photocurrent(kTiming, b, m, groups, 5e-9);
        return reported_current(trace, m);
    };
    out.expect(reported_of(0.5e-6, 2e-12) > reported_of(1e-6, 2e-12) &&
                   reported_of(1e-6, 2e-12) > reported_of(2e-6, 2e-12),
               "reported current not decreasing in interval");
    out.expect(reported_of(1e-6, 1e-12) < reported_of(1e-6, 2e-12) &&
                   reported_of(1e-6, 2e-12) < reported_of(1e-6, 4e-12),
               "reported current not increasing in energy");

    // splitting the group across cycles keeps the constant-blinding energy
    const double whole = constant_blinding_energy(6e-6, 1, m, kTiming);
    const double split = constant_blinding_energy(6e-6, 3, m, kTiming);
    out.expect(std::abs(split - whole) <= 0.05 * whole, "cycle-split equivalence beyond 5%");
}

} // namespace

int main() {
    int failures = 0;
    failures += run(1, "crossover distances, 500-cycle profile", 5.0, criterion_crossover_500);
    failures += run(2, "crossover family across profiles", 20.0, criterion_crossover_family);
    failures += run(3, "no-attack key-rate baseline", 5.0, criterion_no_attack_baseline);
    failures += run(4, "gain-match invariant across profiles", 5.0, criterion_gain_match);
    failures += run(5, "gate-level simulation agreement", 60.0, criterion_montecarlo);
    failures += run(6, "photocurrent monitor fit", 5.0, criterion_monitor_fit);
    failures += run(7, "property suites", 30.0, criterion_properties);

    if (failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
