#include "pulseblind/pipelines.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "pulseblind/detector.hpp"
#include "pulseblind/errors.hpp"
#include "pulseblind/format.hpp"
#include "pulseblind/monitor.hpp"
#include "pulseblind/montecarlo.hpp"

namespace pulseblind {

namespace {

std::vector<std::string> echo_lines(const Config& cfg, const std::vector<std::string>& extra = {}) {
    std::vector<std::string> lines;
    lines.push_back(std::string("pulseblind ") + kVersion);
    lines.emplace_back("effective-config");
    for (const auto& [key, value] : cfg.effective()) lines.push_back(key + " = " + value);
    for (const auto& e : extra) lines.push_back(e);
    return lines;
}

} // namespace

std::string run_sweep_csv(const Config& cfg, const SweepOptions& opt) {
    cfg.validate_all();
    std::vector<SweepRow> rows;
    if (opt.no_attack)
        rows = sweep_no_attack(cfg.protocol, opt.l_start_km, opt.l_end_km, opt.l_step_km);
    else
        rows = sweep(cfg.profile(), cfg.protocol, opt.l_start_km, opt.l_end_km, opt.l_step_km);

    const auto lines = echo_lines(
        cfg, {"l_start_km = " + fmt_sci(opt.l_start_km), "l_end_km = " + fmt_sci(opt.l_end_km),
              "l_step_km = " + fmt_sci(opt.l_step_km),
              std::string("no_attack = ") + (opt.no_attack ? "1" : "0")});
    return sweep_csv(rows, lines);
}

CrossoverReport run_crossovers(const Config& cfg, double l_min_km, double l_max_km) {
    cfg.validate_all();
    return find_crossovers(cfg.profile(), cfg.protocol, l_min_km, l_max_km);
}

std::string crossover_report_json(const CrossoverReport& report) {
    nlohmann::ordered_json doc;
    const auto put = [&](const char* key, const std::optional<double>& v) {
        if (v)
            doc[key] = *v;
        else
            doc[key] = "NONE";
    };
    put("l_overestimate_km", report.l_overestimate_km);
    put("l_insecure_km", report.l_insecure_km);
    put("feasible_min_km", report.feasible_min_km);
    put("feasible_max_km", report.feasible_max_km);
    return doc.dump(2) + "\n";
}

MonteCarloOutcome run_montecarlo(const Config& cfg, const MonteCarloOptions& opt) {
    cfg.validate_all();
    const AttackWindowProfile profile = cfg.profile();

    MonteCarloOutcome out;
    nlohmann::ordered_json doc;
    doc["seed"] = opt.seed;
    doc["intervals"] = opt.intervals;
    auto& points = doc["points"];
    points = nlohmann::ordered_json::array();

    static constexpr const char* kNames[3] = {"mu", "nu", "vac"};
    for (double length : opt.lengths_km) {
        nlohmann::ordered_json point;
        point["length_km"] = length;
        const AttackSolution sol = solve_strategy(length, profile, cfg.protocol);
        point["case"] = to_string(sol.tag);
        if (!sol.feasible()) {
            points.push_back(point);
            continue;
        }
        point["p"] = sol.p;
        point["gamma"] = sol.gamma;

        SessionConfig session;
        session.length_km = length;
        session.profile = profile;
        session.solution = sol;
        session.intervals = opt.intervals;
        session.seed = opt.seed;
        const EmpiricalStats stats = simulate_session(session, cfg.protocol);
        const auto rows = agreement(stats, session, cfg.protocol);
        for (const auto& r : rows) {
            const std::string tag = kNames[static_cast<int>(r.source)];
            point["q_" + tag + "_emp"] = r.q_emp;
            point["q_" + tag + "_analytic"] = r.q_analytic;
            point["z_q_" + tag] = r.z_gain;
            point["eq_" + tag + "_emp"] = r.eq_emp;
            point["eq_" + tag + "_analytic"] = r.eq_analytic;
            point["z_eq_" + tag] = r.z_error;
            out.max_abs_z = std::max({out.max_abs_z, std::abs(r.z_gain), std::abs(r.z_error)});
        }
        points.push_back(point);
    }

    out.all_within_4_sigma = out.max_abs_z <= 4.0;
    doc["max_abs_z"] = out.max_abs_z;
    doc["agree"] = out.all_within_4_sigma;
    out.json = doc.dump(2) + "\n";
    return out;
}

MonitorOutcome run_monitor(const Config& cfg) {
    cfg.validate_all();

    std::vector<ReportedCurrentRow> fit_rows;
    for (const auto& row : blinded_range_table())
        fit_rows.push_back({row.cycle_count, row.interval_s, row.reported_current_a});

    MonitorParams m;
    m.charge_per_pulse_c = fit_charge_per_pulse(fit_rows, m);

    MonitorOutcome out;
    out.fitted_charge_c = m.charge_per_pulse_c;

    std::vector<MonitorReportRow> report;
    for (const auto& row : blinded_range_table()) {
        BlindingConfig b = cfg.blinding;
        b.cycle_count = row.cycle_count;
        const double interval = row.interval_s;
        b.interval_s = interval;
        const double dt = 0.25 / cfg.timing.gate_frequency_hz;
        const auto trace = synthesize_photocurrent(cfg.timing, b, m, 8, dt);
        const double reported = reported_current(trace, m);
        const bool alarmed = alarm(reported, m);
        report.push_back({row.cycle_count, interval, reported, alarmed});
        if (alarmed) out.unexpected_alarm = true;
    }

    const auto lines =
        echo_lines(cfg, {"fitted_charge_per_pulse_c = " + fmt_sci(m.charge_per_pulse_c)});
    out.csv = monitor_report_csv(report, lines);
    return out;
}

CalibrateOutcome run_calibrate(const Config& cfg, std::uint64_t seed) {
    cfg.validate_all();
    const AttackWindowProfile profile = cfg.profile();
    const SimulatedDetector det(profile, cfg.blinding);

    CalibrateOutcome out;
    out.configured_n_blind = profile.n_blind;

    auto rng = interval_stream(seed, 0);
    out.measured_n_blind = calibrate_blinded_period(det, kDefaultProbeEnergyJ, rng);
    out.round_trip_ok = out.measured_n_blind == profile.n_blind;

    // energy grid bracketing both the controllable and the degraded response
    std::vector<double> grid;
    for (double e = 1.0e-14; e <= 6.5e-14 + 1e-20; e += 0.25e-14) grid.push_back(e);

    std::vector<CalibrationRow> rows;
    if (profile.n_blind > 0) {
        const std::int64_t start = det.first_probe_gate();
        const std::int64_t stride = std::max<std::int64_t>(profile.n_blind / 16, 1);
        for (std::int64_t g = start; g < start + profile.n_blind; g += stride) {
            const ControlEnergies c = calibrate_control_energies(det, g, grid, 2000, rng);
            rows.push_back({g, c.e_never, c.e_half, c.e_always, full_control_condition(c)});
        }
    }

    const auto lines = echo_lines(cfg, {"seed = " + std::to_string(seed),
                                        "probe_energy_j = " + fmt_sci(kDefaultProbeEnergyJ)});
    out.csv = calibration_csv(rows, lines);

    nlohmann::ordered_json verdict;
    verdict["configured_n_blind"] = out.configured_n_blind;
    verdict["measured_n_blind"] = out.measured_n_blind;
    verdict["round_trip_ok"] = out.round_trip_ok;
    out.verdict_json = verdict.dump(2) + "\n";
    return out;
}

std::string run_trace_csv(const Config& cfg, std::int64_t n_groups, double sample_period_s) {
    cfg.validate_all();
    MonitorParams m;
    const auto trace = synthesize_photocurrent(cfg.timing, cfg.blinding, m, n_groups, sample_period_s);
    const auto lines = echo_lines(cfg, {"n_groups = " + fmt_int(n_groups),
                                        "sample_period_s = " + fmt_sci(sample_period_s)});
    return trace_csv(trace, lines);
}

} // namespace pulseblind
