#include "pulseblind/scan.hpp"

#include <cmath>
#include <functional>

#include "pulseblind/errors.hpp"
#include "pulseblind/format.hpp"

namespace pulseblind {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::InvalidArgument, what);
}

std::vector<double> grid(double l_start, double l_end, double step) {
    require(l_start >= 0.0, "sweep start must be non-negative");
    require(step > 0.0, "sweep step must be positive");
    std::vector<double> out;
    if (l_start >= l_end) return out;
    const auto n = static_cast<std::int64_t>(std::floor((l_end - l_start) / step + 0.5));
    for (std::int64_t i = 0; i <= n; ++i) {
        const double l = l_start + static_cast<double>(i) * step;
        if (l <= l_end + 0.5 * step) out.push_back(std::min(l, l_end));
    }
    return out;
}

// bisection of a sign change known to lie in [lo, hi]
double bisect(const std::function<double(double)>& f, double lo, double hi, double f_lo,
              double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if ((f_lo <= 0.0) == (f_mid <= 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

SweepRow evaluate_point(double length_km, const AttackWindowProfile& profile,
                        const ProtocolParams& params) {
    SweepRow row;
    row.length_km = length_km;
    row.q_nu_normal = normal_gain(params.nu, length_km, params);

    const AttackSolution sol = solve_strategy(length_km, profile, params);
    row.case_tag = to_string(sol.tag);
    if (!sol.feasible()) return row;

    row.p = sol.p;
    row.gamma = sol.gamma;
    const GainStats g = gain_stats(sol, profile, params);
    row.q_mu = g.q_mu;
    row.e_mu = g.e_mu;
    row.q_nu = g.q_nu;
    row.e_nu = g.e_nu;

    const DecoyEstimates est = decoy_bounds(g.q_mu, g.q_nu, g.e_nu, params);
    if (!est.degenerate) {
        row.y1_lower = est.y1_lower;
        row.e1_upper = est.e1_upper;
    }
    row.r_est = gllp_rate(g.q_mu, g.e_mu, est, params);

    const RealRateBounds bounds = real_rate_bounds(sol, profile, params);
    row.r_real_lower = bounds.lower;
    row.r_real_upper = bounds.upper;
    return row;
}

SweepRow evaluate_point_no_attack(double length_km, const ProtocolParams& params) {
    SweepRow row;
    row.length_km = length_km;
    row.case_tag = "NO_ATTACK";
    row.q_mu = normal_gain(params.mu, length_km, params);
    row.e_mu = normal_qber(params.mu, length_km, params);
    row.q_nu = normal_gain(params.nu, length_km, params);
    row.e_nu = normal_qber(params.nu, length_km, params);
    row.q_nu_normal = *row.q_nu;

    const DecoyEstimates est = decoy_bounds(*row.q_mu, *row.q_nu, *row.e_nu, params);
    if (!est.degenerate) {
        row.y1_lower = est.y1_lower;
        row.e1_upper = est.e1_upper;
    }
    row.r_est = gllp_rate(*row.q_mu, *row.e_mu, est, params);
    return row;
}

std::vector<SweepRow> sweep(const AttackWindowProfile& profile, const ProtocolParams& params,
                            double l_start_km, double l_end_km, double step_km) {
    validate(params);
    std::vector<SweepRow> rows;
    for (double l : grid(l_start_km, l_end_km, step_km))
        rows.push_back(evaluate_point(l, profile, params));
    return rows;
}

std::vector<SweepRow> sweep_no_attack(const ProtocolParams& params, double l_start_km,
                                      double l_end_km, double step_km) {
    validate(params);
    std::vector<SweepRow> rows;
    for (double l : grid(l_start_km, l_end_km, step_km))
        rows.push_back(evaluate_point_no_attack(l, params));
    return rows;
}

CrossoverReport find_crossovers(const AttackWindowProfile& profile, const ProtocolParams& params,
                                double l_min_km, double l_max_km, double scan_step_km) {
    validate(params);
    require(l_min_km >= 0.0 && l_min_km < l_max_km, "crossover bracket must be a forward range");
    require(scan_step_km > 0.0, "scan step must be positive");
    constexpr double kTolKm = 0.01;

    const auto feasible = [&](double l) {
        return solve_strategy(l, profile, params).feasible();
    };

    CrossoverReport report;

    // sample for the feasible stretch
    const auto ls = grid(l_min_km, l_max_km, scan_step_km);
    std::ptrdiff_t first = -1;
    std::ptrdiff_t last = -1;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ls.size()); ++i) {
        if (feasible(ls[static_cast<std::size_t>(i)])) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return report; // nothing feasible in the bracket

    const auto feas_sign = [&](double l) { return feasible(l) ? 1.0 : -1.0; };
    double fmin = ls[static_cast<std::size_t>(first)];
    if (first > 0)
        fmin = bisect(feas_sign, ls[static_cast<std::size_t>(first - 1)], fmin, -1.0, kTolKm);
    double fmax = ls[static_cast<std::size_t>(last)];
    if (last + 1 < static_cast<std::ptrdiff_t>(ls.size()))
        fmax = bisect(feas_sign, fmax, ls[static_cast<std::size_t>(last + 1)], 1.0, kTolKm);
    report.feasible_min_km = fmin;
    report.feasible_max_km = fmax;

    const auto gap = [&](double l, bool versus_upper) -> double {
        const SweepRow row = evaluate_point(l, profile, params);
        if (!row.r_est) return -1.0;
        const double bound = versus_upper ? row.r_real_upper.value_or(0.0)
                                          : row.r_real_lower.value_or(0.0);
        return *row.r_est - bound;
    };

    // first upward sign change of r_est - bound inside the feasible stretch
    const auto first_crossing = [&](bool versus_upper) -> std::optional<double> {
        const double lo = fmin + kTolKm;
        const double hi = fmax - kTolKm;
        if (lo >= hi) return std::nullopt;
        double prev_l = lo;
        double prev_g = gap(prev_l, versus_upper);
        for (double l = lo + scan_step_km; l < hi + scan_step_km; l += scan_step_km) {
            const double cur_l = std::min(l, hi);
            const double cur_g = gap(cur_l, versus_upper);
            if (prev_g <= 0.0 && cur_g > 0.0) {
                const auto f = [&](double x) { return gap(x, versus_upper); };
                return bisect(f, prev_l, cur_l, prev_g, kTolKm);
            }
            prev_l = cur_l;
            prev_g = cur_g;
            if (cur_l >= hi) break;
        }
        return std::nullopt;
    };

    report.l_overestimate_km = first_crossing(false);
    report.l_insecure_km = first_crossing(true);
    return report;
}

std::string sweep_csv(std::span<const SweepRow> rows, std::span<const std::string> comment_lines) {
    std::string out;
    for (const auto& line : comment_lines) out += "# " + line + "\n";
    out += "length_km,case,p,gamma,q_mu,e_mu,q_nu,e_nu,q_nu_normal,y1_lower,e1_upper,"
           "r_est,r_real_lower,r_real_upper\n";
    const auto cell = [](const std::optional<double>& v) {
        return v ? fmt_sci(*v) : std::string();
    };
    for (const auto& r : rows) {
        out += fmt_sci(r.length_km) + "," + r.case_tag + ",";
        out += cell(r.p) + "," + cell(r.gamma) + ",";
        out += cell(r.q_mu) + "," + cell(r.e_mu) + ",";
        out += cell(r.q_nu) + "," + cell(r.e_nu) + ",";
        out += fmt_sci(r.q_nu_normal) + ",";
        out += cell(r.y1_lower) + "," + cell(r.e1_upper) + ",";
        out += cell(r.r_est) + "," + cell(r.r_real_lower) + "," + cell(r.r_real_upper) + "\n";
    }
    return out;
}

} // namespace pulseblind
