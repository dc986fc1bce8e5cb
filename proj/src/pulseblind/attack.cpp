#include "pulseblind/attack.hpp"

#include <cmath>

#include "pulseblind/errors.hpp"

namespace pulseblind {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::InvalidArgument, what);
}

double interval_inv(const AttackWindowProfile& w) {
    return 1.0 / static_cast<double>(w.n_interval);
}

} // namespace

const char* to_string(AttackCase c) {
    switch (c) {
    case AttackCase::CaseI: return "CASE_I";
    case AttackCase::CaseII: return "CASE_II";
    case AttackCase::Infeasible: return "INFEASIBLE";
    }
    return "?";
}

double gain_eve(double omega) {
    require(omega >= 0.0, "mean photon number must be non-negative");
    return 0.5 * (1.0 - std::exp(-omega));
}

double gain_pass(double omega, const ProtocolParams& params) {
    require(omega >= 0.0, "mean photon number must be non-negative");
    return params.y0 + 1.0 - std::exp(-params.eta_bob * omega);
}

double error_gain_pass(double omega, const ProtocolParams& params) {
    require(omega >= 0.0, "mean photon number must be non-negative");
    return params.e0 * params.y0 + params.e_det * (1.0 - std::exp(-params.eta_bob * omega));
}

double total_gain(double omega, const AttackSolution& sol, const AttackWindowProfile& profile,
                  const ProtocolParams& params) {
    const double pass = sol.gamma * gain_pass(omega, params) + (1.0 - sol.gamma) * params.y0;
    return interval_inv(profile) + sol.p * gain_eve(omega) * profile.alpha +
           (1.0 - profile.beta) * pass;
}

double total_qber(double omega, const AttackSolution& sol, const AttackWindowProfile& profile,
                  const ProtocolParams& params) {
    const double gain = total_gain(omega, sol, profile, params);
    if (gain <= 0.0) fail(Errc::UndefinedQber, "total gain is zero");
    const double pass =
        sol.gamma * error_gain_pass(omega, params) + (1.0 - sol.gamma) * params.y0 * params.e0;
    const double numerator = params.e0 * interval_inv(profile) +
                             sol.p * gain_eve(omega) * profile.alpha * params.e_det +
                             (1.0 - profile.beta) * pass;
    return numerator / gain;
}

double normal_gain(double omega, double length_km, const ProtocolParams& params) {
    require(omega >= 0.0, "mean photon number must be non-negative");
    const double eta = params.eta_bob * channel_transmittance(length_km, params.loss_coeff_db_per_km);
    return params.y0 + 1.0 - std::exp(-eta * omega);
}

double normal_qber(double omega, double length_km, const ProtocolParams& params) {
    const double gain = normal_gain(omega, length_km, params);
    if (gain <= 0.0) fail(Errc::UndefinedQber, "normal gain is zero");
    const double eta = params.eta_bob * channel_transmittance(length_km, params.loss_coeff_db_per_km);
    return (params.e0 * params.y0 + params.e_det * (1.0 - std::exp(-eta * omega))) / gain;
}

AttackSolution solve_strategy(double length_km, const AttackWindowProfile& profile,
                              const ProtocolParams& params) {
    require(length_km >= 0.0, "channel length must be non-negative");

    const double target = normal_gain(params.mu, length_km, params);
    const AttackSolution full{AttackCase::CaseI, 1.0, 0.0};
    const double q_full = total_gain(params.mu, full, profile, params);

    if (q_full > target) {
        // throttle the fake-state fraction; the pass branch stays closed
        const double denom = gain_eve(params.mu) * profile.alpha;
        const double numer =
            target - interval_inv(profile) - (1.0 - profile.beta) * params.y0;
        if (denom <= 0.0 || numer < 0.0) return {AttackCase::Infeasible, 0.0, 0.0};
        return {AttackCase::CaseI, numer / denom, 0.0};
    }
    if (q_full < target) {
        // open the pass branch with all controllable gates in use
        const double denom =
            (1.0 - profile.beta) * (gain_pass(params.mu, params) - params.y0);
        if (denom <= 0.0) return {AttackCase::Infeasible, 0.0, 0.0};
        const double gamma = (target - q_full) / denom;
        if (gamma > 1.0) return {AttackCase::Infeasible, 0.0, 0.0};
        return {AttackCase::CaseII, 1.0, gamma};
    }
    return full; // exact case boundary
}

GainStats gain_stats(const AttackSolution& sol, const AttackWindowProfile& profile,
                     const ProtocolParams& params) {
    require(sol.feasible(), "gain statistics need a feasible solution");
    GainStats g;
    g.q_mu = total_gain(params.mu, sol, profile, params);
    g.q_nu = total_gain(params.nu, sol, profile, params);
    g.q_vac = total_gain(0.0, sol, profile, params);
    g.e_mu = total_qber(params.mu, sol, profile, params);
    g.e_nu = total_qber(params.nu, sol, profile, params);
    return g;
}

} // namespace pulseblind
