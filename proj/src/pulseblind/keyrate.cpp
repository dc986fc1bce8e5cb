#include "pulseblind/keyrate.hpp"

#include <algorithm>
#include <cmath>

#include "pulseblind/errors.hpp"

namespace pulseblind {

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0) fail(Errc::InvalidArgument, "binary entropy argument outside [0, 1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

DecoyEstimates decoy_bounds(double q_mu, double q_nu, double e_nu, const ProtocolParams& params) {
    validate(params);
    if (q_mu <= 0.0 || q_mu > 1.0 || q_nu <= 0.0 || q_nu > 1.0)
        fail(Errc::InvalidArgument, "gains must be in (0, 1]");
    const double mu = params.mu;
    const double nu = params.nu;

    const double y1 = mu / (mu * nu - nu * nu) *
                      (q_nu * std::exp(nu) - q_mu * std::exp(mu) * nu * nu / (mu * mu) -
                       (mu * mu - nu * nu) / (mu * mu) * params.y0);

    DecoyEstimates est;
    if (y1 <= 0.0) {
        est.degenerate = true;
        return est;
    }
    est.y1_lower = std::min(y1, 1.0);
    est.e1_upper = (e_nu * q_nu * std::exp(nu) - params.e0 * params.y0) / (est.y1_lower * nu);
    return est;
}

double gllp_rate(double q_mu, double e_mu, const DecoyEstimates& est, const ProtocolParams& params) {
    if (est.degenerate) return 0.0;
    const double e1 = std::clamp(est.e1_upper, 0.0, 0.5);
    const double rate =
        params.q_sift * (-q_mu * params.f_ec * binary_entropy(e_mu) +
                         params.mu * std::exp(-params.mu) * est.y1_lower * (1.0 - binary_entropy(e1)));
    return std::max(rate, 0.0);
}

SinglePhoton real_single_photon(const ProtocolParams& params) {
    SinglePhoton s;
    s.yield = params.y0 + params.eta_bob - params.y0 * params.eta_bob;
    s.error = (params.e_det * params.eta_bob + params.e0 * params.y0) / s.yield;
    return s;
}

RealRateBounds real_rate_bounds(const AttackSolution& sol, const AttackWindowProfile& profile,
                                const ProtocolParams& params) {
    if (!sol.feasible()) fail(Errc::InvalidArgument, "real rate bounds need a feasible solution");

    const SinglePhoton sp = real_single_photon(params);
    const double single = params.mu * std::exp(-params.mu) * sp.yield *
                          (1.0 - binary_entropy(std::clamp(sp.error, 0.0, 0.5)));
    const double prefactor = params.q_sift * (1.0 - profile.beta) * sol.gamma;

    const double q_pass = gain_pass(params.mu, params);
    const double e_pass = error_gain_pass(params.mu, params) / q_pass;

    RealRateBounds b;
    b.upper = std::max(prefactor * single, 0.0);
    b.lower = std::max(prefactor * (single - q_pass * params.f_ec * binary_entropy(e_pass)), 0.0);
    return b;
}

} // namespace pulseblind
