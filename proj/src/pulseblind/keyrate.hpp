#pragma once

#include "pulseblind/attack.hpp"
#include "pulseblind/params.hpp"

namespace pulseblind {

// Decoy-state bounds on the single-photon yield and error rate. `degenerate`
// flags a non-positive yield estimate; the key rate is forced to zero
// downstream and e1_upper carries no meaning then.
struct DecoyEstimates {
    double y1_lower = 0.0;
    double e1_upper = 0.0;
    bool degenerate = false;
};

// Estimated and real key rates per gate at one channel length.
struct KeyRateTriple {
    double r_est_lower = 0.0;
    double r_real_lower = 0.0;
    double r_real_upper = 0.0;
};

// Shannon binary entropy in bits, with H2(0) = H2(1) = 0.
double binary_entropy(double x);

// Single-photon yield/error bounds from the observed signal and decoy
// statistics.
DecoyEstimates decoy_bounds(double q_mu, double q_nu, double e_nu, const ProtocolParams& params);

// GLLP lower bound on the key rate Alice and Bob would compute from the
// observed statistics. Floors at zero; an e1 bound above 1/2 zeroes the
// single-photon term.
double gllp_rate(double q_mu, double e_mu, const DecoyEstimates& est, const ProtocolParams& params);

// Yield and error rate of a single photon reaching Bob over Eve's lossless
// channel.
struct SinglePhoton {
    double yield = 0.0;
    double error = 0.0;
};

SinglePhoton real_single_photon(const ProtocolParams& params);

// Real lower/upper key-rate bounds under a feasible attack solution,
// both floored at zero. The pass terms are instantiated at the signal
// intensity.
struct RealRateBounds {
    double lower = 0.0;
    double upper = 0.0;
};

RealRateBounds real_rate_bounds(const AttackSolution& sol, const AttackWindowProfile& profile,
                                const ProtocolParams& params);

} // namespace pulseblind
