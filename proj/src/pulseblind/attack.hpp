#pragma once

#include "pulseblind/params.hpp"

namespace pulseblind {

enum class AttackCase {
    CaseI,      // gamma = 0, Eve throttles the fake-state fraction p
    CaseII,     // p = 1, Eve passes a fraction gamma of unblinded signals
    Infeasible, // no (p, gamma) in [0,1]^2 matches the normal signal gain
};

const char* to_string(AttackCase c);

// Eve's solved strategy. CaseI fixes gamma = 0; CaseII fixes p = 1.
// Infeasible is a first-class result so distance sweeps continue past it.
struct AttackSolution {
    AttackCase tag = AttackCase::Infeasible;
    double p = 0.0;
    double gamma = 0.0;

    bool feasible() const { return tag != AttackCase::Infeasible; }
};

// Gains and QBERs of the signal, decoy and vacuum states under one solution.
struct GainStats {
    double q_mu = 0.0;
    double q_nu = 0.0;
    double q_vac = 0.0;
    double e_mu = 0.0;
    double e_nu = 0.0;
};

// Gain of Eve's intercept-resend during a fully controllable gate:
// half of her (ideal-detector) detection probability 1 - e^{-omega},
// the half being Bob's basis match.
double gain_eve(double omega);

// Gain when Eve passes the state over her lossless channel:
// y0 + 1 - e^{-eta_bob * omega}.
double gain_pass(double omega, const ProtocolParams& params);

// Error-weighted pass gain: e0*y0 + e_det * (1 - e^{-eta_bob * omega}).
double error_gain_pass(double omega, const ProtocolParams& params);

// Total gain under the pulse-illumination attack.
double total_gain(double omega, const AttackSolution& sol, const AttackWindowProfile& profile,
                  const ProtocolParams& params);

// Total QBER under the attack; the group-initial click contributes with
// error weight e0.
double total_qber(double omega, const AttackSolution& sol, const AttackWindowProfile& profile,
                  const ProtocolParams& params);

// Gain and QBER of the undisturbed channel of length L.
double normal_gain(double omega, double length_km, const ProtocolParams& params);
double normal_qber(double omega, double length_km, const ProtocolParams& params);

// Solves Eve's gain-matching strategy at the given distance. The returned
// solution satisfies total_gain(mu) == normal_gain(mu) to relative 1e-12,
// or is Infeasible. Out-of-range p/gamma is never clamped.
AttackSolution solve_strategy(double length_km, const AttackWindowProfile& profile,
                              const ProtocolParams& params);

// Signal/decoy/vacuum gains and QBERs for a feasible solution.
GainStats gain_stats(const AttackSolution& sol, const AttackWindowProfile& profile,
                     const ProtocolParams& params);

} // namespace pulseblind
