#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pulseblind/attack.hpp"
#include "pulseblind/keyrate.hpp"
#include "pulseblind/params.hpp"

namespace pulseblind {

// Full pipeline at one channel length: strategy, gains, decoy bounds and the
// three key rates. Rates are absent when the attack is infeasible there.
struct SweepRow {
    double length_km = 0.0;
    std::string case_tag; // CASE_I, CASE_II, INFEASIBLE or NO_ATTACK
    std::optional<double> p;
    std::optional<double> gamma;
    std::optional<double> q_mu;
    std::optional<double> e_mu;
    std::optional<double> q_nu;
    std::optional<double> e_nu;
    double q_nu_normal = 0.0; // decoy-gain mismatch telemetry
    std::optional<double> y1_lower;
    std::optional<double> e1_upper;
    std::optional<double> r_est;
    std::optional<double> r_real_lower;
    std::optional<double> r_real_upper;
};

SweepRow evaluate_point(double length_km, const AttackWindowProfile& profile,
                        const ProtocolParams& params);

SweepRow evaluate_point_no_attack(double length_km, const ProtocolParams& params);

// One row per grid point over [l_start, l_end] in steps of `step_km`;
// an inverted range yields an empty sweep.
std::vector<SweepRow> sweep(const AttackWindowProfile& profile, const ProtocolParams& params,
                            double l_start_km, double l_end_km, double step_km);

std::vector<SweepRow> sweep_no_attack(const ProtocolParams& params, double l_start_km,
                                      double l_end_km, double step_km);

struct CrossoverReport {
    std::optional<double> l_overestimate_km; // first L where r_est exceeds r_real_lower
    std::optional<double> l_insecure_km;     // first L where r_est exceeds r_real_upper
    std::optional<double> feasible_min_km;
    std::optional<double> feasible_max_km;
};

// Locates the overestimation and insecurity crossovers inside the feasible
// distance range with 0.01 km bisection; absent crossings stay empty.
CrossoverReport find_crossovers(const AttackWindowProfile& profile, const ProtocolParams& params,
                                double l_min_km, double l_max_km, double scan_step_km = 0.5);

// CSV with the fixed sweep header; absent values print as empty fields.
std::string sweep_csv(std::span<const SweepRow> rows,
                      std::span<const std::string> comment_lines = {});

} // namespace pulseblind
