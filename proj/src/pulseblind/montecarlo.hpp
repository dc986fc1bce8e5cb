#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "pulseblind/attack.hpp"
#include "pulseblind/params.hpp"

namespace pulseblind {

// Which source intensity Alice emitted: signal, decoy or vacuum.
enum class SourceState : int { Signal = 0, Decoy = 1, Vacuum = 2 };

// One BB84 session under the attack: the blinding-group structure, Eve's
// solved strategy and the number of group intervals to simulate.
struct SessionConfig {
    double length_km = 0.0;
    AttackWindowProfile profile;
    AttackSolution solution;
    std::uint64_t intervals = 1;
    std::uint64_t seed = 0;
    // Alice's emission probabilities for {signal, decoy, vacuum}
    std::array<double, 3> source_probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
};

struct SourceCounts {
    std::uint64_t gates = 0;
    std::uint64_t clicks = 0;
    std::uint64_t errors = 0;

    double q_hat() const { return gates ? static_cast<double>(clicks) / gates : 0.0; }
    double e_hat() const { return clicks ? static_cast<double>(errors) / clicks : 0.0; }
    // errors per gate, the empirical E*Q product
    double eq_hat() const { return gates ? static_cast<double>(errors) / gates : 0.0; }

    bool operator==(const SourceCounts&) const = default;
};

struct EmpiricalStats {
    std::array<SourceCounts, 3> by_source{};

    const SourceCounts& of(SourceState s) const { return by_source[static_cast<int>(s)]; }

    bool operator==(const EmpiricalStats&) const = default;
};

// Gate-level stochastic simulation of the session. Per interval the gates
// split into the group-initial forced click, the dead window it starts, the
// blinded window with its controllable prefix, and normal gates, matching
// the closed-form gain decomposition in expectation. RNG streams are split
// per interval index, so results depend only on (seed, config).
EmpiricalStats simulate_session(const SessionConfig& cfg, const ProtocolParams& params);

// Empirical-versus-analytic comparison for one source state.
struct AgreementRow {
    SourceState source = SourceState::Signal;
    std::uint64_t gates = 0;
    double q_emp = 0.0;
    double q_analytic = 0.0;
    double z_gain = 0.0;
    double eq_emp = 0.0;
    double eq_analytic = 0.0;
    double z_error = 0.0;
};

std::array<AgreementRow, 3> agreement(const EmpiricalStats& stats, const SessionConfig& cfg,
                                      const ProtocolParams& params);

// Deterministic binomial sampler used by the simulation: exact CDF inversion
// at small means, rounded-normal tail otherwise. Exposed for its own tests.
std::int64_t binomial_draw(std::mt19937_64& rng, std::int64_t n, double p);

// Per-interval RNG stream derivation (splitmix64 over seed and index).
std::mt19937_64 interval_stream(std::uint64_t seed, std::uint64_t interval_index);

} // namespace pulseblind
