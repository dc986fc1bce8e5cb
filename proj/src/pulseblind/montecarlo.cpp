#include "pulseblind/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulseblind/errors.hpp"

namespace pulseblind {

namespace {

void require(bool ok, const char* what) {
    if (!ok) fail(Errc::InvalidArgument, what);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// exact inversion; expected work is O(np)
std::int64_t binomial_inversion(std::mt19937_64& rng, std::int64_t n, double p) {
    const double odds = p / (1.0 - p);
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cdf = pmf;
    const double u = uniform01(rng);
    std::int64_t k = 0;
    while (u > cdf && k < n) {
        ++k;
        pmf *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
        cdf += pmf;
    }
    return k;
}

std::int64_t binomial_normal_tail(std::mt19937_64& rng, std::int64_t n, double p) {
    const double mean = static_cast<double>(n) * p;
    const double sd = std::sqrt(mean * (1.0 - p));
    double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    const auto k = static_cast<std::int64_t>(std::llround(mean + sd * z));
    if (k < 0) return 0;
    if (k > n) return n;
    return k;
}

// three-way split of n gates across the source states
std::array<std::int64_t, 3> multinomial3(std::mt19937_64& rng, std::int64_t n,
                                         const std::array<double, 3>& probs) {
    std::array<std::int64_t, 3> out{0, 0, 0};
    out[0] = binomial_draw(rng, n, probs[0]);
    const double rest = 1.0 - probs[0];
    out[1] = rest > 0.0 ? binomial_draw(rng, n - out[0], probs[1] / rest) : 0;
    out[2] = n - out[0] - out[1];
    return out;
}

struct SegmentModel {
    double click_prob = 0.0;
    double error_given_click = 0.0;
};

} // namespace

std::int64_t binomial_draw(std::mt19937_64& rng, std::int64_t n, double p) {
    require(n >= 0, "binomial draw needs n >= 0");
    require(p >= 0.0 && p <= 1.0, "binomial draw needs p in [0, 1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - binomial_draw(rng, n, 1.0 - p);
    if (static_cast<double>(n) * p <= 30.0) return binomial_inversion(rng, n, p);
    return binomial_normal_tail(rng, n, p);
}

std::mt19937_64 interval_stream(std::uint64_t seed, std::uint64_t interval_index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(interval_index)));
}

EmpiricalStats simulate_session(const SessionConfig& cfg, const ProtocolParams& params) {
    validate(params);
    require(cfg.intervals >= 1, "need at least one interval");
    if (!cfg.solution.feasible())
        fail(Errc::InvalidArgument, "cannot simulate an infeasible solution");
    const auto& w = cfg.profile;
    require(w.n_interval > 0, "profile has no gates");
    require(w.n_blind + w.n_dead <= w.n_interval, "profile exceeds the interval");
    double prob_sum = 0.0;
    for (double ps : cfg.source_probs) {
        require(ps >= 0.0, "source probabilities must be non-negative");
        prob_sum += ps;
    }
    require(std::abs(prob_sum - 1.0) < 1e-12, "source probabilities must sum to 1");

    const std::array<double, 3> omegas{params.mu, params.nu, 0.0};
    const double p = cfg.solution.p;
    const double gamma = cfg.solution.gamma;

    // interval layout: gate 0 clicks and opens the dead window that covers
    // n_dead gates; then the blinded window (controllable prefix), then
    // normal gates fill up the interval
    const std::int64_t dead_block = std::max<std::int64_t>(w.n_dead, 1);
    const std::int64_t n_silent = (dead_block - 1) + (w.n_blind - w.n_control);
    const std::int64_t n_normal = w.n_interval - dead_block - w.n_blind;

    std::array<SegmentModel, 3> control;
    std::array<SegmentModel, 3> normal;
    for (int s = 0; s < 3; ++s) {
        const double detect = 1.0 - std::exp(-omegas[s]);
        control[s].click_prob = p * 0.5 * detect;
        control[s].error_given_click = params.e_det;

        const double signal = 1.0 - std::exp(-params.eta_bob * omegas[s]);
        const double click_pass = 1.0 - (1.0 - params.y0) * (1.0 - signal);
        const double err_pass = params.e_det * signal + params.e0 * params.y0 * (1.0 - signal);
        const double click = gamma * click_pass + (1.0 - gamma) * params.y0;
        const double err = gamma * err_pass + (1.0 - gamma) * params.y0 * params.e0;
        normal[s].click_prob = click;
        normal[s].error_given_click = click > 0.0 ? err / click : 0.0;
    }

    EmpiricalStats stats;
    for (std::uint64_t it = 0; it < cfg.intervals; ++it) {
        auto rng = interval_stream(cfg.seed, it);

        // group-initial forced click, random bit
        {
            const double u = uniform01(rng);
            const int s = u < cfg.source_probs[0] ? 0 : (u < cfg.source_probs[0] + cfg.source_probs[1] ? 1 : 2);
            auto& c = stats.by_source[static_cast<std::size_t>(s)];
            c.gates += 1;
            c.clicks += 1;
            c.errors += uniform01(rng) < params.e0 ? 1 : 0;
        }

        const auto silent = multinomial3(rng, n_silent, cfg.source_probs);
        const auto ctl = multinomial3(rng, w.n_control, cfg.source_probs);
        const auto norm = multinomial3(rng, n_normal, cfg.source_probs);

        for (int s = 0; s < 3; ++s) {
            auto& c = stats.by_source[static_cast<std::size_t>(s)];
            c.gates += static_cast<std::uint64_t>(silent[s] + ctl[s] + norm[s]);

            const std::int64_t ctl_clicks = binomial_draw(rng, ctl[s], control[s].click_prob);
            c.clicks += static_cast<std::uint64_t>(ctl_clicks);
            c.errors += static_cast<std::uint64_t>(
                binomial_draw(rng, ctl_clicks, control[s].error_given_click));

            const std::int64_t norm_clicks = binomial_draw(rng, norm[s], normal[s].click_prob);
            c.clicks += static_cast<std::uint64_t>(norm_clicks);
            c.errors += static_cast<std::uint64_t>(
                binomial_draw(rng, norm_clicks, normal[s].error_given_click));
        }
    }
    return stats;
}

std::array<AgreementRow, 3> agreement(const EmpiricalStats& stats, const SessionConfig& cfg,
                                      const ProtocolParams& params) {
    const std::array<double, 3> omegas{params.mu, params.nu, 0.0};
    std::array<AgreementRow, 3> rows;
    for (int s = 0; s < 3; ++s) {
        const auto& c = stats.by_source[static_cast<std::size_t>(s)];
        AgreementRow& r = rows[static_cast<std::size_t>(s)];
        r.source = static_cast<SourceState>(s);
        r.gates = c.gates;
        r.q_analytic = total_gain(omegas[s], cfg.solution, cfg.profile, params);
        r.q_emp = c.q_hat();
        r.eq_analytic = total_qber(omegas[s], cfg.solution, cfg.profile, params) * r.q_analytic;
        r.eq_emp = c.eq_hat();
        const double n = static_cast<double>(c.gates);
        const double sd_q = std::sqrt(r.q_analytic * (1.0 - r.q_analytic) / n);
        const double sd_eq = std::sqrt(r.eq_analytic * (1.0 - r.eq_analytic) / n);
        r.z_gain = sd_q > 0.0 ? (r.q_emp - r.q_analytic) / sd_q : 0.0;
        r.z_error = sd_eq > 0.0 ? (r.eq_emp - r.eq_analytic) / sd_eq : 0.0;
    }
    return rows;
}

} // namespace pulseblind
