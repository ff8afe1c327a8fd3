#pragma once
/*
Soft guessing with stopping.

A strategy is a list of N soft reconstructions (distributions over the raw
alphabet) and N stop probabilities. For a realized symbol x the guesser
walks j = 1..N: with probability pi_j it gives up and declares an error,
otherwise it asks whether log2(1 / Phat_j(x)) <= D. A strategy is
D-admissible when every symbol is eventually covered.

Conventions:
  - reconstructions are indexed by the raw (original) symbol label, so their
    length equals Pmf::alphabet_size();
  - guess steps are 1-based, as in G(x) in {1..N};
  - an abandoned run contributes zero cost; the error event only feeds P_e.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "guessrisk/detail/numeric.hpp"
#include "guessrisk/dist.hpp"
#include "guessrisk/errors.hpp"

namespace guessrisk {

// log-loss comparisons are made against D + kDistortionSlack so that
// exact equalities such as log2(3) <= log2(3) survive rounding.
inline constexpr double kDistortionSlack = 1e-9;

struct GuessingStrategy {
    std::vector<std::vector<double>> reconstructions;
    std::vector<double> stop_probs;

    std::size_t size() const noexcept { return stop_probs.size(); }
    friend bool operator==(const GuessingStrategy&, const GuessingStrategy&) = default;
};

/// Checks shapes and ranges against the source; throws ValidationError.
inline void validate(const GuessingStrategy& s, const Pmf& p) {
    if (s.reconstructions.size() != s.stop_probs.size())
        throw ValidationError("strategy: reconstructions and stop_probs differ in length");
    if (s.size() == 0) throw ValidationError("strategy: needs at least one guess");
    if (s.size() > p.alphabet_size())
        throw ValidationError("strategy: more guesses than alphabet symbols");
    for (const auto& r : s.reconstructions) {
        if (r.size() != p.alphabet_size())
            throw ValidationError("strategy: reconstruction length " + std::to_string(r.size()) +
                                  " does not match alphabet size " +
                                  std::to_string(p.alphabet_size()));
        for (double v : r)
            if (!std::isfinite(v) || v < 0.0)
                throw ValidationError("strategy: reconstruction entries must be nonnegative");
        if (std::abs(detail::compensated_total(r) - 1.0) > kMassTolerance)
            throw ValidationError("strategy: reconstruction does not sum to 1");
    }
    for (double pi : s.stop_probs)
        if (!detail::is_finite_in(pi, 0.0, 1.0))
            throw ValidationError("strategy: stop probabilities must lie in [0, 1]");
}

/// log2(1 / phat(x)); +inf when phat(x) = 0.
inline double log_loss(std::span<const double> phat, std::size_t x) {
    const double m = phat[x];
    return m > 0.0 ? -std::log2(m) : std::numeric_limits<double>::infinity();
}

/// floor(2^d), nudged upward by 1e-9 so that exact powers are not lost; saturates at 2^62.
inline std::uint64_t floor_exp(double d) {
    if (!(d >= 0.0)) throw DomainError("floor_exp: distortion level must be nonnegative");
    if (d >= 62.0) return std::uint64_t{1} << 62;
    return static_cast<std::uint64_t>(std::floor(std::exp2(d) + 1e-9));
}

struct Admissibility {
    bool admissible = true;
    std::optional<std::size_t> witness; // raw label of an uncovered symbol
    explicit operator bool() const noexcept { return admissible; }
};

namespace detail {

// First 1-based step covering raw label x, or 0 when none does.
inline std::size_t first_cover(const GuessingStrategy& s, std::size_t label, double d_level) {
    for (std::size_t j = 0; j < s.size(); ++j)
        if (log_loss(s.reconstructions[j], label) <= d_level + kDistortionSlack) return j + 1;
    return 0;
}

inline void check_level(double d_level) {
    if (!(d_level >= 0.0) || std::isnan(d_level))
        throw DomainError("distortion level D must be nonnegative");
}

inline void check_rho(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
}

} // namespace detail

inline Admissibility is_admissible(const GuessingStrategy& s, const Pmf& p, double d_level) {
    validate(s, p);
    detail::check_level(d_level);
    for (std::size_t label : p.labels())
        if (detail::first_cover(s, label, d_level) == 0) return {false, label};
    return {};
}

struct StrategyEvaluation {
    std::vector<std::size_t> guess_index; // G(x) per sorted Pmf position, 1-based
    std::vector<double> pz;               // P_Z(i), i = 1..N
    std::vector<double> survival;         // lambda_i = prod_{j<=i} (1 - pi_j)
    double error_prob = 0.0;
    double expected_cost = 0.0;
};

inline StrategyEvaluation evaluate(const GuessingStrategy& s, const Pmf& p, double d_level, double rho) {
    detail::check_rho(rho);
    if (const auto adm = is_admissible(s, p, d_level); !adm)
        throw ContractError("strategy is not admissible: symbol " + std::to_string(*adm.witness) +
                                " is never covered",
                            *adm.witness);

    StrategyEvaluation ev;
    const std::size_t n = s.size();
    ev.pz.assign(n, 0.0);
    ev.guess_index.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const std::size_t g = detail::first_cover(s, p.labels()[i], d_level);
        ev.guess_index.push_back(g);
        ev.pz[g - 1] += p[i];
    }
    ev.survival.resize(n);
    double lambda = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        lambda *= 1.0 - s.stop_probs[i];
        ev.survival[i] = lambda;
    }
    detail::CompensatedSum found, cost;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = ev.survival[i] * ev.pz[i];
        found += w;
        cost += w * std::exp(rho * std::log(static_cast<double>(i + 1)));
    }
    ev.error_prob = std::clamp(1.0 - found.value(), 0.0, 1.0);
    ev.expected_cost = cost.value();
    return ev;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct SimReport {
    std::uint64_t trials = 0;
    double est_error_prob = 0.0;
    double est_cost = 0.0;
    double se_error_prob = 0.0;
    double se_cost = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform on [0, 1) from the top 53 bits; identical on every platform.
inline double unit_double(std::mt19937_64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Streaming mean / M2 with the pairwise merge of Chan et al.
struct RunningMoments {
    double n = 0.0, mean = 0.0, m2 = 0.0;

    void push(double x) noexcept {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }

    void merge(const RunningMoments& o) noexcept {
        if (o.n == 0.0) return;
        const double total = n + o.n;
        const double delta = o.mean - mean;
        mean += delta * o.n / total;
        m2 += o.m2 + delta * delta * n * o.n / total;
        n = total;
    }

    double std_error() const noexcept { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

struct ChunkResult {
    RunningMoments error, cost;
};

} // namespace detail

// Trials are cut into fixed-size chunks, each with its own derived seed, and
// merged in chunk order; the report depends on (seed, trials) only, not on the
// number of worker threads.
inline constexpr std::uint64_t kSimChunkTrials = 1 << 14;

inline SimReport simulate(const GuessingStrategy& s, const Pmf& p, double d_level, double rho,
                          std::uint64_t trials, std::uint64_t seed, unsigned workers = 0) {
    detail::check_rho(rho);
    if (trials == 0) throw DomainError("simulate: trials must be at least 1");
    if (const auto adm = is_admissible(s, p, d_level); !adm)
        throw ContractError("strategy is not admissible: symbol " + std::to_string(*adm.witness) +
                                " is never covered",
                            *adm.witness);

    std::vector<double> cdf(p.size());
    {
        detail::CompensatedSum c;
        for (std::size_t i = 0; i < p.size(); ++i) {
            c += p[i];
            cdf[i] = c.value();
        }
    }
    std::vector<double> step_cost(s.size());
    for (std::size_t j = 0; j < s.size(); ++j)
        step_cost[j] = std::exp(rho * std::log(static_cast<double>(j + 1)));

    auto run_chunk = [&](std::uint64_t chunk, std::uint64_t count) {
        std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(chunk)));
        detail::ChunkResult r;
        for (std::uint64_t t = 0; t < count; ++t) {
            const double u = detail::unit_double(rng);
            std::size_t pos = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            pos = std::min(pos, p.size() - 1);
            const std::size_t label = p.labels()[pos];
            double err = 1.0, cost = 0.0;
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (detail::unit_double(rng) < s.stop_probs[j]) break;
                if (log_loss(s.reconstructions[j], label) <= d_level + kDistortionSlack) {
                    err = 0.0;
                    cost = step_cost[j];
                    break;
                }
            }
            r.error.push(err);
            r.cost.push(cost);
        }
        return r;
    };

    const std::uint64_t chunks = (trials + kSimChunkTrials - 1) / kSimChunkTrials;
    std::vector<detail::ChunkResult> results(chunks);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.push_back(std::async(std::launch::async, [&, w] {
            for (std::uint64_t c = w; c < chunks; c += workers) {
                const std::uint64_t count = std::min(kSimChunkTrials, trials - c * kSimChunkTrials);
                results[c] = run_chunk(c, count);
            }
        }));
    for (auto& f : pool) f.get();

    detail::ChunkResult total;
    for (const auto& r : results) {
        total.error.merge(r.error);
        total.cost.merge(r.cost);
    }
    SimReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.est_error_prob = std::clamp(total.error.mean, 0.0, 1.0);
    rep.est_cost = std::max(total.cost.mean, 0.0);
    rep.se_error_prob = total.error.std_error();
    rep.se_cost = total.cost.std_error();
    return rep;
}

} // namespace guessrisk
