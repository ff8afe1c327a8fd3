#pragma once
/*
Strategy construction and the exact optimum on small alphabets.

build_achievable_strategy groups the i* most likely symbols into consecutive
blocks of L = floor(2^D) symbols, then the remaining tail into further blocks.
Each guess is uniform on its block, so every covered symbol has log-loss
log2 |block| <= log2 L <= D. The stop probability on the last kept block is
chosen so that exactly 1 - eps of the mass is found; every tail block is
abandoned outright.

brute_force_cstar enumerates ordered set partitions of the alphabet into
blocks of at most L symbols. Uniform-on-block reconstructions lose nothing:
a reconstruction can give probability >= 2^-D to at most L symbols, and the
symbols first covered at step j are a subset of those. For a fixed sequence
of block masses the best stopping schedule is the threshold schedule of
optimal_survival.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "guessrisk/detail/numeric.hpp"
#include "guessrisk/dist.hpp"
#include "guessrisk/entropy.hpp"
#include "guessrisk/errors.hpp"
#include "guessrisk/guessing.hpp"

namespace guessrisk {

/// Half-open range [begin, end) of sorted Pmf positions.
struct IndexRange {
    std::size_t begin;
    std::size_t end;

    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct Blocks {
    std::vector<IndexRange> kept; // cover positions [0, i_star)
    std::vector<IndexRange> tail; // cover positions [i_star, M)
    std::size_t i_star = 0;
    std::uint64_t block_size = 1; // floor(2^D), capped at M
};

namespace detail {

inline std::vector<IndexRange> chunk_range(std::size_t begin, std::size_t end, std::size_t width) {
    std::vector<IndexRange> out;
    for (std::size_t b = begin; b < end; b += width) out.push_back({b, std::min(b + width, end)});
    return out;
}

inline double step_weight(std::size_t step, double rho) {
    return std::exp(rho * std::log(static_cast<double>(step)));
}

} // namespace detail

inline Blocks achievable_blocks(const Pmf& p, double d_level, double eps) {
    detail::check_level(d_level);
    const TailTruncation t = truncate_tail(p, eps);
    Blocks b;
    b.i_star = t.i_star;
    b.block_size = std::min<std::uint64_t>(floor_exp(d_level), p.size());
    b.kept = detail::chunk_range(0, t.i_star, b.block_size);
    b.tail = detail::chunk_range(t.i_star, p.size(), b.block_size);
    return b;
}

/// Uniform-on-block reconstructions over the raw alphabet, one per block, in order.
inline std::vector<std::vector<double>> uniform_reconstructions(
    const Pmf& p, const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<std::vector<double>> out;
    out.reserve(blocks.size());
    for (const auto& block : blocks) {
        std::vector<double> r(p.alphabet_size(), 0.0);
        for (std::size_t pos : block) r[p.labels()[pos]] = 1.0 / static_cast<double>(block.size());
        out.push_back(std::move(r));
    }
    return out;
}

inline GuessingStrategy build_achievable_strategy(const Pmf& p, double d_level, double eps) {
    const Blocks b = achievable_blocks(p, d_level, eps);
    const TailTruncation t = truncate_tail(p, eps);

    std::vector<std::vector<std::size_t>> blocks;
    for (const auto* group : {&b.kept, &b.tail})
        for (const IndexRange& r : *group) {
            std::vector<std::size_t> members;
            for (std::size_t i = r.begin; i < r.end; ++i) members.push_back(i);
            blocks.push_back(std::move(members));
        }

    GuessingStrategy s;
    s.reconstructions = uniform_reconstructions(p, blocks);
    s.stop_probs.assign(blocks.size(), 0.0);

    const IndexRange& last = b.kept.back();
    detail::CompensatedSum kept_q, kept_p;
    for (std::size_t i = last.begin; i < last.end; ++i) {
        kept_q += t.q.values[i];
        kept_p += p[i];
    }
    // kept_p > 0: Pmf entries are strictly positive.
    s.stop_probs[b.kept.size() - 1] = std::clamp(1.0 - kept_q.value() / kept_p.value(), 0.0, 1.0);
    for (std::size_t j = b.kept.size(); j < blocks.size(); ++j) s.stop_probs[j] = 1.0;
    return s;
}

// ---------------------------------------------------------------------------

/*
Cheapest survival schedule for a fixed ordering: serve mass 1 - eps from the
earliest guesses. Since i^rho is increasing, moving found mass to a later
guess never helps, so lambda = (1, ..., 1, fraction, 0, ..., 0), which is
also nonincreasing as required.
*/
inline std::vector<double> optimal_survival(std::span<const double> pz, double rho, double eps) {
    detail::check_rho(rho);
    detail::check_eps(eps);
    std::vector<double> lambda(pz.size(), 0.0);
    if (eps == 0.0) {
        std::fill(lambda.begin(), lambda.end(), 1.0);
        return lambda;
    }
    double remaining = 1.0 - eps;
    for (std::size_t i = 0; i < pz.size(); ++i) {
        if (remaining <= kCrossingTolerance) break;
        if (pz[i] <= remaining + kCrossingTolerance) {
            lambda[i] = 1.0;
            remaining -= pz[i];
        } else {
            lambda[i] = remaining / pz[i];
            remaining = 0.0;
        }
    }
    if (remaining > 1e-9) throw DomainError("optimal_survival: total mass is below 1 - eps");
    return lambda;
}

inline double survival_cost(std::span<const double> pz, std::span<const double> lambda, double rho) {
    detail::CompensatedSum c;
    for (std::size_t i = 0; i < pz.size(); ++i) c += lambda[i] * pz[i] * detail::step_weight(i + 1, rho);
    return c.value();
}

/// Stop probabilities realizing a survival sequence: pi_i = 1 - lambda_i / lambda_{i-1}.
inline std::vector<double> stop_probs_from_survival(std::span<const double> lambda) {
    std::vector<double> pi(lambda.size());
    double prev = 1.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        pi[i] = prev > 0.0 ? std::clamp(1.0 - lambda[i] / prev, 0.0, 1.0) : 1.0;
        prev = lambda[i];
    }
    return pi;
}

struct OracleResult {
    double c_star = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::size_t>> best_partition; // sorted Pmf positions, in guess order
    std::vector<double> best_survival;
};

struct OracleOptions {
    std::size_t max_alphabet = kOracleMaxAlphabet;
    // Only enumerate orderings whose blocks lie entirely inside the i*-prefix
    // or entirely inside the tail, prefix blocks first.
    bool prefix_first = false;
};

/// The strategy an oracle partition describes (uniform blocks + threshold stopping).
inline GuessingStrategy strategy_from_partition(const Pmf& p, const OracleResult& r) {
    GuessingStrategy s;
    s.reconstructions = uniform_reconstructions(p, r.best_partition);
    s.stop_probs = stop_probs_from_survival(r.best_survival);
    return s;
}

namespace detail {

class PartitionSearch {
public:
    PartitionSearch(const Pmf& p, std::size_t block_size, double rho, double eps, std::size_t prefix_len)
        : p_(p), block_size_(block_size), eps_(eps), prefix_len_(prefix_len) {
        weights_.resize(p.size() + 1);
        for (std::size_t i = 1; i <= p.size(); ++i) weights_[i] = step_weight(i, rho);
    }

    OracleResult run() {
        std::vector<std::size_t> remaining(p_.size());
        for (std::size_t i = 0; i < p_.size(); ++i) remaining[i] = i;
        recurse(remaining, 1.0 - eps_, 0.0);
        return best_;
    }

private:
    // Candidate symbols for the next block. With prefix_first, tail symbols
    // only become available once the prefix is exhausted.
    std::vector<std::size_t> pool(const std::vector<std::size_t>& remaining) const {
        if (prefix_len_ == 0) return remaining;
        std::vector<std::size_t> head;
        for (std::size_t x : remaining)
            if (x < prefix_len_) head.push_back(x);
        return head.empty() ? remaining : head;
    }

    void recurse(const std::vector<std::size_t>& remaining, double target_left, double cost) {
        if (remaining.empty() || (eps_ > 0.0 && target_left <= kCrossingTolerance)) {
            finish(remaining, cost);
            return;
        }
        const std::vector<std::size_t> candidates = pool(remaining);
        std::vector<std::size_t> block;
        extend(candidates, 0, block, remaining, target_left, cost);
    }

    // Lexicographic enumeration of nonempty subsets of `candidates` of size <= L.
    void extend(const std::vector<std::size_t>& candidates, std::size_t from, std::vector<std::size_t>& block,
                const std::vector<std::size_t>& remaining, double target_left, double cost) {
        for (std::size_t k = from; k < candidates.size(); ++k) {
            block.push_back(candidates[k]);
            place(block, remaining, target_left, cost);
            if (block.size() < block_size_) extend(candidates, k + 1, block, remaining, target_left, cost);
            block.pop_back();
        }
    }

    void place(const std::vector<std::size_t>& block, const std::vector<std::size_t>& remaining,
               double target_left, double cost) {
        const std::size_t step = path_.size() + 1;
        double mass = 0.0;
        for (std::size_t x : block) mass += p_[x];
        const double served = eps_ == 0.0 ? mass : std::min(mass, std::max(target_left, 0.0));
        const double next_cost = cost + served * weights_[step];
        if (next_cost >= best_.c_star - 1e-12) return;

        std::vector<std::size_t> rest;
        rest.reserve(remaining.size() - block.size());
        std::set_difference(remaining.begin(), remaining.end(), block.begin(), block.end(),
                            std::back_inserter(rest));
        path_.push_back({block, mass, served});
        recurse(rest, target_left - served, next_cost);
        path_.pop_back();
    }

    // The target is met: the remaining symbols cost nothing wherever they go;
    // append them as singletons, the first completion in enumeration order.
    void finish(const std::vector<std::size_t>& remaining, double cost) {
        if (cost >= best_.c_star - 1e-12) return;
        best_.c_star = cost;
        best_.best_partition.clear();
        best_.best_survival.clear();
        for (const Step& s : path_) {
            best_.best_partition.push_back(s.block);
            best_.best_survival.push_back(s.mass > 0.0 ? std::min(1.0, s.served / s.mass) : 0.0);
        }
        for (std::size_t x : remaining) {
            best_.best_partition.push_back({x});
            best_.best_survival.push_back(0.0);
        }
        // Zero-service steps in the middle would break monotonicity of lambda.
        for (std::size_t i = 1; i < best_.best_survival.size(); ++i)
            best_.best_survival[i] = std::min(best_.best_survival[i], best_.best_survival[i - 1]);
    }

    struct Step {
        std::vector<std::size_t> block;
        double mass;
        double served;
    };

    const Pmf& p_;
    std::size_t block_size_;
    double eps_;
    std::size_t prefix_len_;
    std::vector<double> weights_;
    std::vector<Step> path_;
    OracleResult best_;
};

} // namespace detail

/// Exact C*(D, rho, eps) by exhaustive search over ordered partitions (M <= max_alphabet).
inline OracleResult brute_force_cstar(const Pmf& p, double d_level, double rho, double eps,
                                      const OracleOptions& opts = {}) {
    detail::check_level(d_level);
    detail::check_rho(rho);
    detail::check_eps(eps);
    if (p.size() > opts.max_alphabet)
        throw ResourceError("brute_force_cstar: alphabet of " + std::to_string(p.size()) +
                            " exceeds the enumeration cap of " + std::to_string(opts.max_alphabet));
    const std::size_t block_size = static_cast<std::size_t>(std::min<std::uint64_t>(floor_exp(d_level), p.size()));
    const std::size_t prefix = opts.prefix_first ? truncate_tail(p, eps).i_star : 0;
    return detail::PartitionSearch(p, block_size, rho, eps, prefix).run();
}

} // namespace guessrisk
