#pragma once
/*
Rényi and smooth Rényi entropies (bits).

The smooth entropy of order alpha in (0,1) minimizes sum_x q(x)^alpha over
sub-normalized q with q <= P pointwise and total mass >= 1 - eps. Because the
objective is concave in q, the minimum sits at the vertex obtained by keeping
the most probable symbols and trimming the tail: truncate_tail builds that
vertex, smooth_renyi_oracle finds it by brute-force vertex enumeration.
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
#include "guessrisk/errors.hpp"
#include "guessrisk/gaussian.hpp"

namespace guessrisk {

// Slack used when deciding whether a cumulative sum has reached 1 - eps.
inline constexpr double kCrossingTolerance = 1e-12;
inline constexpr std::size_t kOracleMaxAlphabet = 10;

namespace detail {

inline void check_renyi_order(double alpha) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || alpha == 1.0)
        throw DomainError("renyi order must be positive and different from 1");
}

inline void check_smoothing_order(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("smooth renyi entropy is implemented for orders in (0, 1)");
}

inline void check_eps(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("eps must lie in [0, 1)");
}

inline double renyi_from_power_sum(double power_sum, double alpha) {
    return std::log2(power_sum) / (1.0 - alpha);
}

} // namespace detail

inline double renyi_entropy(std::span<const double> probs, double alpha) {
    detail::check_renyi_order(alpha);
    return detail::renyi_from_power_sum(detail::power_sum(probs, alpha), alpha);
}

inline double renyi_entropy(const Pmf& p, double alpha) { return renyi_entropy(p.probs(), alpha); }

/// A sub-normalized mass function aligned with a Pmf's sorted positions.
struct SubMass {
    std::vector<double> values;
    double eps = 0.0;

    double mass() const { return detail::compensated_total(values); }

    bool dominated_by(const Pmf& p) const {
        if (values.size() != p.size()) return false;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] < 0.0 || values[i] > p[i]) return false;
        return true;
    }
};

struct TailTruncation {
    std::size_t i_star; // number of kept symbols; the last one may be partial
    SubMass q;
};

/// The optimal smoothing vertex: keep the heaviest symbols until 1 - eps is reached.
inline TailTruncation truncate_tail(const Pmf& p, double eps) {
    detail::check_eps(eps);
    TailTruncation out{p.size(), SubMass{std::vector<double>(p.size(), 0.0), eps}};
    if (eps == 0.0) {
        std::copy(p.probs().begin(), p.probs().end(), out.q.values.begin());
        return out;
    }
    const double target = 1.0 - eps;
    detail::CompensatedSum cum;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double before = cum.value();
        if (before + p[i] >= target - kCrossingTolerance || i + 1 == p.size()) {
            // Minimality of i* leaves a strictly positive shortfall here.
            const double partial = std::min(p[i], target - before);
            out.i_star = i + 1;
            out.q.values[i] = std::max(partial, 0.0);
            return out;
        }
        out.q.values[i] = p[i];
        cum += p[i];
    }
    return out;
}

inline double smooth_renyi_entropy(const Pmf& p, double alpha, double eps) {
    detail::check_smoothing_order(alpha);
    const TailTruncation t = truncate_tail(p, eps);
    return detail::renyi_from_power_sum(
        detail::power_sum(std::span<const double>(t.q.values).first(t.i_star), alpha), alpha);
}

/*
Independent route: minimize sum q^alpha over the polytope
{0 <= q <= P, sum q >= 1 - eps} by visiting every vertex. A vertex has each
coordinate at 0 or P(x), except possibly one coordinate that absorbs the slack
so that sum q = 1 - eps exactly. Cost is O(2^M M).
*/
inline double smooth_renyi_oracle(const Pmf& p, double alpha, double eps,
                                  std::size_t max_alphabet = kOracleMaxAlphabet) {
    detail::check_smoothing_order(alpha);
    detail::check_eps(eps);
    const std::size_t m = p.size();
    if (m > max_alphabet || m > 24)
        throw ResourceError("smooth_renyi_oracle: alphabet of " + std::to_string(m) +
                            " exceeds the enumeration cap");
    const double target = 1.0 - eps;
    const std::uint32_t full = std::uint32_t{1} << m;

    std::vector<double> mass(full, 0.0), power(full, 0.0);
    for (std::uint32_t s = 1; s < full; ++s) {
        const unsigned low = static_cast<unsigned>(__builtin_ctz(s));
        const std::uint32_t rest = s & (s - 1);
        mass[s] = mass[rest] + p[low];
        power[s] = power[rest] + std::pow(p[low], alpha);
    }

    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < full; ++s) {
        if (mass[s] >= target - kCrossingTolerance) best = std::min(best, power[s]);
        const double slack = target - mass[s];
        if (slack <= 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (s & (std::uint32_t{1} << j)) continue;
            if (slack <= p[j] + kCrossingTolerance)
                best = std::min(best, power[s] + std::pow(std::min(slack, p[j]), alpha));
        }
    }
    return detail::renyi_from_power_sum(best, alpha);
}

/// max_y H_alpha(X | Y = y), the unsmoothed conditional Rényi entropy.
inline double conditional_renyi_zero(const JointPmf& j, double alpha) {
    detail::check_renyi_order(alpha);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < j.cols(); ++y)
        best = std::max(best, renyi_entropy(conditional_x_given_y(j, y), alpha));
    return best;
}

struct SourceStats {
    double h; // entropy, bits
    double v; // varentropy, bits^2
    double t; // third absolute central moment of the self-information, bits^3
};

inline SourceStats source_stats(const Pmf& p) {
    detail::CompensatedSum h;
    for (double q : p.probs()) h += -q * std::log2(q);
    SourceStats s{h.value(), 0.0, 0.0};
    detail::CompensatedSum v, t;
    for (double q : p.probs()) {
        const double dev = std::abs(-std::log2(q) - s.h);
        v += q * dev * dev;
        t += q * dev * dev * dev;
    }
    s.v = std::max(v.value(), 0.0);
    s.t = std::max(t.value(), 0.0);
    // Equal probabilities (up to atom merging) mean exactly zero dispersion.
    if (p.probs().front() <= p.probs().back() * (1.0 + kAtomMergeTolerance)) s.v = s.t = 0.0;
    return s;
}

/*
Smooth Rényi entropy of the source whose atoms are given, without expanding
multiplicities. The crossing of 1 - eps may fall inside a multiplicity group:
whole copies keep their value and one copy carries the partial mass.
*/
inline double smooth_renyi_product(const AtomMultiset& atoms, double alpha, double eps) {
    detail::check_smoothing_order(alpha);
    detail::check_eps(eps);
    const auto list = atoms.atoms();
    if (list.empty()) throw ValidationError("smooth_renyi_product: no atoms");

    detail::CompensatedSum total;
    if (eps == 0.0) {
        for (const Atom& a : list) total += a.multiplicity * std::pow(a.value, alpha);
        return detail::renyi_from_power_sum(total.value(), alpha);
    }

    const double target = 1.0 - eps;
    detail::CompensatedSum cum;
    for (std::size_t g = 0; g < list.size(); ++g) {
        const Atom& a = list[g];
        const double before = cum.value();
        if (before + a.multiplicity * a.value >= target - kCrossingTolerance || g + 1 == list.size()) {
            double k = std::ceil((target - kCrossingTolerance - before) / a.value);
            k = std::clamp(k, 1.0, a.multiplicity);
            const double partial = std::clamp(target - before - (k - 1.0) * a.value, 0.0, a.value);
            total += (k - 1.0) * std::pow(a.value, alpha);
            if (partial > 0.0) total += std::pow(partial, alpha);
            return detail::renyi_from_power_sum(total.value(), alpha);
        }
        cum += a.multiplicity * a.value;
        total += a.multiplicity * std::pow(a.value, alpha);
    }
    return detail::renyi_from_power_sum(total.value(), alpha); // unreachable
}

} // namespace guessrisk
