#pragma once
/*
One-shot bounds on the minimal expected guessing cost

    C*(D, rho, eps) = min { sum_i lambda_i P_Z(i) i^rho : P_e <= eps },

with alpha = 1 / (1 + rho) and L = floor(2^D):

    lower = (1 + log2 M)^-rho * 2^(rho H^eps_alpha(X) - (1 + rho) log2 L)
    upper = 1 - eps + 2^rho * 2^(rho H^eps_alpha(X) - rho log2 L)

and their large-n behaviour for i.i.d. sources, obtained by substituting

    H^eps_alpha(X^n) ~ nH - sqrt(nV) Phi^-1(eps) - log2(n) / (2 (1 - alpha)) + O(1).

The O(1) constant is unknown; expansion values are trend data, never
certified bounds.
*/

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "guessrisk/dist.hpp"
#include "guessrisk/entropy.hpp"
#include "guessrisk/errors.hpp"
#include "guessrisk/gaussian.hpp"
#include "guessrisk/guessing.hpp"

namespace guessrisk {

inline constexpr double kBoundSlack = 1e-9;

/// log2 floor(2^d). Exact while 2^d fits a double mantissa; beyond that
/// floor(2^d) and 2^d agree to within 2^(1-d) relative, so d itself is returned.
inline double log2_floor_exp(double d) {
    if (!(d >= 0.0)) throw DomainError("distortion level must be nonnegative");
    if (d > 52.0) return d;
    const double rounded = std::round(d);
    if (std::abs(d - rounded) < 1e-12) return rounded; // 2^k is exact
    return std::log2(static_cast<double>(floor_exp(d)));
}

namespace detail {

inline double guessing_order(double rho) { return 1.0 / (1.0 + rho); }

} // namespace detail

inline double cost_lower_bound(const Pmf& p, double d_level, double rho, double eps) {
    detail::check_rho(rho);
    const double h = smooth_renyi_entropy(p, detail::guessing_order(rho), eps);
    const double log_m = std::log2(static_cast<double>(p.size()));
    return std::pow(1.0 + log_m, -rho) * std::exp2(rho * h - (1.0 + rho) * log2_floor_exp(d_level));
}

inline double cost_upper_bound(const Pmf& p, double d_level, double rho, double eps) {
    detail::check_rho(rho);
    const double h = smooth_renyi_entropy(p, detail::guessing_order(rho), eps);
    return 1.0 - eps + std::exp2(rho) * std::exp2(rho * h - rho * log2_floor_exp(d_level));
}

struct BoundsReport {
    double lower = 0.0;
    double upper = 0.0;
    std::optional<double> reference_cost;
    double slack_lower = 0.0; // reference - lower
    double slack_upper = 0.0; // upper - reference
    std::size_t alphabet = 0;
    double d_level = 0.0;
    double rho = 0.0;
    double eps = 0.0;

    /// lower <= reference <= upper up to kBoundSlack (or lower <= upper without a reference).
    bool holds() const noexcept {
        if (!reference_cost) return lower <= upper + kBoundSlack;
        return slack_lower >= -kBoundSlack && slack_upper >= -kBoundSlack;
    }
};

inline BoundsReport make_bounds_report(const Pmf& p, double d_level, double rho, double eps,
                                       std::optional<double> reference = std::nullopt) {
    BoundsReport r;
    r.lower = cost_lower_bound(p, d_level, rho, eps);
    r.upper = cost_upper_bound(p, d_level, rho, eps);
    r.reference_cost = reference;
    if (reference) {
        r.slack_lower = *reference - r.lower;
        r.slack_upper = r.upper - *reference;
    }
    r.alphabet = p.size();
    r.d_level = d_level;
    r.rho = rho;
    r.eps = eps;
    return r;
}

// ---------------------------------------------------------------------------
// Large-n expansions

struct ExpansionTerms {
    double first_order;       // n H
    double second_order;      // sqrt(n V) Phi^-1(eps)
    double third_order;       // (1 + rho) / 2 * log2 n
    double distortion;        // log2 floor(2^(nD))
    double log2_alphabet_pad; // log2(1 + n log2 M)
};

struct ExpansionBounds {
    static constexpr std::string_view label = "expansion, O(1) dropped";

    ExpansionTerms terms{};
    double log2_lower = 0.0; // log2 of the lower expression
    double log2_growth = 0.0; // exponent of 2 in the upper expression's second summand
    double lower = 0.0;
    double upper = 0.0;
};

/// Both large-n cost expressions with the O(1) term set to zero.
inline ExpansionBounds cost_expansion(const Pmf& p, std::size_t n, double d_per_symbol, double rho, double eps) {
    detail::check_rho(rho);
    if (n == 0) throw DomainError("blocklength must be at least 1");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("expansion needs eps in (0, 1)");
    const SourceStats st = source_stats(p);
    if (!(st.v > 0.0)) throw DomainError("expansion needs varentropy V(X) > 0");

    const double nd = static_cast<double>(n);
    ExpansionBounds out;
    out.terms.first_order = nd * st.h;
    out.terms.second_order = std::sqrt(nd * st.v) * inv_gaussian_cdf(eps);
    out.terms.third_order = 0.5 * (1.0 + rho) * std::log2(nd);
    out.terms.distortion = log2_floor_exp(nd * d_per_symbol);
    out.terms.log2_alphabet_pad = std::log2(1.0 + nd * std::log2(static_cast<double>(p.size())));

    const double core = rho * out.terms.first_order - rho * out.terms.second_order - out.terms.third_order;
    out.log2_lower = -rho * out.terms.log2_alphabet_pad + core - (1.0 + rho) * out.terms.distortion;
    out.log2_growth = rho + core - rho * out.terms.distortion;
    out.lower = std::exp2(out.log2_lower);
    out.upper = 1.0 - eps + std::exp2(out.log2_growth);
    return out;
}

struct AsymptoticsRow {
    std::size_t n = 0;
    double exact_entropy = 0.0;           // H^eps_alpha(X^n)
    double expansion_no_o1 = 0.0;         // nH - sqrt(nV) Phi^-1(eps) - log2(n) / (2 (1 - alpha))
    double residual = 0.0;                // exact - expansion
    double normalized_second_order = 0.0; // (exact - nH + log2(n) / (2 (1 - alpha))) / sqrt(n)
};

inline std::vector<AsymptoticsRow> asymptotic_table(const Pmf& p, double alpha, double eps,
                                                    std::span<const std::size_t> n_list,
                                                    std::size_t atom_cap = kDefaultAtomCap) {
    detail::check_smoothing_order(alpha);
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("asymptotics need eps in (0, 1)");
    const SourceStats st = source_stats(p);
    if (!(st.v > 0.0)) throw DomainError("asymptotics need varentropy V(X) > 0");
    const double quantile = inv_gaussian_cdf(eps);
    const double log_coeff = 1.0 / (2.0 * (1.0 - alpha));

    std::vector<AsymptoticsRow> rows;
    rows.reserve(n_list.size());
    for (std::size_t n : n_list) {
        if (n == 0) throw DomainError("blocklength must be at least 1");
        const double nd = static_cast<double>(n);
        AsymptoticsRow r;
        r.n = n;
        r.exact_entropy = smooth_renyi_product(product_power(p, n, atom_cap), alpha, eps);
        r.expansion_no_o1 = nd * st.h - std::sqrt(nd * st.v) * quantile - log_coeff * std::log2(nd);
        r.residual = r.exact_entropy - r.expansion_no_o1;
        r.normalized_second_order = (r.exact_entropy - nd * st.h + log_coeff * std::log2(nd)) / std::sqrt(nd);
        rows.push_back(r);
    }
    return rows;
}

/// The value normalized_second_order tends to: -sqrt(V) Phi^-1(eps).
inline double second_order_limit(const Pmf& p, double eps) {
    return -std::sqrt(source_stats(p).v) * inv_gaussian_cdf(eps);
}

} // namespace guessrisk
