#pragma once
/*
Finite probability distributions.

  Pmf          validated mass function, zero-mass symbols stripped, sorted
               nonincreasing with stable ties. Remembers each position's
               original label so strategies can be written against the raw
               alphabet.
  JointPmf     P_{X,Y} as a dense row-major table (rows x, columns y).
  AtomMultiset i.i.d. n-fold product grouped into type classes: one atom per
               distinct sequence probability, with its multiplicity.

All logarithms in this library are base 2.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "guessrisk/detail/numeric.hpp"
#include "guessrisk/errors.hpp"

namespace guessrisk {

inline constexpr double kMassTolerance = 1e-9;
inline constexpr double kAtomMergeTolerance = 1e-12;
inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

class Pmf;
Pmf make_pmf(std::span<const double> raw);

class Pmf {
public:
    std::span<const double> probs() const noexcept { return probs_; }
    /// Original (0-based) index in the raw input of each sorted position.
    std::span<const std::size_t> labels() const noexcept { return labels_; }

    /// Support size M.
    std::size_t size() const noexcept { return probs_.size(); }
    /// Length of the raw input, zero-mass symbols included.
    std::size_t alphabet_size() const noexcept { return alphabet_size_; }

    double operator[](std::size_t i) const noexcept { return probs_[i]; }

    friend bool operator==(const Pmf&, const Pmf&) = default;

private:
    friend Pmf make_pmf(std::span<const double> raw);
    Pmf() = default;

    std::vector<double> probs_;
    std::vector<std::size_t> labels_;
    std::size_t alphabet_size_ = 0;
};

/// Normalizes, strips zeros and sorts nonincreasing (stable in the raw index).
inline Pmf make_pmf(std::span<const double> raw) {
    if (raw.empty()) throw ValidationError("pmf: empty input");
    for (double v : raw)
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("pmf: entries must be finite and nonnegative");
    const double total = detail::compensated_total(raw);
    if (!(total > 0.0)) throw ValidationError("pmf: total mass must be positive");

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i] > 0.0) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return raw[a] > raw[b]; });

    Pmf p;
    p.alphabet_size_ = raw.size();
    p.labels_ = order;
    p.probs_.reserve(order.size());
    for (std::size_t i : order) p.probs_.push_back(raw[i] / total);
    return p;
}

inline Pmf make_pmf(const std::vector<double>& raw) { return make_pmf(std::span<const double>(raw)); }
inline Pmf make_pmf(std::initializer_list<double> raw) {
    return make_pmf(std::span<const double>(raw.begin(), raw.size()));
}

inline Pmf uniform_pmf(std::size_t m) { return make_pmf(std::vector<double>(m, 1.0)); }

// ---------------------------------------------------------------------------

class JointPmf {
public:
    JointPmf(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        if (rows_ == 0 || cols_ == 0 || values_.size() != rows_ * cols_)
            throw ValidationError("joint: table must be a nonempty rectangle");
        for (double v : values_)
            if (!std::isfinite(v) || v < 0.0)
                throw ValidationError("joint: entries must be finite and nonnegative");
        const double total = detail::compensated_total(values_);
        if (!(total > 0.0)) throw ValidationError("joint: total mass must be positive");
        for (double& v : values_) v /= total;
    }

    static JointPmf from_rows(const std::vector<std::vector<double>>& table) {
        if (table.empty()) throw ValidationError("joint: empty table");
        const std::size_t cols = table.front().size();
        std::vector<double> flat;
        flat.reserve(table.size() * cols);
        for (const auto& row : table) {
            if (row.size() != cols) throw ValidationError("joint: ragged table");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return JointPmf(table.size(), cols, std::move(flat));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t x, std::size_t y) const noexcept { return values_[x * cols_ + y]; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
};

/// P_Y, aligned with the table's columns (not sorted).
inline std::vector<double> marginal_y(const JointPmf& j) {
    std::vector<double> out(j.cols());
    for (std::size_t y = 0; y < j.cols(); ++y) {
        detail::CompensatedSum s;
        for (std::size_t x = 0; x < j.rows(); ++x) s += j(x, y);
        out[y] = s.value();
    }
    return out;
}

/// P_X, aligned with the table's rows (not sorted).
inline std::vector<double> marginal_x(const JointPmf& j) {
    std::vector<double> out(j.rows());
    for (std::size_t x = 0; x < j.rows(); ++x) {
        detail::CompensatedSum s;
        for (std::size_t y = 0; y < j.cols(); ++y) s += j(x, y);
        out[x] = s.value();
    }
    return out;
}

inline Pmf conditional_x_given_y(const JointPmf& j, std::size_t y) {
    if (y >= j.cols()) throw ValidationError("joint: column index out of range");
    std::vector<double> column(j.rows());
    for (std::size_t x = 0; x < j.rows(); ++x) column[x] = j(x, y);
    if (!(detail::compensated_total(column) > 0.0))
        throw ValidationError("joint: conditioning on a zero-mass column " + std::to_string(y));
    return make_pmf(column);
}

/// The pair (X, Y) as a single variable over rows*cols symbols.
inline Pmf flatten(const JointPmf& j) { return make_pmf(j.values()); }

// ---------------------------------------------------------------------------

struct Atom {
    double value;
    // Held as a double: binomial multiplicities overflow 64-bit integers
    // well before the atom count becomes a problem (C(512,256) ~ 4.7e152).
    double multiplicity;

    friend bool operator==(const Atom&, const Atom&) = default;
};

class AtomMultiset {
public:
    AtomMultiset() = default;

    /// Groups equal values (relative tolerance kAtomMergeTolerance) and sorts nonincreasing.
    explicit AtomMultiset(std::vector<Atom> atoms) : atoms_(std::move(atoms)) { normalize_order(); }

    static AtomMultiset from_pmf(const Pmf& p) {
        std::vector<Atom> atoms;
        for (double v : p.probs()) atoms.push_back({v, 1.0});
        return AtomMultiset(std::move(atoms));
    }

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }

    double total_mass() const noexcept {
        detail::CompensatedSum s;
        for (const Atom& a : atoms_) s += a.multiplicity * a.value;
        return s.value();
    }

    double total_count() const noexcept {
        double c = 0.0;
        for (const Atom& a : atoms_) c += a.multiplicity;
        return c;
    }

private:
    void normalize_order() {
        for (const Atom& a : atoms_)
            if (!(a.value > 0.0) || !(a.multiplicity >= 1.0))
                throw ValidationError("atoms: values must be positive and multiplicities >= 1");
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.value > b.value; });
        std::vector<Atom> merged;
        merged.reserve(atoms_.size());
        for (const Atom& a : atoms_) {
            if (!merged.empty() &&
                merged.back().value - a.value <= kAtomMergeTolerance * merged.back().value) {
                merged.back().multiplicity += a.multiplicity;
            } else {
                merged.push_back(a);
            }
        }
        atoms_ = std::move(merged);
    }

    std::vector<Atom> atoms_;
};

/// Grouped distribution of the independent pair (A, B).
inline AtomMultiset product(const AtomMultiset& a, const AtomMultiset& b,
                            std::size_t atom_cap = kDefaultAtomCap) {
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& x : a.atoms())
        for (const Atom& y : b.atoms()) {
            const double v = x.value * y.value;
            if (v == 0.0) throw ResourceError("atoms: sequence probability underflows to zero");
            out.push_back({v, x.multiplicity * y.multiplicity});
        }
    AtomMultiset r(std::move(out));
    if (r.size() > atom_cap)
        throw ResourceError("atoms: " + std::to_string(r.size()) + " atoms exceed the cap of " +
                            std::to_string(atom_cap));
    return r;
}

/// Type-class representation of P_{X^n} for n independent copies of X.
inline AtomMultiset product_power(const Pmf& p, std::size_t n, std::size_t atom_cap = kDefaultAtomCap) {
    if (n == 0) throw DomainError("product_power: n must be at least 1");
    const AtomMultiset base = AtomMultiset::from_pmf(p);
    AtomMultiset acc = base;
    for (std::size_t k = 1; k < n; ++k) acc = product(acc, base, atom_cap);
    if (acc.size() > atom_cap) throw ResourceError("atoms: expansion exceeds the atom cap");
    return acc;
}

/// Flattens an atom multiset into a Pmf; only for small multiplicities.
inline Pmf expand(const AtomMultiset& atoms, std::size_t max_symbols = kDefaultAtomCap) {
    if (atoms.total_count() > static_cast<double>(max_symbols))
        throw ResourceError("atoms: expansion exceeds the symbol cap");
    std::vector<double> flat;
    for (const Atom& a : atoms.atoms())
        flat.insert(flat.end(), static_cast<std::size_t>(std::llround(a.multiplicity)), a.value);
    return make_pmf(flat);
}

} // namespace guessrisk
