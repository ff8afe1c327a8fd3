#pragma once

#include <cmath>
#include <span>

namespace guessrisk::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    CompensatedSum& operator+=(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s += x;
    return s.value();
}

// Sum of x^alpha with 0^alpha = 0 (alpha > 0).
inline double power_sum(std::span<const double> xs, double alpha) noexcept {
    CompensatedSum s;
    for (double x : xs)
        if (x > 0.0) s += std::pow(x, alpha);
    return s.value();
}

inline bool is_finite_in(double x, double lo, double hi) noexcept {
    return std::isfinite(x) && x >= lo && x <= hi;
}

} // namespace guessrisk::detail
