// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "guessrisk/guessrisk.hpp"
#include "guessrisk/io.hpp"
#include "test_support.hpp"

using namespace guessrisk;
namespace gt = guessrisk::testkit;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s | %s | %.2fs\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Instance {
    Pmf p;
    double d, rho, eps;
};

std::vector<Instance> sandwich_instances() {
    std::mt19937_64 rng(2024);
    const std::array d_grid{0.0, 0.5, 1.0, std::log2(3.0)};
    const std::array rho_grid{0.5, 1.0, 2.0};
    const std::array eps_grid{0.0, 0.1, 0.3};
    std::vector<Instance> out;
    for (int k = 0; k < 200; ++k) {
        Pmf p = gt::random_pmf(rng, 2, 8);
        out.push_back({std::move(p), d_grid[rng() % d_grid.size()], rho_grid[rng() % rho_grid.size()],
                       eps_grid[rng() % eps_grid.size()]});
    }
    return out;
}

Outcome smooth_entropy_vs_oracle() {
    std::mt19937_64 rng(1);
    const std::array alphas{0.2, 1.0 / 3.0, 0.5, 0.9};
    const std::array epss{0.0, 0.05, 0.3, 0.7};
    double worst = 0.0;
    for (int k = 0; k < 500; ++k) {
        const Pmf p = gt::random_pmf(rng, 2, 8);
        const double a = alphas[rng() % 4], e = epss[rng() % 4];
        worst = std::max(worst, std::abs(smooth_renyi_entropy(p, a, e) - smooth_renyi_oracle(p, a, e)));
    }
    return {worst <= 1e-9, "500 instances, max |closed form - oracle| = " + fmt(worst)};
}

Outcome sandwich(const std::vector<Instance>& xs, std::vector<double>& cstar) {
    double worst_lower = -INFINITY, worst_upper = -INFINITY;
    int bad = 0;
    cstar.clear();
    for (const auto& x : xs) {
        const double c = brute_force_cstar(x.p, x.d, x.rho, x.eps).c_star;
        cstar.push_back(c);
        const double lo = cost_lower_bound(x.p, x.d, x.rho, x.eps), hi = cost_upper_bound(x.p, x.d, x.rho, x.eps);
        worst_lower = std::max(worst_lower, lo - c);
        worst_upper = std::max(worst_upper, c - hi);
        if (lo - 1e-9 > c || c > hi + 1e-9) ++bad;
    }
    return {bad == 0, std::to_string(xs.size()) + " instances, violations " + std::to_string(bad) +
                          ", max(lower - C*) = " + fmt(worst_lower) + ", max(C* - upper) = " + fmt(worst_upper)};
}

Outcome achievability(const std::vector<Instance>& xs, const std::vector<double>& cstar) {
    int bad = 0;
    double worst_pe = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& x = xs[i];
        const GuessingStrategy s = build_achievable_strategy(x.p, x.d, x.eps);
        if (!is_admissible(s, x.p, x.d)) {
            ++bad;
            continue;
        }
        const auto ev = evaluate(s, x.p, x.d, x.rho);
        const double hi = cost_upper_bound(x.p, x.d, x.rho, x.eps);
        worst_pe = std::max(worst_pe, std::abs(ev.error_prob - x.eps));
        if (std::abs(ev.error_prob - x.eps) > 1e-9 || ev.expected_cost < cstar[i] - 1e-9 ||
            ev.expected_cost > hi + 1e-9)
            ++bad;
    }
    return {bad == 0, std::to_string(xs.size()) + " instances, failures " + std::to_string(bad) +
                          ", max |P_e - eps| = " + fmt(worst_pe)};
}

Outcome spot_values() {
    const Pmf u = uniform_pmf(4);
    const double lo = cost_lower_bound(u, 1.0, 1.0, 0.0), hi = cost_upper_bound(u, 1.0, 1.0, 0.0);
    const double built = evaluate(build_achievable_strategy(u, 1.0, 0.0), u, 1.0, 1.0).expected_cost;
    const Pmf b = make_pmf({0.7, 0.3});
    const double c0 = brute_force_cstar(b, 0.0, 1.0, 0.0).c_star, c3 = brute_force_cstar(b, 0.0, 1.0, 0.3).c_star;
    const bool ok = std::abs(lo - 1.0 / 3.0) <= 1e-4 && std::abs(built - 1.5) <= 1e-9 && std::abs(hi - 5.0) <= 1e-9 &&
                    std::abs(c0 - 1.3) <= 1e-9 && std::abs(c3 - 0.7) <= 1e-9;
    std::ostringstream os;
    os.precision(12);
    os << "lower " << lo << ", constructed " << built << ", upper " << hi << ", C*(0) " << c0 << ", C*(0.3) " << c3;
    return {ok, os.str()};
}

Outcome chain_rules() {
    std::mt19937_64 rng(5);
    const std::array alphas{0.1, 0.25, 0.5, 0.75, 0.9};
    const std::array epss{0.0, 0.05, 0.1, 0.3, 0.5};
    double min_marginal = INFINITY, min_conditional = INFINITY;
    for (int k = 0; k < 500; ++k) {
        const JointPmf j = gt::random_joint(rng, 6, 6);
        const double a = alphas[rng() % alphas.size()], e = epss[rng() % epss.size()];
        const double hxy = smooth_renyi_entropy(flatten(j), a, e);
        min_marginal = std::min(min_marginal, hxy - smooth_renyi_entropy(make_pmf(marginal_x(j)), a, e));
        min_conditional = std::min(
            min_conditional, conditional_renyi_zero(j, a) + smooth_renyi_entropy(make_pmf(marginal_y(j)), a, e) - hxy);
    }
    return {min_marginal >= -1e-9 && min_conditional >= -1e-9,
            "500 joints, min slack H(X)<=H(XY): " + fmt(min_marginal) +
                ", min slack H(XY)<=H(X|Y)+H(Y): " + fmt(min_conditional)};
}

Outcome monte_carlo() {
    std::mt19937_64 rng(6);
    const std::array d_grid{0.0, 0.5, 1.0, std::log2(3.0)};
    int bad = 0;
    bool reproducible = true;
    double worst_z = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Pmf p = gt::random_pmf(rng, 2, 8);
        const double d = d_grid[rng() % d_grid.size()], rho = std::array{0.5, 1.0, 2.0}[rng() % 3];
        const GuessingStrategy s = gt::random_admissible_strategy(rng, p, d);
        const auto ev = evaluate(s, p, d, rho);
        const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(k);
        const SimReport r = simulate(s, p, d, rho, 100000, seed);
        const double se_pe = std::sqrt(ev.error_prob * (1.0 - ev.error_prob) / 1e5);
        const double dz_pe = std::abs(r.est_error_prob - ev.error_prob), dz_c = std::abs(r.est_cost - ev.expected_cost);
        if (dz_pe > 4.0 * se_pe + 1e-12 || dz_c > 4.0 * r.se_cost + 1e-12) ++bad;
        if (se_pe > 0) worst_z = std::max(worst_z, dz_pe / se_pe);
        if (r.se_cost > 0) worst_z = std::max(worst_z, dz_c / r.se_cost);
        if (to_json(r).dump() != to_json(simulate(s, p, d, rho, 100000, seed)).dump()) reproducible = false;
    }
    return {bad == 0 && reproducible, "20 strategies x 1e5 trials, outside 4 SE: " + std::to_string(bad) +
                                          ", max z = " + fmt(worst_z) +
                                          (reproducible ? ", reruns identical" : ", reruns DIFFER")};
}

Outcome asymptotics() {
    const Pmf p = make_pmf({0.25, 0.75});
    const std::array<std::size_t, 7> ns{8, 16, 32, 64, 128, 256, 512};
    const auto rows = asymptotic_table(p, 1.0 / 3.0, 0.1, ns);
    // Threshold frozen from the 80-digit reference table (max observed 0.856).
    constexpr double kResidualBound = 1.0;
    double max_res = 0.0;
    for (const auto& r : rows) max_res = std::max(max_res, std::abs(r.residual));
    const double limit = second_order_limit(p, 0.1), so = rows.back().normalized_second_order;
    return {max_res <= kResidualBound && std::abs(so - limit) <= 0.1,
            "max |residual| = " + fmt(max_res) + " (bound 1.0), normalized second order at n=512 = " + fmt(so) +
                " vs limit " + fmt(limit)};
}

Outcome inverse_normal() {
    double worst = 0.0;
    for (int k = 1; k <= 99; ++k) {
        const double u = k / 100.0;
        worst = std::max(worst, std::abs(gt::simpson_gaussian_cdf(inv_gaussian_cdf(u)) - u));
    }
    return {worst <= 1e-7, "99 points, max |Phi(Phi^-1(u)) - u| = " + fmt(worst)};
}

Outcome specializations() {
    std::mt19937_64 rng(9);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Pmf p = gt::random_pmf(rng, 2, 10);
        const double d = 3.0 * gt::unit(rng), rho = 0.1 + 3.0 * gt::unit(rng), eps = 0.9 * gt::unit(rng);
        const double alpha = 1.0 / (1.0 + rho);
        const double log2_l = std::log2(static_cast<double>(floor_exp(d)));
        const double upper = 1.0 + std::exp2(rho) * std::exp2(rho * renyi_entropy(p, alpha) - rho * log2_l);
        const double lower = std::pow(1.0 + std::log2(static_cast<double>(p.size())), -rho) *
                             std::exp2(rho * smooth_renyi_entropy(p, alpha, eps));
        worst = std::max(worst, std::abs(cost_upper_bound(p, d, rho, 0.0) - upper) / std::max(1.0, upper));
        worst = std::max(worst, std::abs(cost_lower_bound(p, 0.0, rho, eps) - lower) / std::max(1.0, lower));
    }
    return {worst <= 1e-12, "50 instances, max relative deviation = " + fmt(worst)};
}

} // namespace

int main() {
    const auto instances = sandwich_instances();
    std::vector<double> cstar;
    run(1, "smooth Renyi closed form matches vertex enumeration", smooth_entropy_vs_oracle);
    run(2, "lower <= C* <= upper", [&] { return sandwich(instances, cstar); });
    run(3, "construction admissible, P_e = eps, C* <= cost <= upper", [&] {
        if (cstar.size() != instances.size()) return Outcome{false, "C* unavailable"};
        return achievability(instances, cstar);
    });
    run(4, "known values", spot_values);
    run(5, "chain-rule inequalities", chain_rules);
    run(6, "Monte Carlo agrees with exact evaluation", monte_carlo);
    run(7, "large-n expansion residual bounded", asymptotics);
    run(8, "inverse normal CDF accuracy", inverse_normal);
    run(9, "eps = 0 and D = 0 specializations", specializations);
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
