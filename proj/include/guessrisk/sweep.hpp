#pragma once
/*
Verification sweeps: for every (source, D, rho, eps) compute the bounds, the
exact optimum on small alphabets and the constructed strategy's cost, and
check lower <= C* <= constructed <= upper.
*/

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "guessrisk/bounds.hpp"
#include "guessrisk/construct.hpp"
#include "guessrisk/dist.hpp"
#include "guessrisk/errors.hpp"
#include "guessrisk/guessing.hpp"

namespace guessrisk {

struct NamedPmf {
    std::string name;
    Pmf pmf;
};

struct SweepSpec {
    std::vector<NamedPmf> distributions;
    std::vector<double> d_grid{0.0, 0.5, 1.0, std::log2(3.0)};
    std::vector<double> rho_grid{0.5, 1.0, 2.0};
    std::vector<double> eps_grid{0.0, 0.1, 0.3};
    bool include_oracle = true;
    bool include_construction = true;
    std::uint64_t sim_trials = 0; // 0 disables the Monte Carlo column
    std::uint64_t seed = 1;
};

struct SweepInstance {
    std::string name;
    Pmf pmf;
    double d_level;
    double rho;
    double eps;
};

struct SweepRow {
    std::string name;
    std::size_t alphabet = 0;
    double d_level = 0.0, rho = 0.0, eps = 0.0;
    double lower = 0.0;
    double c_star = std::numeric_limits<double>::quiet_NaN();
    double constructed_cost = std::numeric_limits<double>::quiet_NaN();
    double constructed_error = std::numeric_limits<double>::quiet_NaN();
    double sim_cost = std::numeric_limits<double>::quiet_NaN();
    double upper = 0.0;
    bool pass = true;
};

inline void validate_grids(const SweepSpec& spec) {
    for (double d : spec.d_grid)
        if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("sweep: D values must be finite and >= 0");
    for (double r : spec.rho_grid)
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("sweep: rho values must be positive");
    for (double e : spec.eps_grid)
        if (!(e >= 0.0 && e < 1.0)) throw DomainError("sweep: eps values must lie in [0, 1)");
    if (spec.include_oracle)
        for (const auto& d : spec.distributions)
            if (d.pmf.size() > kOracleMaxAlphabet)
                throw ResourceError("sweep: oracle requested for " + d.name + " with M = " +
                                    std::to_string(d.pmf.size()) + " > " + std::to_string(kOracleMaxAlphabet));
}

/// Cartesian product of every distribution with every grid point.
inline std::vector<SweepInstance> grid_instances(const SweepSpec& spec) {
    validate_grids(spec);
    std::vector<SweepInstance> out;
    for (const auto& d : spec.distributions)
        for (double dl : spec.d_grid)
            for (double r : spec.rho_grid)
                for (double e : spec.eps_grid) out.push_back({d.name, d.pmf, dl, r, e});
    return out;
}

/// Random sources with M in [min_m, max_m] (Dirichlet(1) weights), one grid point each.
inline std::vector<SweepInstance> random_instances(const SweepSpec& spec, std::size_t count,
                                                   std::size_t min_m = 2, std::size_t max_m = 8) {
    validate_grids(spec);
    std::mt19937_64 rng(spec.seed);
    auto unit = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    std::vector<SweepInstance> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t m = min_m + pick(max_m - min_m + 1);
        std::vector<double> w(m);
        for (double& x : w) x = -std::log(unit());
        out.push_back({"random-" + std::to_string(k), make_pmf(w), spec.d_grid[pick(spec.d_grid.size())],
                       spec.rho_grid[pick(spec.rho_grid.size())], spec.eps_grid[pick(spec.eps_grid.size())]});
    }
    return out;
}

inline SweepRow verify_instance(const SweepInstance& inst, const SweepSpec& spec) {
    SweepRow row;
    row.name = inst.name;
    row.alphabet = inst.pmf.size();
    row.d_level = inst.d_level;
    row.rho = inst.rho;
    row.eps = inst.eps;
    row.lower = cost_lower_bound(inst.pmf, inst.d_level, inst.rho, inst.eps);
    row.upper = cost_upper_bound(inst.pmf, inst.d_level, inst.rho, inst.eps);
    bool ok = row.lower <= row.upper + kBoundSlack;

    if (spec.include_oracle) {
        row.c_star = brute_force_cstar(inst.pmf, inst.d_level, inst.rho, inst.eps).c_star;
        ok = ok && row.lower - kBoundSlack <= row.c_star && row.c_star <= row.upper + kBoundSlack;
    }
    if (spec.include_construction) {
        const GuessingStrategy s = build_achievable_strategy(inst.pmf, inst.d_level, inst.eps);
        const StrategyEvaluation ev = evaluate(s, inst.pmf, inst.d_level, inst.rho);
        row.constructed_cost = ev.expected_cost;
        row.constructed_error = ev.error_prob;
        ok = ok && std::abs(ev.error_prob - inst.eps) <= kBoundSlack && row.constructed_cost <= row.upper + kBoundSlack;
        if (spec.include_oracle) ok = ok && row.constructed_cost >= row.c_star - kBoundSlack;
        else ok = ok && row.constructed_cost >= row.lower - kBoundSlack;
        if (spec.sim_trials > 0)
            row.sim_cost = simulate(s, inst.pmf, inst.d_level, inst.rho, spec.sim_trials, spec.seed, 1).est_cost;
    }
    row.pass = ok;
    return row;
}

/// Rows are computed concurrently and returned in instance order.
inline std::vector<SweepRow> run_sweep(const std::vector<SweepInstance>& instances, const SweepSpec& spec,
                                       unsigned workers = 0) {
    std::vector<SweepRow> rows(instances.size());
    if (instances.empty()) return rows;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, instances.size()));
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < instances.size(); i += workers) rows[i] = verify_instance(instances[i], spec);
        }));
    for (auto& f : pool) f.get();
    return rows;
}

} // namespace guessrisk
