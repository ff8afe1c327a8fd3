// guessrisk: command-line front end.
//
//   guessrisk entropy      --dist J (--alpha A | --rho R) --eps E [--oracle]
//   guessrisk strategy build    --dist J --D D --eps E [--rho R]
//   guessrisk strategy eval     --dist J --strategy S --D D --rho R
//   guessrisk strategy simulate --dist J --strategy S --D D --rho R [--trials T] [--seed N]
//   guessrisk verify       [--dist J ...] [--instances K] [--D list] [--rho list] [--eps list]
//   guessrisk asymptotics  --dist J (--alpha A | --rho R) --eps E --n-list 8,16,...
//
// J and S are inline JSON or paths to JSON files. Exit codes: 0 success,
// 1 usage, 2 invalid input or parameter domain, 3 verification failure,
// 4 resource cap exceeded, 5 inadmissible strategy.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "guessrisk/guessrisk.hpp"

namespace {

using namespace guessrisk;

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalid = 2,
    kVerificationFailed = 3,
    kResource = 4,
    kInadmissible = 5,
};

struct Output {
    std::string format = "json";
    std::string path;

    void emit(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + path);
        out << text;
    }

    void require(std::initializer_list<const char*> allowed) const {
        for (const char* a : allowed)
            if (format == a) return;
        throw ValidationError("--format " + format + " is not supported by this command");
    }
};

std::size_t atom_cap_from_env() {
    const char* raw = std::getenv("GUESSRISK_ATOM_CAP");
    if (!raw || !*raw) return kDefaultAtomCap;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(raw, &pos);
        if (pos != std::string(raw).size() || v == 0) throw std::invalid_argument("cap");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ValidationError("GUESSRISK_ATOM_CAP must be a positive integer");
    }
}

// alpha is taken directly, or derived from rho as 1 / (1 + rho).
double resolve_alpha(const std::optional<double>& alpha, const std::optional<double>& rho) {
    if (alpha && rho) throw ValidationError("give either --alpha or --rho, not both");
    if (alpha) return *alpha;
    if (rho) {
        if (!(*rho > 0.0)) throw DomainError("rho must be positive");
        return 1.0 / (1.0 + *rho);
    }
    throw ValidationError("one of --alpha or --rho is required");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct EntropyArgs {
    std::string dist;
    std::optional<double> alpha, rho;
    double eps = 0.0;
    bool oracle = false;
};

void run_entropy(const EntropyArgs& a, const Output& out) {
    out.require({"json", "csv"});
    const Pmf p = pmf_from_json(load_json(a.dist));
    const double alpha = resolve_alpha(a.alpha, a.rho);
    const double h = renyi_entropy(p, alpha);
    const double smooth = smooth_renyi_entropy(p, alpha, a.eps);
    const TailTruncation t = truncate_tail(p, a.eps);
    std::optional<double> oracle;
    if (a.oracle) oracle = smooth_renyi_oracle(p, alpha, a.eps);

    if (out.format == "csv") {
        std::string header = "M,alpha,eps,renyi,smooth,i_star";
        std::vector<std::string> row{std::to_string(p.size()), format_number(alpha), format_number(a.eps),
                                     format_number(h), format_number(smooth), std::to_string(t.i_star)};
        if (oracle) {
            header += ",oracle,oracle_delta";
            row.push_back(format_number(*oracle));
            row.push_back(format_number(*oracle - smooth));
        }
        out.emit(header + "\n" + csv_join(row) + "\n");
        return;
    }
    json j{{"M", p.size()}, {"alpha", alpha}, {"eps", a.eps}, {"renyi", h}, {"smooth", smooth}, {"i_star", t.i_star}};
    if (oracle) {
        j["oracle"] = *oracle;
        j["oracle_delta"] = *oracle - smooth;
    }
    out.emit(dump(j));
}

// ---------------------------------------------------------------------------

struct StrategyArgs {
    std::string dist, strategy;
    double d_level = 0.0;
    double eps = 0.0;
    double rho = 1.0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    unsigned workers = 0;
};

void run_build(const StrategyArgs& a, const Output& out) {
    out.require({"json"});
    const Pmf p = pmf_from_json(load_json(a.dist));
    const Blocks b = achievable_blocks(p, a.d_level, a.eps);
    const GuessingStrategy s = build_achievable_strategy(p, a.d_level, a.eps);
    const StrategyEvaluation ev = evaluate(s, p, a.d_level, a.rho);
    json blocks{{"i_star", b.i_star}, {"block_size", b.block_size}, {"kept", b.kept.size()}, {"tail", b.tail.size()}};
    out.emit(dump(json{{"strategy", to_json(s)},
                       {"evaluation", to_json(ev)},
                       {"blocks", blocks},
                       {"bounds", to_json(make_bounds_report(p, a.d_level, a.rho, a.eps, ev.expected_cost))}}));
}

void run_eval(const StrategyArgs& a, const Output& out) {
    out.require({"json"});
    const Pmf p = pmf_from_json(load_json(a.dist));
    const GuessingStrategy s = strategy_from_json(load_json(a.strategy));
    out.emit(dump(to_json(evaluate(s, p, a.d_level, a.rho))));
}

void run_simulate(const StrategyArgs& a, const Output& out) {
    out.require({"json"});
    const Pmf p = pmf_from_json(load_json(a.dist));
    const GuessingStrategy s = strategy_from_json(load_json(a.strategy));
    out.emit(dump(to_json(simulate(s, p, a.d_level, a.rho, a.trials, a.seed, a.workers))));
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::vector<std::string> dists;
    std::size_t instances = 200;
    std::vector<double> d_grid, rho_grid, eps_grid;
    bool no_oracle = false;
    bool no_construction = false;
    std::uint64_t sim_trials = 0;
    std::uint64_t seed = 1;
    unsigned workers = 0;
};

int run_verify(const VerifyArgs& a, const Output& out) {
    out.require({"csv", "json"});
    SweepSpec spec;
    if (!a.d_grid.empty()) spec.d_grid = a.d_grid;
    if (!a.rho_grid.empty()) spec.rho_grid = a.rho_grid;
    if (!a.eps_grid.empty()) spec.eps_grid = a.eps_grid;
    spec.include_oracle = !a.no_oracle;
    spec.include_construction = !a.no_construction;
    spec.sim_trials = a.sim_trials;
    spec.seed = a.seed;
    for (std::size_t i = 0; i < a.dists.size(); ++i)
        spec.distributions.push_back({"dist-" + std::to_string(i), pmf_from_json(load_json(a.dists[i]))});

    const std::vector<SweepInstance> instances =
        spec.distributions.empty() ? random_instances(spec, a.instances) : grid_instances(spec);
    const std::vector<SweepRow> rows = run_sweep(instances, spec, a.workers);

    bool all_pass = true;
    for (const SweepRow& r : rows) all_pass = all_pass && r.pass;

    if (out.format == "json") {
        json arr = json::array();
        for (const SweepRow& r : rows) {
            json j{{"name", r.name}, {"M", r.alphabet}, {"D", r.d_level}, {"rho", r.rho}, {"eps", r.eps},
                   {"lower", r.lower}, {"upper", r.upper}, {"pass", r.pass}};
            if (spec.include_oracle) j["c_star"] = r.c_star;
            if (spec.include_construction) {
                j["constructed_cost"] = r.constructed_cost;
                j["constructed_error"] = r.constructed_error;
            }
            if (spec.sim_trials > 0) j["sim_cost"] = r.sim_cost;
            arr.push_back(j);
        }
        out.emit(dump(json{{"rows", arr}, {"all_pass", all_pass}}));
    } else {
        std::ostringstream ss;
        ss << "name,M,D,rho,eps,lower,c_star,constructed_cost,upper,pass";
        if (spec.sim_trials > 0) ss << ",sim_cost";
        ss << "\n";
        for (const SweepRow& r : rows) {
            ss << csv_join({r.name, std::to_string(r.alphabet), format_number(r.d_level), format_number(r.rho),
                            format_number(r.eps), format_number(r.lower), format_number(r.c_star),
                            format_number(r.constructed_cost), format_number(r.upper), r.pass ? "pass" : "fail"});
            if (spec.sim_trials > 0) ss << "," << format_number(r.sim_cost);
            ss << "\n";
        }
        out.emit(ss.str());
    }
    return all_pass ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

struct AsymptoticsArgs {
    std::string dist;
    std::optional<double> alpha, rho;
    double eps = 0.1;
    std::vector<std::size_t> n_list{8, 16, 32, 64, 128, 256, 512};
};

void run_asymptotics(const AsymptoticsArgs& a, const Output& out) {
    out.require({"csv", "json"});
    const Pmf p = pmf_from_json(load_json(a.dist));
    const double alpha = resolve_alpha(a.alpha, a.rho);
    const auto rows = asymptotic_table(p, alpha, a.eps, a.n_list, atom_cap_from_env());
    if (out.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        out.emit(dump(json{{"alpha", alpha}, {"eps", a.eps}, {"limit", second_order_limit(p, a.eps)}, {"rows", arr}}));
        return;
    }
    std::string text = std::string(kAsymptoticsCsvHeader) + "\n";
    for (const auto& r : rows) text += to_csv_row(r) + "\n";
    out.emit(text);
}

void add_output_flags(CLI::App* cmd, Output& out, const std::string& default_format) {
    out.format = default_format;
    cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", out.path, "Write output to this file instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soft guessing under log-loss distortion with errors allowed"};
    app.require_subcommand(1);

    Output entropy_out, build_out, eval_out, sim_out, verify_out, asym_out;

    EntropyArgs ea;
    auto* entropy = app.add_subcommand("entropy", "Rényi and smooth Rényi entropy of a source");
    entropy->add_option("--dist", ea.dist, "Source as {\"p\": [...]} or a path")->required();
    entropy->add_option("--alpha", ea.alpha, "Rényi order");
    entropy->add_option("--rho", ea.rho, "Guessing moment; alpha = 1 / (1 + rho)");
    entropy->add_option("--eps", ea.eps, "Smoothing parameter in [0, 1)");
    entropy->add_flag("--oracle", ea.oracle, "Also run the vertex-enumeration oracle");
    add_output_flags(entropy, entropy_out, "json");

    StrategyArgs sa;
    auto* strategy = app.add_subcommand("strategy", "Build, evaluate or simulate guessing strategies");
    strategy->require_subcommand(1);
    auto* build = strategy->add_subcommand("build", "Construct the achievable strategy");
    auto* eval = strategy->add_subcommand("eval", "Exact error probability and expected cost");
    auto* sim = strategy->add_subcommand("simulate", "Monte Carlo estimate of error probability and cost");
    for (auto* cmd : {build, eval, sim}) {
        cmd->add_option("--dist", sa.dist, "Source as {\"p\": [...]} or a path")->required();
        cmd->add_option("--D", sa.d_level, "Distortion level (bits)")->required();
    }
    build->add_option("--eps", sa.eps, "Error probability target in [0, 1)");
    build->add_option("--rho", sa.rho, "Guessing moment used for the reported evaluation");
    for (auto* cmd : {eval, sim}) {
        cmd->add_option("--strategy", sa.strategy, "Strategy JSON or a path")->required();
        cmd->add_option("--rho", sa.rho, "Guessing moment")->required();
    }
    sim->add_option("--trials", sa.trials, "Number of trials");
    sim->add_option("--seed", sa.seed, "Random seed");
    sim->add_option("--workers", sa.workers, "Worker threads (does not affect the result)");
    add_output_flags(build, build_out, "json");
    add_output_flags(eval, eval_out, "json");
    add_output_flags(sim, sim_out, "json");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check lower <= C* <= constructed <= upper over a sweep");
    verify->add_option("--dist", va.dists, "Sources (repeatable); random sources when omitted");
    verify->add_option("--instances", va.instances, "Number of random instances");
    verify->add_option("--D", va.d_grid, "Comma-separated D grid")->delimiter(',');
    verify->add_option("--rho", va.rho_grid, "Comma-separated rho grid")->delimiter(',');
    verify->add_option("--eps", va.eps_grid, "Comma-separated eps grid")->delimiter(',');
    verify->add_flag("--no-oracle", va.no_oracle, "Skip the brute-force optimum");
    verify->add_flag("--no-construction", va.no_construction, "Skip the constructed strategy");
    verify->add_option("--sim-trials", va.sim_trials, "Add a Monte Carlo cost column");
    verify->add_option("--seed", va.seed, "Seed for random instances and simulation");
    verify->add_option("--workers", va.workers, "Worker threads");
    add_output_flags(verify, verify_out, "csv");

    AsymptoticsArgs aa;
    auto* asym = app.add_subcommand("asymptotics", "Exact n-letter smooth entropy against its expansion");
    asym->add_option("--dist", aa.dist, "Source as {\"p\": [...]} or a path")->required();
    asym->add_option("--alpha", aa.alpha, "Rényi order in (0, 1)");
    asym->add_option("--rho", aa.rho, "Guessing moment; alpha = 1 / (1 + rho)");
    asym->add_option("--eps", aa.eps, "Smoothing parameter in (0, 1)");
    asym->add_option("--n-list", aa.n_list, "Comma-separated blocklengths")->delimiter(',');
    add_output_flags(asym, asym_out, "csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (entropy->parsed()) run_entropy(ea, entropy_out);
        else if (build->parsed()) run_build(sa, build_out);
        else if (eval->parsed()) run_eval(sa, eval_out);
        else if (sim->parsed()) run_simulate(sa, sim_out);
        else if (verify->parsed()) return run_verify(va, verify_out);
        else if (asym->parsed()) run_asymptotics(aa, asym_out);
        return kOk;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << " (witness symbol " << e.witness() << ")\n";
        return kInadmissible;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    }
}
