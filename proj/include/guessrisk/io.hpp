#pragma once
// JSON and CSV serialization of the library's value types.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "guessrisk/bounds.hpp"
#include "guessrisk/dist.hpp"
#include "guessrisk/errors.hpp"
#include "guessrisk/guessing.hpp"

namespace guessrisk {

using json = nlohmann::json;

/// Parses `arg` as inline JSON when it starts with '{' or '[', otherwise reads it as a file path.
inline json load_json(std::string_view arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) throw ValidationError("empty JSON argument");
    std::string text;
    if (arg[first] == '{' || arg[first] == '[') {
        text = std::string(arg);
    } else {
        std::ifstream in{std::string(arg)};
        if (!in) throw ValidationError("cannot open " + std::string(arg));
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

namespace detail {

inline std::vector<double> number_array(const json& j, std::string_view what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ValidationError(std::string(what) + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string("JSON object is missing \"") + key + "\"");
    return j.at(key);
}

} // namespace detail

/// {"p": [numbers]}
inline Pmf pmf_from_json(const json& j) { return make_pmf(detail::number_array(detail::field(j, "p"), "p")); }

/// {"table": [[numbers]]}, rows indexed by x and columns by y.
inline JointPmf joint_from_json(const json& j) {
    const json& t = detail::field(j, "table");
    if (!t.is_array()) throw ValidationError("table must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : t) rows.push_back(detail::number_array(r, "table row"));
    return JointPmf::from_rows(rows);
}

inline json to_json(const GuessingStrategy& s) {
    return json{{"reconstructions", s.reconstructions}, {"stop_probs", s.stop_probs}};
}

inline GuessingStrategy strategy_from_json(const json& j) {
    GuessingStrategy s;
    const json& recs = detail::field(j, "reconstructions");
    if (!recs.is_array()) throw ValidationError("reconstructions must be an array of arrays");
    for (const auto& r : recs) s.reconstructions.push_back(detail::number_array(r, "reconstruction"));
    s.stop_probs = detail::number_array(detail::field(j, "stop_probs"), "stop_probs");
    return s;
}

inline json to_json(const StrategyEvaluation& e) {
    return json{{"guess_index", e.guess_index},
                {"pz", e.pz},
                {"survival", e.survival},
                {"error_prob", e.error_prob},
                {"expected_cost", e.expected_cost}};
}

inline json to_json(const SimReport& r) {
    return json{{"trials", r.trials},
                {"seed", r.seed},
                {"est_error_prob", r.est_error_prob},
                {"est_cost", r.est_cost},
                {"std_errors", {r.se_error_prob, r.se_cost}}};
}

inline json to_json(const BoundsReport& r) {
    json j{{"lower", r.lower},
           {"upper", r.upper},
           {"params", {{"M", r.alphabet}, {"D", r.d_level}, {"rho", r.rho}, {"eps", r.eps}}}};
    if (r.reference_cost) {
        j["reference_cost"] = *r.reference_cost;
        j["slack_lower"] = r.slack_lower;
        j["slack_upper"] = r.slack_upper;
    }
    return j;
}

inline json to_json(const AsymptoticsRow& r) {
    return json{{"n", r.n},
                {"exact", r.exact_entropy},
                {"expansion", r.expansion_no_o1},
                {"residual", r.residual},
                {"normalized_so", r.normalized_second_order}};
}

// ---------------------------------------------------------------------------
// CSV

/// 12 significant digits, '.' decimal point regardless of locale.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

inline std::string csv_join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

inline constexpr std::string_view kAsymptoticsCsvHeader = "n,exact,expansion,residual,normalized_so";

inline std::string to_csv_row(const AsymptoticsRow& r) {
    return csv_join({std::to_string(r.n), format_number(r.exact_entropy), format_number(r.expansion_no_o1),
                     format_number(r.residual), format_number(r.normalized_second_order)});
}

} // namespace guessrisk
