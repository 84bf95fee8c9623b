#pragma once

#include <set>
#include <string>
#include <vector>

#include "dtgq/dynamics.hpp"
#include "dtgq/model.hpp"
#include "dtgq/parser.hpp"
#include "dtgq/semantics.hpp"
#include "dtgq/syntax.hpp"

namespace dtgq::test {

inline Model model_from(const std::string& text) {
    auto parsed = parse_model(text);
    if (!parsed.ok()) {
        std::string msg = "fixture model does not parse:";
        for (const auto& d : parsed.diagnostics) msg += " [" + d.code + "] " + d.message;
        throw std::runtime_error(msg);
    }
    return to_model(parsed.value);
}

inline std::vector<DiscourseStep> script_from(const std::string& text) {
    auto parsed = parse_discourse(text);
    if (!parsed.ok()) {
        std::string msg = "fixture script does not parse:";
        for (const auto& d : parsed.diagnostics) msg += " [" + d.code + "] " + d.message;
        throw std::runtime_error(msg);
    }
    return parsed.value;
}

inline QuantifierPhrase qp(const std::string& quant, const std::string& var,
                           TypeExprPtr type) {
    return {quant, var, std::move(type)};
}

inline PreChainPtr leaf(const QuantifierPhrase& phrase) {
    return make_leaf(form_pack({phrase}));
}

/// The code an operation raises, or "" if it succeeds.
template <typename F>
std::string error_code(F&& f) {
    try {
        f();
        return "";
    } catch (const Error& e) {
        return e.code();
    }
}

/// Relation as a set of (row, col) atom pairs.
using Rel = std::set<std::pair<std::string, std::string>>;

inline std::string atoms_list(const std::vector<std::string>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) out += (i ? "," : "") + atoms[i];
    return out;
}

inline std::vector<std::string> make_atoms(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline std::string pairs_list(const Rel& rel) {
    std::string out;
    bool first = true;
    for (const auto& [a, b] : rel) {
        if (!first) out += ",";
        out += "(" + a + "," + b + ")";
        first = false;
    }
    return out;
}

/// A two-type model with one binary relation, e.g. men/women/loves.
inline Model binary_model(const std::vector<std::string>& ms, const std::vector<std::string>& ws,
                          const Rel& rel, const std::string& tM = "M",
                          const std::string& tW = "W", const std::string& pred = "L") {
    std::string text = "type " + tM + " = {" + atoms_list(ms) + "}\n" + //
                       "type " + tW + " = {" + atoms_list(ws) + "}\n" + //
                       "pred " + pred + "(a:" + tM + ", b:" + tW + ") = {" + pairs_list(rel) +
                       "}\n";
    return model_from(text);
}

} // namespace dtgq::test
