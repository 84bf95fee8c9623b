#pragma once

// Brute-force reference semantics for the polyadic lifts, written directly
// from the counting definitions and independent of the library's evaluation
// path. Test-only.

#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"

namespace dtgq::test {

/// Counting semantics of the builtin quantifiers, reimplemented.
inline bool oracle_quant(const std::string& symbol, std::size_t s, std::size_t z) {
    if (symbol == "forall") return s == z;
    if (symbol == "exists") return s > 0;
    if (symbol == "no") return s == 0;
    if (symbol == "most") return 2 * s > z;
    if (symbol.rfind("atleast(", 0) == 0)
        return s >= static_cast<std::size_t>(std::stoi(symbol.substr(8)));
    if (symbol.rfind("exactly(", 0) == 0)
        return s == static_cast<std::size_t>(std::stoi(symbol.substr(8)));
    throw std::runtime_error("oracle_quant: unknown symbol " + symbol);
}

/// "Q1 a, Q2 b: R(a,b)" by direct nested loops.
inline bool oracle_iteration(const std::string& q1, const std::string& q2,
                             const std::vector<std::string>& ms,
                             const std::vector<std::string>& ws, const Rel& rel) {
    std::size_t goodRows = 0;
    for (const auto& a : ms) {
        std::size_t row = 0;
        for (const auto& b : ws)
            if (rel.count({a, b})) ++row;
        if (oracle_quant(q2, row, ws.size())) ++goodRows;
    }
    return oracle_quant(q1, goodRows, ms.size());
}

/// Cumulative reading: both projections accepted.
inline bool oracle_cumulation(const std::string& q1, const std::string& q2,
                              const std::vector<std::string>& ms,
                              const std::vector<std::string>& ws, const Rel& rel) {
    std::set<std::string> p1, p2;
    for (const auto& [a, b] : rel) {
        p1.insert(a);
        p2.insert(b);
    }
    return oracle_quant(q1, p1.size(), ms.size()) && oracle_quant(q2, p2.size(), ws.size());
}

/// Branching reading, fully extensional: R is accepted iff it equals some
/// A x B with A and B accepted. Enumerates all subset pairs.
inline bool oracle_branching(const std::string& q1, const std::string& q2,
                             const std::vector<std::string>& ms,
                             const std::vector<std::string>& ws, const Rel& rel) {
    const std::size_t nm = ms.size(), nw = ws.size();
    for (std::size_t am = 0; am < (std::size_t{1} << nm); ++am) {
        for (std::size_t bm = 0; bm < (std::size_t{1} << nw); ++bm) {
            Rel product;
            std::size_t asz = 0, bsz = 0;
            for (std::size_t i = 0; i < nm; ++i)
                if (am & (std::size_t{1} << i)) ++asz;
            for (std::size_t j = 0; j < nw; ++j)
                if (bm & (std::size_t{1} << j)) ++bsz;
            for (std::size_t i = 0; i < nm; ++i)
                for (std::size_t j = 0; j < nw; ++j)
                    if ((am & (std::size_t{1} << i)) && (bm & (std::size_t{1} << j)))
                        product.insert({ms[i], ws[j]});
            if (product == rel && oracle_quant(q1, asz, nm) && oracle_quant(q2, bsz, nw))
                return true;
        }
    }
    return false;
}

/// "Every farmer who owns a donkey beats every donkey he owns" by loops.
inline bool oracle_donkey_universal(const std::vector<std::string>& farmers,
                                    const std::vector<std::string>& donkeys, const Rel& owns,
                                    const Rel& beats) {
    for (const auto& f : farmers) {
        bool ownsAny = false;
        for (const auto& d : donkeys)
            if (owns.count({f, d})) {
                ownsAny = true;
                if (!beats.count({f, d})) return false;
            }
        (void)ownsAny;
    }
    return true;
}

/// "Every man kisses every woman he loves."
inline bool oracle_kisses_loved(const std::vector<std::string>& ms,
                                const std::vector<std::string>& ws, const Rel& loves,
                                const Rel& kisses) {
    for (const auto& a : ms)
        for (const auto& b : ws)
            if (loves.count({a, b}) && !kisses.count({a, b})) return false;
    return true;
}

} // namespace dtgq::test
