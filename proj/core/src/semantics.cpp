#include "dtgq/semantics.hpp"

#include <algorithm>
#include <ostream>

namespace dtgq {

namespace {

std::string show_assignment(const Assignment& a) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : a) {
        if (!first) out += ",";
        out += k + "=" + v;
        first = false;
    }
    return out + "}";
}

std::string show_tuples(const TupleSet& ts) {
    std::string out = "{";
    bool first = true;
    for (const auto& t : ts) {
        if (!first) out += " ";
        out += show_assignment(t);
        first = false;
    }
    return out + "}";
}

/// Tuples of `candidate` whose left part equals `b`, restricted to the right
/// variables.
TupleSet slice(const TupleSet& candidate, const Assignment& b,
               const std::set<std::string>& leftVars, const std::set<std::string>& rightVars) {
    TupleSet out;
    for (const auto& t : candidate)
        if (restrict_to(t, leftVars) == b) out.insert(restrict_to(t, rightVars));
    return out;
}

TupleSet project(const TupleSet& candidate, const std::set<std::string>& vars) {
    TupleSet out;
    for (const auto& t : candidate) out.insert(restrict_to(t, vars));
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Evaluator
// ---------------------------------------------------------------------------

Evaluator::Evaluator(const StarSentence& s, const Model& m, EvalOptions opt)
    : s_(s), m_(m), opt_(opt) {}

const Evaluator::NodeSpace& Evaluator::space(const PreChain* sub) {
    auto it = spaces_.find(sub);
    if (it != spaces_.end()) return it->second;

    NodeSpace ns;
    ns.envSpecs = env_phi(s_, sub); // also validates sub
    ns.bvSpecs = s_.context.specsOf(sub->bindingVarSet());
    for (const auto& sp : ns.bvSpecs) ns.bvVars.insert(sp.var);

    // One pass over the parameter space of (Env_phi, Bv) in context order,
    // grouped by the environment part.
    std::set<std::string> envVars;
    std::vector<VarSpec> combined;
    for (const auto& sp : ns.envSpecs) envVars.insert(sp.var);
    std::set<std::string> all = envVars;
    all.insert(ns.bvVars.begin(), ns.bvVars.end());
    combined = s_.context.specsOf(all);
    for (const auto& a : parameter_space(m_, check_context(combined))) {
        Assignment envPart = restrict_to(a, envVars);
        ns.groups[envPart].insert(restrict_to(a, ns.bvVars));
    }
    for (const auto& a : parameter_space(m_, check_context(ns.envSpecs)))
        ns.envSpace.insert(a);
    return spaces_.emplace(sub, std::move(ns)).first->second;
}

TupleSet Evaluator::bv_set(const PreChain* sub, const Assignment& env) {
    const NodeSpace& ns = space(sub);
    std::set<std::string> envVars;
    for (const auto& sp : ns.envSpecs) envVars.insert(sp.var);
    Assignment key = restrict_to(env, envVars);
    if (!ns.envSpace.count(key))
        throw Error("EnvOutsideParameterSpace",
                    "environment " + show_assignment(key) +
                        " is not in the parameter space of the sub-chain's environment");
    auto it = ns.groups.find(key);
    return it == ns.groups.end() ? TupleSet{} : it->second;
}

bool Evaluator::accepts_leaf(const Pack& pack, const Assignment& env, const TupleSet& candidate) {
    if (pack.isDummy)
        throw Error("DummyPackInterpretation",
                    "a dummy pack has no quantifier denotation");
    std::vector<std::set<std::string>> fibers;
    std::vector<QuantifierDenotation> quants;
    for (const auto& p : pack.phrases) {
        fibers.push_back(fiber(m_, *p.varType, env));
        quants.push_back(m_.quantifier(p.quantifier));
    }
    for (const auto& t : candidate)
        for (std::size_t i = 0; i < pack.phrases.size(); ++i) {
            auto it = t.find(pack.phrases[i].bindingVar);
            if (it == t.end() || !fibers[i].count(it->second))
                throw Error("CandidateOutsideProduct",
                            "candidate tuple " + show_assignment(t) +
                                " lies outside the product of the pack's fibers");
        }
    for (std::size_t i = 0; i < pack.phrases.size(); ++i) {
        std::set<std::string> proj;
        for (const auto& t : candidate) proj.insert(t.at(pack.phrases[i].bindingVar));
        auto verdict = quants[i].membership(proj, fibers[i]);
        if (!verdict)
            throw Error("PartialQuantifierOutsideDomain",
                        "quantifier '" + quants[i].symbol +
                            "' is undefined on the ground set of '" +
                            pack.phrases[i].bindingVar + "'");
        if (!*verdict) return false;
    }
    return true;
}

bool Evaluator::accepts(const PreChain* sub, const Assignment& env, const TupleSet& candidate) {
    struct Indent {
        int& d;
        explicit Indent(int& d) : d(d) { ++d; }
        ~Indent() { --d; }
    } indent(depth_);
    bool result = false;
    if (const auto* leaf = std::get_if<ChainLeaf>(&sub->node)) {
        result = accepts_leaf(leaf->pack, env, candidate);
    } else if (const auto* seq = std::get_if<ChainSeq>(&sub->node)) {
        auto leftVars = seq->left->bindingVarSet();
        auto rightVars = seq->right->bindingVarSet();
        TupleSet inner;
        for (const auto& b : bv_set(seq->left.get(), env)) {
            Assignment envB = merge(env, b);
            if (accepts(seq->right.get(), envB, slice(candidate, b, leftVars, rightVars)))
                inner.insert(b);
        }
        result = accepts(seq->left.get(), env, inner);
    } else {
        const auto& par = std::get<ChainPar>(sub->node);
        auto topVars = par.top->bindingVarSet();
        auto bottomVars = par.bottom->bindingVarSet();
        if (candidate.empty()) {
            // Extensionally: some accepted A x B is empty iff one factor is
            // empty-and-accepted while the other side accepts anything.
            result = (accepts(par.top.get(), env, {}) && exists_accepted(par.bottom.get(), env)) ||
                     (accepts(par.bottom.get(), env, {}) && exists_accepted(par.top.get(), env));
        } else {
            TupleSet a = project(candidate, topVars);
            TupleSet b = project(candidate, bottomVars);
            bool rectangle = candidate.size() == a.size() * b.size();
            result = rectangle && accepts(par.top.get(), env, a) &&
                     accepts(par.bottom.get(), env, b);
        }
    }
    if (opt_.trace) {
        for (int i = 1; i < depth_; ++i) *opt_.trace << "  ";
        *opt_.trace << sub->render() << " @ " << show_assignment(env) << " accepts "
                    << show_tuples(candidate) << " -> " << (result ? "true" : "false") << "\n";
    }
    return result;
}

bool Evaluator::exists_accepted(const PreChain* sub, const Assignment& env) {
    auto key = std::make_pair(sub, env);
    auto it = existsMemo_.find(key);
    if (it != existsMemo_.end()) return it->second;
    TupleSet ground = bv_set(sub, env);
    std::vector<Assignment> tuples(ground.begin(), ground.end());
    if (tuples.size() > opt_.subsetSearchLimit)
        throw Error("SearchSpaceTooLarge",
                    "cannot search " + std::to_string(tuples.size()) +
                        " tuples for an accepted candidate (limit " +
                        std::to_string(opt_.subsetSearchLimit) + ")");
    bool found = false;
    for (std::size_t mask = 0; mask < (std::size_t{1} << tuples.size()) && !found; ++mask) {
        TupleSet candidate;
        for (std::size_t i = 0; i < tuples.size(); ++i)
            if (mask & (std::size_t{1} << i)) candidate.insert(tuples[i]);
        found = accepts(sub, env, candidate);
    }
    existsMemo_[key] = found;
    return found;
}

// ---------------------------------------------------------------------------
// Free-function forms
// ---------------------------------------------------------------------------

bool interpret_qp(const QuantifierPhrase& qp, const Assignment& env, const Model& m,
                  const std::set<std::string>& candidate) {
    auto ground = fiber(m, *qp.varType, env);
    for (const auto& a : candidate)
        if (!ground.count(a))
            throw Error("CandidateOutsideProduct",
                        "candidate atom '" + a + "' lies outside the fiber of " +
                            qp.varType->render());
    auto verdict = m.quantifier(qp.quantifier).membership(candidate, ground);
    if (!verdict)
        throw Error("PartialQuantifierOutsideDomain", "quantifier '" + qp.quantifier +
                                                          "' is undefined on this ground set");
    return *verdict;
}

bool interpret_pack(const Pack& pack, const Assignment& env, const Model& m,
                    const TupleSet& candidate) {
    // A pack needs no sentence context: fibers depend only on env.
    std::vector<std::set<std::string>> fibers;
    for (const auto& p : pack.phrases) fibers.push_back(fiber(m, *p.varType, env));
    for (const auto& t : candidate)
        for (std::size_t i = 0; i < pack.phrases.size(); ++i) {
            auto it = t.find(pack.phrases[i].bindingVar);
            if (it == t.end() || !fibers[i].count(it->second))
                throw Error("CandidateOutsideProduct",
                            "a candidate tuple lies outside the product of the pack's fibers");
        }
    for (std::size_t i = 0; i < pack.phrases.size(); ++i) {
        std::set<std::string> proj;
        for (const auto& t : candidate) proj.insert(t.at(pack.phrases[i].bindingVar));
        auto verdict = m.quantifier(pack.phrases[i].quantifier).membership(proj, fibers[i]);
        if (!verdict)
            throw Error("PartialQuantifierOutsideDomain",
                        "quantifier '" + pack.phrases[i].quantifier +
                            "' is undefined on this ground set");
        if (!*verdict) return false;
    }
    return true;
}

namespace {

bool interpret_node(const StarSentence& s, const PreChain* node, const Assignment& env,
                    const Model& m, const TupleSet& candidate) {
    Evaluator ev(s, m);
    TupleSet bvs = ev.bv_set(node, env);
    for (const auto& t : candidate)
        if (!bvs.count(t))
            throw Error("CandidateOutsideProduct",
                        "a candidate tuple lies outside the sub-chain's binding space");
    return ev.accepts(node, env, candidate);
}

} // namespace

bool interpret_seq(const StarSentence& s, const PreChain* node, const Assignment& env,
                   const Model& m, const TupleSet& candidate) {
    if (!std::holds_alternative<ChainSeq>(node->node))
        throw Error("NotASubchain", "interpret_seq needs a sequential node");
    return interpret_node(s, node, env, m, candidate);
}

bool interpret_par(const StarSentence& s, const PreChain* node, const Assignment& env,
                   const Model& m, const TupleSet& candidate) {
    if (!std::holds_alternative<ChainPar>(node->node))
        throw Error("NotASubchain", "interpret_par needs a parallel node");
    return interpret_node(s, node, env, m, candidate);
}

TupleSet bv_set(const StarSentence& s, const PreChain* sub, const Assignment& env,
                const Model& m) {
    Evaluator ev(s, m);
    return ev.bv_set(sub, env);
}

bool evaluate(const StarSentence& s, const Model& m, EvalOptions opt) {
    if (s.dummyPack || !s.isSentence)
        throw Error("StarSentenceNotEvaluable",
                    "only sentences have truth values; this formula has free argument variables");
    TupleSet extension = denote_predicate(m, s.predicate, s.argSpecs());
    Evaluator ev(s, m, opt);
    return ev.accepts(s.chainStar.get(), Assignment{}, extension);
}

} // namespace dtgq
