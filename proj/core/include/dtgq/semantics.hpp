#pragma once

#include <iosfwd>
#include <map>

#include "dtgq/model.hpp"
#include "dtgq/syntax.hpp"

namespace dtgq {

struct EvalOptions {
    std::ostream* trace = nullptr;
    /// Upper bound on a binding-variable set whose subsets may be
    /// enumerated when deciding whether any candidate is accepted.
    std::size_t subsetSearchLimit = 16;
};

/// Per-sentence evaluation state. Parameter spaces and acceptance searches
/// are memoized per (sub-chain, environment); instances are cheap and not
/// shared between threads.
class Evaluator {
public:
    Evaluator(const StarSentence& s, const Model& m, EvalOptions opt = {});

    /// All tuples over the sub-chain's binding variables compatible with the
    /// environment: the slice of ||Env_phi(sub), Bv(sub)|| at env.
    /// Error: EnvOutsideParameterSpace.
    TupleSet bv_set(const PreChain* sub, const Assignment& env);

    /// Membership of `candidate` in the sub-chain's denotation at env.
    bool accepts(const PreChain* sub, const Assignment& env, const TupleSet& candidate);

    /// Whether the denotation at env is nonempty (some candidate accepted).
    bool exists_accepted(const PreChain* sub, const Assignment& env);

    const StarSentence& sentence() const { return s_; }
    const Model& model() const { return m_; }

private:
    struct NodeSpace {
        std::vector<VarSpec> envSpecs;
        std::vector<VarSpec> bvSpecs;
        std::set<std::string> bvVars;
        TupleSet envSpace;                  // assignments over envSpecs
        std::map<Assignment, TupleSet> groups; // env -> tuples over bvSpecs
    };
    const NodeSpace& space(const PreChain* sub);
    bool accepts_leaf(const Pack& pack, const Assignment& env, const TupleSet& candidate);

    const StarSentence& s_;
    const Model& m_;
    EvalOptions opt_;
    int depth_ = 0;
    std::map<const PreChain*, NodeSpace> spaces_;
    std::map<std::pair<const PreChain*, Assignment>, bool> existsMemo_;
};

/// Membership of `candidate` in ||Q||(||Y||(env)) for a quantifier phrase.
/// Errors: CandidateOutsideProduct, PartialQuantifierOutsideDomain.
bool interpret_qp(const QuantifierPhrase& qp, const Assignment& env, const Model& m,
                  const std::set<std::string>& candidate);

/// Cumulative pack membership: every coordinate projection of the candidate
/// is accepted by its quantifier on its fiber. Error: CandidateOutsideProduct.
bool interpret_pack(const Pack& pack, const Assignment& env, const Model& m,
                    const TupleSet& candidate);

/// Membership under a sequential node, by the nested-family recursion.
bool interpret_seq(const StarSentence& s, const PreChain* node, const Assignment& env,
                   const Model& m, const TupleSet& candidate);

/// Membership under a parallel node: the candidate must factor as a
/// rectangle of accepted sets (extensional on the empty candidate).
bool interpret_par(const StarSentence& s, const PreChain* node, const Assignment& env,
                   const Model& m, const TupleSet& candidate);

/// The slice of the sub-chain's binding space at env (free-function form).
TupleSet bv_set(const StarSentence& s, const PreChain* sub, const Assignment& env,
                const Model& m);

/// Truth of a sentence: membership of the predicate's extension (restricted
/// to the binding parameter space) in the chain denotation at the empty
/// environment. Error: StarSentenceNotEvaluable.
bool evaluate(const StarSentence& s, const Model& m, EvalOptions opt = {});

} // namespace dtgq
