#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dtgq/diagnostics.hpp"

namespace dtgq {

// ---------------------------------------------------------------------------
// Type expressions
// ---------------------------------------------------------------------------

struct TypeExpr;
using TypeExprPtr = std::shared_ptr<const TypeExpr>;

/// A non-dependent type constant, e.g. M.
struct BaseType {
    std::string name;
};

/// A type constant applied to index variables, e.g. D(m) or Z(x,y).
struct DepType {
    std::string name;
    std::vector<std::string> indexVars;
};

/// A type generated from a sentence and one of its packs. Its concrete name
/// is T_<sentenceId>_<packId>.
struct TType {
    std::string sentenceId;
    std::string packId;
    std::vector<std::string> indexVars;
};

/// Dependent sum Sigma_{boundVar : boundVarType} body.
struct SigmaType {
    std::string boundVar;
    TypeExprPtr boundVarType;
    TypeExprPtr body;
};

/// Dependent product. Formation only; interpreting one is a static error.
struct PiType {
    std::string boundVar;
    TypeExprPtr boundVarType;
    TypeExprPtr body;
};

struct TypeExpr {
    std::variant<BaseType, DepType, TType, SigmaType, PiType> node;

    /// Head name: the type constant, the generated T name, or Sigma/Pi.
    std::string name() const;
    /// Free index variables, in declaration order, duplicates removed.
    std::vector<std::string> indexVars() const;
    /// Canonical text form, e.g. "Z(x,y)". Equality of type expressions is
    /// equality of renderings.
    std::string render() const;
    bool isConstant() const { return indexVars().empty(); }
};

TypeExprPtr make_base_type(std::string name);
TypeExprPtr make_dep_type(std::string name, std::vector<std::string> indexVars);
TypeExprPtr make_t_type(std::string sentenceId, std::string packId,
                        std::vector<std::string> indexVars);
TypeExprPtr make_sigma_type(std::string boundVar, TypeExprPtr boundVarType, TypeExprPtr body);
TypeExprPtr make_pi_type(std::string boundVar, TypeExprPtr boundVarType, TypeExprPtr body);

inline bool operator==(const TypeExpr& a, const TypeExpr& b) { return a.render() == b.render(); }
inline bool operator!=(const TypeExpr& a, const TypeExpr& b) { return !(a == b); }

// ---------------------------------------------------------------------------
// Contexts
// ---------------------------------------------------------------------------

/// One variable specification x : X(...) in a context.
struct VarSpec {
    std::string var;
    TypeExprPtr type;
};

bool operator==(const VarSpec& a, const VarSpec& b);

/// An ordered list of variable specifications in which every index variable
/// is declared earlier and dependency sets are transitively closed.
struct Context {
    std::vector<VarSpec> specs;

    bool declares(const std::string& var) const;
    const VarSpec* find(const std::string& var) const;
    /// Specs of `vars` in context order. Throws if a var is undeclared.
    std::vector<VarSpec> specsOf(const std::set<std::string>& vars) const;
};

/// Validates all context invariants. Errors: UndeclaredIndexVariable,
/// DependencyClosureViolation, DuplicateVariable.
Context check_context(const std::vector<VarSpec>& raw);

/// True iff `subset` can be excised: the least dependency-closed subcontext
/// around it minus `subset` is still a context (equivalently, no variable
/// outside `subset` depends on one inside). Error: SpecNotInContext.
bool is_convex(const std::vector<VarSpec>& subset, const Context& ctx);

// ---------------------------------------------------------------------------
// Quantifier phrases, packs, pre-chains
// ---------------------------------------------------------------------------

/// Q_{y : Y(xs)}. An empty quantifier marks a dummy phrase (bare variable).
struct QuantifierPhrase {
    std::string quantifier;
    std::string bindingVar;
    TypeExprPtr varType;

    bool isDummy() const { return quantifier.empty(); }
};

/// A tuple of quantifier phrases interpreted cumulatively.
struct Pack {
    std::vector<QuantifierPhrase> phrases;
    bool isDummy = false;

    std::vector<std::string> bindingVars() const;
    std::set<std::string> bindingVarSet() const;
    std::set<std::string> indexVarSet() const;
};

/// Builds a pack, checking binding-variable distinctness and binding/index
/// disjointness. All-dummy phrase lists make a dummy pack and must have
/// constant types. Errors: DuplicateBindingVariable, BindingIndexClash,
/// MixedDummyPack, NonConstantFreeVariable.
Pack form_pack(const std::vector<QuantifierPhrase>& phrases);

struct PreChain;
using PreChainPtr = std::shared_ptr<const PreChain>;

struct ChainLeaf {
    Pack pack;
};
struct ChainSeq {
    PreChainPtr left, right;
};
struct ChainPar {
    PreChainPtr top, bottom;
};

/// Binary tree of packs under sequential and parallel composition.
struct PreChain {
    std::variant<ChainLeaf, ChainSeq, ChainPar> node;

    std::set<std::string> bindingVarSet() const;
    std::set<std::string> indexVarSet() const;
    /// Index variables not bound within this pre-chain.
    std::set<std::string> freeIndexVarSet() const;
    /// All leaves, left to right.
    std::vector<const PreChain*> leaves() const;
    /// All nodes, pre-order.
    std::vector<const PreChain*> nodes() const;
    bool isLeaf() const { return std::holds_alternative<ChainLeaf>(node); }
    const Pack* leafPack() const;
    std::string render() const;
};

PreChainPtr make_leaf(Pack pack);

/// Sequential composition left|right. Checks that right's binding variables
/// avoid left's binding and index variables and that the remaining free
/// index variables form a subcontext of ctx.
/// Errors: VariableClash, FreeIndexNotInContext.
PreChainPtr seq_compose(PreChainPtr left, PreChainPtr right, const Context& ctx);

/// Parallel composition. Checks two-sided variable disjointness.
/// Error: VariableClash.
PreChainPtr par_compose(PreChainPtr top, PreChainPtr bottom);

// ---------------------------------------------------------------------------
// Sentences
// ---------------------------------------------------------------------------

/// Resolves predicate signatures for the arity check in classify. Backed by
/// a model when one is in play; classify works without one.
class SignatureOracle {
public:
    virtual ~SignatureOracle() = default;
    /// Flattened base-type signature of a predicate, or nullopt if unknown.
    virtual std::optional<std::vector<std::string>> predicateSignature(
        const std::string& predicate) const = 0;
    /// Number of base coordinates an element of this type stands for.
    virtual std::size_t coordinateWidth(const TypeExpr& type) const = 0;
};

/// A formula Ch A(zs) whose free argument variables (if any) all have
/// constant types and form the dummy pack. `chainStar` is the chain with the
/// dummy pack composed in front; it equals `chain` when there is none.
struct StarSentence {
    Context context;
    PreChainPtr chain;
    std::string predicate;
    std::vector<std::string> argVars;
    std::optional<Pack> dummyPack;
    std::string id;

    PreChainPtr chainStar;
    bool isSentence = false;

    std::set<std::string> bindingVarSet() const { return chain->bindingVarSet(); }
    std::vector<VarSpec> argSpecs() const;
};

/// Builds a *-sentence from a chain and a predicate application. A dummy
/// pack may be written as the leftmost chain leaf or is synthesized from the
/// free argument variables. Errors: BindingNotFinal, NonConstantFreeVariable,
/// ArityMismatch, and the documented auxiliary codes.
StarSentence classify(const Context& ctx, PreChainPtr chain, const std::string& predicate,
                      const std::vector<std::string>& argVars, std::string id,
                      const SignatureOracle* signatures = nullptr);

// ---------------------------------------------------------------------------
// Pack order and environments
// ---------------------------------------------------------------------------

/// The strict partial order on packs of Ch*: P < Q iff some sequential node
/// has P in its left and Q in its right subtree. Parallel branches are
/// incomparable; the dummy pack precedes everything.
struct PackOrder {
    std::vector<const PreChain*> leaves; // pre-order
    std::vector<const Pack*> packs;

    bool less(std::size_t i, std::size_t j) const { return less_[i][j]; }
    int indexOf(const PreChain* leaf) const;
    std::size_t size() const { return leaves.size(); }

    std::vector<std::vector<bool>> less_;
};

PackOrder pack_order(const StarSentence& s);

/// Deterministic per-sentence identifiers for the packs of Ch*, aligned with
/// pack_order's leaf order. Single quantifier phrases yield their quantifier
/// label (Forall, Exists, Most, ...), dummy phrases their variable name;
/// multi-phrase packs join labels with '_'. Colliding labels get the binding
/// variables appended.
std::vector<std::string> pack_ids(const StarSentence& s);

/// Specs of the binding variables of every pack strictly below all packs of
/// `sub`, in context order. `sub` must be a node of s.chainStar.
/// Error: NotASubchain.
std::vector<VarSpec> env_phi(const StarSentence& s, const PreChain* sub);

} // namespace dtgq
