#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dtgq/syntax.hpp"

namespace dtgq {

/// A variable-to-atom binding. Atoms are referred to by name; the variable's
/// type determines the carrier the atom lives in.
using Assignment = std::map<std::string, std::string>;
using TupleSet = std::set<Assignment>;

Assignment restrict_to(const Assignment& a, const std::set<std::string>& vars);
Assignment merge(const Assignment& a, const Assignment& b);

struct Atom {
    std::string name;
    std::string homeType;
};

/// A finite type: a carrier of named atoms plus one projection per formal
/// index parameter. Generated types additionally carry the flattened base
/// coordinates their atoms stand for, which is what predicate application
/// sees.
struct TypeDecl {
    std::string name;
    /// Formal index telescope; formal names are shared across declarations
    /// so dependence between parameters can be reconstructed.
    std::vector<VarSpec> formals;
    std::vector<std::string> atoms;
    /// projections[i] maps each atom to its image under the i-th formal.
    std::vector<std::map<std::string, std::string>> projections;
    /// Base types of the coordinates an atom of this type contributes to a
    /// predicate, and the coordinate atoms themselves.
    std::vector<std::string> payloadTypes;
    std::map<std::string, std::vector<std::string>> payloadCoords;

    bool hasAtom(const std::string& a) const;
};

struct PredicateDecl {
    std::string name;
    std::vector<VarSpec> formals; // telescope, base types
    std::set<std::vector<std::string>> tuples;
};

/// Membership test of a quantifier: given a candidate subset and its ground
/// set, decide acceptance. nullopt means the quantifier is partial and
/// undefined on that ground set.
struct QuantifierDenotation {
    std::string symbol;
    std::function<std::optional<bool>(const std::set<std::string>&, const std::set<std::string>&)>
        membership;
};

enum class NumeralsMode { Exactly, AtLeast };

/// Builtin quantifiers: forall, exists, most, no, atleast(k), exactly(k).
/// most is strict majority; most on an empty ground set is false.
/// Error: UnknownQuantifier.
QuantifierDenotation builtin_quantifier(const std::string& symbol);

/// Numeral word -> value (one..twenty), or nullopt.
std::optional<int> numeral_value(const std::string& word);

/// A finite interpretation: carriers, projections, predicate extensions and
/// the quantifier library. Value semantics; the dynamic extension of a story
/// copies the model and registers new types on the copy.
class Model {
public:
    void declare_type(TypeDecl decl);
    void declare_predicate(PredicateDecl decl);
    void register_quantifier(QuantifierDenotation q);

    bool has_type(const std::string& name) const { return types_.count(name) != 0; }
    const TypeDecl& type(const std::string& name) const;
    const TypeDecl* find_type(const std::string& name) const;
    const PredicateDecl* find_predicate(const std::string& name) const;
    const std::vector<std::string>& type_order() const { return typeOrder_; }
    const std::vector<std::string>& predicate_order() const { return predOrder_; }

    /// Resolves a quantifier symbol: registered quantifiers first, then
    /// builtins, then numeral words under the current numerals mode.
    QuantifierDenotation quantifier(const std::string& symbol) const;

    NumeralsMode numerals() const { return numerals_; }
    void set_numerals(NumeralsMode m) { numerals_ = m; }

private:
    std::map<std::string, TypeDecl> types_;
    std::map<std::string, PredicateDecl> preds_;
    std::map<std::string, QuantifierDenotation> quantifiers_;
    std::vector<std::string> typeOrder_;
    std::vector<std::string> predOrder_;
    NumeralsMode numerals_ = NumeralsMode::Exactly;
};

/// Confirms that every type of ctx has a carrier, that index arities and
/// argument types are consistent with the formal telescopes, that every
/// projection is total into its target carrier, and that all projection
/// triangles commute. Errors: MissingCarrier, MissingProjection,
/// ArityMismatch, TypeMismatch, TriangleViolation.
void validate_diagram(const Model& m, const Context& ctx);

/// Validates the model's own declarations: each formal telescope, projection
/// totality, triangle coherence, and predicate extensions lying inside their
/// parameter spaces.
std::vector<Diagnostic> validate_model(const Model& m);

/// Atoms of `type` whose projections agree with `over` on every index
/// variable. Error: MissingIndexBinding.
std::set<std::string> fiber(const Model& m, const TypeExpr& type, const Assignment& over);

/// All projection-compatible assignments to the context's variables, in a
/// deterministic order.
std::vector<Assignment> parameter_space(const Model& m, const Context& ctx);

/// Interprets a Sigma-type: tagged pairs (b,c) of a binder value and an
/// element of the body's fiber over it, with projections for the residual
/// index parameters. `name` becomes the registered type name.
/// Errors: UninterpretedComponent, TypeMismatch, MalformedType.
TypeDecl sigma_denotation(const Model& m, const SigmaType& s, const std::string& name);

/// The predicate's extension materialized over the parameter space of
/// `argSpecs`: assignments whose flattened base coordinates are in the
/// stored extension. Errors: UnknownPredicate, ArityMismatch, TypeMismatch.
TupleSet denote_predicate(const Model& m, const std::string& predicate,
                          const std::vector<VarSpec>& argSpecs);

/// Canonical JSON dump of carriers, projections, fibers and predicate
/// tuples. Keys sorted; suitable for golden tests.
nlohmann::json model_to_json(const Model& m);

/// Signature oracle backed by a model (see classify).
class ModelSignatureOracle final : public SignatureOracle {
public:
    explicit ModelSignatureOracle(const Model& m) : m_(m) {}
    std::optional<std::vector<std::string>> predicateSignature(
        const std::string& predicate) const override;
    std::size_t coordinateWidth(const TypeExpr& type) const override;

private:
    const Model& m_;
};

std::string atom_tuple_name(const std::vector<std::string>& coords);

} // namespace dtgq
