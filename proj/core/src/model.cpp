#include "dtgq/model.hpp"

#include <algorithm>

namespace dtgq {

Assignment restrict_to(const Assignment& a, const std::set<std::string>& vars) {
    Assignment out;
    for (const auto& [k, v] : a)
        if (vars.count(k)) out.emplace(k, v);
    return out;
}

Assignment merge(const Assignment& a, const Assignment& b) {
    Assignment out = a;
    out.insert(b.begin(), b.end());
    return out;
}

bool TypeDecl::hasAtom(const std::string& a) const {
    return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
}

// ---------------------------------------------------------------------------
// Quantifiers
// ---------------------------------------------------------------------------

namespace {

QuantifierDenotation counting_quantifier(std::string symbol,
                                         std::function<bool(std::size_t, std::size_t)> test) {
    QuantifierDenotation q;
    q.symbol = std::move(symbol);
    q.membership = [test = std::move(test)](const std::set<std::string>& s,
                                            const std::set<std::string>& z)
        -> std::optional<bool> { return test(s.size(), z.size()); };
    return q;
}

std::optional<int> parse_counted(const std::string& symbol, const std::string& head) {
    if (symbol.rfind(head + "(", 0) != 0 || symbol.back() != ')') return std::nullopt;
    std::string num = symbol.substr(head.size() + 1, symbol.size() - head.size() - 2);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
        return std::nullopt;
    return std::stoi(num);
}

} // namespace

std::optional<int> numeral_value(const std::string& word) {
    static const std::vector<std::string> words = {
        "one",    "two",    "three",    "four",     "five",     "six",     "seven",
        "eight",  "nine",   "ten",      "eleven",   "twelve",   "thirteen", "fourteen",
        "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};
    std::string lower;
    for (char c : word) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (std::size_t i = 0; i < words.size(); ++i)
        if (words[i] == lower) return static_cast<int>(i + 1);
    return std::nullopt;
}

QuantifierDenotation builtin_quantifier(const std::string& symbol) {
    if (symbol == "forall")
        return counting_quantifier(symbol, [](std::size_t s, std::size_t z) { return s == z; });
    if (symbol == "exists")
        return counting_quantifier(symbol, [](std::size_t s, std::size_t) { return s > 0; });
    if (symbol == "no")
        return counting_quantifier(symbol, [](std::size_t s, std::size_t) { return s == 0; });
    if (symbol == "most")
        return counting_quantifier(symbol,
                                   [](std::size_t s, std::size_t z) { return 2 * s > z; });
    if (auto k = parse_counted(symbol, "atleast"))
        return counting_quantifier(symbol, [k = *k](std::size_t s, std::size_t) {
            return s >= static_cast<std::size_t>(k);
        });
    if (auto k = parse_counted(symbol, "exactly"))
        return counting_quantifier(symbol, [k = *k](std::size_t s, std::size_t) {
            return s == static_cast<std::size_t>(k);
        });
    throw Error("UnknownQuantifier", "unknown quantifier symbol '" + symbol + "'");
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

void Model::declare_type(TypeDecl decl) {
    if (types_.count(decl.name))
        throw Error("DuplicateDeclaration", "type '" + decl.name + "' declared twice");
    typeOrder_.push_back(decl.name);
    types_.emplace(decl.name, std::move(decl));
}

void Model::declare_predicate(PredicateDecl decl) {
    if (preds_.count(decl.name))
        throw Error("DuplicateDeclaration", "predicate '" + decl.name + "' declared twice");
    predOrder_.push_back(decl.name);
    preds_.emplace(decl.name, std::move(decl));
}

void Model::register_quantifier(QuantifierDenotation q) {
    quantifiers_[q.symbol] = std::move(q);
}

const TypeDecl& Model::type(const std::string& name) const {
    auto it = types_.find(name);
    if (it == types_.end()) throw Error("MissingCarrier", "type '" + name + "' has no carrier");
    return it->second;
}

const TypeDecl* Model::find_type(const std::string& name) const {
    auto it = types_.find(name);
    return it == types_.end() ? nullptr : &it->second;
}

const PredicateDecl* Model::find_predicate(const std::string& name) const {
    auto it = preds_.find(name);
    return it == preds_.end() ? nullptr : &it->second;
}

QuantifierDenotation Model::quantifier(const std::string& symbol) const {
    auto it = quantifiers_.find(symbol);
    if (it != quantifiers_.end()) return it->second;
    if (auto n = numeral_value(symbol)) {
        std::string head = numerals_ == NumeralsMode::Exactly ? "exactly" : "atleast";
        auto q = builtin_quantifier(head + "(" + std::to_string(*n) + ")");
        q.symbol = symbol;
        return q;
    }
    return builtin_quantifier(symbol);
}

// ---------------------------------------------------------------------------
// Diagram validation
// ---------------------------------------------------------------------------

namespace {

/// Projection of `atom` of `decl` onto the formal at `pos`, with totality
/// diagnostics.
const std::string& project_atom(const TypeDecl& decl, std::size_t pos, const std::string& atom) {
    const auto& table = decl.projections.at(pos);
    auto it = table.find(atom);
    if (it == table.end())
        throw Error("MissingProjection", "projection of '" + decl.name + "' onto '" +
                                             decl.formals[pos].var + "' is undefined at atom '" +
                                             atom + "'");
    return it->second;
}

void check_spec_against_model(const Model& m, const Context& ctx, const VarSpec& spec) {
    const std::string tyName = spec.type->name();
    if (std::holds_alternative<PiType>(spec.type->node) ||
        std::holds_alternative<SigmaType>(spec.type->node))
        throw Error("UninterpretedComponent",
                    "type expression " + spec.type->render() + " must be registered before use");
    const TypeDecl* decl = m.find_type(tyName);
    if (!decl) throw Error("MissingCarrier", "type '" + tyName + "' has no carrier");
    auto actuals = spec.type->indexVars();
    if (actuals.size() != decl->formals.size())
        throw Error("ArityMismatch", "type '" + tyName + "' takes " +
                                         std::to_string(decl->formals.size()) +
                                         " index variables, got " +
                                         std::to_string(actuals.size()));
    if (decl->projections.size() != decl->formals.size())
        throw Error("MissingProjection", "type '" + tyName + "' lacks projection tables");
    // Actual argument types must match the formal telescope under the
    // formal-to-actual substitution.
    std::map<std::string, std::string> subst;
    for (std::size_t i = 0; i < actuals.size(); ++i) subst[decl->formals[i].var] = actuals[i];
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        const VarSpec* actualSpec = ctx.find(actuals[i]);
        if (!actualSpec)
            throw Error("UnknownVariable", "index variable '" + actuals[i] + "' undeclared");
        std::vector<std::string> mapped;
        for (const auto& fv : decl->formals[i].type->indexVars()) {
            auto it = subst.find(fv);
            if (it == subst.end())
                throw Error("TypeMismatch", "formal parameter '" + decl->formals[i].var +
                                                "' of '" + tyName +
                                                "' depends on a parameter not instantiated");
            mapped.push_back(it->second);
        }
        auto expected = make_dep_type(decl->formals[i].type->name(), mapped);
        if (!(*actualSpec->type == *expected))
            throw Error("TypeMismatch", "index variable '" + actuals[i] + "' of '" + tyName +
                                            "' has type " + actualSpec->type->render() +
                                            ", expected " + expected->render());
    }
}

void check_projection_totality(const Model& m, const TypeDecl& decl) {
    for (std::size_t i = 0; i < decl.formals.size(); ++i) {
        const TypeDecl* target = m.find_type(decl.formals[i].type->name());
        if (!target)
            throw Error("MissingCarrier",
                        "projection target '" + decl.formals[i].type->name() + "' has no carrier");
        for (const auto& a : decl.atoms) {
            const std::string& img = project_atom(decl, i, a);
            if (!target->hasAtom(img))
                throw Error("MissingProjection", "projection of '" + a + "' lands at '" + img +
                                                     "', not an atom of '" + target->name + "'");
        }
    }
}

void check_triangles(const Model& m, const TypeDecl& decl) {
    // For every formal y:Y of Z and every formal x of Y, x is also a formal
    // of Z and pi_{Z,x} = pi_{Y,x} . pi_{Z,y} must hold atomwise.
    for (std::size_t yi = 0; yi < decl.formals.size(); ++yi) {
        const TypeDecl* yDecl = m.find_type(decl.formals[yi].type->name());
        if (!yDecl) continue; // reported by totality check
        auto yActuals = decl.formals[yi].type->indexVars();
        for (std::size_t xj = 0; xj < yActuals.size(); ++xj) {
            // position of the shared formal in decl's telescope
            std::size_t xi = decl.formals.size();
            for (std::size_t k = 0; k < decl.formals.size(); ++k)
                if (decl.formals[k].var == yActuals[xj]) xi = k;
            if (xi == decl.formals.size())
                throw Error("MissingProjection", "type '" + decl.name + "' lacks the parameter '" +
                                                     yActuals[xj] + "' required by '" +
                                                     yDecl->name + "'");
            for (const auto& a : decl.atoms) {
                const std::string& direct = project_atom(decl, xi, a);
                const std::string& viaY =
                    project_atom(*yDecl, xj, project_atom(decl, yi, a));
                if (direct != viaY)
                    throw Error("TriangleViolation",
                                "triangle " + decl.name + " -> " + yDecl->name + " -> " +
                                    decl.formals[xi].type->name() + " does not commute at atom '" +
                                    a + "' (" + direct + " vs " + viaY + ")");
            }
        }
    }
}

} // namespace

void validate_diagram(const Model& m, const Context& ctx) {
    for (const auto& spec : ctx.specs) check_spec_against_model(m, ctx, spec);
    std::set<std::string> seen;
    for (const auto& spec : ctx.specs) {
        const std::string tyName = spec.type->name();
        if (!seen.insert(tyName).second) continue;
        const TypeDecl& decl = m.type(tyName);
        check_projection_totality(m, decl);
        check_triangles(m, decl);
    }
}

std::vector<Diagnostic> validate_model(const Model& m) {
    std::vector<Diagnostic> out;
    auto report = [&out](const Error& e) {
        out.push_back({Severity::Error, e.code(), e.what(), {}});
    };
    for (const auto& name : m.type_order()) {
        const TypeDecl& decl = m.type(name);
        try {
            Context telescope = check_context(decl.formals);
            validate_diagram(m, telescope);
            check_projection_totality(m, decl);
            check_triangles(m, decl);
        } catch (const Error& e) {
            report(e);
        }
    }
    for (const auto& name : m.predicate_order()) {
        const PredicateDecl& pred = *m.find_predicate(name);
        try {
            Context telescope = check_context(pred.formals);
            validate_diagram(m, telescope);
            auto space = parameter_space(m, telescope);
            std::set<std::vector<std::string>> valid;
            for (const auto& a : space) {
                std::vector<std::string> tuple;
                for (const auto& f : pred.formals) tuple.push_back(a.at(f.var));
                valid.insert(tuple);
            }
            for (const auto& t : pred.tuples)
                if (!valid.count(t)) {
                    std::string shown;
                    for (const auto& c : t) shown += (shown.empty() ? "" : ",") + c;
                    throw Error("TupleOutsideParameterSpace",
                                "tuple (" + shown + ") of predicate '" + name +
                                    "' is not projection-compatible");
                }
        } catch (const Error& e) {
            report(e);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fibers and parameter spaces
// ---------------------------------------------------------------------------

std::set<std::string> fiber(const Model& m, const TypeExpr& type, const Assignment& over) {
    if (std::holds_alternative<PiType>(type.node))
        throw Error("PiNotInterpreted", "Pi-types have no interpretation");
    if (std::holds_alternative<SigmaType>(type.node))
        throw Error("UninterpretedComponent",
                    "type expression " + type.render() + " must be registered before use");
    const TypeDecl& decl = m.type(type.name());
    auto actuals = type.indexVars();
    if (actuals.size() != decl.formals.size())
        throw Error("ArityMismatch", "type '" + decl.name + "' takes " +
                                         std::to_string(decl.formals.size()) +
                                         " index variables, got " +
                                         std::to_string(actuals.size()));
    std::vector<std::string> want;
    for (const auto& v : actuals) {
        auto it = over.find(v);
        if (it == over.end())
            throw Error("MissingIndexBinding",
                        "no binding for index variable '" + v + "' of " + type.render());
        want.push_back(it->second);
    }
    std::set<std::string> out;
    for (const auto& a : decl.atoms) {
        bool ok = true;
        for (std::size_t i = 0; i < want.size(); ++i)
            if (project_atom(decl, i, a) != want[i]) {
                ok = false;
                break;
            }
        if (ok) out.insert(a);
    }
    return out;
}

std::vector<Assignment> parameter_space(const Model& m, const Context& ctx) {
    std::vector<Assignment> space{Assignment{}};
    for (const auto& spec : ctx.specs) {
        std::vector<Assignment> next;
        for (const auto& a : space)
            for (const auto& atom : fiber(m, *spec.type, a)) {
                Assignment b = a;
                b[spec.var] = atom;
                next.push_back(std::move(b));
            }
        space = std::move(next);
    }
    return space;
}

// ---------------------------------------------------------------------------
// Sigma denotation
// ---------------------------------------------------------------------------

std::string atom_tuple_name(const std::vector<std::string>& coords) {
    if (coords.size() == 1) return coords[0];
    std::string out = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) out += ",";
        out += coords[i];
    }
    return out + ")";
}

TypeDecl sigma_denotation(const Model& m, const SigmaType& s, const std::string& name) {
    if (std::holds_alternative<PiType>(s.body->node) ||
        std::holds_alternative<PiType>(s.boundVarType->node))
        throw Error("PiNotInterpreted", "Pi-types have no interpretation");
    const TypeDecl* yDecl = m.find_type(s.boundVarType->name());
    const TypeDecl* zDecl = m.find_type(s.body->name());
    if (!yDecl || !zDecl)
        throw Error("UninterpretedComponent", "both components of " +
                                                   TypeExpr{s}.render() +
                                                   " must be interpreted types");
    auto bodyActuals = s.body->indexVars();
    if (bodyActuals.size() != zDecl->formals.size())
        throw Error("ArityMismatch", "type '" + zDecl->name + "' takes " +
                                         std::to_string(zDecl->formals.size()) +
                                         " index variables, got " +
                                         std::to_string(bodyActuals.size()));
    std::size_t binderPos = bodyActuals.size();
    for (std::size_t i = 0; i < bodyActuals.size(); ++i)
        if (bodyActuals[i] == s.boundVar) binderPos = i;
    if (binderPos == bodyActuals.size())
        throw Error("MalformedType", "bound variable '" + s.boundVar +
                                         "' does not index the body " + s.body->render());
    if (zDecl->formals[binderPos].type->name() != yDecl->name)
        throw Error("TypeMismatch", "the body's parameter at the binder position has type '" +
                                        zDecl->formals[binderPos].type->name() + "', expected '" +
                                        yDecl->name + "'");
    // A residual parameter may not depend on the summed-out one.
    for (std::size_t i = 0; i < zDecl->formals.size(); ++i) {
        if (i == binderPos) continue;
        for (const auto& fv : zDecl->formals[i].type->indexVars())
            if (fv == zDecl->formals[binderPos].var)
                throw Error("MalformedType", "parameter '" + zDecl->formals[i].var +
                                                 "' depends on the summed-out variable");
    }

    TypeDecl out;
    out.name = name;
    for (std::size_t i = 0; i < zDecl->formals.size(); ++i)
        if (i != binderPos) out.formals.push_back(zDecl->formals[i]);
    out.projections.resize(out.formals.size());
    out.payloadTypes = zDecl->payloadTypes;

    for (const auto& b : yDecl->atoms) {
        for (const auto& c : zDecl->atoms) {
            if (project_atom(*zDecl, binderPos, c) != b) continue;
            std::string pair = atom_tuple_name({b, c});
            out.atoms.push_back(pair);
            std::size_t slot = 0;
            for (std::size_t i = 0; i < zDecl->formals.size(); ++i) {
                if (i == binderPos) continue;
                out.projections[slot][pair] = project_atom(*zDecl, i, c);
                ++slot;
            }
            out.payloadCoords[pair] = zDecl->payloadCoords.count(c)
                                          ? zDecl->payloadCoords.at(c)
                                          : std::vector<std::string>{c};
        }
    }
    std::sort(out.atoms.begin(), out.atoms.end());
    return out;
}

// ---------------------------------------------------------------------------
// Predicate denotation
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> payload_types_of(const Model& m, const TypeExpr& type) {
    const TypeDecl* decl = m.find_type(type.name());
    if (!decl)
        throw Error("MissingCarrier", "type '" + type.name() + "' has no carrier");
    if (!decl->payloadTypes.empty()) return decl->payloadTypes;
    return {decl->name};
}

std::vector<std::string> payload_coords_of(const Model& m, const TypeExpr& type,
                                           const std::string& atom) {
    const TypeDecl& decl = m.type(type.name());
    auto it = decl.payloadCoords.find(atom);
    if (it != decl.payloadCoords.end()) return it->second;
    return {atom};
}

} // namespace

TupleSet denote_predicate(const Model& m, const std::string& predicate,
                          const std::vector<VarSpec>& argSpecs) {
    const PredicateDecl* pred = m.find_predicate(predicate);
    if (!pred) throw Error("UnknownPredicate", "predicate '" + predicate + "' is not declared");
    std::vector<std::string> flatTypes;
    for (const auto& s : argSpecs) {
        auto pt = payload_types_of(m, *s.type);
        flatTypes.insert(flatTypes.end(), pt.begin(), pt.end());
    }
    if (flatTypes.size() != pred->formals.size())
        throw Error("ArityMismatch", "predicate '" + predicate + "' expects " +
                                         std::to_string(pred->formals.size()) +
                                         " coordinates, the arguments provide " +
                                         std::to_string(flatTypes.size()));
    for (std::size_t i = 0; i < flatTypes.size(); ++i)
        if (flatTypes[i] != pred->formals[i].type->name())
            throw Error("TypeMismatch", "coordinate " + std::to_string(i + 1) + " of '" +
                                            predicate + "' has base type '" + flatTypes[i] +
                                            "', expected '" + pred->formals[i].type->name() +
                                            "'");
    TupleSet out;
    Context argCtx = check_context(argSpecs);
    for (const auto& a : parameter_space(m, argCtx)) {
        std::vector<std::string> flat;
        for (const auto& s : argSpecs) {
            auto coords = payload_coords_of(m, *s.type, a.at(s.var));
            flat.insert(flat.end(), coords.begin(), coords.end());
        }
        if (pred->tuples.count(flat)) out.insert(a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON dump
// ---------------------------------------------------------------------------

nlohmann::json model_to_json(const Model& m) {
    nlohmann::json j;
    j["schemaVersion"] = 1;
    nlohmann::json types = nlohmann::json::object();
    for (const auto& name : m.type_order()) {
        const TypeDecl& d = m.type(name);
        nlohmann::json t;
        nlohmann::json params = nlohmann::json::array();
        for (const auto& f : d.formals)
            params.push_back({{"var", f.var}, {"type", f.type->render()}});
        t["params"] = params;
        t["carrier"] = d.atoms;
        nlohmann::json projections = nlohmann::json::object();
        for (std::size_t i = 0; i < d.formals.size(); ++i)
            projections[d.formals[i].var] = d.projections[i];
        t["projections"] = projections;
        if (!d.formals.empty()) {
            nlohmann::json fibers = nlohmann::json::object();
            Context telescope = check_context(d.formals);
            for (const auto& env : parameter_space(m, telescope)) {
                std::string key;
                for (const auto& [k, v] : env) key += (key.empty() ? "" : ",") + k + "=" + v;
                auto fib = fiber(m, *make_dep_type(d.name, [&] {
                                     std::vector<std::string> vs;
                                     for (const auto& f : d.formals) vs.push_back(f.var);
                                     return vs;
                                 }()),
                                 env);
                fibers[key] = std::vector<std::string>(fib.begin(), fib.end());
            }
            t["fibers"] = fibers;
        }
        types[name] = t;
    }
    j["types"] = types;
    nlohmann::json preds = nlohmann::json::object();
    for (const auto& name : m.predicate_order()) {
        const PredicateDecl& p = *m.find_predicate(name);
        nlohmann::json pj;
        nlohmann::json sig = nlohmann::json::array();
        for (const auto& f : p.formals)
            sig.push_back({{"var", f.var}, {"type", f.type->render()}});
        pj["signature"] = sig;
        nlohmann::json tuples = nlohmann::json::array();
        for (const auto& t : p.tuples) tuples.push_back(t);
        pj["tuples"] = tuples;
        preds[name] = pj;
    }
    j["predicates"] = preds;
    return j;
}

// ---------------------------------------------------------------------------
// Signature oracle
// ---------------------------------------------------------------------------

std::optional<std::vector<std::string>> ModelSignatureOracle::predicateSignature(
    const std::string& predicate) const {
    const PredicateDecl* p = m_.find_predicate(predicate);
    if (!p) return std::nullopt;
    std::vector<std::string> out;
    for (const auto& f : p->formals) out.push_back(f.type->name());
    return out;
}

std::size_t ModelSignatureOracle::coordinateWidth(const TypeExpr& type) const {
    return payload_types_of(m_, type).size();
}

} // namespace dtgq
