#include "dtgq/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dtgq {

namespace {

void require_distinct(const std::vector<std::string>& vars, const char* what) {
    std::set<std::string> seen;
    for (const auto& v : vars) {
        if (!seen.insert(v).second)
            throw Error("MalformedType",
                        std::string(what) + " lists variable '" + v + "' twice");
    }
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// TypeExpr
// ---------------------------------------------------------------------------

std::string TypeExpr::name() const {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseType>) return n.name;
            else if constexpr (std::is_same_v<T, DepType>) return n.name;
            else if constexpr (std::is_same_v<T, TType>)
                return "T_" + n.sentenceId + "_" + n.packId;
            else if constexpr (std::is_same_v<T, SigmaType>) return "Sigma";
            else return "Pi";
        },
        node);
}

std::vector<std::string> TypeExpr::indexVars() const {
    return std::visit(
        [](const auto& n) -> std::vector<std::string> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseType>) {
                return {};
            } else if constexpr (std::is_same_v<T, DepType>) {
                return n.indexVars;
            } else if constexpr (std::is_same_v<T, TType>) {
                return n.indexVars;
            } else {
                // Sigma/Pi: the body's indexes plus the binder type's,
                // minus the bound variable itself.
                std::vector<std::string> out;
                std::set<std::string> seen{n.boundVar};
                for (const auto& v : n.boundVarType->indexVars())
                    if (seen.insert(v).second) out.push_back(v);
                for (const auto& v : n.body->indexVars())
                    if (seen.insert(v).second) out.push_back(v);
                return out;
            }
        },
        node);
}

std::string TypeExpr::render() const {
    return std::visit(
        [this](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseType>) {
                return n.name;
            } else if constexpr (std::is_same_v<T, DepType>) {
                if (n.indexVars.empty()) return n.name;
                return n.name + "(" + join(n.indexVars, ",") + ")";
            } else if constexpr (std::is_same_v<T, TType>) {
                std::string s = name();
                if (!n.indexVars.empty()) s += "(" + join(n.indexVars, ",") + ")";
                return s;
            } else if constexpr (std::is_same_v<T, SigmaType>) {
                return "Sigma " + n.boundVar + ":" + n.boundVarType->render() + " . " +
                       n.body->render();
            } else {
                return "Pi " + n.boundVar + ":" + n.boundVarType->render() + " . " +
                       n.body->render();
            }
        },
        node);
}

TypeExprPtr make_base_type(std::string name) {
    return std::make_shared<TypeExpr>(TypeExpr{BaseType{std::move(name)}});
}

TypeExprPtr make_dep_type(std::string name, std::vector<std::string> indexVars) {
    if (indexVars.empty()) return make_base_type(std::move(name));
    require_distinct(indexVars, "type");
    return std::make_shared<TypeExpr>(TypeExpr{DepType{std::move(name), std::move(indexVars)}});
}

TypeExprPtr make_t_type(std::string sentenceId, std::string packId,
                        std::vector<std::string> indexVars) {
    require_distinct(indexVars, "T-type");
    return std::make_shared<TypeExpr>(
        TypeExpr{TType{std::move(sentenceId), std::move(packId), std::move(indexVars)}});
}

namespace {
TypeExprPtr make_binder_type(bool pi, std::string boundVar, TypeExprPtr boundVarType,
                             TypeExprPtr body) {
    auto bodyIdx = body->indexVars();
    if (std::find(bodyIdx.begin(), bodyIdx.end(), boundVar) == bodyIdx.end())
        throw Error("MalformedType", "bound variable '" + boundVar +
                                         "' does not occur among the index variables of " +
                                         body->render());
    if (pi)
        return std::make_shared<TypeExpr>(
            TypeExpr{PiType{std::move(boundVar), std::move(boundVarType), std::move(body)}});
    return std::make_shared<TypeExpr>(
        TypeExpr{SigmaType{std::move(boundVar), std::move(boundVarType), std::move(body)}});
}
} // namespace

TypeExprPtr make_sigma_type(std::string boundVar, TypeExprPtr boundVarType, TypeExprPtr body) {
    return make_binder_type(false, std::move(boundVar), std::move(boundVarType), std::move(body));
}

TypeExprPtr make_pi_type(std::string boundVar, TypeExprPtr boundVarType, TypeExprPtr body) {
    return make_binder_type(true, std::move(boundVar), std::move(boundVarType), std::move(body));
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

bool operator==(const VarSpec& a, const VarSpec& b) {
    return a.var == b.var && *a.type == *b.type;
}

bool Context::declares(const std::string& var) const { return find(var) != nullptr; }

const VarSpec* Context::find(const std::string& var) const {
    for (const auto& s : specs)
        if (s.var == var) return &s;
    return nullptr;
}

std::vector<VarSpec> Context::specsOf(const std::set<std::string>& vars) const {
    std::vector<VarSpec> out;
    std::set<std::string> found;
    for (const auto& s : specs)
        if (vars.count(s.var)) {
            out.push_back(s);
            found.insert(s.var);
        }
    for (const auto& v : vars)
        if (!found.count(v))
            throw Error("UnknownVariable", "variable '" + v + "' is not declared in the context");
    return out;
}

Context check_context(const std::vector<VarSpec>& raw) {
    std::map<std::string, std::set<std::string>> indexSets; // var -> its type's index vars
    std::vector<std::string> declared;
    for (const auto& spec : raw) {
        if (!spec.type) throw Error("MalformedType", "null type in specification");
        if (indexSets.count(spec.var))
            throw Error("DuplicateVariable", "variable '" + spec.var + "' declared twice");
        auto idx = spec.type->indexVars();
        std::set<std::string> idxSet(idx.begin(), idx.end());
        if (idxSet.count(spec.var))
            throw Error("MalformedType",
                        "variable '" + spec.var + "' occurs in its own type's indexes");
        for (const auto& x : idx) {
            if (!indexSets.count(x))
                throw Error("UndeclaredIndexVariable",
                            "index variable '" + x + "' of '" + spec.var +
                                "' is not declared earlier in the context");
            // J-closure: everything x's own type depends on must index this
            // specification as well.
            for (const auto& y : indexSets.at(x))
                if (!idxSet.count(y))
                    throw Error("DependencyClosureViolation",
                                "specification of '" + spec.var + "' is indexed by '" + x +
                                    "' but not by '" + y + "', on which '" + x + "' depends");
        }
        indexSets[spec.var] = idxSet;
        declared.push_back(spec.var);
    }
    return Context{raw};
}

bool is_convex(const std::vector<VarSpec>& subset, const Context& ctx) {
    std::set<std::string> inSubset;
    for (const auto& s : subset) {
        const VarSpec* spec = ctx.find(s.var);
        if (!spec || !(*spec == s))
            throw Error("SpecNotInContext",
                        "specification '" + s.var + "' is not part of the context");
        inSubset.insert(s.var);
    }
    // Least enclosing subcontext closed under dependencies in both
    // directions; the excision test below is equivalent to checking that no
    // variable outside the subset depends on one inside.
    std::vector<VarSpec> remainder;
    for (const auto& s : ctx.specs)
        if (!inSubset.count(s.var)) remainder.push_back(s);
    try {
        check_context(remainder);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Packs
// ---------------------------------------------------------------------------

std::vector<std::string> Pack::bindingVars() const {
    std::vector<std::string> out;
    out.reserve(phrases.size());
    for (const auto& p : phrases) out.push_back(p.bindingVar);
    return out;
}

std::set<std::string> Pack::bindingVarSet() const {
    auto v = bindingVars();
    return {v.begin(), v.end()};
}

std::set<std::string> Pack::indexVarSet() const {
    std::set<std::string> out;
    for (const auto& p : phrases)
        for (const auto& x : p.varType->indexVars()) out.insert(x);
    return out;
}

Pack form_pack(const std::vector<QuantifierPhrase>& phrases) {
    if (phrases.empty()) throw Error("MalformedType", "a pack needs at least one phrase");
    bool anyDummy = false, anyQuant = false;
    std::set<std::string> binding;
    for (const auto& p : phrases) {
        (p.isDummy() ? anyDummy : anyQuant) = true;
        if (!binding.insert(p.bindingVar).second)
            throw Error("DuplicateBindingVariable",
                        "binding variable '" + p.bindingVar + "' repeated in pack");
    }
    if (anyDummy && anyQuant)
        throw Error("MixedDummyPack",
                    "dummy phrases cannot be packed together with quantifier phrases");
    Pack pack{phrases, anyDummy};
    for (const auto& x : pack.indexVarSet())
        if (binding.count(x))
            throw Error("BindingIndexClash",
                        "variable '" + x + "' is both binding and indexing in the pack");
    if (pack.isDummy)
        for (const auto& p : phrases)
            if (!p.varType->isConstant())
                throw Error("NonConstantFreeVariable",
                            "dummy variable '" + p.bindingVar + "' has non-constant type " +
                                p.varType->render());
    return pack;
}

// ---------------------------------------------------------------------------
// Pre-chains
// ---------------------------------------------------------------------------

std::set<std::string> PreChain::bindingVarSet() const {
    return std::visit(
        [](const auto& n) -> std::set<std::string> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ChainLeaf>) {
                return n.pack.bindingVarSet();
            } else if constexpr (std::is_same_v<T, ChainSeq>) {
                auto s = n.left->bindingVarSet();
                auto r = n.right->bindingVarSet();
                s.insert(r.begin(), r.end());
                return s;
            } else {
                auto s = n.top->bindingVarSet();
                auto r = n.bottom->bindingVarSet();
                s.insert(r.begin(), r.end());
                return s;
            }
        },
        node);
}

std::set<std::string> PreChain::indexVarSet() const {
    return std::visit(
        [](const auto& n) -> std::set<std::string> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ChainLeaf>) {
                return n.pack.indexVarSet();
            } else if constexpr (std::is_same_v<T, ChainSeq>) {
                auto s = n.left->indexVarSet();
                auto r = n.right->indexVarSet();
                s.insert(r.begin(), r.end());
                return s;
            } else {
                auto s = n.top->indexVarSet();
                auto r = n.bottom->indexVarSet();
                s.insert(r.begin(), r.end());
                return s;
            }
        },
        node);
}

std::set<std::string> PreChain::freeIndexVarSet() const {
    auto idx = indexVarSet();
    for (const auto& y : bindingVarSet()) idx.erase(y);
    return idx;
}

std::vector<const PreChain*> PreChain::leaves() const {
    std::vector<const PreChain*> out;
    for (const PreChain* n : nodes())
        if (n->isLeaf()) out.push_back(n);
    return out;
}

std::vector<const PreChain*> PreChain::nodes() const {
    std::vector<const PreChain*> out;
    out.push_back(this);
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ChainSeq>) {
                auto l = n.left->nodes(), r = n.right->nodes();
                out.insert(out.end(), l.begin(), l.end());
                out.insert(out.end(), r.begin(), r.end());
            } else if constexpr (std::is_same_v<T, ChainPar>) {
                auto l = n.top->nodes(), r = n.bottom->nodes();
                out.insert(out.end(), l.begin(), l.end());
                out.insert(out.end(), r.begin(), r.end());
            }
        },
        node);
    return out;
}

const Pack* PreChain::leafPack() const {
    if (const auto* l = std::get_if<ChainLeaf>(&node)) return &l->pack;
    return nullptr;
}

std::string PreChain::render() const {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ChainLeaf>) {
                std::vector<std::string> parts;
                for (const auto& p : n.pack.phrases) {
                    std::string q = p.isDummy() ? "" : p.quantifier + " ";
                    parts.push_back(q + p.bindingVar + ":" + p.varType->render());
                }
                if (parts.size() == 1 && !n.pack.isDummy) return parts[0];
                if (n.pack.phrases.size() == 1) return parts[0];
                return "pack(" + join(parts, ", ") + ")";
            } else if constexpr (std::is_same_v<T, ChainSeq>) {
                return n.left->render() + " | " + n.right->render();
            } else {
                return "par(" + n.top->render() + " ; " + n.bottom->render() + ")";
            }
        },
        node);
}

PreChainPtr make_leaf(Pack pack) {
    return std::make_shared<PreChain>(PreChain{ChainLeaf{std::move(pack)}});
}

namespace {

void check_leaf_disjointness(const PreChain& a, const PreChain& b) {
    auto ba = a.bindingVarSet();
    for (const auto& y : b.bindingVarSet())
        if (ba.count(y))
            throw Error("VariableClash", "binding variable '" + y + "' bound on both sides");
}

} // namespace

PreChainPtr seq_compose(PreChainPtr left, PreChainPtr right, const Context& ctx) {
    check_leaf_disjointness(*left, *right);
    auto forbidden = left->bindingVarSet();
    auto leftIdx = left->indexVarSet();
    forbidden.insert(leftIdx.begin(), leftIdx.end());
    for (const auto& y : right->bindingVarSet())
        if (forbidden.count(y))
            throw Error("VariableClash", "binding variable '" + y +
                                             "' of the right pre-chain occurs in the left one");
    // Remaining free index variables must form a subcontext of ctx.
    PreChain combined{ChainSeq{left, right}};
    std::vector<VarSpec> freeSpecs;
    for (const auto& x : combined.freeIndexVarSet()) {
        const VarSpec* spec = ctx.find(x);
        if (!spec)
            throw Error("FreeIndexNotInContext",
                        "free index variable '" + x + "' is not declared in the context");
        freeSpecs.push_back(*spec);
    }
    std::sort(freeSpecs.begin(), freeSpecs.end(), [&](const VarSpec& a, const VarSpec& b) {
        auto pos = [&](const VarSpec& s) {
            for (std::size_t i = 0; i < ctx.specs.size(); ++i)
                if (ctx.specs[i].var == s.var) return i;
            return ctx.specs.size();
        };
        return pos(a) < pos(b);
    });
    try {
        check_context(freeSpecs);
    } catch (const Error& e) {
        throw Error("FreeIndexNotInContext",
                    std::string("free index variables do not form a subcontext: ") + e.what());
    }
    return std::make_shared<PreChain>(std::move(combined));
}

PreChainPtr par_compose(PreChainPtr top, PreChainPtr bottom) {
    check_leaf_disjointness(*top, *bottom);
    auto topForbidden = top->bindingVarSet();
    auto topIdx = top->indexVarSet();
    topForbidden.insert(topIdx.begin(), topIdx.end());
    for (const auto& y : bottom->bindingVarSet())
        if (topForbidden.count(y))
            throw Error("VariableClash",
                        "binding variable '" + y + "' of the bottom branch occurs in the top one");
    auto bottomForbidden = bottom->bindingVarSet();
    auto bottomIdx = bottom->indexVarSet();
    bottomForbidden.insert(bottomIdx.begin(), bottomIdx.end());
    for (const auto& y : top->bindingVarSet())
        if (bottomForbidden.count(y))
            throw Error("VariableClash",
                        "binding variable '" + y + "' of the top branch occurs in the bottom one");
    return std::make_shared<PreChain>(PreChain{ChainPar{std::move(top), std::move(bottom)}});
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

namespace {

void validate_prechain(const PreChain& chain, const Context& ctx) {
    for (const PreChain* leaf : chain.leaves())
        for (const auto& p : leaf->leafPack()->phrases) {
            const VarSpec* spec = ctx.find(p.bindingVar);
            if (!spec)
                throw Error("UnknownVariable",
                            "binding variable '" + p.bindingVar + "' is not declared");
            if (!(*spec->type == *p.varType))
                throw Error("ChainTypeMismatch",
                            "variable '" + p.bindingVar + "' has type " + spec->type->render() +
                                " in the context but " + p.varType->render() + " in the chain");
        }
    for (const auto& x : chain.freeIndexVarSet())
        if (!ctx.declares(x))
            throw Error("FreeIndexNotInContext",
                        "free index variable '" + x + "' is not declared in the context");
}

} // namespace

std::vector<VarSpec> StarSentence::argSpecs() const {
    std::vector<VarSpec> out;
    for (const auto& s : context.specs)
        if (std::find(argVars.begin(), argVars.end(), s.var) != argVars.end()) out.push_back(s);
    return out;
}

StarSentence classify(const Context& ctx, PreChainPtr chain, const std::string& predicate,
                      const std::vector<std::string>& argVars, std::string id,
                      const SignatureOracle* signatures) {
    {
        std::set<std::string> seen;
        for (const auto& z : argVars)
            if (!seen.insert(z).second)
                throw Error("DuplicateVariable", "argument variable '" + z + "' repeated");
    }
    for (const auto& z : argVars)
        if (!ctx.declares(z))
            throw Error("UnknownVariable", "argument variable '" + z + "' is not declared");

    // A dummy pack may be written as the leftmost leaf; peel it off.
    std::optional<Pack> writtenDummy;
    PreChainPtr effective = chain;
    if (const auto* seq = std::get_if<ChainSeq>(&chain->node)) {
        if (seq->left->isLeaf() && seq->left->leafPack()->isDummy) {
            writtenDummy = *seq->left->leafPack();
            effective = seq->right;
        }
    }
    if (effective->isLeaf() && effective->leafPack()->isDummy)
        throw Error("EmptyChain", "a sentence needs at least one quantifier phrase");
    for (const PreChain* leaf : effective->leaves())
        if (leaf->leafPack()->isDummy)
            throw Error("BindingNotFinal",
                        "dummy-quantifier phrases must form a single pack in front of the chain");

    validate_prechain(*effective, ctx);

    auto bv = effective->bindingVarSet();
    std::vector<std::string> freeVars;
    bool seenBinding = false;
    for (const auto& z : argVars) {
        if (bv.count(z)) {
            seenBinding = true;
        } else {
            if (seenBinding)
                throw Error("BindingNotFinal", "argument variable '" + z +
                                                   "' follows bound arguments; binding "
                                                   "variables must be final");
            freeVars.push_back(z);
        }
    }
    std::set<std::string> argSet(argVars.begin(), argVars.end());
    for (const auto& y : bv)
        if (!argSet.count(y))
            throw Error("BindingNotFinal", "binding variable '" + y +
                                               "' does not occur among the argument variables");

    // Specs of the free arguments must form a subcontext; every free
    // argument must have a constant type.
    std::vector<VarSpec> freeSpecs;
    for (const auto& s : ctx.specs)
        if (std::find(freeVars.begin(), freeVars.end(), s.var) != freeVars.end())
            freeSpecs.push_back(s);
    try {
        check_context(freeSpecs);
    } catch (const Error& e) {
        throw Error("FreeIndexNotInContext",
                    std::string("free argument variables do not form a subcontext: ") + e.what());
    }
    for (const auto& s : freeSpecs)
        if (!s.type->isConstant())
            throw Error("NonConstantFreeVariable", "free argument variable '" + s.var +
                                                       "' has non-constant type " +
                                                       s.type->render());

    // Index variables of the chain must be bound in the chain or appear as
    // (dummy) arguments.
    for (const auto& x : effective->freeIndexVarSet())
        if (!argSet.count(x))
            throw Error("UnboundIndexVariable",
                        "index variable '" + x + "' is neither bound nor an argument");

    // Argument specs must form a subcontext of ctx.
    std::vector<VarSpec> argSpecs;
    for (const auto& s : ctx.specs)
        if (argSet.count(s.var)) argSpecs.push_back(s);
    try {
        check_context(argSpecs);
    } catch (const Error& e) {
        throw Error("FreeIndexNotInContext",
                    std::string("argument variables do not form a subcontext: ") + e.what());
    }

    std::optional<Pack> dummy;
    if (!freeVars.empty()) {
        std::vector<QuantifierPhrase> phrases;
        for (const auto& z : freeVars) phrases.push_back({"", z, ctx.find(z)->type});
        dummy = form_pack(phrases);
        if (writtenDummy) {
            auto want = dummy->bindingVarSet();
            if (writtenDummy->bindingVarSet() != want)
                throw Error("DummyPackMismatch",
                            "the written dummy pack does not bind exactly the free "
                            "argument variables");
        }
    } else if (writtenDummy) {
        throw Error("DummyPackMismatch",
                    "a dummy pack is written but every argument variable is bound");
    }

    StarSentence s;
    s.context = ctx;
    s.chain = effective;
    s.predicate = predicate;
    s.argVars = argVars;
    s.dummyPack = dummy;
    s.id = std::move(id);
    s.chainStar =
        dummy ? std::make_shared<PreChain>(PreChain{ChainSeq{make_leaf(*dummy), effective}})
              : effective;
    s.isSentence = !dummy && effective->freeIndexVarSet().empty();

    if (signatures) {
        auto sig = signatures->predicateSignature(predicate);
        if (!sig)
            throw Error("UnknownPredicate", "predicate '" + predicate + "' is not declared");
        std::size_t width = 0;
        for (const auto& z : argVars) width += signatures->coordinateWidth(*ctx.find(z)->type);
        if (width != sig->size())
            throw Error("ArityMismatch", "predicate '" + predicate + "' expects " +
                                             std::to_string(sig->size()) +
                                             " coordinates but the arguments provide " +
                                             std::to_string(width));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Pack order, pack ids, environments
// ---------------------------------------------------------------------------

int PackOrder::indexOf(const PreChain* leaf) const {
    for (std::size_t i = 0; i < leaves.size(); ++i)
        if (leaves[i] == leaf) return static_cast<int>(i);
    return -1;
}

PackOrder pack_order(const StarSentence& s) {
    PackOrder ord;
    ord.leaves = s.chainStar->leaves();
    for (const PreChain* l : ord.leaves) ord.packs.push_back(l->leafPack());
    const std::size_t n = ord.leaves.size();
    ord.less_.assign(n, std::vector<bool>(n, false));
    // Every sequential node makes each left-subtree pack smaller than each
    // right-subtree pack; tree orders need no further closure.
    for (const PreChain* node : s.chainStar->nodes()) {
        if (const auto* seq = std::get_if<ChainSeq>(&node->node)) {
            for (const PreChain* a : seq->left->leaves())
                for (const PreChain* b : seq->right->leaves())
                    ord.less_[ord.indexOf(a)][ord.indexOf(b)] = true;
        }
    }
    return ord;
}

namespace {

std::string quantifier_label(const QuantifierPhrase& p) {
    if (p.isDummy()) return p.bindingVar;
    std::string q = p.quantifier;
    std::string label;
    bool upper = true;
    for (char c : q) {
        if (c == '(' || c == ')') continue;
        label += upper ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        upper = false;
    }
    return label;
}

} // namespace

std::vector<std::string> pack_ids(const StarSentence& s) {
    PackOrder ord = pack_order(s);
    std::vector<std::string> base;
    for (const Pack* pack : ord.packs) {
        std::vector<std::string> labels;
        for (const auto& p : pack->phrases) labels.push_back(quantifier_label(p));
        base.push_back(join(labels, "_"));
    }
    std::map<std::string, int> count;
    for (const auto& b : base) count[b]++;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (count[base[i]] > 1)
            out.push_back(base[i] + "_" + join(ord.packs[i]->bindingVars(), "_"));
        else
            out.push_back(base[i]);
    }
    return out;
}

std::vector<VarSpec> env_phi(const StarSentence& s, const PreChain* sub) {
    PackOrder ord = pack_order(s);
    std::vector<const PreChain*> nodes = s.chainStar->nodes();
    if (std::find(nodes.begin(), nodes.end(), sub) == nodes.end())
        throw Error("NotASubchain", "the given pre-chain is not part of the sentence's chain");
    std::vector<int> subPacks;
    for (const PreChain* l : sub->leaves()) subPacks.push_back(ord.indexOf(l));
    std::set<std::string> vars;
    for (std::size_t i = 0; i < ord.size(); ++i) {
        bool belowAll = true;
        for (int j : subPacks)
            if (!ord.less(i, static_cast<std::size_t>(j))) {
                belowAll = false;
                break;
            }
        if (belowAll)
            for (const auto& y : ord.packs[i]->bindingVars()) vars.insert(y);
    }
    return s.context.specsOf(vars);
}

} // namespace dtgq
