#include "dtgq/dynamics.hpp"

#include <algorithm>
#include <sstream>

namespace dtgq {

namespace {

std::string env_key(const Assignment& a) {
    std::string out;
    for (const auto& [k, v] : a) out += (out.empty() ? "" : ",") + k + "=" + v;
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

TupleSet slice_of(const TupleSet& parent, const Assignment& b,
                  const std::set<std::string>& leftVars,
                  const std::set<std::string>& rightVars) {
    TupleSet out;
    for (const auto& t : parent)
        if (restrict_to(t, leftVars) == b) out.insert(restrict_to(t, rightVars));
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Step 1
// ---------------------------------------------------------------------------

const FiberEntry* FiberTable::find(const PreChain* node, const Assignment& env) const {
    auto it = entries.find(node);
    if (it == entries.end()) return nullptr;
    auto jt = it->second.find(env);
    return jt == it->second.end() ? nullptr : &jt->second;
}

namespace {

/// Pushes the fiber at (node, env) down to the node's children, in the
/// reverse of the chain-formation direction.
void decompose(const PreChain* node, const Assignment& env, const FiberEntry& entry,
               Evaluator& ev, FiberTable& table) {
    table.entries[node][env] = entry;
    if (node->isLeaf()) return;

    if (const auto* seq = std::get_if<ChainSeq>(&node->node)) {
        auto leftVars = seq->left->bindingVarSet();
        auto rightVars = seq->right->bindingVarSet();
        if (!entry.defined) {
            decompose(seq->left.get(), env, FiberEntry{false, {}}, ev, table);
            for (const auto& b : ev.bv_set(seq->left.get(), env))
                decompose(seq->right.get(), merge(env, b), FiberEntry{false, {}}, ev, table);
            return;
        }
        FiberEntry left;
        for (const auto& b : ev.bv_set(seq->left.get(), env)) {
            TupleSet rightSlice = slice_of(entry.tuples, b, leftVars, rightVars);
            Assignment envB = merge(env, b);
            if (ev.accepts(seq->right.get(), envB, rightSlice)) left.tuples.insert(b);
            decompose(seq->right.get(), envB, FiberEntry{true, rightSlice}, ev, table);
        }
        decompose(seq->left.get(), env, left, ev, table);
        return;
    }

    const auto& par = std::get<ChainPar>(node->node);
    auto topVars = par.top->bindingVarSet();
    auto bottomVars = par.bottom->bindingVarSet();
    FiberEntry top, bottom;
    if (!entry.defined || entry.tuples.empty()) {
        // An empty parent fiber has no unique factorization.
        top.defined = bottom.defined = false;
    } else {
        TupleSet a, b;
        for (const auto& t : entry.tuples) {
            a.insert(restrict_to(t, topVars));
            b.insert(restrict_to(t, bottomVars));
        }
        bool rectangle = entry.tuples.size() == a.size() * b.size();
        if (rectangle && ev.accepts(par.top.get(), env, a) &&
            ev.accepts(par.bottom.get(), env, b)) {
            top.tuples = a;
            bottom.tuples = b;
        } else {
            top.defined = bottom.defined = false;
        }
    }
    decompose(par.top.get(), env, top, ev, table);
    decompose(par.bottom.get(), env, bottom, ev, table);
}

} // namespace

FiberTable step1_fibers(const StarSentence& s, const Model& m, EvalOptions opt) {
    FiberTable table;
    Evaluator ev(s, m, opt);
    TupleSet root = denote_predicate(m, s.predicate, s.argSpecs());
    decompose(s.chainStar.get(), Assignment{}, FiberEntry{true, std::move(root)}, ev, table);
    return table;
}

// ---------------------------------------------------------------------------
// Step 2
// ---------------------------------------------------------------------------

namespace {

/// The tuple-atom name of an assignment: its values in context order.
std::string tuple_name(const Assignment& a, const Context& ctx) {
    std::vector<std::string> coords;
    for (const auto& spec : ctx.specs)
        if (a.count(spec.var)) coords.push_back(a.at(spec.var));
    return atom_tuple_name(coords);
}

std::vector<std::string> payload_of_assignment(const Model& m, const Context& ctx,
                                               const Assignment& a,
                                               const std::vector<std::string>& vars) {
    std::vector<std::string> out;
    for (const auto& spec : ctx.specs) {
        if (std::find(vars.begin(), vars.end(), spec.var) == vars.end()) continue;
        const TypeDecl* decl = m.find_type(spec.type->name());
        const std::string& atom = a.at(spec.var);
        if (decl && decl->payloadCoords.count(atom)) {
            const auto& coords = decl->payloadCoords.at(atom);
            out.insert(out.end(), coords.begin(), coords.end());
        } else {
            out.push_back(atom);
        }
    }
    return out;
}

} // namespace

std::vector<GeneratedType> step2_types(const FiberTable& t, const StarSentence& s,
                                       const Model& m, UndefinedPolicy policy) {
    PackOrder order = pack_order(s);
    std::vector<std::string> ids = pack_ids(s);
    ExtendedContext ext = extend_context(s.context, s);

    std::vector<GeneratedType> out;
    // Carriers of earlier packs, keyed by the restriction vars they own.
    std::vector<std::set<std::string>> carrierKeys(order.size());
    std::vector<std::set<std::string>> ownVars(order.size());

    for (std::size_t pi = 0; pi < order.size(); ++pi) {
        const PreChain* leaf = order.leaves[pi];
        const Pack* pack = order.packs[pi];
        GeneratedType g;
        g.decl.name = "T_" + s.id + "_" + ids[pi];
        g.varName = ext.added[pi].var;

        std::vector<VarSpec> envSpecs = env_phi(s, leaf);
        for (const auto& sp : envSpecs) g.envVars.push_back(sp.var);
        std::set<std::string> envVarSet(g.envVars.begin(), g.envVars.end());
        std::set<std::string> own = envVarSet;
        for (const auto& y : pack->bindingVarSet()) own.insert(y);
        ownVars[pi] = own;

        // Formal telescope: the variables of the earlier packs.
        for (std::size_t pj = 0; pj < pi; ++pj)
            if (order.less(pj, pi)) g.decl.formals.push_back(ext.added[pj]);
        g.decl.projections.resize(g.decl.formals.size());

        auto entries = t.entries.find(leaf);
        std::vector<std::pair<Assignment, const FiberEntry*>> fibers;
        if (entries != t.entries.end())
            for (const auto& [env, entry] : entries->second) fibers.emplace_back(env, &entry);

        for (const auto& [env, entry] : fibers) {
            if (!entry->defined) {
                g.defined = false;
                continue;
            }
            // Admissibility of the environment: its restriction must land in
            // every earlier carrier.
            bool admissible = true;
            for (std::size_t pj = 0; pj < pi && admissible; ++pj) {
                if (!order.less(pj, pi)) continue;
                if (!out[pj].defined) {
                    admissible = false;
                    g.defined = false;
                    continue;
                }
                std::string restricted = tuple_name(restrict_to(env, ownVars[pj]), s.context);
                if (!carrierKeys[pj].count(restricted)) admissible = false;
            }
            if (!admissible) continue;
            g.fibers[env] = entry->tuples;
            for (const auto& bvTuple : entry->tuples) {
                Assignment full = merge(env, bvTuple);
                std::string name = tuple_name(full, s.context);
                g.decl.atoms.push_back(name);
                std::size_t slot = 0;
                for (std::size_t pj = 0; pj < pi; ++pj) {
                    if (!order.less(pj, pi)) continue;
                    g.decl.projections[slot][name] =
                        tuple_name(restrict_to(full, ownVars[pj]), s.context);
                    ++slot;
                }
                g.decl.payloadCoords[name] =
                    payload_of_assignment(m, s.context, full, pack->bindingVars());
            }
        }
        if (!g.defined) {
            if (policy == UndefinedPolicy::Strict)
                throw Error("UndefinedFiber",
                            "the parallel decomposition for pack '" + ids[pi] +
                                "' of sentence '" + s.id + "' is undefined");
            g.decl.atoms.clear();
            g.fibers.clear();
        }
        std::sort(g.decl.atoms.begin(), g.decl.atoms.end());
        for (const auto& p : pack->phrases) {
            const TypeDecl* d = m.find_type(p.varType->name());
            if (d && !d->payloadTypes.empty())
                g.decl.payloadTypes.insert(g.decl.payloadTypes.end(), d->payloadTypes.begin(),
                                           d->payloadTypes.end());
            else
                g.decl.payloadTypes.push_back(p.varType->name());
        }
        carrierKeys[pi] = {g.decl.atoms.begin(), g.decl.atoms.end()};
        out.push_back(std::move(g));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Context extension
// ---------------------------------------------------------------------------

ExtendedContext extend_context(const Context& ctx, const StarSentence& s) {
    // Drop the argument variables and everything that depends on them.
    std::set<std::string> dropped(s.argVars.begin(), s.argVars.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& spec : ctx.specs) {
            if (dropped.count(spec.var)) continue;
            for (const auto& x : spec.type->indexVars())
                if (dropped.count(x)) {
                    dropped.insert(spec.var);
                    changed = true;
                    break;
                }
        }
    }
    ExtendedContext ext;
    std::vector<VarSpec> specs;
    std::set<std::string> taken;
    for (const auto& spec : ctx.specs) {
        if (dropped.count(spec.var)) {
            ext.dropped.push_back(spec);
        } else {
            specs.push_back(spec);
            taken.insert(spec.var);
        }
    }

    PackOrder order = pack_order(s);
    std::vector<std::string> ids = pack_ids(s);
    std::vector<std::string> varNames(order.size());
    for (std::size_t pi = 0; pi < order.size(); ++pi) {
        // Reuse the binding-variable names, which the drop just freed.
        std::string name = join(order.packs[pi]->bindingVars(), "_");
        int suffix = 2;
        while (taken.count(name)) name = join(order.packs[pi]->bindingVars(), "_") +
                                         "_" + std::to_string(suffix++);
        taken.insert(name);
        varNames[pi] = name;
        std::vector<std::string> indexVars;
        for (std::size_t pj = 0; pj < pi; ++pj)
            if (order.less(pj, pi)) indexVars.push_back(varNames[pj]);
        VarSpec spec{name, make_t_type(s.id, ids[pi], indexVars)};
        ext.added.push_back(spec);
        specs.push_back(std::move(spec));
    }
    ext.context = check_context(specs);
    return ext;
}

void register_generated(Model& m, const std::vector<GeneratedType>& types) {
    for (const auto& g : types)
        if (g.defined) m.declare_type(g.decl);
}

// ---------------------------------------------------------------------------
// Refresh
// ---------------------------------------------------------------------------

namespace {

/// Instantiates a type reference against the current context, checking
/// index arity and argument types against the declaration's telescope.
TypeExprPtr resolve_type_ref(const Model& m, const Context& ctx, const TypeRefExpr& ref) {
    const TypeDecl* decl = m.find_type(ref.name);
    if (!decl) throw Error("UnknownType", "type '" + ref.name + "' is not declared");
    if (ref.args.size() != decl->formals.size())
        throw Error("ArityMismatch", "type '" + ref.name + "' takes " +
                                         std::to_string(decl->formals.size()) +
                                         " index variables, got " +
                                         std::to_string(ref.args.size()));
    return to_type_expr(ref);
}

} // namespace

RefreshOutcome refresh(const Context& ctx, const RefreshStep& directive, Model& m) {
    if (directive.kind == RefreshStep::Kind::Pi)
        throw Error("PiNotInterpreted", "Pi-types have no interpretation; the directive "
                                        "is rejected");
    if (ctx.declares(directive.newVar))
        throw Error("DuplicateVariable",
                    "variable '" + directive.newVar + "' is already declared");

    RefreshOutcome out;
    if (directive.kind == RefreshStep::Kind::Weaken) {
        TypeExprPtr type = resolve_type_ref(m, ctx, directive.type);
        std::vector<VarSpec> specs = ctx.specs;
        specs.push_back({directive.newVar, type});
        out.context = check_context(specs);
        validate_diagram(m, out.context);
        out.added = {directive.newVar, type};
        return out;
    }

    // Sigma: binder type is inferred from the body's telescope at the
    // binder's position; when written explicitly it must agree.
    const TypeDecl* body = m.find_type(directive.body.name);
    if (!body) throw Error("UnknownType", "type '" + directive.body.name + "' is not declared");
    if (directive.body.args.size() != body->formals.size())
        throw Error("ArityMismatch", "type '" + directive.body.name + "' takes " +
                                         std::to_string(body->formals.size()) +
                                         " index variables, got " +
                                         std::to_string(directive.body.args.size()));
    std::size_t binderPos = directive.body.args.size();
    for (std::size_t i = 0; i < directive.body.args.size(); ++i)
        if (directive.body.args[i] == directive.binderVar) binderPos = i;
    if (binderPos == directive.body.args.size())
        throw Error("MalformedType", "bound variable '" + directive.binderVar +
                                         "' does not occur among the body's index variables");
    std::map<std::string, std::string> subst;
    for (std::size_t i = 0; i < body->formals.size(); ++i)
        subst[body->formals[i].var] = directive.body.args[i];
    auto instantiate = [&](const TypeExprPtr& formalType) {
        std::vector<std::string> mapped;
        for (const auto& fv : formalType->indexVars()) mapped.push_back(subst.at(fv));
        return make_dep_type(formalType->name(), mapped);
    };
    TypeExprPtr binderType = instantiate(body->formals[binderPos].type);
    if (directive.binderType) {
        TypeExprPtr written = to_type_expr(*directive.binderType);
        // An index-less reference to a dependent type is elaborated.
        if (written->indexVars().empty() && !binderType->indexVars().empty() &&
            written->name() == binderType->name())
            written = binderType;
        if (!(*written == *binderType))
            throw Error("TypeMismatch", "the binder's type is " + binderType->render() +
                                            ", not " + written->render());
    }
    // Non-binder arguments must be in scope with the instantiated types.
    for (std::size_t i = 0; i < directive.body.args.size(); ++i) {
        if (i == binderPos) continue;
        const VarSpec* spec = ctx.find(directive.body.args[i]);
        if (!spec)
            throw Error("UnknownVariable",
                        "variable '" + directive.body.args[i] + "' is not declared");
        TypeExprPtr expected = instantiate(body->formals[i].type);
        if (!(*spec->type == *expected))
            throw Error("TypeMismatch", "variable '" + directive.body.args[i] + "' has type " +
                                            spec->type->render() + ", expected " +
                                            expected->render());
    }

    TypeExprPtr bodyExpr = make_dep_type(directive.body.name, directive.body.args);
    SigmaType sigma{directive.binderVar, binderType, bodyExpr};

    // Deterministic name: T_<sid>_Sigma when the body is a generated type
    // of sentence sid, else Sigma_<body>; counters break collisions.
    std::string base = "Sigma_" + directive.body.name;
    if (directive.body.name.rfind("T_", 0) == 0) {
        auto second = directive.body.name.find('_', 2);
        if (second != std::string::npos)
            base = directive.body.name.substr(0, second) + "_Sigma";
    }
    std::string name = base;
    int counter = 2;
    while (m.has_type(name)) name = base + "_" + std::to_string(counter++);

    TypeDecl decl = sigma_denotation(m, sigma, name);
    m.declare_type(decl);
    out.newType = decl;

    std::vector<std::string> residualArgs;
    for (std::size_t i = 0; i < directive.body.args.size(); ++i)
        if (i != binderPos) residualArgs.push_back(directive.body.args[i]);
    TypeExprPtr newType = make_dep_type(name, residualArgs);
    std::vector<VarSpec> specs = ctx.specs;
    specs.push_back({directive.newVar, newType});
    out.context = check_context(specs);
    out.added = {directive.newVar, newType};
    return out;
}

// ---------------------------------------------------------------------------
// Stories
// ---------------------------------------------------------------------------

namespace {

nlohmann::json context_to_json(const Context& ctx) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& spec : ctx.specs)
        out.push_back({{"var", spec.var}, {"type", spec.type->render()}});
    return out;
}

std::string tuple_display(const Assignment& a) {
    std::vector<std::string> coords;
    for (const auto& [k, v] : a) coords.push_back(v);
    return atom_tuple_name(coords);
}

} // namespace

nlohmann::json generated_type_to_json(const GeneratedType& g) {
    nlohmann::json out;
    out["name"] = g.decl.name;
    out["var"] = g.varName;
    out["defined"] = g.defined;
    nlohmann::json params = nlohmann::json::array();
    for (const auto& f : g.decl.formals)
        params.push_back({{"var", f.var}, {"type", f.type->render()}});
    out["params"] = params;
    out["carrier"] = g.decl.atoms;
    nlohmann::json fibers = nlohmann::json::object();
    for (const auto& [env, tuples] : g.fibers) {
        std::vector<std::string> shown;
        for (const auto& t : tuples) shown.push_back(tuple_display(t));
        std::sort(shown.begin(), shown.end());
        fibers[env_key(env)] = shown;
    }
    out["fibers"] = fibers;
    nlohmann::json projections = nlohmann::json::object();
    for (std::size_t i = 0; i < g.decl.formals.size(); ++i)
        projections[g.decl.formals[i].var] = g.decl.projections[i];
    out["projections"] = projections;
    return out;
}

StoryReport run_story(const std::vector<DiscourseStep>& steps, Model model,
                      const RunOptions& opt) {
    StoryReport report;
    Context ctx;
    bool haveContext = false;
    std::map<std::string, std::optional<bool>> truths;

    for (const auto& step : steps) {
        StepReport sr;
        try {
            if (const auto* c = std::get_if<ContextStep>(&step.step)) {
                sr.kind = "context";
                std::vector<VarSpec> specs;
                for (const auto& [var, ref] : c->specs) specs.push_back({var, to_type_expr(ref)});
                ctx = check_context(specs);
                validate_diagram(model, ctx);
                haveContext = true;
                sr.detail["context"] = context_to_json(ctx);
            } else if (const auto* s = std::get_if<SentenceStep>(&step.step)) {
                sr.kind = "sentence";
                sr.detail["id"] = s->id;
                if (!haveContext)
                    throw Error("NoContext", "declare a context before the first sentence");
                if (truths.count(s->id))
                    throw Error("DuplicateDeclaration",
                                "sentence '" + s->id + "' declared twice");
                PreChainPtr chain = build_prechain(*s->chain, ctx);
                ModelSignatureOracle oracle(model);
                StarSentence sent =
                    classify(ctx, chain, s->predicate, s->argVars, s->id, &oracle);
                sr.detail["classification"] = sent.isSentence ? "sentence" : "star-sentence";
                std::optional<bool> truth;
                if (sent.isSentence) truth = evaluate(sent, model, opt.eval);
                truths[s->id] = truth;
                if (truth)
                    sr.detail["truth"] = *truth;
                else
                    sr.detail["truth"] = nullptr;
                if (truth && !*truth) sr.detail["extendedAfterFalse"] = true;

                FiberTable fibers = step1_fibers(sent, model, opt.eval);
                auto generated = step2_types(fibers, sent, model, UndefinedPolicy::Mark);
                register_generated(model, generated);
                ExtendedContext ext = extend_context(ctx, sent);
                ctx = ext.context;

                nlohmann::json newTypes = nlohmann::json::array();
                for (const auto& g : generated) {
                    newTypes.push_back(generated_type_to_json(g));
                    if (!g.defined)
                        sr.diagnostics.push_back(
                            {Severity::Warning, "UndefinedParallelDecomposition",
                             "the fibers of '" + g.decl.name +
                                 "' are undefined (no unique parallel factorization)",
                             step.span});
                }
                sr.detail["newTypes"] = newTypes;
                nlohmann::json droppedJson = nlohmann::json::array();
                for (const auto& d : ext.dropped) droppedJson.push_back(d.var);
                sr.detail["dropped"] = droppedJson;
                sr.detail["context"] = context_to_json(ctx);
            } else if (const auto* r = std::get_if<RefreshStep>(&step.step)) {
                sr.kind = "refresh";
                if (!haveContext)
                    throw Error("NoContext", "declare a context before refreshing");
                RefreshOutcome outc = refresh(ctx, *r, model);
                ctx = outc.context;
                sr.detail["added"] = {{"var", outc.added.var},
                                      {"type", outc.added.type->render()}};
                if (outc.newType) {
                    GeneratedType g;
                    g.decl = *outc.newType;
                    g.varName = outc.added.var;
                    sr.detail["newType"] = generated_type_to_json(g);
                }
                sr.detail["context"] = context_to_json(ctx);
            } else {
                const auto& e = std::get<ExpectStep>(step.step);
                sr.kind = "expect";
                sr.detail["id"] = e.id;
                sr.detail["expected"] = e.expected;
                ++report.expectations;
                auto it = truths.find(e.id);
                if (it == truths.end()) {
                    sr.detail["outcome"] = "error";
                    sr.diagnostics.push_back({Severity::Error, "UnknownSentence",
                                              "no sentence named '" + e.id + "'", step.span});
                    ++report.failedExpectations;
                    sr.failed = true;
                } else if (!it->second) {
                    sr.detail["outcome"] = "error";
                    sr.diagnostics.push_back(
                        {Severity::Error, "StarSentenceNotEvaluable",
                         "sentence '" + e.id + "' has no truth value (dummy pack present)",
                         step.span});
                    ++report.failedExpectations;
                    sr.failed = true;
                } else {
                    sr.detail["actual"] = *it->second;
                    bool pass = *it->second == e.expected;
                    sr.detail["outcome"] = pass ? "pass" : "fail";
                    if (pass) {
                        ++report.passed;
                    } else {
                        ++report.failedExpectations;
                        sr.failed = true;
                    }
                }
            }
        } catch (const Error& e) {
            sr.diagnostics.push_back({Severity::Error, e.code(), e.what(), step.span});
            sr.failed = true;
            report.steps.push_back(std::move(sr));
            report.aborted = true;
            break;
        }
        bool halt = opt.failFast && sr.failed;
        report.steps.push_back(std::move(sr));
        if (halt) break;
    }
    return report;
}

nlohmann::json StoryReport::to_json() const {
    nlohmann::json out;
    out["schemaVersion"] = 1;
    nlohmann::json stepJson = nlohmann::json::array();
    for (const auto& s : steps) {
        nlohmann::json j = s.detail;
        j["kind"] = s.kind;
        if (!s.diagnostics.empty()) {
            nlohmann::json diags = nlohmann::json::array();
            for (const auto& d : s.diagnostics)
                diags.push_back({{"severity", d.severity == Severity::Error ? "error" : "warning"},
                                 {"code", d.code},
                                 {"message", d.message}});
            j["diagnostics"] = diags;
        }
        stepJson.push_back(j);
    }
    out["steps"] = stepJson;
    out["summary"] = {{"expectations", expectations},
                      {"passed", passed},
                      {"failed", failedExpectations},
                      {"aborted", aborted}};
    return out;
}

std::string StoryReport::to_text() const {
    std::ostringstream out;
    for (const auto& s : steps) {
        if (s.kind == "context") {
            out << "context:";
            if (s.detail.contains("context"))
                for (const auto& spec : s.detail["context"])
                    out << " " << spec["var"].get<std::string>() << ":"
                        << spec["type"].get<std::string>();
            out << "\n";
        } else if (s.kind == "sentence") {
            out << "sentence " << s.detail.value("id", std::string("?")) << " ["
                << s.detail.value("classification", std::string("?")) << "]";
            if (s.detail.contains("truth") && !s.detail["truth"].is_null())
                out << " truth=" << (s.detail["truth"].get<bool>() ? "true" : "false");
            out << "\n";
            if (s.detail.contains("newTypes"))
                for (const auto& t : s.detail["newTypes"]) {
                    out << "  " << t["name"].get<std::string>() << " = {";
                    bool first = true;
                    for (const auto& a : t["carrier"]) {
                        if (!first) out << ", ";
                        out << a.get<std::string>();
                        first = false;
                    }
                    out << "}";
                    if (!t["defined"].get<bool>()) out << " UNDEFINED";
                    out << "\n";
                }
        } else if (s.kind == "refresh") {
            out << "refresh:";
            if (s.detail.contains("added"))
                out << " " << s.detail["added"]["var"].get<std::string>() << ":"
                    << s.detail["added"]["type"].get<std::string>();
            out << "\n";
        } else if (s.kind == "expect") {
            out << "expect " << s.detail.value("id", std::string("?")) << " "
                << (s.detail.value("expected", false) ? "true" : "false") << " -> "
                << s.detail.value("outcome", std::string("?")) << "\n";
        }
        for (const auto& d : s.diagnostics)
            out << "  [" << (d.severity == Severity::Error ? "error" : "warning") << " "
                << d.code << "] " << d.message << "\n";
    }
    out << "expectations: " << passed << "/" << expectations << " passed";
    if (aborted) out << " (story aborted)";
    out << "\n";
    return out.str();
}

nlohmann::json StoryReport::dump_types() const {
    nlohmann::json out;
    out["schemaVersion"] = 1;
    nlohmann::json types = nlohmann::json::array();
    for (const auto& s : steps) {
        if (s.detail.contains("newTypes"))
            for (const auto& t : s.detail["newTypes"]) types.push_back(t);
        if (s.detail.contains("newType")) types.push_back(s.detail["newType"]);
    }
    out["types"] = types;
    return out;
}

} // namespace dtgq
