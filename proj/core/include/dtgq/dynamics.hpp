#pragma once

#include <optional>

#include <json.hpp>

#include "dtgq/model.hpp"
#include "dtgq/parser.hpp"
#include "dtgq/semantics.hpp"
#include "dtgq/syntax.hpp"

namespace dtgq {

// ---------------------------------------------------------------------------
// Dynamic extension
// ---------------------------------------------------------------------------

struct FiberEntry {
    bool defined = true;
    TupleSet tuples;
};

/// Step-1 output: for each sub-chain of Ch* and each admissible environment,
/// the fiber of the generated type. A parallel node whose decomposition into
/// accepted factors fails marks its subtree UNDEFINED rather than raising.
struct FiberTable {
    std::map<const PreChain*, std::map<Assignment, FiberEntry>> entries;

    const FiberEntry* find(const PreChain* node, const Assignment& env) const;
};

/// Computes the fibers of the new types by inverse induction over the chain:
/// the root fiber is the predicate's extension; sequential nodes split by
/// the two decomposition formulas; parallel nodes split into the rectangle
/// factors when those exist and are accepted.
FiberTable step1_fibers(const StarSentence& s, const Model& m, EvalOptions opt = {});

/// One generated type per pack of Ch*, in pack order.
struct GeneratedType {
    TypeDecl decl;
    std::string varName;               // variable specified on the type
    std::vector<std::string> envVars;  // env_phi of the pack, context order
    bool defined = true;
    std::map<Assignment, TupleSet> fibers; // env -> binding tuples
};

enum class UndefinedPolicy { Strict, Mark };

/// Step 2: builds carriers as unions of environment-tagged fibers, admitting
/// an environment only when its restrictions land in all earlier carriers,
/// and derives the projections between the new types by tuple restriction.
/// With Strict, an undefined pack fiber raises UndefinedFiber; with Mark,
/// the generated type is flagged and left carrier-less.
std::vector<GeneratedType> step2_types(const FiberTable& t, const StarSentence& s,
                                       const Model& m,
                                       UndefinedPolicy policy = UndefinedPolicy::Strict);

struct ExtendedContext {
    Context context;
    std::vector<VarSpec> added;
    std::vector<VarSpec> dropped;
};

/// The context after a *-sentence: argument-variable specifications dropped
/// (together with any specification that transitively depends on them) and
/// one specification per pack appended, indexed by the earlier packs'
/// variables. New variables reuse the dropped binding-variable names.
ExtendedContext extend_context(const Context& ctx, const StarSentence& s);

/// Registers the generated types on the model. Skips undefined ones.
void register_generated(Model& m, const std::vector<GeneratedType>& types);

// ---------------------------------------------------------------------------
// Refresh
// ---------------------------------------------------------------------------

struct RefreshOutcome {
    Context context;
    VarSpec added;
    std::optional<TypeDecl> newType; // present for sigma directives
};

/// Applies one refresh directive: weakening (a fresh variable on a declared
/// type) or Sigma-formation (registers the Sigma denotation under a
/// deterministic name and declares a fresh variable of it). Pi directives
/// are rejected. Errors: UnknownType, PiNotInterpreted, DuplicateVariable,
/// TypeMismatch.
RefreshOutcome refresh(const Context& ctx, const RefreshStep& directive, Model& m);

// ---------------------------------------------------------------------------
// Stories
// ---------------------------------------------------------------------------

struct RunOptions {
    bool failFast = false;
    EvalOptions eval;
};

struct StepReport {
    std::string kind; // context | sentence | refresh | expect
    nlohmann::json detail;
    std::vector<Diagnostic> diagnostics;
    bool failed = false;
};

struct StoryReport {
    std::vector<StepReport> steps;
    int expectations = 0;
    int passed = 0;
    int failedExpectations = 0;
    bool aborted = false;

    bool all_expectations_pass() const {
        return failedExpectations == 0 && !aborted;
    }
    nlohmann::json to_json() const;
    std::string to_text() const;
    /// Carriers and fibers of every type created during the story.
    nlohmann::json dump_types() const;
};

/// Threads a context through sentence, extension and refresh steps,
/// evaluating each truth-evaluable sentence and checking expectations.
/// A failed step halts the story with the state reported so far.
StoryReport run_story(const std::vector<DiscourseStep>& steps, Model model,
                      const RunOptions& opt = {});

nlohmann::json generated_type_to_json(const GeneratedType& g);

} // namespace dtgq
