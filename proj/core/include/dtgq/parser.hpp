#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dtgq/diagnostics.hpp"
#include "dtgq/model.hpp"
#include "dtgq/syntax.hpp"

namespace dtgq {

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

struct TypeRefExpr {
    std::string name;
    std::vector<std::string> args;
};

struct ElemDecl {
    std::string name;
    std::vector<std::string> parents; // in parameter order
};

struct TypeDeclStmt {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params; // name : type
    std::vector<ElemDecl> elems;
};

struct PredDeclStmt {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::vector<std::string>> tuples;
};

struct PragmaStmt {
    std::string key, value;
};

struct ModelDoc {
    std::vector<std::variant<TypeDeclStmt, PredDeclStmt, PragmaStmt>> decls;
};

bool operator==(const ModelDoc& a, const ModelDoc& b);

// ---------------------------------------------------------------------------
// Discourse scripts
// ---------------------------------------------------------------------------

struct QpExpr {
    std::optional<std::string> quantifier; // absent = dummy phrase
    std::string var;
    TypeRefExpr type;
};

struct ChainExpr;
using ChainExprPtr = std::shared_ptr<const ChainExpr>;

struct ChainExpr {
    struct Leaf {
        std::vector<QpExpr> phrases;
    };
    struct Seq {
        ChainExprPtr left, right;
    };
    struct Par {
        ChainExprPtr top, bottom;
    };
    std::variant<Leaf, Seq, Par> node;
};

struct ContextStep {
    std::vector<std::pair<std::string, TypeRefExpr>> specs;
};

struct SentenceStep {
    std::string id;
    ChainExprPtr chain;
    std::string predicate;
    std::vector<std::string> argVars;
};

struct RefreshStep {
    enum class Kind { Weaken, Sigma, Pi } kind;
    std::string newVar;
    // weaken: type of the new variable; sigma/pi: binder and body.
    TypeRefExpr type;
    std::string binderVar;
    std::optional<TypeRefExpr> binderType;
    TypeRefExpr body;
};

struct ExpectStep {
    std::string id;
    bool expected;
};

struct DiscourseStep {
    std::variant<ContextStep, SentenceStep, RefreshStep, ExpectStep> step;
    SourceSpan span;
};

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

template <typename T>
struct ParseResult {
    T value;
    std::vector<Diagnostic> diagnostics;

    bool ok() const {
        for (const auto& d : diagnostics)
            if (d.severity == Severity::Error) return false;
        return true;
    }
};

ParseResult<ModelDoc> parse_model(std::string_view text, const std::string& file = "<model>");
ParseResult<std::vector<DiscourseStep>> parse_discourse(std::string_view text,
                                                        const std::string& file = "<script>");

/// Canonical text of a model document; parse(print(doc)) == doc.
std::string print_model(const ModelDoc& doc);

/// Instantiates the parsed declarations as a Model. Base types get identity
/// payloads. The pragma, if present, sets the numerals mode.
Model to_model(const ModelDoc& doc);

TypeExprPtr to_type_expr(const TypeRefExpr& ref);

/// Assembles a checked pre-chain from the parsed tree via the composition
/// operations, against the given context.
PreChainPtr build_prechain(const ChainExpr& expr, const Context& ctx);

} // namespace dtgq
