#include "dtgq/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dtgq {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct Token {
    enum class Kind { Ident, Number, Sym, Newline, End } kind;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run(std::vector<Diagnostic>& diags) {
        std::vector<Token> out;
        int depth = 0; // newlines inside brackets are insignificant
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (c == '\n') {
                SourceSpan sp = here(1);
                advance();
                if (depth == 0 && !out.empty() && out.back().kind != Token::Kind::Newline)
                    out.push_back({Token::Kind::Newline, "\n", sp});
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                SourceSpan sp = here(0);
                std::string ident;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                        text_[pos_] == '_' || text_[pos_] == '\'')) {
                    ident += text_[pos_];
                    advance();
                }
                sp.endLine = line_;
                sp.endCol = col_ - 1;
                out.push_back({Token::Kind::Ident, ident, sp});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                SourceSpan sp = here(0);
                std::string num;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    num += text_[pos_];
                    advance();
                }
                sp.endLine = line_;
                sp.endCol = col_ - 1;
                out.push_back({Token::Kind::Number, num, sp});
                continue;
            }
            if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                out.push_back({Token::Kind::Sym, "->", here(2)});
                advance();
                advance();
                continue;
            }
            if (std::string("={}(),:.|;").find(c) != std::string::npos) {
                if (c == '{' || c == '(') ++depth;
                if (c == '}' || c == ')') depth = std::max(0, depth - 1);
                out.push_back({Token::Kind::Sym, std::string(1, c), here(1)});
                advance();
                continue;
            }
            diags.push_back({Severity::Error, "SyntaxError",
                             std::string("unexpected character '") + c + "'", here(1)});
            advance();
        }
        out.push_back({Token::Kind::Newline, "\n", here(1)});
        out.push_back({Token::Kind::End, "", here(1)});
        return out;
    }

private:
    SourceSpan here(int len) const {
        SourceSpan sp;
        sp.file = file_;
        sp.startLine = sp.endLine = line_;
        sp.startCol = col_;
        sp.endCol = col_ + std::max(0, len - 1);
        return sp;
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Token cursor
// ---------------------------------------------------------------------------

struct ParseFailure {};

class Cursor {
public:
    Cursor(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
        : tokens_(std::move(tokens)), diags_(diags) {}

    const Token& peek(int ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    const Token& next() {
        const Token& t = peek();
        if (t.kind != Token::Kind::End) ++pos_;
        return t;
    }
    bool at(Token::Kind k) const { return peek().kind == k; }
    bool atSym(const std::string& s) const {
        return peek().kind == Token::Kind::Sym && peek().text == s;
    }
    bool atIdent(const std::string& s) const {
        return peek().kind == Token::Kind::Ident && peek().text == s;
    }
    bool eatSym(const std::string& s) {
        if (!atSym(s)) return false;
        next();
        return true;
    }
    bool eatIdent(const std::string& s) {
        if (!atIdent(s)) return false;
        next();
        return true;
    }
    void skipNewlines() {
        while (at(Token::Kind::Newline)) next();
    }
    [[noreturn]] void fail(const std::string& message, const char* code = "SyntaxError") {
        diags_.push_back({Severity::Error, code, message, peek().span});
        throw ParseFailure{};
    }
    std::string expectIdent(const std::string& what) {
        if (!at(Token::Kind::Ident)) fail("expected " + what);
        return next().text;
    }
    void expectSym(const std::string& s) {
        if (!eatSym(s)) fail("expected '" + s + "'");
    }
    void expectEndOfStatement() {
        if (at(Token::Kind::End)) return;
        if (!at(Token::Kind::Newline)) fail("expected end of statement");
        skipNewlines();
    }
    /// Resynchronize after an error: skip to the next statement boundary.
    void recover() {
        while (!at(Token::Kind::End) && !at(Token::Kind::Newline)) next();
        skipNewlines();
    }
    void error(const std::string& message, const char* code = "SyntaxError") {
        diags_.push_back({Severity::Error, code, message, peek().span});
    }

    std::vector<Diagnostic>& diags() { return diags_; }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic>& diags_;
};

std::vector<std::pair<std::string, std::string>> parse_params(Cursor& c) {
    std::vector<std::pair<std::string, std::string>> params;
    if (!c.eatSym("(")) return params;
    while (true) {
        std::string var = c.expectIdent("parameter name");
        c.expectSym(":");
        std::string type = c.expectIdent("parameter type");
        params.emplace_back(var, type);
        if (c.eatSym(")")) break;
        c.expectSym(",");
    }
    return params;
}

TypeRefExpr parse_typeref(Cursor& c) {
    TypeRefExpr ref;
    ref.name = c.expectIdent("type name");
    if (c.eatSym("(")) {
        while (true) {
            ref.args.push_back(c.expectIdent("index variable"));
            if (c.eatSym(")")) break;
            c.expectSym(",");
        }
    }
    return ref;
}

// ---------------------------------------------------------------------------
// Model grammar
// ---------------------------------------------------------------------------

TypeDeclStmt parse_typedecl(Cursor& c) {
    TypeDeclStmt decl;
    decl.name = c.expectIdent("type name");
    decl.params = parse_params(c);
    c.expectSym("=");
    c.expectSym("{");
    if (!c.eatSym("}")) {
        while (true) {
            ElemDecl elem;
            elem.name = c.expectIdent("element name");
            if (c.eatSym("->")) {
                // Parent count is fixed by the parameter arity, which keeps
                // `d1->m1, d2->m2` unambiguous.
                for (std::size_t i = 0; i < decl.params.size(); ++i) {
                    if (i) c.expectSym(",");
                    elem.parents.push_back(c.expectIdent("parent atom"));
                }
                if (decl.params.empty()) c.fail("element of a constant type has no parents");
            } else if (!decl.params.empty()) {
                c.fail("element '" + elem.name + "' of a dependent type needs '-> parents'");
            }
            decl.elems.push_back(std::move(elem));
            if (c.eatSym("}")) break;
            c.expectSym(",");
        }
    }
    return decl;
}

PredDeclStmt parse_preddecl(Cursor& c) {
    PredDeclStmt decl;
    decl.name = c.expectIdent("predicate name");
    decl.params = parse_params(c);
    if (decl.params.empty()) c.fail("predicate needs a signature");
    c.expectSym("=");
    c.expectSym("{");
    if (!c.eatSym("}")) {
        while (true) {
            std::vector<std::string> tuple;
            if (c.eatSym("(")) {
                while (true) {
                    tuple.push_back(c.expectIdent("atom"));
                    if (c.eatSym(")")) break;
                    c.expectSym(",");
                }
            } else {
                // unary sugar: a bare atom
                tuple.push_back(c.expectIdent("atom"));
            }
            decl.tuples.push_back(std::move(tuple));
            if (c.eatSym("}")) break;
            c.expectSym(",");
        }
    }
    return decl;
}

// ---------------------------------------------------------------------------
// Discourse grammar
// ---------------------------------------------------------------------------

bool starts_qp(Cursor& c) {
    // Either `QUANT var : type` or `var : type`.
    if (!c.at(Token::Kind::Ident)) return false;
    return true;
}

QpExpr parse_qp(Cursor& c) {
    QpExpr qp;
    std::string first = c.expectIdent("quantifier or variable");
    if ((first == "atleast" || first == "exactly") && c.atSym("(")) {
        c.expectSym("(");
        if (!c.at(Token::Kind::Number)) c.fail("expected a count");
        std::string n = c.next().text;
        c.expectSym(")");
        qp.quantifier = first + "(" + n + ")";
        qp.var = c.expectIdent("binding variable");
    } else if (c.at(Token::Kind::Ident)) {
        qp.quantifier = first;
        qp.var = c.next().text;
    } else {
        qp.var = first; // dummy phrase
    }
    c.expectSym(":");
    qp.type = parse_typeref(c);
    return qp;
}

ChainExprPtr parse_chain(Cursor& c);

ChainExprPtr parse_term(Cursor& c) {
    if (c.atIdent("pack") && c.peek(1).kind == Token::Kind::Sym && c.peek(1).text == "(") {
        c.next();
        c.expectSym("(");
        ChainExpr::Leaf leaf;
        while (true) {
            leaf.phrases.push_back(parse_qp(c));
            if (c.eatSym(")")) break;
            c.expectSym(",");
        }
        return std::make_shared<ChainExpr>(ChainExpr{std::move(leaf)});
    }
    if (c.atIdent("par") && c.peek(1).kind == Token::Kind::Sym && c.peek(1).text == "(") {
        c.next();
        c.expectSym("(");
        ChainExprPtr top = parse_chain(c);
        c.expectSym(";");
        ChainExprPtr bottom = parse_chain(c);
        c.expectSym(")");
        return std::make_shared<ChainExpr>(ChainExpr{ChainExpr::Par{top, bottom}});
    }
    if (c.atSym("(")) {
        c.expectSym("(");
        ChainExprPtr inner = parse_chain(c);
        c.expectSym(")");
        return inner;
    }
    if (!starts_qp(c)) c.fail("expected a quantifier phrase");
    ChainExpr::Leaf leaf;
    leaf.phrases.push_back(parse_qp(c));
    return std::make_shared<ChainExpr>(ChainExpr{std::move(leaf)});
}

ChainExprPtr parse_chain(Cursor& c) {
    ChainExprPtr chain = parse_term(c);
    while (c.eatSym("|")) {
        ChainExprPtr rhs = parse_term(c);
        chain = std::make_shared<ChainExpr>(ChainExpr{ChainExpr::Seq{chain, rhs}});
    }
    return chain;
}

DiscourseStep parse_step(Cursor& c) {
    DiscourseStep step;
    step.span = c.peek().span;
    std::string keyword = c.expectIdent("a step keyword");
    if (keyword == "context") {
        ContextStep ctx;
        if (!c.at(Token::Kind::Newline) && !c.at(Token::Kind::End)) {
            while (true) {
                std::string var = c.expectIdent("variable name");
                c.expectSym(":");
                ctx.specs.emplace_back(var, parse_typeref(c));
                if (!c.eatSym(",")) break;
            }
        }
        step.step = std::move(ctx);
    } else if (keyword == "sentence") {
        SentenceStep s;
        s.id = c.expectIdent("sentence identifier");
        c.expectSym(":");
        s.chain = parse_chain(c);
        c.expectSym(".");
        s.predicate = c.expectIdent("predicate symbol");
        c.expectSym("(");
        while (true) {
            s.argVars.push_back(c.expectIdent("argument variable"));
            if (c.eatSym(")")) break;
            c.expectSym(",");
        }
        step.step = std::move(s);
    } else if (keyword == "refresh") {
        RefreshStep r;
        std::string verb = c.expectIdent("refresh directive");
        if (verb == "weaken") {
            r.kind = RefreshStep::Kind::Weaken;
            r.newVar = c.expectIdent("variable name");
            c.expectSym(":");
            r.type = parse_typeref(c);
        } else if (verb == "sigma" || verb == "pi") {
            r.kind = verb == "sigma" ? RefreshStep::Kind::Sigma : RefreshStep::Kind::Pi;
            r.newVar = c.expectIdent("variable name");
            c.expectSym("=");
            std::string ctor = c.expectIdent("type constructor");
            if (!(ctor == "Sigma" || ctor == "Pi"))
                c.fail("expected 'Sigma' or 'Pi' after '='");
            if ((ctor == "Pi") != (r.kind == RefreshStep::Kind::Pi))
                c.fail("directive '" + verb + "' does not match constructor '" + ctor + "'");
            r.binderVar = c.expectIdent("bound variable");
            if (c.eatSym(":")) r.binderType = parse_typeref(c);
            c.expectSym(".");
            r.body = parse_typeref(c);
        } else {
            c.fail("unknown refresh directive '" + verb + "'", "UnknownDirective");
        }
        step.step = std::move(r);
    } else if (keyword == "expect") {
        ExpectStep e;
        e.id = c.expectIdent("sentence identifier");
        std::string value = c.expectIdent("'true' or 'false'");
        if (value == "true")
            e.expected = true;
        else if (value == "false")
            e.expected = false;
        else
            c.fail("expected 'true' or 'false', got '" + value + "'");
        step.step = std::move(e);
    } else {
        c.fail("unknown step '" + keyword + "'", "UnknownDirective");
    }
    c.expectEndOfStatement();
    return step;
}

} // namespace

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

ParseResult<ModelDoc> parse_model(std::string_view text, const std::string& file) {
    ParseResult<ModelDoc> result;
    Lexer lexer(text, file);
    Cursor c(lexer.run(result.diagnostics), result.diagnostics);
    c.skipNewlines();
    while (!c.at(Token::Kind::End)) {
        try {
            std::string keyword = c.expectIdent("'type', 'pred' or 'pragma'");
            if (keyword == "type") {
                result.value.decls.emplace_back(parse_typedecl(c));
            } else if (keyword == "pred") {
                result.value.decls.emplace_back(parse_preddecl(c));
            } else if (keyword == "pragma") {
                PragmaStmt p;
                p.key = c.expectIdent("pragma key");
                c.expectSym("=");
                p.value = c.expectIdent("pragma value");
                if (p.key != "numerals" || (p.value != "exactly" && p.value != "atleast"))
                    c.fail("unknown pragma '" + p.key + "=" + p.value + "'", "UnknownDirective");
                result.value.decls.emplace_back(std::move(p));
            } else {
                c.fail("unknown declaration '" + keyword + "'", "UnknownDirective");
            }
            c.expectEndOfStatement();
        } catch (const ParseFailure&) {
            c.recover();
        }
    }
    // Local well-formedness: duplicate names, duplicate atoms, known types
    // and atoms. Diagram coherence is validate_model's job.
    std::set<std::string> typeNames;
    std::map<std::string, std::set<std::string>> atoms;
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> typeParams;
    std::set<std::string> predNames;
    for (const auto& declVar : result.value.decls) {
        if (const auto* t = std::get_if<TypeDeclStmt>(&declVar)) {
            if (!typeNames.insert(t->name).second)
                result.diagnostics.push_back({Severity::Error, "DuplicateDeclaration",
                                              "type '" + t->name + "' declared twice",
                                              SourceSpan{file}});
            for (const auto& [pv, pt] : t->params)
                if (!typeNames.count(pt))
                    result.diagnostics.push_back({Severity::Error, "UnknownType",
                                                  "parameter type '" + pt +
                                                      "' is not declared before '" + t->name + "'",
                                                  SourceSpan{file}});
            auto& carrier = atoms[t->name];
            for (const auto& e : t->elems) {
                if (!carrier.insert(e.name).second)
                    result.diagnostics.push_back({Severity::Error, "DuplicateDeclaration",
                                                  "atom '" + e.name + "' of type '" + t->name +
                                                      "' declared twice",
                                                  SourceSpan{file}});
                for (std::size_t i = 0; i < e.parents.size() && i < t->params.size(); ++i)
                    if (!atoms[t->params[i].second].count(e.parents[i]))
                        result.diagnostics.push_back(
                            {Severity::Error, "UnknownAtom",
                             "parent '" + e.parents[i] + "' of '" + e.name +
                                 "' is not an atom of '" + t->params[i].second + "'",
                             SourceSpan{file}});
            }
            typeParams[t->name] = t->params;
        } else if (const auto* p = std::get_if<PredDeclStmt>(&declVar)) {
            if (!predNames.insert(p->name).second)
                result.diagnostics.push_back({Severity::Error, "DuplicateDeclaration",
                                              "predicate '" + p->name + "' declared twice",
                                              SourceSpan{file}});
            for (const auto& [pv, pt] : p->params)
                if (!typeNames.count(pt))
                    result.diagnostics.push_back({Severity::Error, "UnknownType",
                                                  "parameter type '" + pt + "' of predicate '" +
                                                      p->name + "' is not declared",
                                                  SourceSpan{file}});
            for (const auto& tuple : p->tuples) {
                if (tuple.size() != p->params.size()) {
                    result.diagnostics.push_back({Severity::Error, "ArityMismatch",
                                                  "a tuple of predicate '" + p->name + "' has " +
                                                      std::to_string(tuple.size()) +
                                                      " components, expected " +
                                                      std::to_string(p->params.size()),
                                                  SourceSpan{file}});
                    continue;
                }
                for (std::size_t i = 0; i < tuple.size(); ++i)
                    if (typeNames.count(p->params[i].second) &&
                        !atoms[p->params[i].second].count(tuple[i]))
                        result.diagnostics.push_back({Severity::Error, "UnknownAtom",
                                                      "atom '" + tuple[i] +
                                                          "' is not an atom of '" +
                                                          p->params[i].second + "'",
                                                      SourceSpan{file}});
            }
        }
    }
    return result;
}

ParseResult<std::vector<DiscourseStep>> parse_discourse(std::string_view text,
                                                        const std::string& file) {
    ParseResult<std::vector<DiscourseStep>> result;
    Lexer lexer(text, file);
    Cursor c(lexer.run(result.diagnostics), result.diagnostics);
    c.skipNewlines();
    while (!c.at(Token::Kind::End)) {
        try {
            result.value.push_back(parse_step(c));
        } catch (const ParseFailure&) {
            c.recover();
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string print_params(const std::vector<std::pair<std::string, std::string>>& params) {
    if (params.empty()) return "";
    std::string out = "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].first + ":" + params[i].second;
    }
    return out + ")";
}

} // namespace

std::string print_model(const ModelDoc& doc) {
    std::ostringstream out;
    for (const auto& declVar : doc.decls) {
        if (const auto* t = std::get_if<TypeDeclStmt>(&declVar)) {
            out << "type " << t->name << print_params(t->params) << " = {";
            for (std::size_t i = 0; i < t->elems.size(); ++i) {
                if (i) out << ", ";
                out << t->elems[i].name;
                if (!t->elems[i].parents.empty()) {
                    out << "->";
                    for (std::size_t j = 0; j < t->elems[i].parents.size(); ++j) {
                        if (j) out << ",";
                        out << t->elems[i].parents[j];
                    }
                }
            }
            out << "}\n";
        } else if (const auto* p = std::get_if<PredDeclStmt>(&declVar)) {
            out << "pred " << p->name << print_params(p->params) << " = {";
            for (std::size_t i = 0; i < p->tuples.size(); ++i) {
                if (i) out << ", ";
                out << "(";
                for (std::size_t j = 0; j < p->tuples[i].size(); ++j) {
                    if (j) out << ",";
                    out << p->tuples[i][j];
                }
                out << ")";
            }
            out << "}\n";
        } else if (const auto* pr = std::get_if<PragmaStmt>(&declVar)) {
            out << "pragma " << pr->key << "=" << pr->value << "\n";
        }
    }
    return out.str();
}

bool operator==(const ModelDoc& a, const ModelDoc& b) {
    return print_model(a) == print_model(b);
}

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

TypeExprPtr to_type_expr(const TypeRefExpr& ref) {
    return make_dep_type(ref.name, ref.args);
}

Model to_model(const ModelDoc& doc) {
    Model m;
    for (const auto& declVar : doc.decls) {
        if (const auto* t = std::get_if<TypeDeclStmt>(&declVar)) {
            TypeDecl decl;
            decl.name = t->name;
            // Reconstruct the formal telescope: a formal's own index
            // variables are the earlier formals its declared type depends on.
            for (const auto& [pv, pt] : t->params) {
                const TypeDecl* ptDecl = m.find_type(pt);
                std::vector<std::string> idx;
                if (ptDecl)
                    for (const auto& f : ptDecl->formals) idx.push_back(f.var);
                decl.formals.push_back({pv, make_dep_type(pt, idx)});
            }
            decl.projections.resize(decl.formals.size());
            for (const auto& e : t->elems) {
                decl.atoms.push_back(e.name);
                for (std::size_t i = 0; i < e.parents.size() && i < decl.formals.size(); ++i)
                    decl.projections[i][e.name] = e.parents[i];
            }
            m.declare_type(std::move(decl));
        } else if (const auto* p = std::get_if<PredDeclStmt>(&declVar)) {
            PredicateDecl decl;
            decl.name = p->name;
            for (const auto& [pv, pt] : p->params) {
                const TypeDecl* ptDecl = m.find_type(pt);
                std::vector<std::string> idx;
                if (ptDecl)
                    for (const auto& f : ptDecl->formals) idx.push_back(f.var);
                decl.formals.push_back({pv, make_dep_type(pt, idx)});
            }
            for (const auto& t2 : p->tuples) decl.tuples.insert(t2);
            m.declare_predicate(std::move(decl));
        } else if (const auto* pr = std::get_if<PragmaStmt>(&declVar)) {
            m.set_numerals(pr->value == "atleast" ? NumeralsMode::AtLeast
                                                  : NumeralsMode::Exactly);
        }
    }
    return m;
}

PreChainPtr build_prechain(const ChainExpr& expr, const Context& ctx) {
    return std::visit(
        [&](const auto& n) -> PreChainPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ChainExpr::Leaf>) {
                std::vector<QuantifierPhrase> phrases;
                for (const auto& qp : n.phrases)
                    phrases.push_back(
                        {qp.quantifier.value_or(""), qp.var, to_type_expr(qp.type)});
                return make_leaf(form_pack(phrases));
            } else if constexpr (std::is_same_v<T, ChainExpr::Seq>) {
                return seq_compose(build_prechain(*n.left, ctx), build_prechain(*n.right, ctx),
                                   ctx);
            } else {
                return par_compose(build_prechain(*n.top, ctx), build_prechain(*n.bottom, ctx));
            }
        },
        expr.node);
}

} // namespace dtgq
