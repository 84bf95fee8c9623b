#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dtgq/parser.hpp"
#include "helpers.hpp"

using namespace dtgq;
using namespace dtgq::test;

TEST_CASE("parse_model: base type") {
    auto r = parse_model("type M = {m1,m2}\n");
    REQUIRE(r.ok());
    Model m = to_model(r.value);
    CHECK(m.type("M").atoms == std::vector<std::string>{"m1", "m2"});
    CHECK(m.type("M").formals.empty());
}

TEST_CASE("parse_model: dependent type with projection") {
    auto r = parse_model("type M = {m1,m2}\n"
                         "type D(m:M) = {d1->m1, d2->m2}\n");
    REQUIRE(r.ok());
    Model m = to_model(r.value);
    const TypeDecl& d = m.type("D");
    REQUIRE(d.formals.size() == 1);
    CHECK(d.formals[0].var == "m");
    CHECK(d.projections[0].at("d1") == "m1");
    CHECK(d.projections[0].at("d2") == "m2");
    CHECK(fiber(m, *make_dep_type("D", {"x"}), {{"x", "m1"}}) == std::set<std::string>{"d1"});
}

TEST_CASE("parse_model: duplicate atom is a DuplicateDeclaration") {
    auto r = parse_model("type M = {m1, m1}\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].code == "DuplicateDeclaration");
}

TEST_CASE("parse_model: unknown atoms and types are diagnosed") {
    auto r = parse_model("type M = {m1}\n"
                         "pred L(a:M, b:W) = {(m1,zz)}\n");
    REQUIRE_FALSE(r.ok());
    bool unknownType = false;
    for (const auto& d : r.diagnostics) unknownType |= d.code == "UnknownType";
    CHECK(unknownType);
}

TEST_CASE("parse_model: pragma switches numerals") {
    Model m = model_from("pragma numerals=atleast\ntype S = {s1,s2,s3,s4}\n");
    CHECK(m.numerals() == NumeralsMode::AtLeast);
    auto q = m.quantifier("three");
    CHECK(*q.membership({"s1", "s2", "s3", "s4"}, {"s1", "s2", "s3", "s4"}));
}

TEST_CASE("parse failures carry spans inside the document") {
    std::string text = "type M = {m1,\n   ,m2}\n";
    auto r = parse_model(text);
    REQUIRE_FALSE(r.ok());
    int lines = 3; // 2 lines + trailing
    for (const auto& d : r.diagnostics) {
        CHECK(d.span.startLine >= 1);
        CHECK(d.span.startLine <= lines);
        CHECK(d.span.startCol >= 1);
    }
}

TEST_CASE("parse_discourse: sequential chain sentence") {
    auto r = parse_discourse("sentence phi1: forall m:M | exists w:W . L(m,w)\n");
    REQUIRE(r.ok());
    REQUIRE(r.value.size() == 1);
    const auto& s = std::get<SentenceStep>(r.value[0].step);
    CHECK(s.id == "phi1");
    CHECK(s.predicate == "L");
    CHECK(s.argVars == std::vector<std::string>{"m", "w"});
    const auto* seq = std::get_if<ChainExpr::Seq>(&s.chain->node);
    REQUIRE(seq != nullptr);
}

TEST_CASE("parse_discourse: sigma refresh") {
    auto r = parse_discourse("refresh sigma t2 = Sigma p:T_phi_Most . T_phi_Exists(s,p)\n");
    REQUIRE(r.ok());
    const auto& ref = std::get<RefreshStep>(r.value[0].step);
    CHECK(ref.kind == RefreshStep::Kind::Sigma);
    CHECK(ref.newVar == "t2");
    CHECK(ref.binderVar == "p");
    REQUIRE(ref.binderType.has_value());
    CHECK(ref.binderType->name == "T_phi_Most");
    CHECK(ref.body.name == "T_phi_Exists");
    CHECK(ref.body.args == std::vector<std::string>{"s", "p"});
}

TEST_CASE("parse_discourse: syntax error on empty term") {
    auto r = parse_discourse("sentence bad: forall m:M | . L(m)\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].code == "SyntaxError");
}

TEST_CASE("parse_discourse: unknown directives") {
    auto r = parse_discourse("refresh frobnicate x:Y\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diagnostics[0].code == "UnknownDirective");
    auto r2 = parse_discourse("explode everything\n");
    REQUIRE_FALSE(r2.ok());
    CHECK(r2.diagnostics[0].code == "UnknownDirective");
}

TEST_CASE("parse_discourse: context, pack, par, expect") {
    auto r = parse_discourse("context f:F, d:D(f)\n"
                             "sentence c: pack(three s:S, five a:A) . W(s,a)\n"
                             "sentence b: par(three s:S ; five a:A) . W(s,a)\n"
                             "expect c true\n");
    REQUIRE(r.ok());
    REQUIRE(r.value.size() == 4);
    const auto& ctx = std::get<ContextStep>(r.value[0].step);
    REQUIRE(ctx.specs.size() == 2);
    CHECK(ctx.specs[1].second.args == std::vector<std::string>{"f"});
    const auto& packStep = std::get<SentenceStep>(r.value[1].step);
    const auto* lf = std::get_if<ChainExpr::Leaf>(&packStep.chain->node);
    REQUIRE(lf != nullptr);
    CHECK(lf->phrases.size() == 2);
    const auto& parStep = std::get<SentenceStep>(r.value[2].step);
    CHECK(std::get_if<ChainExpr::Par>(&parStep.chain->node) != nullptr);
    const auto& expect = std::get<ExpectStep>(r.value[3].step);
    CHECK(expect.expected);
}

TEST_CASE("parse_discourse: counted quantifiers and dummy phrases") {
    auto r = parse_discourse("sentence s: f:F | atleast(2) d:D . O(f,d)\n");
    REQUIRE(r.ok());
    const auto& s = std::get<SentenceStep>(r.value[0].step);
    const auto* seq = std::get_if<ChainExpr::Seq>(&s.chain->node);
    REQUIRE(seq != nullptr);
    const auto& dummy = std::get<ChainExpr::Leaf>(seq->left->node);
    CHECK_FALSE(dummy.phrases[0].quantifier.has_value());
    const auto& counted = std::get<ChainExpr::Leaf>(seq->right->node);
    CHECK(counted.phrases[0].quantifier == std::string("atleast(2)"));
}

TEST_CASE("chain association is left-to-right and parentheses override it") {
    auto left = parse_discourse("sentence s: forall a:A | exists b:B | most c:C . P(a,b,c)\n");
    REQUIRE(left.ok());
    const auto& chain = std::get<SentenceStep>(left.value[0].step).chain;
    const auto* outer = std::get_if<ChainExpr::Seq>(&chain->node);
    REQUIRE(outer != nullptr);
    CHECK(std::get_if<ChainExpr::Seq>(&outer->left->node) != nullptr);
    CHECK(std::get_if<ChainExpr::Leaf>(&outer->right->node) != nullptr);

    auto right = parse_discourse("sentence s: forall a:A | (exists b:B | most c:C) . P(a,b,c)\n");
    REQUIRE(right.ok());
    const auto& chain2 = std::get<SentenceStep>(right.value[0].step).chain;
    const auto* outer2 = std::get_if<ChainExpr::Seq>(&chain2->node);
    REQUIRE(outer2 != nullptr);
    CHECK(std::get_if<ChainExpr::Leaf>(&outer2->left->node) != nullptr);
    CHECK(std::get_if<ChainExpr::Seq>(&outer2->right->node) != nullptr);
}

// ---------------------------------------------------------------------------
// Round-trip property
// ---------------------------------------------------------------------------

namespace {

ModelDoc random_model_doc(std::mt19937& rng) {
    ModelDoc doc;
    if (rng() % 3 == 0) doc.decls.emplace_back(PragmaStmt{"numerals", "atleast"});
    int nBase = 1 + static_cast<int>(rng() % 3);
    std::vector<TypeDeclStmt> types;
    for (int i = 0; i < nBase; ++i) {
        TypeDeclStmt t;
        t.name = "B" + std::to_string(i);
        int nAtoms = 1 + static_cast<int>(rng() % 4);
        for (int a = 0; a < nAtoms; ++a) t.elems.push_back({t.name + "a" + std::to_string(a), {}});
        types.push_back(t);
        doc.decls.emplace_back(t);
    }
    // one dependent type over a random base
    {
        TypeDeclStmt t;
        const TypeDeclStmt& parent = types[rng() % types.size()];
        t.name = "D0";
        t.params = {{"x", parent.name}};
        int nAtoms = static_cast<int>(rng() % 5);
        for (int a = 0; a < nAtoms; ++a)
            t.elems.push_back({"d" + std::to_string(a),
                               {parent.elems[rng() % parent.elems.size()].name}});
        types.push_back(t);
        doc.decls.emplace_back(t);
    }
    // one binary predicate over random bases
    {
        PredDeclStmt p;
        p.name = "R";
        const TypeDeclStmt& t1 = types[rng() % nBase];
        const TypeDeclStmt& t2 = types[rng() % nBase];
        p.params = {{"u", t1.name}, {"v", t2.name}};
        std::set<std::vector<std::string>> seen;
        int nTuples = static_cast<int>(rng() % 5);
        for (int k = 0; k < nTuples; ++k) {
            std::vector<std::string> tuple{t1.elems[rng() % t1.elems.size()].name,
                                           t2.elems[rng() % t2.elems.size()].name};
            if (seen.insert(tuple).second) p.tuples.push_back(tuple);
        }
        doc.decls.emplace_back(p);
    }
    return doc;
}

} // namespace

TEST_CASE("model documents round-trip through print and parse") {
    std::mt19937 rng(42);
    for (int iter = 0; iter < 200; ++iter) {
        ModelDoc doc = random_model_doc(rng);
        std::string text = print_model(doc);
        auto reparsed = parse_model(text);
        REQUIRE(reparsed.ok());
        CHECK(reparsed.value == doc);
        CHECK(print_model(reparsed.value) == text);
    }
}

TEST_CASE("comments and newlines inside braces are tolerated") {
    auto r = parse_model("# months and days\n"
                         "type M = {m1,\n  m2}\n\n"
                         "type D(m:M) = {\n  d1->m1,\n  d2->m2\n}\n");
    REQUIRE(r.ok());
    CHECK(to_model(r.value).type("D").atoms.size() == 2);
}
