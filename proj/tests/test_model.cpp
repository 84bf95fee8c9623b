#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dtgq/model.hpp"
#include "helpers.hpp"

using namespace dtgq;
using namespace dtgq::test;

namespace {

Model months_days() {
    return model_from("type M = {jan,feb}\n"
                      "type D(m:M) = {jan1->jan, jan2->jan, feb1->feb}\n");
}

} // namespace

TEST_CASE("validate_diagram: months/days projection is fine") {
    Model m = months_days();
    Context ctx = check_context({{"m", make_base_type("M")}, {"d", make_dep_type("D", {"m"})}});
    CHECK_NOTHROW(validate_diagram(m, ctx));
    CHECK(validate_model(m).empty());
}

TEST_CASE("validate_diagram: a broken triangle is reported with the atom") {
    // pi_{Z,x}(c1) = x1 but pi_{Y,x}(pi_{Z,y}(c1)) = pi_{Y,x}(y2) = x2
    Model m = model_from("type X = {x1,x2}\n"
                         "type Y(x:X) = {y1->x1, y2->x2}\n"
                         "type Z(x:X, y:Y) = {c1->x1,y2}\n");
    Context ctx = check_context({{"x", make_base_type("X")},
                                 {"y", make_dep_type("Y", {"x"})},
                                 {"z", make_dep_type("Z", {"x", "y"})}});
    try {
        validate_diagram(m, ctx);
        FAIL("expected TriangleViolation");
    } catch (const Error& e) {
        CHECK(e.code() == "TriangleViolation");
        CHECK(std::string(e.what()).find("c1") != std::string::npos);
    }
}

TEST_CASE("validate_diagram: dependency-free contexts are vacuously fine") {
    Model m = model_from("type A = {a}\ntype B = {b}\n");
    Context ctx = check_context({{"a", make_base_type("A")}, {"b", make_base_type("B")}});
    CHECK_NOTHROW(validate_diagram(m, ctx));
}

TEST_CASE("validate_diagram: missing carrier") {
    Model m = model_from("type A = {a}\n");
    Context ctx = check_context({{"q", make_base_type("Q")}});
    CHECK(error_code([&] { validate_diagram(m, ctx); }) == "MissingCarrier");
}

TEST_CASE("validate_model rejects predicate tuples outside the parameter space") {
    // d2's owner is f2, so (f1,d2) is not projection-compatible.
    Model m = model_from("type F = {f1,f2}\n"
                         "type D(f:F) = {d1->f1, d2->f2}\n"
                         "pred O(f:F, d:D) = {(f1,d2)}\n");
    auto diags = validate_model(m);
    REQUIRE_FALSE(diags.empty());
    CHECK(diags[0].code == "TupleOutsideParameterSpace");
}

TEST_CASE("fiber") {
    Model m = months_days();
    SUBCASE("fibers of the projection") {
        CHECK(fiber(m, *make_dep_type("D", {"m"}), {{"m", "jan"}}) ==
              std::set<std::string>{"jan1", "jan2"});
        CHECK(fiber(m, *make_dep_type("D", {"m"}), {{"m", "feb"}}) ==
              std::set<std::string>{"feb1"});
    }
    SUBCASE("constant types: the whole carrier over the empty assignment") {
        CHECK(fiber(m, *make_base_type("M"), {}) == std::set<std::string>{"feb", "jan"});
    }
    SUBCASE("missing index binding") {
        CHECK(error_code([&] { fiber(m, *make_dep_type("D", {"m"}), {}); }) ==
              "MissingIndexBinding");
    }
    SUBCASE("fibers partition the carrier") {
        std::set<std::string> all;
        for (const auto& a : m.type("M").atoms) {
            auto f = fiber(m, *make_dep_type("D", {"m"}), {{"m", a}});
            for (const auto& atom : f) CHECK(all.insert(atom).second);
        }
        CHECK(all.size() == m.type("D").atoms.size());
    }
}

TEST_CASE("parameter_space") {
    SUBCASE("dependency-free contexts give cartesian products") {
        Model m = model_from("type M = {m1,m2}\ntype W = {w1,w2}\n");
        Context ctx =
            check_context({{"m", make_base_type("M")}, {"w", make_base_type("W")}});
        CHECK(parameter_space(m, ctx).size() == 4);
    }
    SUBCASE("a dependency chain sums the fiber sizes") {
        Model m = model_from("type M = {m1,m2}\n"
                             "type D(m:M) = {a->m1, b->m1, c->m2, d->m2, e->m2}\n");
        Context ctx =
            check_context({{"m", make_base_type("M")}, {"d", make_dep_type("D", {"m"})}});
        CHECK(parameter_space(m, ctx).size() == 5);
    }
    SUBCASE("the empty context has exactly one assignment") {
        Model m;
        CHECK(parameter_space(m, Context{}).size() == 1);
    }
}

TEST_CASE("sigma_denotation") {
    SUBCASE("direct coproduct of fibers") {
        Model m = model_from("type Y = {y1,y2}\n"
                             "type Z(y:Y) = {z1->y1, z2->y2, z3->y2}\n");
        SigmaType s{"v", make_base_type("Y"), make_dep_type("Z", {"v"})};
        TypeDecl d = sigma_denotation(m, s, "SigmaZ");
        CHECK(d.atoms == std::vector<std::string>{"(y1,z1)", "(y2,z2)", "(y2,z3)"});
        CHECK(d.formals.empty());
        std::size_t total = 0;
        for (const auto& b : m.type("Y").atoms)
            total += fiber(m, *make_dep_type("Z", {"v"}), {{"v", b}}).size();
        CHECK(d.atoms.size() == total);
    }
    SUBCASE("all fibers empty gives an empty carrier") {
        Model m = model_from("type Y = {y1}\ntype Z(y:Y) = {}\n");
        SigmaType s{"v", make_base_type("Y"), make_dep_type("Z", {"v"})};
        CHECK(sigma_denotation(m, s, "SigmaZ").atoms.empty());
    }
    SUBCASE("residual parameters keep their projections") {
        Model m = model_from("type X = {x1,x2}\n"
                             "type Y(x:X) = {y1->x1, y2->x2}\n"
                             "type Z(x:X, y:Y) = {z1->x1,y1, z2->x2,y2}\n");
        SigmaType s{"v", make_dep_type("Y", {"u"}), make_dep_type("Z", {"u", "v"})};
        TypeDecl d = sigma_denotation(m, s, "SigmaZ");
        REQUIRE(d.formals.size() == 1);
        CHECK(d.formals[0].var == "x");
        CHECK(d.projections[0].at("(y1,z1)") == "x1");
        CHECK(d.projections[0].at("(y2,z2)") == "x2");
    }
    SUBCASE("unknown components") {
        Model m;
        SigmaType s{"v", make_base_type("Y"), make_dep_type("Z", {"v"})};
        CHECK(error_code([&] { sigma_denotation(m, s, "S"); }) == "UninterpretedComponent");
    }
}

TEST_CASE("builtin_quantifier memberships") {
    std::set<std::string> z{"a", "b", "c"};
    auto member = [&](const std::string& q, std::set<std::string> s) {
        return *builtin_quantifier(q).membership(s, z);
    };
    SUBCASE("forall") {
        CHECK(member("forall", {"a", "b", "c"}));
        CHECK_FALSE(member("forall", {"a", "b"}));
    }
    SUBCASE("exists on an empty candidate") {
        CHECK_FALSE(member("exists", {}));
        CHECK(member("exists", {"a"}));
    }
    SUBCASE("no") {
        CHECK(member("no", {}));
        CHECK_FALSE(member("no", {"a"}));
    }
    SUBCASE("most is a strict majority") {
        std::set<std::string> z11, s6, s5;
        for (int i = 0; i < 11; ++i) z11.insert("e" + std::to_string(i));
        for (int i = 0; i < 6; ++i) s6.insert("e" + std::to_string(i));
        for (int i = 0; i < 5; ++i) s5.insert("e" + std::to_string(i));
        CHECK(*builtin_quantifier("most").membership(s6, z11));
        CHECK_FALSE(*builtin_quantifier("most").membership(s5, z11));
        CHECK_FALSE(*builtin_quantifier("most").membership({}, {}));
    }
    SUBCASE("counted quantifiers") {
        CHECK(member("atleast(2)", {"a", "b"}));
        CHECK_FALSE(member("atleast(2)", {"a"}));
        CHECK(member("exactly(2)", {"a", "b"}));
        CHECK_FALSE(member("exactly(2)", {"a", "b", "c"}));
    }
    SUBCASE("unknown quantifier") {
        CHECK(error_code([] { builtin_quantifier("wibble"); }) == "UnknownQuantifier");
    }
}

TEST_CASE("builtin memberships are invariant under renaming atoms") {
    std::mt19937 rng(5);
    std::vector<std::string> quants = {"forall", "exists", "no",        "most",
                                       "atleast(1)", "atleast(2)", "exactly(0)", "exactly(2)"};
    for (int iter = 0; iter < 200; ++iter) {
        int n = 1 + static_cast<int>(rng() % 5);
        std::vector<std::string> atoms = make_atoms("a", n);
        std::set<std::string> z(atoms.begin(), atoms.end()), s;
        for (const auto& a : atoms)
            if (rng() % 2) s.insert(a);
        // random bijection: a permutation with fresh names
        std::vector<std::string> renamed = make_atoms("r", n);
        std::shuffle(renamed.begin(), renamed.end(), rng);
        std::map<std::string, std::string> sigma;
        for (int i = 0; i < n; ++i) sigma[atoms[i]] = renamed[i];
        std::set<std::string> zs, ss;
        for (const auto& a : z) zs.insert(sigma[a]);
        for (const auto& a : s) ss.insert(sigma[a]);
        for (const auto& q : quants) {
            auto d = builtin_quantifier(q);
            CHECK(*d.membership(s, z) == *d.membership(ss, zs));
        }
    }
}

TEST_CASE("numerals resolve through the model's mode") {
    Model m;
    CHECK(m.quantifier("three").symbol == "three");
    CHECK(*m.quantifier("three").membership({"a", "b", "c"}, {"a", "b", "c", "d"}));
    CHECK_FALSE(*m.quantifier("three").membership({"a", "b"}, {"a", "b", "c", "d"}));
    // exactly by default
    std::set<std::string> four{"a", "b", "c", "d"};
    CHECK_FALSE(*m.quantifier("three").membership(four, four));
    m.set_numerals(NumeralsMode::AtLeast);
    CHECK(*m.quantifier("three").membership(four, four));
}

TEST_CASE("registered quantifiers may be partial") {
    Model m;
    QuantifierDenotation q;
    q.symbol = "half";
    q.membership = [](const std::set<std::string>& s,
                      const std::set<std::string>& z) -> std::optional<bool> {
        if (z.size() % 2 != 0) return std::nullopt; // undefined on odd grounds
        return s.size() * 2 == z.size();
    };
    m.register_quantifier(q);
    CHECK(*m.quantifier("half").membership({"a"}, {"a", "b"}));
    CHECK_FALSE(m.quantifier("half").membership({"a"}, {"a", "b", "c"}).has_value());
}

TEST_CASE("model JSON dump is deterministic") {
    Model m = months_days();
    auto a = model_to_json(m).dump();
    auto b = model_to_json(months_days()).dump();
    CHECK(a == b);
    CHECK(a.find("\"schemaVersion\":1") != std::string::npos);
    CHECK(a.find("jan1") != std::string::npos);
}
