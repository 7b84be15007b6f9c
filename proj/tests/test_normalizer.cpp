#include "bccs/error.hpp"
#include "bccs/fuzz.hpp"
#include "bccs/normalizer.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace bccs;

namespace {

const Alphabet kInf = Alphabet::countable();
const Alphabet kAb = Alphabet::parse("a,b");
Term P(const char* s) { return parse_term(s, kInf); }

/// Letters from a to w are actions, x to z variables.
LSet L(const std::string& symbols) {
    LSet l;
    for (char c : symbols) (c >= 'x' ? l.vars : l.actions).insert(std::string(1, c));
    return l;
}

Family F(std::initializer_list<const char*> members) {
    Family f;
    for (const char* m : members) f.insert(L(m));
    return f;
}

void check_normalized(const Term& t, const Normalized& n) {
    AxiomSet base = builtin_axioms("wf-preorder", kInf);
    Statement s = check_derivation(n.proof, base, n.lemmas.get());
    CHECK(s == Statement::eq(t, n.nf->render()));
    CHECK(is_normal_form(n.nf->render()));
    CHECK(depth(n.nf->render()) == depth(t));
}

} // namespace

TEST_CASE("saturation") {
    CHECK(saturate(F({"a", "b"})) == F({"a", "b", "ab"}));
    CHECK(saturate(F({"a", "abc"})) == F({"a", "ab", "ac", "abc"}));
    CHECK(is_saturated(F({"a", "ab", "ac", "abc"})));
    CHECK_FALSE(is_saturated(F({"a", "abc"})));
    CHECK_FALSE(is_saturated(Family{}));
    CHECK_THROWS_AS(saturate(Family{}), UsageError);
    CHECK(to_string(F({"ax", "b"})) == "{{a,x}, {b}}");

    // the sets of the worked example after its first rewriting step
    Family ex = saturate(F({"abcx", "axy", "z"}));
    CHECK(ex.size() > 10);
    Family paper = F({"abcx", "axy", "abcxyz", "abcxy", "abcxz", "abxy", "acxy", "axyz", "abxyz", "acxyz"});
    CHECK(saturate(F({"abcx", "axy", "axyz"})) == paper);

    TermGenerator gen(2, {"a"});
    const std::string pool = "abcdxy";
    for (int i = 0; i < 200; ++i) {
        Family f;
        std::size_t n = 1 + gen.below(4);
        for (std::size_t j = 0; j < n; ++j) {
            std::string s;
            for (char c : pool) {
                if (gen.below(2)) s += c;
            }
            f.insert(L(s));
        }
        Family sat = saturate(f);
        REQUIRE(is_saturated(sat));
        CHECK(saturate(sat) == sat);
        CHECK(std::includes(sat.begin(), sat.end(), f.begin(), f.end()));
        LSet top;
        for (const auto& l : f) top = top.united(l);
        CHECK(sat.size() <= (std::size_t{1} << top.size()));
        CHECK(sat.count(top));
    }
}

TEST_CASE("normal form recognition") {
    CHECK(is_normal_form(P("0")));
    CHECK_FALSE(is_normal_form(P("tau.x + y")));
    CHECK_FALSE(is_normal_form(P("a.0 + a.b.0")));
    CHECK(is_normal_form(P("tau.x + tau.(x + y)")));
    CHECK(is_normal_form(P("a.(tau.0 + tau.b.tau.0)")));
    CHECK_FALSE(is_normal_form(P("tau.a.tau.0 + tau.b.tau.0")));
}

TEST_CASE("normalize: small instances") {
    auto n0 = normalize(P("0"));
    CHECK(n0.nf->render() == P("0"));
    CHECK(n0.nf->kind == NormalForm::Kind::Action);
    check_normalized(P("0"), n0);

    Term t = P("a.0 + a.b.0");
    auto n = normalize(t);
    CHECK(to_string(n.nf->render()) == "a.(tau.0 + tau.b.tau.0)");
    check_normalized(t, n);
    CHECK(compare(t, n.nf->render(), Relation::EquivWF).holds);

    auto m = normalize(P("tau.x + y"));
    CHECK(to_string(m.nf->render()) == "tau.x + tau.(x + y)");
    CHECK(m.nf->family == F({"x", "xy"}));
}

TEST_CASE("normalize: the family of the worked example after its D2 step") {
    Term t = P("tau.(a.0 + b.0 + c.0 + x) + tau.(a.0 + x + y) + z");
    auto n = normalize(t);
    REQUIRE(n.nf->kind == NormalForm::Kind::Tau);
    CHECK(n.nf->family ==
          F({"abcx", "axy", "abcxyz", "abcxy", "abcxz", "abxy", "acxy", "axyz", "abxyz", "acxyz"}));
    check_normalized(t, n);
}

TEST_CASE("normalize: the worked example as printed") {
    Term t = P("tau.(a.0 + tau.(b.0 + c.0) + x) + tau.(a.0 + tau.x + tau.y) + z");
    auto n = normalize(t);
    check_normalized(t, n);
    REQUIRE(n.nf->kind == NormalForm::Kind::Tau);
    CHECK(is_saturated(n.nf->family));
    // the a-child is the normal form of tau.t1 + tau.t4 with t1 = t4 = 0
    CHECK(n.nf->children.at("a")->render() == normalize(P("tau.0 + tau.0")).nf->render());
    // semantically equal to the input under every canonical substitution
    Term nf = n.nf->render();
    for (const auto& s : canonical_family(t, nf, kAb)) CHECK(compare(s.apply(t), s.apply(nf), Relation::EquivWF).holds);
}

TEST_CASE("normalize: random terms") {
    TermGenerator gen(13, {"a", "b"}, {"x", "y"});
    for (int i = 0; i < 150; ++i) {
        Term t = gen.term(3);
        INFO(to_string(t));
        auto n = normalize(t);
        check_normalized(t, n);
        if (is_closed(t)) CHECK(compare(t, n.nf->render(), Relation::EquivWF).holds);
    }
}

TEST_CASE("normalize: symbol cap") {
    Term t = P("tau.(a.0 + b.0 + c.0 + d.0 + x) + tau.(e.0 + y) + z");
    CHECK_THROWS_AS(normalize(t, NormalizeOptions{4}), UsageError);
    CHECK_NOTHROW(normalize(t, NormalizeOptions{12}));
}

TEST_CASE("decide_preorder_WF: worked instances") {
    auto v1 = decide_preorder_WF(P("x"), P("tau.x + y"), kInf);
    CHECK(v1.derivable);
    CHECK(check_derivation(v1.proof, v1.base, v1.lemmas.get()) == v1.statement);

    auto v2 = decide_preorder_WF(P("tau.0 + a.0"), P("0 + a.0"), kInf);
    CHECK_FALSE(v2.derivable);
    REQUIRE(v2.observation);
    CHECK(v2.observation->kind == Witness::Kind::FailurePair);
    CHECK(v2.observation->trace.empty());
    CHECK(v2.observation->refusal == std::set<std::string>{"a"});

    auto v3 = decide_preorder_WF(P("a.x"), P("a.(tau.x + tau.y)"), kInf);
    CHECK(v3.derivable);
    CHECK(check_derivation(v3.proof, v3.base, v3.lemmas.get()) == v3.statement);
    for (const auto& s : canonical_family(P("a.x"), P("a.(tau.x + tau.y)"), kAb)) {
        CHECK(compare(s.apply(P("a.x")), s.apply(P("a.(tau.x + tau.y)")), Relation::PreorderWF).holds);
    }
    CHECK(v3.describe().rfind("derivable: a.x <= a.(tau.x + tau.y)", 0) == 0);
}

TEST_CASE("decide_preorder_WF: the alphabet-sum case needs a finite alphabet") {
    Term t = P("a.0 + b.0");
    Term u = P("a.0 + b.0 + x");
    auto fin = decide_preorder_WF(t, u, kAb);
    CHECK(fin.derivable);
    CHECK(axioms_used(fin.proof, fin.lemmas.get()).count("WF_A"));
    CHECK(check_derivation(fin.proof, fin.base, fin.lemmas.get()) == fin.statement);
    auto inf = decide_preorder_WF(t, u, kInf);
    CHECK_FALSE(inf.derivable);
    REQUIRE(inf.witness);
    CHECK_FALSE(compare(inf.witness->apply(t), inf.witness->apply(u), Relation::PreorderWF).holds);
}

TEST_CASE("decide_equiv_WF") {
    CHECK(decide_equiv_WF(P("a.x + a.y"), P("a.(tau.x + tau.y)"), kInf).equivalent());
    CHECK(decide_equiv_WF(P("tau.b.x + a.0"), P("tau.b.x + a.0"), kInf).equivalent());

    auto e = decide_equiv_WF(P("tau.(x + y)"), P("tau.x + y"), kInf);
    CHECK(e.forward.derivable);
    CHECK_FALSE(e.backward.derivable);
    REQUIRE(e.backward.witness);
    Term l = e.backward.witness->apply(P("tau.x + y"));
    Term r = e.backward.witness->apply(P("tau.(x + y)"));
    CHECK(oracle::preorder_wf(l, r) == false);
}

TEST_CASE("decide_preorder_WF: random closed pairs agree with the oracle") {
    TermGenerator gen(19, {"a", "b"});
    for (int i = 0; i < 150; ++i) {
        Term t = gen.term(3);
        Term u = gen.below(2) ? Term::sum(t, gen.term(2)) : gen.term(3);
        INFO(to_string(t) << " <= " << to_string(u));
        auto v = decide_preorder_WF(t, u, kAb);
        REQUIRE(v.derivable == oracle::preorder_wf(t, u));
        if (v.derivable) {
            CHECK(check_derivation(v.proof, v.base, v.lemmas.get()) == v.statement);
        } else {
            REQUIRE(v.observation);
        }
    }
}

TEST_CASE("decide_preorder_WF: open pairs are consistent with the canonical family") {
    TermGenerator gen(23, {"a", "b"}, {"x", "y"});
    for (int i = 0; i < 100; ++i) {
        Term t = gen.term(2);
        Term u = gen.below(2) ? Term::tau(Term::sum(t, gen.term(2))) : gen.term(2);
        INFO(to_string(t) << " <= " << to_string(u));
        auto v = decide_preorder_WF(t, u, kAb);
        auto open = compare_open(t, u, Relation::PreorderWF, canonical_family(t, u, kAb));
        if (v.derivable) {
            CHECK(open.holds);
            CHECK(check_derivation(v.proof, v.base, v.lemmas.get()) == v.statement);
        } else {
            REQUIRE(v.witness);
            CHECK_FALSE(oracle::preorder_wf(v.witness->apply(t), v.witness->apply(u)));
        }
    }
}
