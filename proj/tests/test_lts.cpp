#include "bccs/error.hpp"
#include "bccs/fuzz.hpp"
#include "bccs/lts.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace bccs;

namespace {

const Alphabet kAb = Alphabet::parse("a,b");
Term P(const char* s) { return parse_term(s, Alphabet::countable()); }

oracle::Word word(const Trace& t) {
    oracle::Word w;
    for (const auto& s : t) w.push_back(s.name);
    return w;
}

bool holds(const char* p, const char* q, Relation r) { return compare(P(p), P(q), r).holds; }

} // namespace

TEST_CASE("single and weak steps") {
    auto ts = transitions(P("a.0 + tau.b.0"));
    CHECK(ts.size() == 2);
    CHECK(transitions(P("x")).empty());
    CHECK(weak_step(P("tau.tau.a.0"), std::nullopt).size() == 3);
    CHECK(weak_step(P("tau.a.tau.0"), Label::action("a")) == std::set<Term>{P("tau.0"), P("0")});
    CHECK(initials(P("tau.a.0 + b.0"), InitialsKind::Weak) == std::set<Label>{Label::action("a"), Label::action("b")});
    CHECK(initials(P("tau.a.0 + b.0"), InitialsKind::Strong) == std::set<Label>{Label::tau(), Label::action("b")});
}

TEST_CASE("observations under the open-term convention") {
    auto o = observations(P("a.x + b.0"));
    CHECK(o.var_traces.count({action_trace("a", 1), "x"}));
    CHECK(o.traces.count(action_trace("a", 1)));
    CHECK(o.completed_traces.count(Trace{Symbol{"a", false}, Symbol{"x", true}}));
    CHECK(norm(P("a.a.0 + tau.b.0")) == 1);
    CHECK(norm(P("tau.0 + a.0")) == 0);
}

TEST_CASE("failure representation matches path enumeration") {
    TermGenerator gen(3, {"a", "b", "c"});
    for (int i = 0; i < 150; ++i) {
        Term p = gen.term(4);
        auto repr = observations(p).failure_repr;
        for (const auto& [w, s] : oracle::weak_paths(p)) {
            for (const auto& b : oracle::subsets({"a", "b", "c"})) {
                bool direct = oracle::has_failure(p, w, b);
                bool via_repr = false;
                for (const auto& [sigma, init] : repr) {
                    if (word(sigma) == w && oracle::disjoint(init, b)) via_repr = true;
                }
                REQUIRE(direct == via_repr);
            }
        }
    }
}

TEST_CASE("compare: worked instances") {
    CHECK(holds("tau.0", "0", Relation::LeqWF));
    CHECK_FALSE(holds("tau.0 + a.0", "0 + a.0", Relation::LeqWF));
    CHECK_FALSE(holds("tau.0", "0", Relation::PreorderWF));
    auto tau = compare(P("tau.0"), P("0"), Relation::PreorderWF);
    REQUIRE(tau.witness);
    CHECK(tau.witness->kind == Witness::Kind::TauCondition);

    auto wif = compare(P("tau.a.0"), P("tau.a.0 + b.0"), Relation::PreorderWIF);
    CHECK_FALSE(wif.holds);
    REQUIRE(wif.witness);
    CHECK(wif.witness->kind == Witness::Kind::TraceDifference);
    CHECK(word(wif.witness->trace) == oracle::Word{"b"});

    CHECK(holds("tau.a.a.0 + tau.(a.0 + a.a.0)", "tau.(a.0 + a.a.0)", Relation::EquivWIF));
    CHECK_THROWS_AS(compare(P("x"), P("0"), Relation::PreorderWF), UsageError);
}

TEST_CASE("compare: failure witness for tau.0 + a.0 versus 0 + a.0") {
    auto r = compare(P("tau.0 + a.0"), P("0 + a.0"), Relation::PreorderWF);
    REQUIRE(r.witness);
    CHECK(r.witness->kind == Witness::Kind::FailurePair);
    CHECK(r.witness->trace.empty());
    CHECK(r.witness->refusal == std::set<std::string>{"a"});
    CHECK(r.witness->describe().rfind("failure pair (ε; {a})", 0) == 0);
}

TEST_CASE("compare agrees with the brute-force oracles") {
    TermGenerator gen(5, {"a", "b"});
    for (int i = 0; i < 400; ++i) {
        Term p = gen.term(3);
        Term q = gen.below(3) == 0 ? Term::sum(p, gen.term(2)) : gen.term(3);
        REQUIRE(compare(p, q, Relation::LeqWF).holds == oracle::leq_wf(p, q));
        REQUIRE(compare(p, q, Relation::PreorderWF).holds == oracle::preorder_wf(p, q));
        REQUIRE(compare(p, q, Relation::PreorderWIF).holds == oracle::preorder_wif(p, q));
        REQUIRE(compare(p, q, Relation::EquivWF).holds == (oracle::preorder_wf(p, q) && oracle::preorder_wf(q, p)));
        REQUIRE(compare(p, q, Relation::TraceEq).holds == (oracle::traces(p) == oracle::traces(q)));
    }
}

TEST_CASE("WIF characterization matches the bounded refusal oracle") {
    TermGenerator gen(17, {"a", "b"});
    int compared = 0;
    for (int i = 0; i < 400 && compared < 150; ++i) {
        Term p = gen.term(2);
        Term q = gen.below(2) ? Term::sum(p, gen.term(1)) : gen.term(2);
        bool bounded;
        try {
            bounded = oracle::preorder_wif_bounded(p, q);
        } catch (const std::runtime_error&) {
            continue;
        }
        ++compared;
        REQUIRE(compare(p, q, Relation::PreorderWIF).holds == bounded);
    }
    CHECK(compared >= 100);
}

TEST_CASE("witnesses are genuine") {
    TermGenerator gen(23, {"a", "b"});
    for (int i = 0; i < 300; ++i) {
        Term p = gen.term(3);
        Term q = gen.term(3);
        auto r = compare(p, q, Relation::PreorderWF);
        if (r.holds) continue;
        REQUIRE(r.witness);
        const auto& w = *r.witness;
        if (w.kind == Witness::Kind::FailurePair) {
            const Term& has = w.reversed ? q : p;
            const Term& lacks = w.reversed ? p : q;
            CHECK(oracle::has_failure(has, word(w.trace), w.refusal));
            CHECK_FALSE(oracle::has_failure(lacks, word(w.trace), w.refusal));
        } else {
            CHECK(w.kind == Witness::Kind::TauCondition);
            CHECK(oracle::has_tau(p));
            CHECK_FALSE(oracle::has_tau(q));
        }
    }
}

TEST_CASE("preorders are reflexive and transitive") {
    TermGenerator gen(29, {"a", "b"});
    for (int i = 0; i < 500; ++i) {
        Term p = gen.term(3);
        Term q = gen.below(2) ? Term::sum(p, gen.term(2)) : Term::tau(p);
        Term r = gen.below(2) ? Term::sum(q, gen.term(2)) : Term::tau(q);
        for (Relation rel : {Relation::PreorderWF, Relation::PreorderWIF}) {
            REQUIRE(compare(p, p, rel).holds);
            if (compare(p, q, rel).holds && compare(q, r, rel).holds) REQUIRE(compare(p, r, rel).holds);
        }
    }
}

TEST_CASE("precongruence under choice and prefixing") {
    TermGenerator gen(31, {"a", "b"});
    int related = 0;
    for (int i = 0; i < 600; ++i) {
        Term p1 = gen.term(2);
        Term q1 = gen.below(2) ? Term::sum(p1, gen.term(2)) : Term::tau(p1);
        Term p2 = gen.term(2);
        Term q2 = gen.below(2) ? Term::tau(Term::sum(p2, gen.term(1))) : p2;
        for (Relation rel : {Relation::PreorderWF, Relation::PreorderWIF}) {
            if (!compare(p1, q1, rel).holds || !compare(p2, q2, rel).holds) continue;
            ++related;
            REQUIRE(compare(Term::sum(p1, p2), Term::sum(q1, q2), rel).holds);
            Label l = gen.label(true);
            REQUIRE(compare(Term::prefix(l, p1), Term::prefix(l, q1), rel).holds);
        }
    }
    CHECK(related > 50);
}

TEST_CASE("WIF inclusion preserves completed traces") {
    TermGenerator gen(37, {"a", "b"});
    for (int i = 0; i < 500; ++i) {
        Term p = gen.term(3);
        Term q = gen.below(2) ? Term::tau(Term::sum(p, gen.term(2))) : Term::sum(p, Term::tau(p));
        if (!compare(p, q, Relation::PreorderWIF).holds) continue;
        auto cp = oracle::completed_traces(p);
        auto cq = oracle::completed_traces(q);
        REQUIRE(std::includes(cq.begin(), cq.end(), cp.begin(), cp.end()));
    }
}

TEST_CASE("chop claims") {
    TermGenerator gen(41, {"a", "b"}, {"x", "y"});
    TermGenerator closed(43, {"a", "b"});
    const std::set<std::string> acts{"a", "b"};
    for (int i = 0; i < 200; ++i) {
        const std::size_t k = gen.below(3);
        const auto bs = oracle::subsets(acts);
        const auto& b = bs[gen.below(bs.size())];
        Term p = closed.term(3);
        Term c = chop(k, b, p);
        // claim B: no failure pair (c0...ck, B)
        for (const auto& [w, s] : oracle::weak_paths(c)) {
            if (w.size() == k + 1) REQUIRE_FALSE(oracle::disjoint(oracle::weak_initials(s), b));
        }
        // claim A: rho and chop_k . rho agree on failure pairs of length <= k
        Term v = gen.term(2);
        Substitution rho;
        Substitution rho2;
        for (const auto& x : {"x", "y"}) {
            Term img = closed.term(3);
            rho.bind(x, img);
            rho2.bind(x, chop(k, b, img));
        }
        Term r1 = rho.apply(v);
        Term r2 = rho2.apply(v);
        std::set<oracle::Word> words;
        for (const auto& [w, s] : oracle::weak_paths(r1)) {
            if (w.size() <= k) words.insert(w);
        }
        for (const auto& [w, s] : oracle::weak_paths(r2)) {
            if (w.size() <= k) words.insert(w);
        }
        for (const auto& w : words) REQUIRE(oracle::has_failure(r1, w, b) == oracle::has_failure(r2, w, b));
    }
    CHECK(chop(0, {"b"}, P("a.a.0 + b.a.0")) == P("0 + b.b.0"));
    CHECK(chop(1, {}, P("tau.a.b.0")) == P("tau.a.0"));
}

TEST_CASE("canonical family contents") {
    Term t = P("a.x");
    Term u = P("a.x + x");
    auto fam = canonical_family(t, u, kAb);
    REQUIRE_FALSE(fam.empty());
    CHECK(fam.front().apply(t) == P("a.0"));
    for (const auto& s : fam) CHECK(s.closes({"x"}));
    CHECK(variables_in_order(P("y + x"), P("z + x")) == std::vector<std::string>{"y", "x", "z"});

    auto r = compare_open(t, u, Relation::PreorderWIF, fam);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness);
    CHECK(r.witness->substitution);
}
