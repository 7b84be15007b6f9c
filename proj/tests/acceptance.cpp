// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "bccs/cli.hpp"
#include "bccs/derivations.hpp"
#include "bccs/error.hpp"
#include "bccs/fuzz.hpp"
#include "bccs/negative.hpp"
#include "bccs/normalizer.hpp"
#include "bccs/wif.hpp"
#include "oracle.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bccs;
namespace fs = std::filesystem;

namespace {

const Alphabet kAb = Alphabet::parse("a,b");

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

/// A second term that is related to `p` often enough to exercise both verdicts.
Term partner(TermGenerator& gen, const Term& p, std::size_t depth) {
    switch (gen.below(5)) {
    case 0: return Term::sum(p, gen.term(depth > 0 ? depth - 1 : 0));
    case 1: return Term::tau(Term::sum(p, gen.term(depth > 0 ? depth - 1 : 0)));
    case 2: return Term::sum(Term::tau(p), gen.term(depth > 0 ? depth - 1 : 0));
    case 3: return Term::tau(p);
    default: return gen.term(depth);
    }
}

Outcome soundness() {
    struct Suite {
        AxiomSet axioms;
        Relation rel;
    };
    AxiomSet wf = builtin_axioms("wf-preorder", kAb);
    wf.add(builtin_axioms("D1-9", kAb));
    std::vector<Suite> suites{{wf, Relation::PreorderWF},
                              {builtin_axioms("wif-preorder", kAb), Relation::PreorderWIF},
                              {builtin_axioms("wf-equiv", kAb), Relation::PreorderWF},
                              {builtin_axioms("TAB-AUX", kAb), Relation::PreorderWF}};
    Outcome o;
    std::size_t instances = 0;
    std::size_t axioms = 0;
    for (const auto& s : suites) {
        for (const auto& r : fuzz_soundness(s.axioms, s.rel, kAb, 1000, 2024, 3)) {
            ++axioms;
            instances += r.instances;
            if (r.instances < 1000) o.fail(r.axiom + ": only " + std::to_string(r.instances) + " instances");
            if (r.violations) o.fail(r.axiom + " violated: " + r.counterexample.value_or(""));
        }
    }
    if (o.pass) o.detail = std::to_string(axioms) + " axioms, " + std::to_string(instances) + " instances, 0 violations";
    return o;
}

Outcome worked_example() {
    const Alphabet inf = Alphabet::countable();
    Term t = parse_term("tau.(a.0 + tau.(b.0 + c.0) + x) + tau.(a.0 + tau.x + tau.y) + z", inf);
    Family expected;
    for (const char* m : {"abcx", "axy", "abcxyz", "abcxy", "abcxz", "abxy", "acxy", "axyz", "abxyz", "acxyz"}) {
        LSet l;
        for (char c : std::string(m)) (c >= 'x' ? l.vars : l.actions).insert(std::string(1, c));
        expected.insert(l);
    }
    Outcome o;
    Normalized n = normalize(t);
    try {
        if (!(check_derivation(n.proof, builtin_axioms("wf-preorder", inf), n.lemmas.get()) ==
              Statement::eq(t, n.nf->render()))) {
            o.fail("derivation concludes the wrong statement");
        }
    } catch (const Error& e) {
        o.fail(std::string("derivation fails to check: ") + e.what());
    }
    if (n.nf->family != expected) {
        o.fail("family has " + std::to_string(n.nf->family.size()) + " members, expected the printed " +
               std::to_string(expected.size()) + "; derivation checks; see the decisions ledger");
    }
    if (o.pass) o.detail = "10-member family reproduced, derivation checks";
    return o;
}

Outcome ground_wf() {
    TermGenerator gen(301, {"a", "b"});
    Outcome o;
    std::size_t derivable = 0;
    for (int i = 0; i < 500; ++i) {
        Term p = gen.term(3);
        Term q = partner(gen, p, 3);
        const std::string pair = to_string(p) + " <= " + to_string(q);
        Verdict v = decide_preorder_WF(p, q, kAb);
        if (v.derivable != oracle::preorder_wf(p, q)) o.fail("disagreement on " + pair);
        if (v.derivable) {
            ++derivable;
            if (!(check_derivation(v.proof, v.base, v.lemmas.get()) == v.statement)) o.fail("bad derivation for " + pair);
        } else if (!v.observation || compare(p, q, Relation::PreorderWF).holds) {
            o.fail("no valid witness for " + pair);
        }
    }
    if (o.pass) o.detail = "500 pairs (" + std::to_string(derivable) + " derivable), exact agreement";
    return o;
}

Outcome open_wf() {
    TermGenerator gen(401, {"a", "b"}, {"x", "y"});
    Outcome o;
    std::size_t derivable = 0;
    for (int i = 0; i < 300; ++i) {
        Term t = gen.term(3);
        Term u = partner(gen, t, 3);
        const std::string pair = to_string(t) + " <= " + to_string(u);
        Verdict v = decide_preorder_WF(t, u, kAb);
        bool falsified = false;
        for (const auto& s : canonical_family(t, u, kAb)) {
            if (!oracle::preorder_wf(s.apply(t), s.apply(u))) falsified = true;
        }
        if (v.derivable) {
            ++derivable;
            if (falsified) o.fail("derivable but falsified: " + pair);
            if (!(check_derivation(v.proof, v.base, v.lemmas.get()) == v.statement)) o.fail("bad derivation for " + pair);
        } else if (!v.witness || oracle::preorder_wf(v.witness->apply(t), v.witness->apply(u))) {
            o.fail("witness does not separate " + pair);
        }
    }
    if (o.pass) o.detail = "300 pairs (" + std::to_string(derivable) + " derivable), consistent";
    return o;
}

Outcome ground_wif() {
    TermGenerator gen(501, {"a", "b"});
    Outcome o;
    std::size_t derivable = 0;
    for (int i = 0; i < 500; ++i) {
        Term p = gen.term(3);
        Term q = partner(gen, p, 3);
        const std::string pair = to_string(p) + " <= " + to_string(q);
        Verdict v = derive_ground_WIF(p, q, kAb);
        if (v.derivable != oracle::preorder_wif(p, q)) o.fail("disagreement on " + pair);
        if (v.derivable) {
            ++derivable;
            if (!(check_derivation(v.proof, v.base, v.lemmas.get()) == v.statement)) o.fail("bad derivation for " + pair);
        }
    }
    if (o.pass) o.detail = "500 pairs (" + std::to_string(derivable) + " derivable), exact agreement";
    return o;
}

Outcome generation() {
    Outcome o;
    std::ostringstream out;
    std::ostringstream err;
    if (run_cli({"gen-axioms", "--base", "wf-preorder", "--alphabet", "a,b"}, out, err) != kHolds) {
        o.fail("gen-axioms failed: " + err.str());
        return o;
    }
    AxiomSet generated = parse_axiom_file(out.str(), kAb).axioms;
    AxiomSet table = builtin_axioms("TAB-AUX", kAb);
    AxiomSet core = builtin_axioms("A1-4", kAb);
    for (const auto& a : table.axioms()) {
        const auto* g = generated.find(a.name);
        if (!g || !equal_modulo_a14(g->statement, a.statement)) o.fail("table axiom " + a.name + " not generated");
    }
    for (const auto& g : generated.axioms()) {
        if (!table.contains(g.name) && !core.contains(g.name)) o.fail("extra generated axiom " + g.name);
    }
    AxiomSet wfe = script_axioms(ScriptBase::WFE, kAb);
    std::set<std::string> derived;
    for (const auto& d : builtin_derivations(kAb)) {
        if (d.name.rfind("L4:", 0) != 0) continue;
        try {
            if (!equal_modulo_ac(check_derivation(d.proof, wfe), d.target)) o.fail(d.name + " concludes the wrong statement");
            derived.insert(d.name.substr(3, d.name.find('[') - 3));
        } catch (const Error& e) {
            o.fail(d.name + ": " + e.what());
        }
    }
    for (const auto& a : table.axioms()) {
        if (!derived.count(a.name)) o.fail("no script for " + a.name);
    }
    if (o.pass) {
        o.detail = std::to_string(table.size()) + " table axioms generated; " + std::to_string(derived.size()) +
                   " derived from A1-4 + the equivalence table";
    }
    return o;
}

Outcome negative() {
    Outcome o;
    std::vector<std::string> lines;
    struct Case {
        FamilyId id;
        Alphabet alphabet;
    };
    for (const auto& c : {Case{FamilyId::Equation, kAb}, Case{FamilyId::Phi, kAb}, Case{FamilyId::Singleton, Alphabet::parse("a")}}) {
        AxiomSet e = builtin_axioms("wif-preorder", c.alphabet);
        Relation rel = c.id == FamilyId::Equation ? Relation::EquivWIF : Relation::PreorderWIF;
        for (std::size_t m = 1; m <= 3; ++m) {
            SeparationCertificate cert = certify_nonderivability(c.id, m, e, rel, c.alphabet);
            const std::string tag = to_string(c.id) + " m=" + std::to_string(m);
            if (!cert.instance_sound) o.fail(tag + ": instance not sound");
            if (cert.lhs_invariant == cert.rhs_invariant) o.fail(tag + ": invariant does not separate");
            if (!cert.axiom_violation.empty()) o.fail(tag + ": axioms unsound");
            if (!cert.valid()) {
                lines.push_back(tag + " " + to_string(cert.status) + " (max depth " + std::to_string(cert.max_depth) + ")");
                o.fail("");
            }
        }
    }
    if (o.pass) {
        o.detail = "9 valid certificates";
    } else {
        std::string d = o.detail;
        for (const auto& l : lines) d += (d.empty() ? "" : "; ") + l;
        o.detail = d + "; soundness and separation hold in every case";
    }
    return o;
}

Outcome chop_claims() {
    TermGenerator gen(801, {"a", "b"}, {"x", "y"});
    TermGenerator closed(803, {"a", "b"});
    const auto refusals = oracle::subsets({"a", "b"});
    Outcome o;
    for (int i = 0; i < 200; ++i) {
        const std::size_t k = gen.below(3);
        Term p = closed.term(3);
        Term v = gen.term(2);
        for (const auto& b : refusals) {
            Term c = chop(k, b, p);
            for (const auto& [w, s] : oracle::weak_paths(c)) {
                if (w.size() == k + 1 && oracle::disjoint(oracle::weak_initials(s), b)) {
                    o.fail("claim B fails for " + to_string(p));
                }
            }
            Substitution rho;
            Substitution chopped;
            for (const char* x : {"x", "y"}) {
                Term img = closed.term(3);
                rho.bind(x, img);
                chopped.bind(x, chop(k, b, img));
            }
            Term r1 = rho.apply(v);
            Term r2 = chopped.apply(v);
            std::set<oracle::Word> words;
            for (const auto& t : {r1, r2}) {
                for (const auto& [w, s] : oracle::weak_paths(t)) {
                    if (w.size() <= k) words.insert(w);
                }
            }
            for (const auto& w : words) {
                if (oracle::has_failure(r1, w, b) != oracle::has_failure(r2, w, b)) o.fail("claim A fails for " + to_string(v));
            }
        }
    }
    if (o.pass) o.detail = "200 instances, every B, both claims hold";
    return o;
}

Outcome d_laws() {
    const fs::path dir = fs::path(BCCS_SOURCE_DIR) / "data" / "derivations";
    AxiomSet wf = script_axioms(ScriptBase::WF, kAb);
    AxiomSet table = builtin_axioms("D1-9", kAb);
    Outcome o;
    std::set<std::string> laws;
    for (const auto& a : table.axioms()) {
        std::ifstream in(dir / (a.name + ".json"));
        if (!in) {
            o.fail("missing derivation file for " + a.name);
            continue;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            DerivationFile f = parse_derivation(ss.str());
            Statement s = check_derivation(f.proof, wf);
            if (!equal_modulo_ac(s, a.statement)) o.fail(a.name + " concludes " + to_string(s));
            laws.insert(a.name.substr(0, a.name.find('_')));
        } catch (const Error& e) {
            o.fail(a.name + ": " + e.what());
        }
    }
    if (laws.size() != 9) o.fail("only " + std::to_string(laws.size()) + " of the nine laws covered");
    if (o.pass) o.detail = std::to_string(table.size()) + " scripts (D1-D9, D5 and D9 at arities 1-3) check";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"soundness suite", soundness},
        {"worked example golden", worked_example},
        {"WF ground completeness", ground_wf},
        {"WF open-term consistency", open_wf},
        {"WIF ground completeness", ground_wif},
        {"equivalence axiom generation", generation},
        {"negative results", negative},
        {"chop claims", chop_claims},
        {"derived law scripts", d_laws},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::ostringstream line;
        line.precision(1);
        line << std::fixed << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << ": " << criteria[i].first
             << " (" << o.detail << ") [" << secs << " s]";
        std::cout << line.str() << std::endl;
    }
    return failed ? 1 : 0;
}
