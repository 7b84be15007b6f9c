#include "bccs/wif.hpp"

#include "bccs/error.hpp"

#include <algorithm>

namespace bccs {

namespace {

bool is_tau_summand(const Term& s) { return s.is_prefix() && s.label().is_tau(); }

/// The action summands of a stable term, by action.
std::map<std::string, std::vector<Term>> by_action(const std::vector<Term>& summands) {
    std::map<std::string, std::vector<Term>> out;
    for (const auto& s : summands) out[s.label().name].push_back(s.body());
    return out;
}

class WifEngine {
public:
    explicit WifEngine(const Alphabet& alphabet)
        : axioms_(builtin_axioms("wif-preorder", alphabet)), lib_(lemma_library(ScriptBase::WIF, alphabet)),
          pb_(axioms_, lib_.get()) {}

    const AxiomSet& axioms() const { return axioms_; }
    std::shared_ptr<Library> library() const { return lib_; }

    /// p <= q, assuming p is below q semantically.
    Proof derive(const Term& p, const Term& q) {
        auto qs = summands(canonical(q));
        if (std::none_of(qs.begin(), qs.end(), is_tau_summand)) return derive_stable(p, q);
        return derive_unstable(p, q);
    }

private:
    struct Prepared {
        Proof proof; // t == sum of tau.taus[i] plus acts
        std::vector<Term> taus;
        std::vector<Term> acts;
        Term term() const {
            std::vector<Term> out;
            for (const auto& b : taus) out.push_back(Term::tau(b));
            out.insert(out.end(), acts.begin(), acts.end());
            return Term::sum_of(out);
        }
    };

    Proof group(const Term& t, std::map<std::string, std::vector<Term>>& groups) {
        Term c = canonical(t);
        auto ss = summands(c);
        for (const auto& s : ss) {
            if (!s.is_prefix() || !s.label().is_action()) throw InternalInconsistency("unstable summand in " + to_string(t));
        }
        groups = by_action(ss);
        std::vector<Proof> parts;
        for (const auto& [a, bodies] : groups) parts.push_back(d5(a, bodies));
        return pb_.trans({pb_.dedup(t), parts.empty() ? pb_.refl(Term::nil()) : pb_.sum(parts)});
    }

    Proof derive_stable(const Term& p, const Term& q) {
        std::map<std::string, std::vector<Term>> gp;
        std::map<std::string, std::vector<Term>> gq;
        Proof ep = group(p, gp);
        Proof eq = group(q, gq);
        std::vector<Proof> parts;
        for (const auto& [a, bodies] : gp) {
            auto it = gq.find(a);
            if (it == gq.end()) throw InternalInconsistency("initial action " + a + " of " + to_string(p) + " missing on the right");
            parts.push_back(pb_.prefix(Label::action(a), derive(tau_sum(bodies), tau_sum(it->second))));
        }
        if (gp.size() != gq.size()) throw InternalInconsistency("initial actions differ: " + to_string(p) + " vs " + to_string(q));
        Proof mid = parts.empty() ? pb_.refl(Term::nil()) : pb_.sum(parts);
        return pb_.trans({ep, mid, pb_.sym(eq)});
    }

    Proof derive_unstable(const Term& p, const Term& q) {
        Prepared sp = prepare(p);
        Prepared sq = prepare(q);
        std::vector<Proof> chain{sp.proof};

        // tau.p_i <= tau.q_j + p_i for a q_j whose traces lie within those of p_i.
        std::vector<Proof> steps;
        std::vector<Term> chosen;
        for (const auto& pi : sp.taus) {
            Term qj = pick(pi, sq.taus);
            Proof inner = derive_stable(pi, Term::sum(pi, qj));
            Proof wf2 = pb_.ax("WF2", Substitution().bind("x", qj).bind("y", pi));
            steps.push_back(pb_.trans({pb_.prefix(Label::tau(), inner), wf2}));
            if (std::find(chosen.begin(), chosen.end(), qj) == chosen.end()) chosen.push_back(qj);
        }
        const Term rp = Term::sum_of(sp.acts);
        const Term rq = Term::sum_of(sq.acts);
        if (!steps.empty()) {
            steps.push_back(pb_.refl(rp));
            chain.push_back(pb_.sum(steps));
        }
        std::vector<Term> chosen_taus;
        for (const auto& c : chosen) chosen_taus.push_back(Term::tau(c));
        const Term head = Term::sum_of(chosen_taus);
        chain.push_back(pb_.a14(chain.back()->conclusion.rhs, Term::sum(head, rp)));

        // The action summands, by the stable case.
        chain.push_back(pb_.plus(derive_stable(rp, rq), head));

        // Remaining tau summands of q: S == S + q_j by A3, then WIF3.
        Term s = Term::sum(head, rq);
        for (const auto& qj : sq.taus) {
            if (std::find(chosen.begin(), chosen.end(), qj) != chosen.end()) continue;
            chain.push_back(pb_.a14(s, Term::sum(s, qj)));
            chain.push_back(pb_.plus(pb_.ax("WIF3", Substitution().bind("x", qj)), s));
            s = Term::sum(s, Term::tau(qj));
        }
        chain.push_back(pb_.a14(s, sq.term()));
        chain.push_back(pb_.sym(sq.proof));
        return pb_.trans(chain);
    }

    /// Smallest trace set first, then term order.
    Term pick(const Term& pi, const std::vector<Term>& candidates) {
        const std::set<Trace> tp = lts_.traces(lts_.add(pi));
        std::optional<Term> best;
        std::size_t best_size = 0;
        for (const auto& qj : candidates) {
            const std::set<Trace> tq = lts_.traces(lts_.add(qj));
            if (!std::includes(tp.begin(), tp.end(), tq.begin(), tq.end())) continue;
            if (!best || tq.size() < best_size || (tq.size() == best_size && qj < *best)) {
                best = qj;
                best_size = tq.size();
            }
        }
        if (!best) throw InternalInconsistency("no tau-summand of the right-hand side fits " + to_string(pi));
        return *best;
    }

    /// Flattens nested tau summands with D2, then copies the summands of
    /// each tau-body to the top with T and removes duplicates.
    Prepared prepare(const Term& t) {
        Term c = canonical(t);
        std::vector<Term> bodies;
        std::vector<Term> rest;
        auto file = [&](const Term& s) { (is_tau_summand(s) ? bodies : rest).push_back(is_tau_summand(s) ? s.body() : s); };
        for (const auto& s : summands(c)) file(s);
        std::vector<Proof> chain{pb_.dedup(t)};
        for (bool again = true; again;) {
            again = false;
            for (std::size_t i = 0; i < bodies.size() && !again; ++i) {
                auto ss = summands(bodies[i]);
                auto it = std::find_if(ss.begin(), ss.end(), is_tau_summand);
                if (it == ss.end()) continue;
                Term x = it->body();
                ss.erase(it);
                std::vector<Term> others;
                for (std::size_t k = 0; k < bodies.size(); ++k) {
                    if (k != i) others.push_back(Term::tau(bodies[k]));
                }
                others.insert(others.end(), rest.begin(), rest.end());
                Proof d2 = pb_.lemma("D2", Substitution().bind("x", x).bind("y", Term::sum_of(ss)));
                chain.push_back(pb_.plus(d2, Term::sum_of(others)));
                bodies.erase(bodies.begin() + static_cast<std::ptrdiff_t>(i));
                bodies.push_back(x);
                for (const auto& s : ss) file(s);
                again = true;
            }
        }
        std::vector<Proof> copies;
        for (const auto& b : bodies) copies.push_back(pb_.lemma("T", Substitution().bind("x", b)));
        if (!copies.empty()) {
            copies.push_back(pb_.refl(Term::sum_of(rest)));
            chain.push_back(pb_.sum(copies));
        }

        Prepared out;
        std::set<Term> taus;
        std::set<Term> acts;
        for (const auto& b : bodies) {
            Term cb = canonical(b);
            taus.insert(cb);
            for (const auto& s : summands(cb)) acts.insert(s);
        }
        for (const auto& r : rest) acts.insert(canonical(r));
        out.taus.assign(taus.begin(), taus.end());
        out.acts.assign(acts.begin(), acts.end());
        chain.push_back(pb_.a14(chain.back()->conclusion.rhs, out.term()));
        out.proof = pb_.trans(chain);
        return out;
    }

    static Term tau_sum(const std::vector<Term>& bodies) {
        std::vector<Term> out;
        for (const auto& b : bodies) out.push_back(Term::tau(b));
        return Term::sum_of(out);
    }

    Proof d5(const std::string& a, const std::vector<Term>& xs) {
        if (!lib_->find("D5_" + std::to_string(xs.size()))) extend_arity(*lib_, ScriptBase::WIF, axioms_, xs.size());
        Substitution s;
        s.bind_label("$a", Label::action(a));
        for (std::size_t i = 0; i < xs.size(); ++i) s.bind("x" + std::to_string(i + 1), xs[i]);
        return pb_.lemma("D5_" + std::to_string(xs.size()), s);
    }

    AxiomSet axioms_;
    std::shared_ptr<Library> lib_;
    ProofBuilder pb_;
    Lts lts_;
};

} // namespace

Verdict derive_ground_WIF(const Term& p, const Term& q, const Alphabet& alphabet) {
    if (!is_closed(p) || !is_closed(q)) throw UsageError("ground WIF derivations need closed terms");
    Verdict v;
    v.statement = Statement::leq(p, q);
    CompareResult cr = compare(p, q, Relation::PreorderWIF);
    WifEngine e(alphabet);
    v.base = e.axioms();
    v.lemmas = e.library();
    if (!cr.holds) {
        v.witness = Substitution();
        v.observation = cr.witness;
        return v;
    }
    v.derivable = true;
    v.proof = restate(e.derive(p, q), v.statement);
    return v;
}

std::optional<Falsification> falsify_open_WIF(const Term& t, const Term& u, const Alphabet& alphabet) {
    auto vars = variables(t);
    auto more = variables(u);
    vars.insert(more.begin(), more.end());
    for (auto s : canonical_family(t, u, alphabet)) {
        for (const auto& v : vars) {
            if (!s.lookup(v)) s.bind(v, Term::nil());
        }
        CompareResult cr = compare(s.apply(t), s.apply(u), Relation::PreorderWIF);
        if (!cr.holds) {
            Witness w = *cr.witness;
            w.substitution = s;
            return Falsification{s, w};
        }
    }
    return std::nullopt;
}

} // namespace bccs
