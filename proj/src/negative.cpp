#include "bccs/negative.hpp"

#include "bccs/error.hpp"
#include "bccs/fuzz.hpp"

#include <sstream>

namespace bccs {

FamilyId parse_family(const std::string& name) {
    if (name == "eq" || name == "equation" || name == "wif-equation") return FamilyId::Equation;
    if (name == "phi" || name == "wif-preorder-multiaction") return FamilyId::Phi;
    if (name == "single" || name == "singleton" || name == "wif-preorder-singleton") return FamilyId::Singleton;
    throw UsageError("unknown family '" + name + "' (expected eq, phi or single)");
}

std::string to_string(FamilyId id) {
    switch (id) {
    case FamilyId::Equation: return "wif-equation";
    case FamilyId::Phi: return "wif-preorder-multiaction";
    case FamilyId::Singleton: return "wif-preorder-singleton";
    }
    return "?";
}

namespace {

std::string first_action(const Alphabet& alphabet) { return alphabet.is_finite() ? alphabet.names().front() : "a"; }

void require_alphabet(FamilyId id, const Alphabet& alphabet) {
    switch (id) {
    case FamilyId::Equation: break;
    case FamilyId::Phi:
        if (!alphabet.is_finite() || alphabet.size() < 2) {
            throw AlphabetError("the Phi family needs a finite alphabet with at least two actions");
        }
        break;
    case FamilyId::Singleton:
        if (!alphabet.is_finite() || alphabet.size() != 1) throw AlphabetError("the singleton family needs |A| = 1");
        break;
    }
}

} // namespace

Term phi_term(std::size_t m, const Alphabet& alphabet, const std::string& x) {
    const std::string a = first_action(alphabet);
    const Term amx = action_power(a, m, Term::var(x));
    std::vector<Term> parts{Term::tau(Term::sum(amx, Term::var(x)))};
    for (const auto& b : alphabet.names()) parts.push_back(Term::tau(Term::sum(amx, action_power(a, m, Term::act(b, Term::nil())))));
    return Term::sum_of(parts);
}

Statement generate_family(FamilyId id, std::size_t m, const Alphabet& alphabet) {
    require_alphabet(id, alphabet);
    const std::string a = first_action(alphabet);
    switch (id) {
    case FamilyId::Equation: {
        Term both = Term::tau(Term::sum(action_power(a, m), action_power(a, 2 * m)));
        return Statement::eq(Term::sum(Term::tau(action_power(a, 2 * m)), both), both);
    }
    case FamilyId::Phi: {
        Term phi = phi_term(m, alphabet);
        return Statement::leq(Term::sum(Term::tau(action_power(a, m, Term::var("x"))), phi), phi);
    }
    case FamilyId::Singleton: {
        Term amx = action_power(a, m, Term::var("x"));
        return Statement::leq(amx, Term::sum(amx, Term::var("x")));
    }
    }
    throw UsageError("unknown family");
}

bool invariant_check(FamilyId id, const Term& t, const InvariantParams& params, const Alphabet& alphabet) {
    switch (id) {
    case FamilyId::Equation: {
        const std::set<Trace> target{action_trace(params.action, 2 * params.m)};
        for (const auto& p : weak_step(t, Label::tau())) {
            if (observations(p).completed_traces == target) return true;
        }
        return false;
    }
    case FamilyId::Phi: {
        for (const auto& p : weak_step(t, Label::tau())) {
            ObservationSet obs = observations(p);
            bool bad = false;
            for (const auto& [prefix, var] : obs.var_traces) bad = bad || prefix.empty();
            for (const auto& b : sample_actions(alphabet)) {
                Trace amb = action_trace(params.action, params.m);
                amb.push_back(Symbol{b, false});
                bad = bad || obs.traces.count(amb);
            }
            if (!bad) return true;
        }
        return false;
    }
    case FamilyId::Singleton: {
        ObservationSet obs = observations(t);
        if (!obs.var_traces.count({Trace{}, params.var})) return false;
        for (std::size_t k = 1; k < params.m; ++k) {
            if (obs.var_traces.count({action_trace(params.action, k), params.var})) return false;
        }
        return true;
    }
    }
    return false;
}

std::string to_string(SeparationCertificate::Status s) {
    switch (s) {
    case SeparationCertificate::Status::Valid: return "valid";
    case SeparationCertificate::Status::MTooSmall: return "m-too-small";
    case SeparationCertificate::Status::AxiomsUnsound: return "axioms-unsound";
    case SeparationCertificate::Status::NotSound: return "instance-unsound";
    case SeparationCertificate::Status::NoSeparation: return "no-separation";
    }
    return "?";
}

std::string SeparationCertificate::report() const {
    std::ostringstream os;
    os << "family: " << to_string(family) << "\n"
       << "m: " << m << "\n"
       << "instance: " << to_string(instance) << "\n"
       << "axioms: " << axiom_set << "\n"
       << "relation: " << to_string(relation) << "\n"
       << "max-depth: " << max_depth << "\n"
       << "depth-bound: m " << (strict_bound ? ">" : ">=") << " " << max_depth << ": " << (depth_ok ? "ok" : "violated") << "\n"
       << "axiom-soundness: " << axiom_instances << " sampled instances, "
       << (axiom_violation.empty() ? "no violation" : "violated by " + axiom_violation) << "\n"
       << "instance-soundness: " << (instance_sound ? "holds" : "fails") << " ("
       << (soundness_exact ? "exact" : "sampled over " + std::to_string(soundness_substitutions) + " substitutions") << ")\n";
    if (family == FamilyId::Equation) os << "rhs-completed-traces-bounded: " << (rhs_bounded ? "yes" : "no") << "\n";
    os << "lhs-invariant: " << (lhs_invariant ? "holds" : "fails") << "\n"
       << "rhs-invariant: " << (rhs_invariant ? "holds" : "fails") << "\n"
       << "invariant-source: " << (source_is_lhs ? "lhs" : "rhs") << "\n"
       << "status: " << to_string(status) << "\n";
    return os.str();
}

SeparationCertificate certify_nonderivability(FamilyId id, std::size_t m, const AxiomSet& e, Relation relation,
                                              const Alphabet& alphabet, const CertifyOptions& opts) {
    const Relation expected = id == FamilyId::Equation ? Relation::EquivWIF : Relation::PreorderWIF;
    if (relation != expected) {
        throw UsageError("family " + to_string(id) + " is certified for " + to_string(expected));
    }
    SeparationCertificate c;
    c.family = id;
    c.m = m;
    c.relation = relation;
    c.instance = generate_family(id, m, alphabet);
    const AxiomSet used = id == FamilyId::Equation ? e.kernel() : e;
    c.axiom_set = e.name() + (id == FamilyId::Equation ? " (equations)" : "");
    c.max_depth = used.max_depth();
    c.strict_bound = id != FamilyId::Phi;
    c.depth_ok = c.strict_bound ? m > c.max_depth : m >= c.max_depth;

    for (const auto& r : fuzz_soundness(used, Relation::PreorderWIF, alphabet, opts.axiom_samples, opts.seed, 2)) {
        c.axiom_instances += r.instances;
        if (r.violations && c.axiom_violation.empty()) c.axiom_violation = r.axiom + ": " + *r.counterexample;
    }

    const Term& lhs = c.instance.lhs;
    const Term& rhs = c.instance.rhs;
    if (id == FamilyId::Equation) {
        c.soundness_exact = true;
        c.instance_sound = compare(lhs, rhs, Relation::EquivWIF).holds;
        const std::string a = first_action(alphabet);
        const std::set<Trace> allowed{action_trace(a, m), action_trace(a, 2 * m)};
        for (const auto& ct : observations(rhs).completed_traces) c.rhs_bounded = c.rhs_bounded && allowed.count(ct);
    } else {
        c.instance_sound = true;
        for (const auto& s : canonical_family(lhs, rhs, alphabet)) {
            ++c.soundness_substitutions;
            c.instance_sound = c.instance_sound && compare(s.apply(lhs), s.apply(rhs), Relation::PreorderWIF).holds;
        }
    }

    InvariantParams params{first_action(alphabet), m, "x"};
    c.lhs_invariant = invariant_check(id, lhs, params, alphabet);
    c.rhs_invariant = invariant_check(id, rhs, params, alphabet);
    c.source_is_lhs = id != FamilyId::Singleton;
    const bool separates = c.source_is_lhs ? (c.lhs_invariant && !c.rhs_invariant) : (c.rhs_invariant && !c.lhs_invariant);

    using S = SeparationCertificate::Status;
    if (!c.depth_ok) {
        c.status = S::MTooSmall;
    } else if (!c.axiom_violation.empty()) {
        c.status = S::AxiomsUnsound;
    } else if (!c.instance_sound) {
        c.status = S::NotSound;
    } else if (!separates || !c.rhs_bounded) {
        c.status = S::NoSeparation;
    } else {
        c.status = S::Valid;
    }
    return c;
}

} // namespace bccs
