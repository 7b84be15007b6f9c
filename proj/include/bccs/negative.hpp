#pragma once

// Counterexample families for the weak impossible futures semantics and
// certificates that a given finite axiomatization cannot derive them.

#include "bccs/lts.hpp"
#include "bccs/proof.hpp"

#include <cstdint>
#include <string>

namespace bccs {

enum class FamilyId {
    Equation,  // tau.a^2m.0 + tau.(a^m.0 + a^2m.0) == tau.(a^m.0 + a^2m.0), any A
    Phi,       // tau.a^m.x + Phi_m <= Phi_m, 1 < |A| < infinity
    Singleton, // a^m.x <= a^m.x + x, |A| = 1
};

/// "eq", "phi", "single" or the long names.
FamilyId parse_family(const std::string& name);
std::string to_string(FamilyId id);

/// Throws AlphabetError when the alphabet does not suit the family.
Statement generate_family(FamilyId id, std::size_t m, const Alphabet& alphabet);

/// Phi_m = tau.(a^m.x + x) + sum over b of tau.(a^m.x + a^m.b.0).
Term phi_term(std::size_t m, const Alphabet& alphabet, const std::string& x = "x");

struct InvariantParams {
    std::string action;
    std::size_t m = 0;
    std::string var = "x";
};

/// Equation: some p' with t =tau=> p' has CT(p') = {a^2m}.
/// Phi: some t' with t =tau=> t' has neither a trace x (for a variable x)
/// nor a trace a^m.b.
/// Singleton: x in T_V(t) and a^k.x not in T_V(t) for 1 <= k < m.
bool invariant_check(FamilyId id, const Term& t, const InvariantParams& params, const Alphabet& alphabet);

struct CertifyOptions {
    std::size_t axiom_samples = 200;
    std::uint64_t seed = 1;
};

struct SeparationCertificate {
    enum class Status { Valid, MTooSmall, AxiomsUnsound, NotSound, NoSeparation };

    FamilyId family = FamilyId::Equation;
    std::size_t m = 0;
    std::string axiom_set;
    Relation relation = Relation::EquivWIF;
    Statement instance;

    std::size_t max_depth = 0;
    bool strict_bound = true; // m > maxDepth, else m >= maxDepth
    bool depth_ok = false;

    std::size_t axiom_instances = 0;
    std::string axiom_violation; // empty when none

    bool instance_sound = false;
    bool soundness_exact = false;
    std::size_t soundness_substitutions = 0;

    bool rhs_bounded = true; // equation family: CT(rhs) within {a^m, a^2m}
    bool lhs_invariant = false;
    bool rhs_invariant = false;
    bool source_is_lhs = true; // side the invariant must hold on

    Status status = Status::NoSeparation;

    bool valid() const { return status == Status::Valid; }
    std::string report() const;
};

std::string to_string(SeparationCertificate::Status s);

/// `relation` is EquivWIF for the equation family (checked against the
/// equations of E) and PreorderWIF otherwise.
SeparationCertificate certify_nonderivability(FamilyId id, std::size_t m, const AxiomSet& e, Relation relation,
                                              const Alphabet& alphabet, const CertifyOptions& opts = {});

} // namespace bccs
