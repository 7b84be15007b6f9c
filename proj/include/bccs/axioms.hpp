#pragma once

// Axiom tables, the equivalence-axiomatization generator, and inverted substitutions.

#include "bccs/proof.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace bccs {

/// Known names: A1-4, WF1-3, WF_A, N-E, D1-9, WIF3, WFE, WFE_A, TAB-AUX,
/// and the bases wf-preorder (A1-4+WF1-3, plus WF_A in finite mode),
/// wif-preorder (A1-4+WF1-2+WIF3) and wf-equiv (A1-4+WF1+WFE2-3, plus
/// WFE_A in finite mode). Names may be joined with '+'.
/// Schemas over visible actions use `$a`, over A_tau `%alpha`/`%beta`.
AxiomSet builtin_axioms(const std::string& name, const Alphabet& alphabet);

/// Sum of a.x_a over the alphabet, in alphabet order.
Term alphabet_sum(const Alphabet& alphabet);

/// sum_{i<=n} $a.x_i == $a.(sum_{i<=n} tau.x_i)
Statement d5_statement(std::size_t n);
/// sum_i tau.($a.x_i + y_i) == sum_i tau.($a.(sum_j tau.x_j) + y_i)
Statement d9_statement(std::size_t n);

/// A(E): A1-4, the RS schema, t+u == u and alpha(t+z)+alpha(u+z) == alpha(u+z)
/// for each inequation t <= u, and the equations of E unchanged.
AxiomSet generate_equivalence_axioms(const AxiomSet& e);

/// First of z, z1, z2, ... not among `used`.
std::string fresh_variable(const std::set<std::string>& used);

/// rho(x) = a_x.0 with distinct fresh actions; R replaces every maximal
/// subterm a_x.p by x.
struct InvertedSubstitution {
    Substitution rho;
    std::map<std::string, std::string> action_of; // variable -> fresh action
    Term restore(const Term& t) const;            // R
};
InvertedSubstitution invert_substitution(const Term& t, const Term& u, const Alphabet& alphabet);

} // namespace bccs
