#pragma once

// Proof scripts for the derived laws and for the equivalence table.

#include "bccs/axioms.hpp"

#include <memory>

namespace bccs {

enum class ScriptBase {
    WF,  // A1-4+WF1-3
    WIF, // A1-4+WF1-2+WIF3
    WFE, // A1-4+WF1+WFE2-3 (+WFE_A)
};

std::string base_name(ScriptBase b);
AxiomSet script_axioms(ScriptBase b, const Alphabet& alphabet);

/// Lemmas provable over the base, in dependency order.
/// WF:  T, D1, TT, D2, D3, D4, D5_1..n, D6, D7, D8, D9_1..n
/// WIF: T, D1, TT, D2, D5_1..n
/// WFE: T, D1, TT, D2, D5_1..n
/// T is tau.x == tau.x + x; TT is tau.tau.x <= tau.x (an equation over WFE).
std::shared_ptr<Library> lemma_library(ScriptBase b, const Alphabet& alphabet, std::size_t arity = 3);

/// Adds D5_k (and D9_k over WF) for k up to n when missing.
void extend_arity(Library& lib, ScriptBase b, const AxiomSet& axioms, std::size_t n);

struct NamedDerivation {
    std::string name;
    std::string base;
    Statement target;
    Proof proof; // base axioms only
};

/// D1-D9 over WF, D1/D2/D5 over WIF, and the scripts deriving each table
/// axiom generated by A(E) from A1-4 plus the equivalence table. Schemas over
/// A_tau get one script per kind of label (tau or a visible action).
std::vector<NamedDerivation> builtin_derivations(const Alphabet& alphabet);

} // namespace bccs
