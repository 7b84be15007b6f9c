#pragma once

// Ground derivations for the weak impossible futures preorder, and
// falsification of open inequations.

#include "bccs/derivations.hpp"
#include "bccs/verdict.hpp"

#include <optional>
#include <utility>

namespace bccs {

/// Closed terms only. Derivable over A1-4+WF1-2+WIF3 (lemmas T, D1, TT, D2
/// and D5_k) exactly when p is below q in the WIF preorder; otherwise the
/// observation that separates them.
Verdict derive_ground_WIF(const Term& p, const Term& q, const Alphabet& alphabet);

struct Falsification {
    Substitution substitution;
    Witness witness;
};

/// The first member of the canonical family under which t is not below u.
std::optional<Falsification> falsify_open_WIF(const Term& t, const Term& u, const Alphabet& alphabet);

} // namespace bccs
