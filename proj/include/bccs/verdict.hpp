#pragma once

#include "bccs/lts.hpp"
#include "bccs/proof.hpp"

#include <memory>
#include <optional>

namespace bccs {

/// Outcome of a decision procedure: a derivation that checks against `base`
/// (lemmas from `lemmas`), or a closed substitution with the observation
/// that separates the instantiated sides.
struct Verdict {
    bool derivable = false;
    Statement statement;
    Proof proof;
    std::shared_ptr<const Library> lemmas;
    AxiomSet base;
    std::optional<Substitution> witness;
    std::optional<Witness> observation;

    std::string describe() const;
};

} // namespace bccs
