#pragma once

// Seeded random terms and sampled soundness checks of axiom sets.

#include "bccs/lts.hpp"
#include "bccs/proof.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bccs {

/// Draws with `rng() % n` so that runs are reproducible across standard libraries.
class TermGenerator {
public:
    TermGenerator(std::uint64_t seed, std::vector<std::string> actions, std::vector<std::string> vars = {})
        : rng_(seed), actions_(std::move(actions)), vars_(std::move(vars)) {}

    /// Depth counts visible prefixes only, as |t| does.
    Term term(std::size_t max_depth);
    Label label(bool allow_tau);
    std::size_t below(std::size_t n) { return n ? static_cast<std::size_t>(rng_() % n) : 0; }

private:
    Term leaf();

    std::mt19937_64 rng_;
    std::vector<std::string> actions_;
    std::vector<std::string> vars_;
};

/// Actions used for sampling: the alphabet when finite, else a,b,c.
std::vector<std::string> sample_actions(const Alphabet& alphabet);

struct SoundnessReport {
    std::string axiom;
    std::size_t instances = 0;
    std::size_t violations = 0;
    std::optional<std::string> counterexample;
};

/// Random closed instances of every axiom (labels and variables). An
/// inequation is checked under `preorder`, an equation in both directions.
std::vector<SoundnessReport> fuzz_soundness(const AxiomSet& axioms, Relation preorder, const Alphabet& alphabet,
                                            std::size_t samples, std::uint64_t seed, std::size_t image_depth = 3);

} // namespace bccs
