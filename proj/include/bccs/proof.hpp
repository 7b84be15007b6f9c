#pragma once

// Statements, axiom sets, and derivations of (in)equational logic.

#include "bccs/term.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bccs {

struct Statement {
    enum class Kind { Inequation, Equation };

    Kind kind = Kind::Equation;
    Term lhs;
    Term rhs;

    static Statement leq(Term l, Term r) { return {Kind::Inequation, std::move(l), std::move(r)}; }
    static Statement eq(Term l, Term r) { return {Kind::Equation, std::move(l), std::move(r)}; }

    bool is_equation() const { return kind == Kind::Equation; }
    Statement swapped() const { return {kind, rhs, lhs}; }
    Statement weakened() const { return {Kind::Inequation, lhs, rhs}; }
    Statement apply(const Substitution& s) const { return {kind, s.apply(lhs), s.apply(rhs)}; }

    bool operator==(const Statement&) const = default;
};

/// "lhs <= rhs" or "lhs == rhs".
std::string to_string(const Statement& s);
Statement parse_statement(std::string_view text, const Alphabet& alphabet);

/// Same kind and both sides equal modulo A1, A2, A4.
bool equal_modulo_ac(const Statement& a, const Statement& b);
/// Same kind and both sides equal modulo A1-4.
bool equal_modulo_a14(const Statement& a, const Statement& b);

struct NamedStatement {
    std::string name;
    Statement statement;
};

class AxiomSet {
public:
    explicit AxiomSet(std::string name = {}) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    /// Later additions with an existing name are ignored.
    AxiomSet& add(std::string name, Statement s);
    AxiomSet& add(const AxiomSet& other);

    const std::vector<NamedStatement>& axioms() const { return axioms_; }
    const NamedStatement* find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    std::size_t size() const { return axioms_.size(); }

    /// max over members of |lhs| and |rhs|.
    std::size_t max_depth() const;

    /// Only the equations.
    AxiomSet kernel() const;

private:
    std::string name_;
    std::vector<NamedStatement> axioms_;
};

/// One `NAME: lhs <= rhs` or `NAME: lhs == rhs` per line; `#` comments;
/// an optional `alphabet: ...` header overrides `fallback`.
struct AxiomFile {
    Alphabet alphabet;
    AxiomSet axioms;
};
AxiomFile parse_axiom_file(std::string_view text, const Alphabet& fallback);
std::string to_axiom_file(const AxiomSet& axioms, const Alphabet& alphabet);

enum class Rule {
    Axiom,
    Lemma,
    Reflexivity,
    Symmetry,
    Transitivity,
    SumCongruence,
    PrefixCongruence,
    Antisymmetry,
};

std::string to_string(Rule r);
Rule parse_rule(const std::string& s);

struct ProofNode;
using Proof = std::shared_ptr<const ProofNode>;

/// A proof tree. Every node records its conclusion. An equation may be
/// concluded as an inequation at any node (weakening).
struct ProofNode {
    Rule rule = Rule::Reflexivity;
    std::string name;      // Axiom / Lemma
    bool backward = false; // Axiom / Lemma: equation used right to left
    Substitution subst;    // Axiom / Lemma
    Statement conclusion;
    std::vector<Proof> children;
};

/// Named derived statements with their proof scripts. Scripts may cite
/// lemmas added before them.
class Library {
public:
    struct Entry {
        std::string name;
        Statement statement;
        Proof script;
    };

    Library& add(std::string name, Statement statement, Proof script);
    const Entry* find(const std::string& name) const;
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
    std::map<std::string, std::size_t> index_;
};

/// Validates every node. Lemma nodes are accepted when the lemma's script
/// itself checks against `allowed`. Returns the root conclusion.
Statement check_derivation(const Proof& proof, const AxiomSet& allowed, const Library* lemmas = nullptr);

/// Names of the axioms used, lemmas expanded.
std::set<std::string> axioms_used(const Proof& proof, const Library* lemmas = nullptr);

/// Inlines every lemma, leaving base axioms only.
Proof expand_lemmas(const Proof& proof, const Library& lemmas);

/// Applies a substitution to a whole proof (the substitution rule).
Proof substitute(const Proof& proof, const Substitution& sigma);

/// sigma after tau: x |-> sigma(tau(x)).
Substitution compose(const Substitution& sigma, const Substitution& tau);

std::size_t proof_size(const Proof& proof);

/// The same proof with its root conclusion respelled (terms equal modulo
/// A1, A2, A4, or an equation weakened).
Proof restate(const Proof& proof, const Statement& conclusion);

/// Derivation files.
std::string to_json(const Proof& proof, const Alphabet& alphabet, const std::string& base);
struct DerivationFile {
    Alphabet alphabet;
    std::string base;
    Proof proof;
};
DerivationFile parse_derivation(std::string_view text);

/// Builds proof nodes with eager consistency checks. Conclusions are
/// computed from the axiom base and library, so builder mistakes surface as
/// ProofError at construction time.
class ProofBuilder {
public:
    ProofBuilder(const AxiomSet& base, const Library* lemmas = nullptr) : base_(base), lemmas_(lemmas) {}

    Proof ax(const std::string& name, Substitution s = {}, bool backward = false) const;
    Proof lemma(const std::string& name, Substitution s = {}, bool backward = false) const;
    Proof refl(const Term& t) const;
    Proof sym(const Proof& p) const;
    Proof trans(const std::vector<Proof>& steps) const;
    Proof sum(const std::vector<Proof>& parts) const;
    Proof prefix(const Label& l, const Proof& p) const;
    Proof antisym(const Proof& le, const Proof& ge) const;
    Proof weaken(const Proof& p) const;

    /// p + rest on both sides.
    Proof plus(const Proof& p, const Term& rest) const { return sum({p, refl(rest)}); }
    /// t == canonical(t) using A3 (and A1, A2, A4 implicitly).
    Proof dedup(const Term& t) const;
    /// t == u for terms equal modulo A1-4.
    Proof a14(const Term& t, const Term& u) const;

    const AxiomSet& base() const { return base_; }
    const Library* lemmas() const { return lemmas_; }

private:
    Proof instance(Rule rule, const std::string& name, const Statement& schema, Substitution s, bool backward) const;

    const AxiomSet& base_;
    const Library* lemmas_;
};

} // namespace bccs
