#pragma once

// Operational semantics and exact semantic oracles on finite terms.

#include "bccs/term.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bccs {

/// A visible observation: an action, or (under the open-term convention that
/// treats a variable occurrence x as the subterm x.0) a variable.
struct Symbol {
    std::string name;
    bool is_var = false;
    auto operator<=>(const Symbol&) const = default;
};

using Trace = std::vector<Symbol>;

std::string to_string(const Trace& trace);
Trace action_trace(const std::string& action, std::size_t n);

enum class InitialsKind { Weak, Strong, WeakWithTau };

/// Single steps by the SOS rules. Variables have no transitions.
std::vector<std::pair<Label, Term>> transitions(const Term& t);

/// nullopt: {u | t => u}. Visible a: {v | t => -a-> => v}. tau: {v | t => -tau-> v}.
std::set<Term> weak_step(const Term& t, const std::optional<Label>& label);

/// Weak: visible a with t => -a->. Strong: alpha with t -alpha->. WeakWithTau: alpha with t => -alpha->.
std::set<Label> initials(const Term& t, InitialsKind kind);

struct ObservationSet {
    std::set<Trace> traces;                       // T_A: action-only traces, epsilon included
    std::set<Trace> completed_traces;             // CT, may end in a variable
    std::set<std::pair<Trace, std::string>> var_traces; // T_V as (prefix, variable)
    std::set<std::pair<Trace, std::set<std::string>>> failure_repr; // (sigma, I(p_k)) over weak paths
};

/// Observations with the open-term convention (x read as x.0 with x visible).
ObservationSet observations(const Term& t);

/// Length of the shortest completed trace.
std::size_t norm(const Term& t);

/// chop_m with respect to the refusal set B. Closed terms only.
Term chop(std::size_t m, const std::set<std::string>& refusal, const Term& p);

/// Explicit transition graph over A1-4 canonical states, with memoized
/// weak-step, initials, trace and weak-derivative tables. Not thread-safe;
/// confine one instance per worker.
class Lts {
public:
    struct Edge {
        bool tau = false;
        Symbol symbol;
        int target = 0;
    };

    /// With `vars_as_actions`, a variable x contributes a step x -> 0.
    explicit Lts(bool vars_as_actions = false) : vars_as_actions_(vars_as_actions) {}

    int add(const Term& t);

    const Term& state(int s) const { return states_[static_cast<std::size_t>(s)]; }
    const std::vector<Edge>& edges(int s) const { return edges_[static_cast<std::size_t>(s)]; }
    std::size_t size() const { return states_.size(); }

    const std::vector<int>& closure(int s);
    const std::set<Symbol>& initials(int s);
    const std::set<Trace>& traces(int s);
    /// For each trace sigma, the states p_k with s =sigma=> p_k.
    const std::map<Trace, std::set<int>>& derivatives(int s);
    bool has_tau(int s);
    std::set<int> after(int s, const Symbol& a);

private:
    bool vars_as_actions_;
    std::vector<Term> states_;
    std::unordered_map<Term, int, TermHash> index_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<std::optional<std::vector<int>>> closure_;
    std::vector<std::optional<std::set<Symbol>>> initials_;
    std::vector<std::optional<std::set<Trace>>> traces_;
    std::vector<std::optional<std::map<Trace, std::set<int>>>> derivatives_;
};

enum class Relation {
    LeqWF,
    PreorderWF,
    EquivWF,
    PreorderWIF,
    EquivWIF,
    TraceEq,
    CompletedTraceInclusion,
};

Relation parse_relation(const std::string& name);
std::string to_string(Relation rel);

/// Why a relation fails.
struct Witness {
    enum class Kind { FailurePair, ImpossibleFuture, TraceDifference, TauCondition, CompletedTrace };

    Kind kind = Kind::FailurePair;
    Trace trace;
    std::set<std::string> refusal;  // FailurePair
    std::set<Trace> future;         // ImpossibleFuture
    bool reversed = false;          // the observation belongs to the right-hand side
    std::optional<Substitution> substitution; // open-test falsifier

    std::string describe() const;
};

struct CompareResult {
    bool holds = true;
    std::optional<Witness> witness;
};

/// Exact comparison of closed terms.
CompareResult compare(const Term& p, const Term& q, Relation rel);

/// Open-term falsifier: evaluates the relation under every member of `family`.
CompareResult compare_open(const Term& t, const Term& u, Relation rel, const std::vector<Substitution>& family);

/// Variables of t then u in order of first occurrence.
std::vector<std::string> variables_in_order(const Term& t, const Term& u);

/// Distinguishing closed substitutions drawn from the completeness and
/// non-axiomatizability arguments: all-zero, per-variable b.0 (product when
/// small), a^d.0 with d > |t|+|u|, zero-on-a-subset, and the depth codings
/// a^(k*m).b.0 and a^(k*m).0 with m = max(|t|,|u|)+1.
std::vector<Substitution> canonical_family(const Term& t, const Term& u, const Alphabet& alphabet);

} // namespace bccs
