#pragma once

// Saturated normal forms, proof-producing normalization, and the axiomatic
// decision procedure for the weak failures preorder.

#include "bccs/derivations.hpp"
#include "bccs/verdict.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace bccs {

/// L subset of A u V, split into its actions and its variables.
struct LSet {
    std::set<std::string> actions;
    std::set<std::string> vars;

    std::vector<std::string> symbols() const; // sorted
    std::size_t size() const { return actions.size() + vars.size(); }
    bool subset_of(const LSet& other) const;
    LSet united(const LSet& other) const;
    LSet minus(const LSet& other) const;
    std::string str() const;

    bool operator==(const LSet&) const = default;
    /// Ordered by sorted symbol list.
    bool operator<(const LSet& other) const;
};

using Family = std::set<LSet>;

std::string to_string(const Family& f);

/// The least saturated family containing `f`.
Family saturate(const Family& f);
bool is_saturated(const Family& f);

struct NormalForm;
using NormalFormPtr = std::shared_ptr<const NormalForm>;

struct NormalForm {
    enum class Kind { Tau, Action };

    Kind kind = Kind::Action;
    Family family;                                  // Action: exactly one member
    std::map<std::string, NormalFormPtr> children; // t_a, shared by all members

    LSet top() const; // L(t)
    Term render() const;
    Term body(const LSet& l) const; // sum of a.t_a for a in A_L, plus V_L
};

bool is_normal_form(const Term& t);

struct NormalizeOptions {
    std::size_t max_symbols = 0; // 0: no cap
};

struct Normalized {
    NormalFormPtr nf;
    Proof proof; // t == render(nf) over A1-4+WF1-3 and the library
    std::shared_ptr<Library> lemmas;
};

Normalized normalize(const Term& t, const NormalizeOptions& opts = {});

/// Decides t <= u over A1-4+WF1-3 (plus WF_A in finite mode).
Verdict decide_preorder_WF(const Term& t, const Term& u, const Alphabet& alphabet, const NormalizeOptions& opts = {});

struct EquivVerdict {
    Verdict forward;
    Verdict backward;
    bool equivalent() const { return forward.derivable && backward.derivable; }
};
EquivVerdict decide_equiv_WF(const Term& t, const Term& u, const Alphabet& alphabet, const NormalizeOptions& opts = {});

} // namespace bccs
