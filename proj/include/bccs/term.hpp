#pragma once

// Terms of BCCS(A): 0, action/tau prefixing, binary choice and variables.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bccs {

/// Prefix label. Besides tau and concrete actions, axiom schemas use label
/// metavariables: `$a` ranges over visible actions, `%alpha` over actions and tau.
struct Label {
    enum class Kind : std::uint8_t { Tau, Action, ActionMeta, AnyMeta };

    Kind kind = Kind::Tau;
    std::string name;

    static Label tau() { return {}; }
    static Label action(std::string n) { return {Kind::Action, std::move(n)}; }
    static Label action_meta(std::string n) { return {Kind::ActionMeta, std::move(n)}; }
    static Label any_meta(std::string n) { return {Kind::AnyMeta, std::move(n)}; }

    bool is_tau() const { return kind == Kind::Tau; }
    bool is_action() const { return kind == Kind::Action; }
    bool is_meta() const { return kind == Kind::ActionMeta || kind == Kind::AnyMeta; }
    /// True for labels that can never be tau (concrete actions and `$` metavariables).
    bool is_visible() const { return kind == Kind::Action || kind == Kind::ActionMeta; }

    std::string str() const;

    auto operator<=>(const Label&) const = default;
};

enum class TermKind : std::uint8_t { Nil, Prefix, Sum, Var };

struct TermNode;

/// Immutable, structurally shared term. Copies are cheap.
class Term {
public:
    Term();

    static Term nil();
    static Term prefix(Label label, Term body);
    static Term tau(Term body) { return prefix(Label::tau(), std::move(body)); }
    static Term act(std::string action, Term body) { return prefix(Label::action(std::move(action)), std::move(body)); }
    static Term sum(Term lhs, Term rhs);
    static Term var(std::string name);
    /// Right-nested sum; the empty sum is 0.
    static Term sum_of(std::span<const Term> terms);
    static Term sum_of(std::initializer_list<Term> terms) { return sum_of(std::span<const Term>(terms.begin(), terms.size())); }

    TermKind kind() const;
    bool is_nil() const { return kind() == TermKind::Nil; }
    bool is_prefix() const { return kind() == TermKind::Prefix; }
    bool is_sum() const { return kind() == TermKind::Sum; }
    bool is_var() const { return kind() == TermKind::Var; }

    const Label& label() const;          // Prefix
    const Term& body() const;            // Prefix
    const Term& left() const;            // Sum
    const Term& right() const;           // Sum
    const std::string& var_name() const; // Var

    std::size_t hash() const;

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const TermNode> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// The summands of a term: sums flattened, 0 dropped.
std::vector<Term> summands(const Term& t);

/// Representative modulo A1, A2, A4 (associativity, commutativity, unit).
/// Duplicate summands are kept. Applied recursively under prefixes.
Term ac_normal(const Term& t);

/// The unique representative of a term's A1-4 class: summands flattened,
/// sorted, deduplicated, 0 removed, recursively.
class CanonicalTerm {
public:
    CanonicalTerm() = default;
    explicit CanonicalTerm(const Term& t);
    const Term& term() const { return term_; }
    auto operator<=>(const CanonicalTerm&) const = default;
    bool operator==(const CanonicalTerm&) const = default;

private:
    Term term_;
};

Term canonical(const Term& t);
inline CanonicalTerm canonicalize(const Term& t) { return CanonicalTerm(t); }

/// Longest trace length, tau-steps not counted.
std::size_t depth(const Term& t);

std::set<std::string> variables(const Term& t);
/// Concrete action names occurring in prefixes.
std::set<std::string> actions(const Term& t);
bool is_closed(const Term& t);
bool has_meta(const Term& t);

/// a^n . tail
Term action_power(const std::string& action, std::size_t n, Term tail = Term::nil());

/// Maps variables to terms and label metavariables to labels. Unmapped
/// symbols are left alone, so the map is total with identity as default.
class Substitution {
public:
    Substitution() = default;

    Substitution& bind(std::string var, Term image);
    Substitution& bind_label(std::string meta, Label image);

    const std::map<std::string, Term>& terms() const { return terms_; }
    const std::map<std::string, Label>& labels() const { return labels_; }
    std::optional<Term> lookup(const std::string& var) const;

    Term apply(const Term& t) const;
    Label apply(const Label& l) const;

    /// Closed for the given variables: every one of them maps to a closed term.
    bool closes(const std::set<std::string>& vars) const;

    bool empty() const { return terms_.empty() && labels_.empty(); }
    bool operator==(const Substitution&) const = default;

private:
    std::map<std::string, Term> terms_;
    std::map<std::string, Label> labels_;
};

/// The action set A: an explicit nonempty list, or countably infinite.
class Alphabet {
public:
    static Alphabet finite(std::vector<std::string> names);
    static Alphabet countable();
    /// "a,b,c" or "countable".
    static Alphabet parse(std::string_view spec);

    bool is_finite() const { return !countable_; }
    bool is_countable() const { return countable_; }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }
    bool contains(const std::string& name) const;

    /// Countable mode only: the first `#k` not in `used`.
    std::string fresh(const std::set<std::string>& used) const;

    std::string str() const;

private:
    bool countable_ = false;
    std::vector<std::string> names_;
};

bool is_reserved_name(std::string_view name);

Term parse_term(std::string_view text, const Alphabet& alphabet);
std::string to_string(const Term& t);
std::string to_string(const Substitution& s);

} // namespace bccs
