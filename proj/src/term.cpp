#include "bccs/term.hpp"

#include "bccs/error.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace bccs {

struct TermNode {
    TermKind kind = TermKind::Nil;
    Label label;
    std::string name;
    Term a;
    Term b;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const Term& nil_term() {
    static const Term t;
    return t;
}

const Label& tau_label() {
    static const Label l;
    return l;
}

const std::string& no_name() {
    static const std::string n;
    return n;
}

constexpr std::size_t kNilHash = 0x51ed270b;

} // namespace

std::string Label::str() const {
    switch (kind) {
    case Kind::Tau: return "tau";
    case Kind::Action: return name;
    case Kind::ActionMeta: return "$" + name;
    case Kind::AnyMeta: return "%" + name;
    }
    return name;
}

Term::Term() = default;

Term Term::nil() { return Term(); }

Term Term::prefix(Label label, Term body) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Prefix;
    n->hash = mix(mix(1, static_cast<std::size_t>(label.kind)), std::hash<std::string>{}(label.name));
    n->hash = mix(n->hash, body.hash());
    n->label = std::move(label);
    n->a = std::move(body);
    return Term(std::move(n));
}

Term Term::sum(Term lhs, Term rhs) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Sum;
    n->hash = mix(mix(2, lhs.hash()), rhs.hash());
    n->a = std::move(lhs);
    n->b = std::move(rhs);
    return Term(std::move(n));
}

Term Term::var(std::string name) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Var;
    n->hash = mix(3, std::hash<std::string>{}(name));
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::sum_of(std::span<const Term> terms) {
    if (terms.empty()) {
        return nil();
    }
    Term acc = terms.back();
    for (auto it = terms.rbegin() + 1; it != terms.rend(); ++it) {
        acc = sum(*it, acc);
    }
    return acc;
}

TermKind Term::kind() const { return node_ ? node_->kind : TermKind::Nil; }
const Label& Term::label() const { return node_ ? node_->label : tau_label(); }
const Term& Term::body() const { return node_ ? node_->a : nil_term(); }
const Term& Term::left() const { return node_ ? node_->a : nil_term(); }
const Term& Term::right() const { return node_ ? node_->b : nil_term(); }
const std::string& Term::var_name() const { return node_ ? node_->name : no_name(); }
std::size_t Term::hash() const { return node_ ? node_->hash : kNilHash; }

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.hash() != b.hash()) {
        return false;
    }
    return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) {
        return std::strong_ordering::equal;
    }
    if (auto c = a.kind() <=> b.kind(); c != 0) {
        return c;
    }
    switch (a.kind()) {
    case TermKind::Nil:
        return std::strong_ordering::equal;
    case TermKind::Prefix:
        if (auto c = a.label() <=> b.label(); c != 0) {
            return c;
        }
        return a.body() <=> b.body();
    case TermKind::Sum:
        if (auto c = a.left() <=> b.left(); c != 0) {
            return c;
        }
        return a.right() <=> b.right();
    case TermKind::Var:
        return a.var_name() <=> b.var_name();
    }
    return std::strong_ordering::equal;
}

namespace {

void collect_summands(const Term& t, std::vector<Term>& out) {
    switch (t.kind()) {
    case TermKind::Nil: break;
    case TermKind::Sum:
        collect_summands(t.left(), out);
        collect_summands(t.right(), out);
        break;
    default: out.push_back(t);
    }
}

Term normal_sum(const Term& t, bool dedupe) {
    std::vector<Term> parts;
    collect_summands(t, parts);
    for (auto& p : parts) {
        if (p.is_prefix()) {
            p = Term::prefix(p.label(), normal_sum(p.body(), dedupe));
        }
    }
    std::sort(parts.begin(), parts.end());
    if (dedupe) {
        parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    }
    return Term::sum_of(parts);
}

} // namespace

std::vector<Term> summands(const Term& t) {
    std::vector<Term> out;
    collect_summands(t, out);
    return out;
}

Term ac_normal(const Term& t) { return normal_sum(t, false); }

Term canonical(const Term& t) { return normal_sum(t, true); }

CanonicalTerm::CanonicalTerm(const Term& t) : term_(canonical(t)) {}

std::size_t depth(const Term& t) {
    switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Var: return 0;
    case TermKind::Prefix: return (t.label().is_tau() ? 0 : 1) + depth(t.body());
    case TermKind::Sum: return std::max(depth(t.left()), depth(t.right()));
    }
    return 0;
}

namespace {

template <typename F>
void visit(const Term& t, F&& f) {
    f(t);
    if (t.is_prefix()) {
        visit(t.body(), f);
    } else if (t.is_sum()) {
        visit(t.left(), f);
        visit(t.right(), f);
    }
}

} // namespace

std::set<std::string> variables(const Term& t) {
    std::set<std::string> out;
    visit(t, [&](const Term& s) {
        if (s.is_var()) {
            out.insert(s.var_name());
        }
    });
    return out;
}

std::set<std::string> actions(const Term& t) {
    std::set<std::string> out;
    visit(t, [&](const Term& s) {
        if (s.is_prefix() && s.label().is_action()) {
            out.insert(s.label().name);
        }
    });
    return out;
}

bool is_closed(const Term& t) {
    bool closed = true;
    visit(t, [&](const Term& s) {
        if (s.is_var()) {
            closed = false;
        }
    });
    return closed;
}

bool has_meta(const Term& t) {
    bool meta = false;
    visit(t, [&](const Term& s) {
        if (s.is_prefix() && s.label().is_meta()) {
            meta = true;
        }
    });
    return meta;
}

Term action_power(const std::string& action, std::size_t n, Term tail) {
    for (std::size_t i = 0; i < n; ++i) {
        tail = Term::act(action, std::move(tail));
    }
    return tail;
}

Substitution& Substitution::bind(std::string var, Term image) {
    terms_[std::move(var)] = std::move(image);
    return *this;
}

Substitution& Substitution::bind_label(std::string meta, Label image) {
    labels_[std::move(meta)] = std::move(image);
    return *this;
}

std::optional<Term> Substitution::lookup(const std::string& var) const {
    auto it = terms_.find(var);
    if (it == terms_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Label Substitution::apply(const Label& l) const {
    if (!l.is_meta()) {
        return l;
    }
    auto it = labels_.find(l.str());
    return it == labels_.end() ? l : it->second;
}

Term Substitution::apply(const Term& t) const {
    switch (t.kind()) {
    case TermKind::Nil: return t;
    case TermKind::Var: {
        auto it = terms_.find(t.var_name());
        return it == terms_.end() ? t : it->second;
    }
    case TermKind::Prefix: return Term::prefix(apply(t.label()), apply(t.body()));
    case TermKind::Sum: return Term::sum(apply(t.left()), apply(t.right()));
    }
    return t;
}

bool Substitution::closes(const std::set<std::string>& vars) const {
    for (const auto& v : vars) {
        auto it = terms_.find(v);
        if (it == terms_.end() || !is_closed(it->second)) {
            return false;
        }
    }
    return true;
}

bool is_reserved_name(std::string_view name) { return name == "tau" || name == "0"; }

Alphabet Alphabet::finite(std::vector<std::string> names) {
    if (names.empty()) {
        throw AlphabetError("a finite alphabet must be nonempty");
    }
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty() || is_reserved_name(n)) {
            throw AlphabetError("'" + n + "' cannot be an action name");
        }
        if (!(std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_')) {
            throw AlphabetError("action names must start with a letter: '" + n + "'");
        }
        if (!seen.insert(n).second) {
            throw AlphabetError("duplicate action '" + n + "'");
        }
    }
    Alphabet a;
    a.names_ = std::move(names);
    return a;
}

Alphabet Alphabet::countable() {
    Alphabet a;
    a.countable_ = true;
    return a;
}

Alphabet Alphabet::parse(std::string_view spec) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    spec = trim(spec);
    if (spec == "countable") {
        return countable();
    }
    std::vector<std::string> names;
    while (!spec.empty()) {
        auto comma = spec.find(',');
        auto part = trim(spec.substr(0, comma));
        names.emplace_back(part);
        if (comma == std::string_view::npos) {
            break;
        }
        spec.remove_prefix(comma + 1);
    }
    return finite(std::move(names));
}

bool Alphabet::contains(const std::string& name) const {
    if (is_reserved_name(name) || name.empty()) {
        return false;
    }
    if (countable_) {
        return true;
    }
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::string Alphabet::fresh(const std::set<std::string>& used) const {
    if (!countable_) {
        throw AlphabetError("fresh actions require the countable alphabet");
    }
    for (std::size_t k = 0;; ++k) {
        std::string candidate = "#" + std::to_string(k);
        if (!used.count(candidate)) {
            return candidate;
        }
    }
}

std::string Alphabet::str() const {
    if (countable_) {
        return "countable";
    }
    std::string out;
    for (const auto& n : names_) {
        if (!out.empty()) out += ',';
        out += n;
    }
    return out;
}

namespace {

class TermParser {
public:
    TermParser(std::string_view text, const Alphabet& alphabet) : text_(text), alphabet_(alphabet) {}

    Term parse() {
        Term t = parse_sum();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        for (const auto& v : var_names_) {
            if (action_names_.count(v)) {
                throw AlphabetError("name '" + v + "' used both as action and as variable");
            }
        }
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '$' || c == '%';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    std::string ident() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) {
            fail("expected identifier");
        }
        ++pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            ++pos_;
        }
        std::string id(text_.substr(start, pos_ - start));
        if ((id[0] == '$' || id[0] == '%' || id[0] == '#') && id.size() == 1) {
            fail("empty name after '" + id + "'");
        }
        return id;
    }

    Term parse_sum() {
        std::vector<Term> parts{parse_prefixed()};
        while (peek('+')) {
            ++pos_;
            parts.push_back(parse_prefixed());
        }
        return Term::sum_of(parts);
    }

    Label make_label(const std::string& id) {
        if (id == "tau") {
            return Label::tau();
        }
        if (id[0] == '$') {
            return Label::action_meta(id.substr(1));
        }
        if (id[0] == '%') {
            return Label::any_meta(id.substr(1));
        }
        if (!alphabet_.contains(id)) {
            throw AlphabetError("unknown action '" + id + "' for alphabet {" + alphabet_.str() + "}");
        }
        action_names_.insert(id);
        return Label::action(id);
    }

    Term parse_prefixed() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        char c = text_[pos_];
        if (c == '0' && (pos_ + 1 >= text_.size() || !ident_char(text_[pos_ + 1]))) {
            ++pos_;
            return Term::nil();
        }
        if (c == '(') {
            ++pos_;
            Term t = parse_sum();
            if (!peek(')')) {
                fail("expected ')'");
            }
            ++pos_;
            return t;
        }
        if (!ident_start(c)) {
            throw ParseError("at offset " + std::to_string(pos_) + ": unknown symbol '" + std::string(1, c) + "'");
        }
        std::string id = ident();
        if (peek('.')) {
            ++pos_;
            Label l = make_label(id);
            return Term::prefix(std::move(l), parse_prefixed());
        }
        if (id == "tau" || id[0] == '$' || id[0] == '%' || id[0] == '#') {
            fail("'" + id + "' must be followed by '.'");
        }
        if (alphabet_.is_finite() && alphabet_.contains(id)) {
            throw AlphabetError("name '" + id + "' is an action and cannot be used as a variable");
        }
        var_names_.insert(id);
        return Term::var(id);
    }

    std::string_view text_;
    const Alphabet& alphabet_;
    std::size_t pos_ = 0;
    std::set<std::string> action_names_;
    std::set<std::string> var_names_;
};

void print(const Term& t, std::ostringstream& os) {
    switch (t.kind()) {
    case TermKind::Nil: os << '0'; break;
    case TermKind::Var: os << t.var_name(); break;
    case TermKind::Prefix:
        os << t.label().str() << '.';
        if (t.body().is_sum()) {
            os << '(';
            print(t.body(), os);
            os << ')';
        } else {
            print(t.body(), os);
        }
        break;
    case TermKind::Sum:
        if (t.left().is_sum()) {
            os << '(';
            print(t.left(), os);
            os << ')';
        } else {
            print(t.left(), os);
        }
        os << " + ";
        print(t.right(), os);
        break;
    }
}

} // namespace

Term parse_term(std::string_view text, const Alphabet& alphabet) { return TermParser(text, alphabet).parse(); }

std::string to_string(const Term& t) {
    std::ostringstream os;
    print(t, os);
    return os.str();
}

std::string to_string(const Substitution& s) {
    std::string out;
    for (const auto& [v, img] : s.terms()) {
        out += v + " := " + to_string(img) + "\n";
    }
    for (const auto& [m, l] : s.labels()) {
        out += m + " := " + l.str() + "\n";
    }
    return out;
}

} // namespace bccs
