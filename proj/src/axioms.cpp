#include "bccs/axioms.hpp"

#include "bccs/error.hpp"
#include "bccs/lts.hpp"

namespace bccs {

namespace {

Statement schema(const std::string& text) { return parse_statement(text, Alphabet::countable()); }

Term var(const std::string& n) { return Term::var(n); }
Term meta_a(Term body) { return Term::prefix(Label::action_meta("a"), std::move(body)); }

std::string xi(std::size_t i) { return "x" + std::to_string(i); }
std::string yi(std::size_t i) { return "y" + std::to_string(i); }

void require_finite(const Alphabet& alphabet, const std::string& what) {
    if (!alphabet.is_finite()) {
        throw AlphabetError(what + " mentions every action and needs a finite alphabet");
    }
}

AxiomSet single_table(const std::string& name, const Alphabet& alphabet) {
    AxiomSet s(name);
    if (name == "A1-4") {
        s.add("A1", schema("x + y == y + x"));
        s.add("A2", schema("(x + y) + z == x + (y + z)"));
        s.add("A3", schema("x + x == x"));
        s.add("A4", schema("x + 0 == x"));
    } else if (name == "WF1-3" || name == "WF1-2") {
        s.add("WF1", schema("$a.x + $a.y == $a.(tau.x + tau.y)"));
        s.add("WF2", schema("tau.(x + y) <= tau.x + y"));
        if (name == "WF1-3") s.add("WF3", schema("x <= tau.x + y"));
    } else if (name == "WF_A") {
        require_finite(alphabet, "WF_A");
        Term sum = alphabet_sum(alphabet);
        s.add("WF_A", Statement::leq(sum, Term::sum(sum, var("y"))));
    } else if (name == "N-E") {
        s.add("N1", schema("%alpha.x + %alpha.y == %alpha.(tau.x + tau.y)"));
        s.add("N2", schema("tau.(x + y) <= x + tau.y"));
        s.add("N3", schema("%alpha.x + tau.(%alpha.y + z) == tau.(%alpha.x + %alpha.y + z)"));
        s.add("E1", schema("x <= tau.x + tau.y"));
    } else if (name == "D1-9") {
        s.add("D1", schema("tau.(x + y) + x == tau.(x + y)"));
        s.add("D2", schema("tau.(tau.x + y) == tau.x + y"));
        s.add("D3", schema("$a.x + tau.($a.y + z) == tau.($a.x + $a.y + z)"));
        s.add("D4", schema("tau.x <= tau.x + y"));
        for (std::size_t n = 1; n <= 3; ++n) s.add("D5_" + std::to_string(n), d5_statement(n));
        s.add("D6", schema("tau.x + y == tau.x + tau.(x + y)"));
        s.add("D7", schema("tau.x + tau.y == tau.x + tau.(x + y) + tau.y"));
        s.add("D8", schema("tau.x + tau.(x + y + z) == tau.x + tau.(x + y) + tau.(x + y + z)"));
        for (std::size_t n = 1; n <= 3; ++n) s.add("D9_" + std::to_string(n), d9_statement(n));
    } else if (name == "WIF3") {
        s.add("WIF3", schema("x <= tau.x"));
    } else if (name == "WFE") {
        s.add("WF1", schema("$a.x + $a.y == $a.(tau.x + tau.y)"));
        s.add("WFE2", schema("tau.(x + y) + tau.x == tau.x + y"));
        s.add("WFE3", schema("$a.x + tau.($a.y + z) == tau.($a.x + $a.y + z)"));
    } else if (name == "WFE_A") {
        require_finite(alphabet, "WFE_A");
        Term sum = alphabet_sum(alphabet);
        Term z = var("z");
        Term rhs = Term::tau(Term::sum_of({sum, var("y"), z}));
        s.add("WFE_A", Statement::eq(Term::sum(Term::tau(Term::sum(sum, z)), rhs), rhs));
    } else if (name == "TAB-AUX") {
        s.add("WF1", schema("$a.x + $a.y == $a.(tau.x + tau.y)"));
        s.add("WF2^a", schema("tau.(x + y) + tau.x + y == tau.x + y"));
        s.add("WF2^b", schema("%alpha.(tau.(x + y) + z) + %alpha.(tau.x + y + z) == %alpha.(tau.x + y + z)"));
        s.add("WF3^a", schema("x + tau.x + y == tau.x + y"));
        s.add("WF3^b", schema("%alpha.(x + z) + %alpha.(tau.x + y + z) == %alpha.(tau.x + y + z)"));
        s.add("RS", schema("%beta.(%alpha.x + z) + %beta.(%alpha.x + %alpha.y + z) == %beta.(%alpha.x + %alpha.y + z)"));
        if (alphabet.is_finite()) {
            Term sum = alphabet_sum(alphabet);
            Term y = var("y");
            Term z = var("z");
            Label alpha = Label::any_meta("alpha");
            s.add("WF_A^a", Statement::eq(Term::sum_of({sum, sum, y}), Term::sum(sum, y)));
            Term rhs = Term::prefix(alpha, Term::sum_of({sum, y, z}));
            s.add("WF_A^b", Statement::eq(Term::sum(Term::prefix(alpha, Term::sum(sum, z)), rhs), rhs));
        }
    } else if (name == "wf-preorder") {
        s.add(single_table("A1-4", alphabet)).add(single_table("WF1-3", alphabet));
        if (alphabet.is_finite()) s.add(single_table("WF_A", alphabet));
    } else if (name == "wif-preorder") {
        s.add(single_table("A1-4", alphabet)).add(single_table("WF1-2", alphabet)).add(single_table("WIF3", alphabet));
    } else if (name == "wf-equiv") {
        s.add(single_table("A1-4", alphabet)).add(single_table("WFE", alphabet));
        if (alphabet.is_finite()) s.add(single_table("WFE_A", alphabet));
    } else {
        throw UsageError("unknown axiom table '" + name + "'");
    }
    return s;
}

} // namespace

Term alphabet_sum(const Alphabet& alphabet) {
    require_finite(alphabet, "the alphabet sum");
    std::vector<Term> parts;
    for (const auto& a : alphabet.names()) parts.push_back(Term::act(a, var("x_" + a)));
    return Term::sum_of(parts);
}

Statement d5_statement(std::size_t n) {
    std::vector<Term> lhs;
    std::vector<Term> inner;
    for (std::size_t i = 1; i <= n; ++i) {
        lhs.push_back(meta_a(var(xi(i))));
        inner.push_back(Term::tau(var(xi(i))));
    }
    return Statement::eq(Term::sum_of(lhs), meta_a(Term::sum_of(inner)));
}

Statement d9_statement(std::size_t n) {
    std::vector<Term> inner;
    for (std::size_t i = 1; i <= n; ++i) inner.push_back(Term::tau(var(xi(i))));
    Term t = Term::sum_of(inner);
    std::vector<Term> lhs;
    std::vector<Term> rhs;
    for (std::size_t i = 1; i <= n; ++i) {
        lhs.push_back(Term::tau(Term::sum(meta_a(var(xi(i))), var(yi(i)))));
        rhs.push_back(Term::tau(Term::sum(meta_a(t), var(yi(i)))));
    }
    return Statement::eq(Term::sum_of(lhs), Term::sum_of(rhs));
}

AxiomSet builtin_axioms(const std::string& name, const Alphabet& alphabet) {
    if (name.find('+') == std::string::npos) {
        return single_table(name, alphabet);
    }
    AxiomSet out(name);
    std::size_t start = 0;
    while (start <= name.size()) {
        auto plus = name.find('+', start);
        auto part = name.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
        out.add(single_table(part, alphabet));
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    return out;
}

std::string fresh_variable(const std::set<std::string>& used) {
    if (!used.count("z")) return "z";
    for (std::size_t k = 1;; ++k) {
        auto c = "z" + std::to_string(k);
        if (!used.count(c)) return c;
    }
}

namespace {

void collect_metas(const Term& t, std::set<std::string>& out) {
    if (t.is_prefix()) {
        if (t.label().is_meta()) out.insert(t.label().name);
        collect_metas(t.body(), out);
    } else if (t.is_sum()) {
        collect_metas(t.left(), out);
        collect_metas(t.right(), out);
    }
}

std::string fresh_meta(const std::set<std::string>& used) {
    if (!used.count("alpha")) return "alpha";
    for (std::size_t k = 1;; ++k) {
        auto c = "alpha" + std::to_string(k);
        if (!used.count(c)) return c;
    }
}

} // namespace

AxiomSet generate_equivalence_axioms(const AxiomSet& e) {
    AxiomSet out("A(" + e.name() + ")");
    out.add(single_table("A1-4", Alphabet::countable()));
    out.add("RS", schema("%beta.(%alpha.x + z) + %beta.(%alpha.x + %alpha.y + z) == %beta.(%alpha.x + %alpha.y + z)"));
    for (const auto& ax : e.axioms()) {
        const auto& s = ax.statement;
        if (s.is_equation()) {
            out.add(ax.name, s);
            continue;
        }
        auto used = variables(s.lhs);
        auto more = variables(s.rhs);
        used.insert(more.begin(), more.end());
        Term z = var(fresh_variable(used));
        std::set<std::string> metas;
        collect_metas(s.lhs, metas);
        collect_metas(s.rhs, metas);
        Label alpha = Label::any_meta(fresh_meta(metas));
        out.add(ax.name + "^a", Statement::eq(Term::sum(s.lhs, s.rhs), s.rhs));
        Term rhs = Term::prefix(alpha, Term::sum(s.rhs, z));
        out.add(ax.name + "^b", Statement::eq(Term::sum(Term::prefix(alpha, Term::sum(s.lhs, z)), rhs), rhs));
    }
    return out;
}

Term InvertedSubstitution::restore(const Term& t) const {
    switch (t.kind()) {
    case TermKind::Nil:
    case TermKind::Var: return t;
    case TermKind::Sum: return Term::sum(restore(t.left()), restore(t.right()));
    case TermKind::Prefix:
        if (t.label().is_action()) {
            for (const auto& [v, a] : action_of) {
                if (a == t.label().name) return Term::var(v);
            }
        }
        return Term::prefix(t.label(), restore(t.body()));
    }
    return t;
}

InvertedSubstitution invert_substitution(const Term& t, const Term& u, const Alphabet& alphabet) {
    if (alphabet.is_finite()) {
        throw AlphabetError("inverted substitutions need fresh actions (countable alphabet)");
    }
    InvertedSubstitution out;
    auto used = actions(t);
    auto more = actions(u);
    used.insert(more.begin(), more.end());
    for (const auto& v : variables_in_order(t, u)) {
        auto a = alphabet.fresh(used);
        used.insert(a);
        out.action_of.emplace(v, a);
        out.rho.bind(v, Term::act(a, Term::nil()));
    }
    return out;
}

} // namespace bccs
