#include "bccs/proof.hpp"

#include "bccs/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace bccs {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool ac_equal(const Term& a, const Term& b) { return a == b || ac_normal(a) == ac_normal(b); }

} // namespace

std::string to_string(const Statement& s) {
    return to_string(s.lhs) + (s.is_equation() ? " == " : " <= ") + to_string(s.rhs);
}

Statement parse_statement(std::string_view text, const Alphabet& alphabet) {
    auto le = text.find("<=");
    auto eq = text.find("==");
    if ((le == std::string_view::npos) == (eq == std::string_view::npos)) {
        throw ParseError("a statement needs exactly one '<=' or '==': " + std::string(text));
    }
    bool is_eq = eq != std::string_view::npos;
    auto at = is_eq ? eq : le;
    Term lhs = parse_term(text.substr(0, at), alphabet);
    Term rhs = parse_term(text.substr(at + 2), alphabet);
    for (const auto& v : variables(lhs)) {
        if (actions(rhs).count(v)) throw AlphabetError("name '" + v + "' used both as action and as variable");
    }
    for (const auto& v : variables(rhs)) {
        if (actions(lhs).count(v)) throw AlphabetError("name '" + v + "' used both as action and as variable");
    }
    return is_eq ? Statement::eq(lhs, rhs) : Statement::leq(lhs, rhs);
}

bool equal_modulo_ac(const Statement& a, const Statement& b) {
    return a.kind == b.kind && ac_equal(a.lhs, b.lhs) && ac_equal(a.rhs, b.rhs);
}

bool equal_modulo_a14(const Statement& a, const Statement& b) {
    return a.kind == b.kind && canonical(a.lhs) == canonical(b.lhs) && canonical(a.rhs) == canonical(b.rhs);
}

AxiomSet& AxiomSet::add(std::string name, Statement s) {
    if (!contains(name)) {
        axioms_.push_back({std::move(name), std::move(s)});
    }
    return *this;
}

AxiomSet& AxiomSet::add(const AxiomSet& other) {
    for (const auto& a : other.axioms()) {
        add(a.name, a.statement);
    }
    return *this;
}

const NamedStatement* AxiomSet::find(const std::string& name) const {
    for (const auto& a : axioms_) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::size_t AxiomSet::max_depth() const {
    std::size_t d = 0;
    for (const auto& a : axioms_) {
        d = std::max({d, depth(a.statement.lhs), depth(a.statement.rhs)});
    }
    return d;
}

AxiomSet AxiomSet::kernel() const {
    AxiomSet out(name_ + "-kernel");
    for (const auto& a : axioms_) {
        if (a.statement.is_equation()) out.add(a.name, a.statement);
    }
    return out;
}

AxiomFile parse_axiom_file(std::string_view text, const Alphabet& fallback) {
    AxiomFile out{fallback, AxiomSet()};
    std::size_t lineno = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = trim(text.substr(0, nl));
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++lineno;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 'NAME: statement'");
        }
        auto name = std::string(trim(line.substr(0, colon)));
        auto rest = trim(line.substr(colon + 1));
        if (name == "alphabet") {
            out.alphabet = Alphabet::parse(rest);
            continue;
        }
        if (name.empty()) {
            throw ParseError("line " + std::to_string(lineno) + ": empty axiom name");
        }
        try {
            out.axioms.add(name, parse_statement(rest, out.alphabet));
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::string to_axiom_file(const AxiomSet& axioms, const Alphabet& alphabet) {
    std::string out = "alphabet: " + alphabet.str() + "\n";
    for (const auto& a : axioms.axioms()) {
        out += a.name + ": " + to_string(a.statement) + "\n";
    }
    return out;
}

std::string to_string(Rule r) {
    switch (r) {
    case Rule::Axiom: return "axiom";
    case Rule::Lemma: return "lemma";
    case Rule::Reflexivity: return "refl";
    case Rule::Symmetry: return "sym";
    case Rule::Transitivity: return "trans";
    case Rule::SumCongruence: return "sum";
    case Rule::PrefixCongruence: return "prefix";
    case Rule::Antisymmetry: return "antisym";
    }
    return "?";
}

Rule parse_rule(const std::string& s) {
    static const std::map<std::string, Rule> table{
        {"axiom", Rule::Axiom},        {"lemma", Rule::Lemma},         {"refl", Rule::Reflexivity},
        {"sym", Rule::Symmetry},       {"trans", Rule::Transitivity},  {"sum", Rule::SumCongruence},
        {"prefix", Rule::PrefixCongruence}, {"antisym", Rule::Antisymmetry},
    };
    auto it = table.find(s);
    if (it == table.end()) throw ParseError("unknown rule '" + s + "'");
    return it->second;
}

Library& Library::add(std::string name, Statement statement, Proof script) {
    if (index_.count(name)) {
        throw ProofError("duplicate lemma '" + name + "'");
    }
    index_.emplace(name, entries_.size());
    entries_.push_back({std::move(name), std::move(statement), std::move(script)});
    return *this;
}

const Library::Entry* Library::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

Substitution compose(const Substitution& sigma, const Substitution& tau) {
    Substitution out;
    for (const auto& [v, img] : tau.terms()) out.bind(v, sigma.apply(img));
    for (const auto& [v, img] : sigma.terms()) {
        if (!tau.terms().count(v)) out.bind(v, img);
    }
    for (const auto& [m, l] : tau.labels()) out.bind_label(m, sigma.apply(l));
    for (const auto& [m, l] : sigma.labels()) {
        if (!tau.labels().count(m)) out.bind_label(m, l);
    }
    return out;
}

namespace {

void check_label_images(const Substitution& s) {
    for (const auto& [m, l] : s.labels()) {
        if (m.empty() || (m[0] != '$' && m[0] != '%')) {
            throw ProofError("'" + m + "' is not a label metavariable");
        }
        if (m[0] == '$' && !l.is_visible()) {
            throw ProofError("substitution maps " + m + " to " + l.str() + ", which may be tau");
        }
    }
}

Statement instantiate(const Statement& schema, const Substitution& s, bool backward, const std::string& name) {
    check_label_images(s);
    if (backward && !schema.is_equation()) {
        throw ProofError("inequation " + name + " used right to left");
    }
    Statement inst = schema.apply(s);
    return backward ? inst.swapped() : inst;
}

bool accepts(const Statement& derived, const Statement& claimed) {
    if (!ac_equal(derived.lhs, claimed.lhs) || !ac_equal(derived.rhs, claimed.rhs)) {
        return false;
    }
    return derived.kind == claimed.kind || derived.is_equation();
}

Term sum_sides(const std::vector<Statement>& parts, bool left) {
    std::vector<Term> terms;
    for (const auto& p : parts) terms.push_back(left ? p.lhs : p.rhs);
    return Term::sum_of(terms);
}

Statement::Kind combined_kind(const std::vector<Statement>& parts) {
    bool all_eq = std::all_of(parts.begin(), parts.end(), [](const Statement& s) { return s.is_equation(); });
    return all_eq ? Statement::Kind::Equation : Statement::Kind::Inequation;
}

/// The conclusion a node's rule yields from its children's conclusions.
Statement derive(const ProofNode& n, const std::vector<Statement>& kids, const std::function<const Statement*(const ProofNode&)>& schema_of) {
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (kids.size() < lo || kids.size() > hi) {
            throw ProofError(to_string(n.rule) + " with " + std::to_string(kids.size()) + " premises");
        }
    };
    switch (n.rule) {
    case Rule::Axiom:
    case Rule::Lemma: {
        arity(0, 0);
        const Statement* schema = schema_of(n);
        return instantiate(*schema, n.subst, n.backward, n.name);
    }
    case Rule::Reflexivity:
        arity(0, 0);
        if (!ac_equal(n.conclusion.lhs, n.conclusion.rhs)) {
            throw ProofError("reflexivity between different terms");
        }
        return Statement::eq(n.conclusion.lhs, n.conclusion.lhs);
    case Rule::Symmetry:
        arity(1, 1);
        if (!kids[0].is_equation()) {
            throw ProofError("symmetry applied to an inequation");
        }
        return kids[0].swapped();
    case Rule::Transitivity:
        arity(1, SIZE_MAX);
        for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
            if (!ac_equal(kids[i].rhs, kids[i + 1].lhs)) {
                throw ProofError("transitivity chain broken at step " + std::to_string(i + 1) + ": " +
                                 to_string(kids[i].rhs) + " vs " + to_string(kids[i + 1].lhs));
            }
        }
        return {combined_kind(kids), kids.front().lhs, kids.back().rhs};
    case Rule::SumCongruence:
        arity(1, SIZE_MAX);
        return {combined_kind(kids), sum_sides(kids, true), sum_sides(kids, false)};
    case Rule::PrefixCongruence: {
        arity(1, 1);
        Term l = ac_normal(n.conclusion.lhs);
        if (!l.is_prefix()) {
            throw ProofError("prefix congruence concluding a non-prefix term");
        }
        return {kids[0].kind, Term::prefix(l.label(), kids[0].lhs), Term::prefix(l.label(), kids[0].rhs)};
    }
    case Rule::Antisymmetry:
        arity(2, 2);
        if (!ac_equal(kids[0].lhs, kids[1].rhs) || !ac_equal(kids[0].rhs, kids[1].lhs)) {
            throw ProofError("antisymmetry premises are not converse");
        }
        return Statement::eq(kids[0].lhs, kids[0].rhs);
    }
    throw ProofError("unknown rule");
}

class Checker {
public:
    Checker(const AxiomSet& allowed, const Library* lemmas) : allowed_(allowed), lemmas_(lemmas) {}

    Statement check(const Proof& p, const std::string& path) {
        if (!p) throw ProofError(path + ": missing node");
        std::vector<Statement> kids;
        for (std::size_t i = 0; i < p->children.size(); ++i) {
            kids.push_back(check(p->children[i], path + "/" + std::to_string(i)));
        }
        Statement derived;
        try {
            derived = derive(*p, kids, [&](const ProofNode& n) { return schema(n); });
        } catch (const ProofError& e) {
            throw ProofError(path + " (" + to_string(p->rule) + "): " + e.what());
        }
        if (!accepts(derived, p->conclusion)) {
            throw ProofError(path + " (" + to_string(p->rule) + "): claims " + to_string(p->conclusion) +
                             " but the rule yields " + to_string(derived));
        }
        return p->conclusion;
    }

private:
    const Statement* schema(const ProofNode& n) {
        if (n.rule == Rule::Axiom) {
            const auto* a = allowed_.find(n.name);
            if (!a) throw ProofError("unknown axiom '" + n.name + "'");
            return &a->statement;
        }
        const auto* e = lemmas_ ? lemmas_->find(n.name) : nullptr;
        if (!e) throw ProofError("unknown lemma '" + n.name + "'");
        auto state = verified_.find(n.name);
        if (state == verified_.end()) {
            verified_[n.name] = false;
            Statement got = check(e->script, "lemma " + n.name);
            if (!equal_modulo_ac(got, e->statement)) {
                throw ProofError("lemma " + n.name + ": script concludes " + to_string(got));
            }
            verified_[n.name] = true;
        } else if (!state->second) {
            throw ProofError("lemma " + n.name + " depends on itself");
        }
        return &e->statement;
    }

    const AxiomSet& allowed_;
    const Library* lemmas_;
    std::map<std::string, bool> verified_;
};

Proof make(Rule rule, Statement concl, std::vector<Proof> kids = {}) {
    auto n = std::make_shared<ProofNode>();
    n->rule = rule;
    n->conclusion = std::move(concl);
    n->children = std::move(kids);
    return n;
}

Proof with_conclusion(const Proof& p, const Statement& s) {
    if (p->conclusion == s) return p;
    auto n = std::make_shared<ProofNode>(*p);
    n->conclusion = s;
    return n;
}

} // namespace

Statement check_derivation(const Proof& proof, const AxiomSet& allowed, const Library* lemmas) {
    return Checker(allowed, lemmas).check(proof, "root");
}

std::set<std::string> axioms_used(const Proof& proof, const Library* lemmas) {
    std::set<std::string> out;
    std::set<std::string> seen_lemmas;
    std::function<void(const Proof&)> walk = [&](const Proof& p) {
        if (p->rule == Rule::Axiom) out.insert(p->name);
        if (p->rule == Rule::Lemma && lemmas && seen_lemmas.insert(p->name).second) {
            if (const auto* e = lemmas->find(p->name)) walk(e->script);
        }
        for (const auto& c : p->children) walk(c);
    };
    walk(proof);
    return out;
}

Proof substitute(const Proof& proof, const Substitution& sigma) {
    if (sigma.empty()) return proof;
    auto n = std::make_shared<ProofNode>(*proof);
    if (n->rule == Rule::Axiom || n->rule == Rule::Lemma) {
        n->subst = compose(sigma, proof->subst);
    }
    n->conclusion = proof->conclusion.apply(sigma);
    for (auto& c : n->children) c = substitute(c, sigma);
    return n;
}

Proof expand_lemmas(const Proof& proof, const Library& lemmas) {
    std::map<std::string, Proof> expanded;
    std::function<Proof(const Proof&)> go = [&](const Proof& p) -> Proof {
        if (p->rule == Rule::Lemma) {
            const auto* e = lemmas.find(p->name);
            if (!e) throw ProofError("unknown lemma '" + p->name + "'");
            auto it = expanded.find(p->name);
            if (it == expanded.end()) {
                it = expanded.emplace(p->name, go(e->script)).first;
            }
            Proof body = substitute(it->second, p->subst);
            if (p->backward) {
                body = make(Rule::Symmetry, body->conclusion.swapped(), {body});
            }
            return with_conclusion(body, p->conclusion);
        }
        if (p->children.empty()) return p;
        auto n = std::make_shared<ProofNode>(*p);
        for (auto& c : n->children) c = go(c);
        return n;
    };
    return go(proof);
}

Proof restate(const Proof& proof, const Statement& conclusion) {
    if (!accepts(proof->conclusion, conclusion)) {
        throw ProofError("cannot restate " + to_string(proof->conclusion) + " as " + to_string(conclusion));
    }
    return with_conclusion(proof, conclusion);
}

std::size_t proof_size(const Proof& proof) {
    std::size_t n = 1;
    for (const auto& c : proof->children) n += proof_size(c);
    return n;
}

namespace {

using nlohmann::json;

json node_to_json(const Proof& p) {
    json j;
    j["rule"] = to_string(p->rule);
    j["conclusion"] = to_string(p->conclusion);
    if (p->rule == Rule::Axiom || p->rule == Rule::Lemma) {
        j["axiom"] = p->name;
        j["direction"] = p->backward ? "backward" : "forward";
        json s = json::object();
        for (const auto& [v, t] : p->subst.terms()) s[v] = to_string(t);
        for (const auto& [m, l] : p->subst.labels()) s[m] = l.str();
        j["subst"] = s;
    }
    if (!p->children.empty()) {
        json kids = json::array();
        for (const auto& c : p->children) kids.push_back(node_to_json(c));
        j["children"] = kids;
    }
    return j;
}

Label parse_label(const std::string& s, const Alphabet& alphabet) {
    if (s == "tau") return Label::tau();
    if (s.size() > 1 && s[0] == '$') return Label::action_meta(s.substr(1));
    if (s.size() > 1 && s[0] == '%') return Label::any_meta(s.substr(1));
    if (!alphabet.contains(s)) throw AlphabetError("unknown action '" + s + "'");
    return Label::action(s);
}

Proof node_from_json(const json& j, const Alphabet& alphabet) {
    auto n = std::make_shared<ProofNode>();
    n->rule = parse_rule(j.at("rule").get<std::string>());
    n->conclusion = parse_statement(j.at("conclusion").get<std::string>(), alphabet);
    if (n->rule == Rule::Axiom || n->rule == Rule::Lemma) {
        n->name = j.at("axiom").get<std::string>();
        auto dir = j.value("direction", std::string("forward"));
        if (dir != "forward" && dir != "backward") throw ParseError("bad direction '" + dir + "'");
        n->backward = dir == "backward";
        if (j.contains("subst")) {
            for (const auto& [k, v] : j.at("subst").items()) {
                if (!k.empty() && (k[0] == '$' || k[0] == '%')) {
                    n->subst.bind_label(k, parse_label(v.get<std::string>(), alphabet));
                } else {
                    n->subst.bind(k, parse_term(v.get<std::string>(), alphabet));
                }
            }
        }
    }
    if (j.contains("children")) {
        for (const auto& c : j.at("children")) n->children.push_back(node_from_json(c, alphabet));
    }
    return n;
}

} // namespace

std::string to_json(const Proof& proof, const Alphabet& alphabet, const std::string& base) {
    json j;
    j["alphabet"] = alphabet.str();
    j["base"] = base;
    j["proof"] = node_to_json(proof);
    return j.dump(1) + "\n";
}

DerivationFile parse_derivation(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("derivation file: ") + e.what());
    }
    try {
        Alphabet alphabet = Alphabet::parse(j.at("alphabet").get<std::string>());
        return {alphabet, j.value("base", std::string()), node_from_json(j.at("proof"), alphabet)};
    } catch (const json::exception& e) {
        throw ParseError(std::string("derivation file: ") + e.what());
    }
}

Proof ProofBuilder::instance(Rule rule, const std::string& name, const Statement& schema, Substitution s, bool backward) const {
    auto n = std::make_shared<ProofNode>();
    n->rule = rule;
    n->name = name;
    n->backward = backward;
    n->conclusion = instantiate(schema, s, backward, name);
    n->subst = std::move(s);
    return n;
}

Proof ProofBuilder::ax(const std::string& name, Substitution s, bool backward) const {
    const auto* a = base_.find(name);
    if (!a) throw ProofError("builder: axiom '" + name + "' not in base " + base_.name());
    return instance(Rule::Axiom, name, a->statement, std::move(s), backward);
}

Proof ProofBuilder::lemma(const std::string& name, Substitution s, bool backward) const {
    const auto* e = lemmas_ ? lemmas_->find(name) : nullptr;
    if (!e) throw ProofError("builder: unknown lemma '" + name + "'");
    return instance(Rule::Lemma, name, e->statement, std::move(s), backward);
}

Proof ProofBuilder::refl(const Term& t) const { return make(Rule::Reflexivity, Statement::eq(t, t)); }

Proof ProofBuilder::sym(const Proof& p) const {
    if (!p->conclusion.is_equation()) throw ProofError("builder: symmetry of an inequation");
    return make(Rule::Symmetry, p->conclusion.swapped(), {p});
}

Proof ProofBuilder::trans(const std::vector<Proof>& steps) const {
    std::vector<Proof> kids;
    for (const auto& s : steps) {
        if (s->rule == Rule::Reflexivity && !steps.empty() && steps.size() > 1) continue;
        if (s->rule == Rule::Transitivity) {
            kids.insert(kids.end(), s->children.begin(), s->children.end());
        } else {
            kids.push_back(s);
        }
    }
    if (kids.empty()) return steps.front();
    std::vector<Statement> concl;
    for (const auto& k : kids) concl.push_back(k->conclusion);
    for (std::size_t i = 0; i + 1 < concl.size(); ++i) {
        if (!ac_equal(concl[i].rhs, concl[i + 1].lhs)) {
            throw ProofError("builder: broken chain: " + to_string(concl[i]) + " then " + to_string(concl[i + 1]));
        }
    }
    if (kids.size() == 1) return kids.front();
    return make(Rule::Transitivity, {combined_kind(concl), concl.front().lhs, concl.back().rhs}, kids);
}

Proof ProofBuilder::sum(const std::vector<Proof>& parts) const {
    if (parts.size() == 1) return parts.front();
    std::vector<Statement> concl;
    for (const auto& k : parts) concl.push_back(k->conclusion);
    bool all_refl = std::all_of(parts.begin(), parts.end(), [](const Proof& p) { return p->rule == Rule::Reflexivity; });
    Statement s{combined_kind(concl), sum_sides(concl, true), sum_sides(concl, false)};
    if (all_refl) return refl(s.lhs);
    return make(Rule::SumCongruence, s, parts);
}

Proof ProofBuilder::prefix(const Label& l, const Proof& p) const {
    const auto& c = p->conclusion;
    if (p->rule == Rule::Reflexivity) return refl(Term::prefix(l, c.lhs));
    return make(Rule::PrefixCongruence, {c.kind, Term::prefix(l, c.lhs), Term::prefix(l, c.rhs)}, {p});
}

Proof ProofBuilder::antisym(const Proof& le, const Proof& ge) const {
    const auto& a = le->conclusion;
    const auto& b = ge->conclusion;
    if (!ac_equal(a.lhs, b.rhs) || !ac_equal(a.rhs, b.lhs)) {
        throw ProofError("builder: antisymmetry premises " + to_string(a) + " and " + to_string(b));
    }
    return make(Rule::Antisymmetry, Statement::eq(a.lhs, a.rhs), {le, ge});
}

Proof ProofBuilder::weaken(const Proof& p) const {
    if (!p->conclusion.is_equation()) return p;
    return with_conclusion(p, p->conclusion.weakened());
}

Proof ProofBuilder::dedup(const Term& t) const {
    if (ac_equal(t, canonical(t))) return refl(t);
    if (t.is_prefix()) return prefix(t.label(), dedup(t.body()));
    std::vector<Proof> parts;
    std::vector<Term> current;
    for (const auto& s : summands(t)) {
        parts.push_back(dedup(s));
        current.push_back(canonical(s));
    }
    std::vector<Proof> chain{sum(parts)};
    std::sort(current.begin(), current.end());
    for (std::size_t i = 0; i + 1 < current.size();) {
        if (current[i] == current[i + 1]) {
            std::vector<Term> rest(current.begin(), current.end());
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i), rest.begin() + static_cast<std::ptrdiff_t>(i + 2));
            chain.push_back(plus(ax("A3", Substitution().bind("x", current[i])), Term::sum_of(rest)));
            current.erase(current.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    return trans(chain);
}

Proof ProofBuilder::a14(const Term& t, const Term& u) const {
    if (ac_equal(t, u)) return refl(t);
    if (canonical(t) != canonical(u)) {
        throw ProofError("builder: " + to_string(t) + " and " + to_string(u) + " differ modulo A1-4");
    }
    return trans({dedup(t), sym(dedup(u))});
}

} // namespace bccs
