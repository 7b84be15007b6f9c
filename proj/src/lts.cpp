#include "bccs/lts.hpp"

#include "bccs/error.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace bccs {

std::string to_string(const Trace& trace) {
    if (trace.empty()) {
        return "ε";
    }
    std::string out;
    for (const auto& s : trace) {
        if (!out.empty()) out += ' ';
        out += s.name;
    }
    return out;
}

Trace action_trace(const std::string& action, std::size_t n) { return Trace(n, Symbol{action, false}); }

std::vector<std::pair<Label, Term>> transitions(const Term& t) {
    std::set<std::pair<Label, Term>> out;
    for (const auto& s : summands(t)) {
        if (s.is_prefix()) {
            out.emplace(s.label(), s.body());
        }
    }
    return {out.begin(), out.end()};
}

namespace {

std::set<Term> tau_closure(const Term& t) {
    std::set<Term> seen{t};
    std::vector<Term> todo{t};
    while (!todo.empty()) {
        Term cur = todo.back();
        todo.pop_back();
        for (const auto& [l, next] : transitions(cur)) {
            if (l.is_tau() && seen.insert(next).second) {
                todo.push_back(next);
            }
        }
    }
    return seen;
}

} // namespace

std::set<Term> weak_step(const Term& t, const std::optional<Label>& label) {
    auto pre = tau_closure(t);
    if (!label) {
        return pre;
    }
    std::set<Term> out;
    for (const auto& s : pre) {
        for (const auto& [l, next] : transitions(s)) {
            if (l != *label) {
                continue;
            }
            if (label->is_tau()) {
                out.insert(next);
            } else {
                auto post = tau_closure(next);
                out.insert(post.begin(), post.end());
            }
        }
    }
    return out;
}

std::set<Label> initials(const Term& t, InitialsKind kind) {
    std::set<Label> out;
    if (kind == InitialsKind::Strong) {
        for (const auto& [l, next] : transitions(t)) {
            out.insert(l);
        }
        return out;
    }
    for (const auto& s : tau_closure(t)) {
        for (const auto& [l, next] : transitions(s)) {
            if (kind == InitialsKind::WeakWithTau || !l.is_tau()) {
                out.insert(l);
            }
        }
    }
    return out;
}

int Lts::add(const Term& t) {
    Term c = canonical(t);
    if (auto it = index_.find(c); it != index_.end()) {
        return it->second;
    }
    std::vector<Edge> out;
    for (const auto& s : summands(c)) {
        if (s.is_prefix()) {
            if (s.label().is_meta()) {
                throw UsageError("label metavariables have no operational meaning: " + to_string(c));
            }
            Edge e;
            e.tau = s.label().is_tau();
            e.symbol = Symbol{s.label().name, false};
            e.target = add(s.body());
            out.push_back(std::move(e));
        } else if (s.is_var() && vars_as_actions_) {
            Edge e;
            e.symbol = Symbol{s.var_name(), true};
            e.target = add(Term::nil());
            out.push_back(std::move(e));
        }
    }
    int id = static_cast<int>(states_.size());
    states_.push_back(c);
    index_.emplace(c, id);
    edges_.push_back(std::move(out));
    closure_.emplace_back();
    initials_.emplace_back();
    traces_.emplace_back();
    derivatives_.emplace_back();
    return id;
}

const std::vector<int>& Lts::closure(int s) {
    auto& slot = closure_[static_cast<std::size_t>(s)];
    if (!slot) {
        std::vector<int> out{s};
        for (const auto& e : edges(s)) {
            if (e.tau) {
                const auto& sub = closure(e.target);
                out.insert(out.end(), sub.begin(), sub.end());
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        closure_[static_cast<std::size_t>(s)] = std::move(out);
    }
    return *closure_[static_cast<std::size_t>(s)];
}

const std::set<Symbol>& Lts::initials(int s) {
    if (!initials_[static_cast<std::size_t>(s)]) {
        std::set<Symbol> out;
        for (int c : closure(s)) {
            for (const auto& e : edges(c)) {
                if (!e.tau) {
                    out.insert(e.symbol);
                }
            }
        }
        initials_[static_cast<std::size_t>(s)] = std::move(out);
    }
    return *initials_[static_cast<std::size_t>(s)];
}

const std::set<Trace>& Lts::traces(int s) {
    if (!traces_[static_cast<std::size_t>(s)]) {
        std::set<Trace> out{Trace{}};
        for (int c : closure(s)) {
            for (const auto& e : edges(c)) {
                if (e.tau) {
                    continue;
                }
                for (const auto& tail : traces(e.target)) {
                    Trace tr{e.symbol};
                    tr.insert(tr.end(), tail.begin(), tail.end());
                    out.insert(std::move(tr));
                }
            }
        }
        traces_[static_cast<std::size_t>(s)] = std::move(out);
    }
    return *traces_[static_cast<std::size_t>(s)];
}

const std::map<Trace, std::set<int>>& Lts::derivatives(int s) {
    if (!derivatives_[static_cast<std::size_t>(s)]) {
        std::map<Trace, std::set<int>> out;
        const auto& cl = closure(s);
        out[Trace{}].insert(cl.begin(), cl.end());
        for (int c : cl) {
            for (const auto& e : edges(c)) {
                if (e.tau) {
                    continue;
                }
                for (const auto& [tail, states] : derivatives(e.target)) {
                    Trace tr{e.symbol};
                    tr.insert(tr.end(), tail.begin(), tail.end());
                    out[tr].insert(states.begin(), states.end());
                }
            }
        }
        derivatives_[static_cast<std::size_t>(s)] = std::move(out);
    }
    return *derivatives_[static_cast<std::size_t>(s)];
}

bool Lts::has_tau(int s) {
    return std::any_of(edges(s).begin(), edges(s).end(), [](const Edge& e) { return e.tau; });
}

std::set<int> Lts::after(int s, const Symbol& a) {
    std::set<int> out;
    for (int c : closure(s)) {
        for (const auto& e : edges(c)) {
            if (!e.tau && e.symbol == a) {
                const auto& cl = closure(e.target);
                out.insert(cl.begin(), cl.end());
            }
        }
    }
    return out;
}

ObservationSet observations(const Term& t) {
    Lts lts(true);
    int root = lts.add(t);
    ObservationSet obs;
    for (const auto& [sigma, states] : lts.derivatives(root)) {
        bool ends_in_var = !sigma.empty() && sigma.back().is_var;
        if (ends_in_var) {
            Trace prefix(sigma.begin(), sigma.end() - 1);
            obs.var_traces.emplace(std::move(prefix), sigma.back().name);
        } else {
            obs.traces.insert(sigma);
        }
        bool completed = false;
        for (int st : states) {
            const auto& init = lts.initials(st);
            if (init.empty()) {
                completed = true;
            }
            if (!ends_in_var) {
                std::set<std::string> acts;
                for (const auto& sym : init) {
                    if (!sym.is_var) acts.insert(sym.name);
                }
                obs.failure_repr.emplace(sigma, std::move(acts));
            }
        }
        if (completed) {
            obs.completed_traces.insert(sigma);
        }
    }
    return obs;
}

std::size_t norm(const Term& t) {
    auto obs = observations(t);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const auto& tr : obs.completed_traces) {
        best = std::min(best, tr.size());
    }
    return best;
}

Term chop(std::size_t m, const std::set<std::string>& refusal, const Term& p) {
    switch (p.kind()) {
    case TermKind::Nil: return p;
    case TermKind::Var: throw UsageError("chop is defined on closed terms only");
    case TermKind::Sum: return Term::sum(chop(m, refusal, p.left()), chop(m, refusal, p.right()));
    case TermKind::Prefix: {
        const Label& l = p.label();
        if (l.is_tau()) {
            return Term::tau(chop(m, refusal, p.body()));
        }
        if (m == 0) {
            return refusal.count(l.name) ? Term::prefix(l, Term::prefix(l, Term::nil())) : Term::nil();
        }
        return Term::prefix(l, chop(m - 1, refusal, p.body()));
    }
    }
    return p;
}

Relation parse_relation(const std::string& name) {
    static const std::map<std::string, Relation> table{
        {"leq-wf", Relation::LeqWF},         {"wf", Relation::PreorderWF},
        {"wf-eq", Relation::EquivWF},        {"wif", Relation::PreorderWIF},
        {"wif-eq", Relation::EquivWIF},      {"trace-eq", Relation::TraceEq},
        {"ct-incl", Relation::CompletedTraceInclusion},
    };
    auto it = table.find(name);
    if (it == table.end()) {
        throw UsageError("unknown relation '" + name + "'");
    }
    return it->second;
}

std::string to_string(Relation rel) {
    switch (rel) {
    case Relation::LeqWF: return "leq-wf";
    case Relation::PreorderWF: return "wf";
    case Relation::EquivWF: return "wf-eq";
    case Relation::PreorderWIF: return "wif";
    case Relation::EquivWIF: return "wif-eq";
    case Relation::TraceEq: return "trace-eq";
    case Relation::CompletedTraceInclusion: return "ct-incl";
    }
    return "?";
}

std::string Witness::describe() const {
    std::string side = reversed ? "right-hand side" : "left-hand side";
    std::string out;
    switch (kind) {
    case Kind::FailurePair: {
        out = "failure pair (" + to_string(trace) + "; {";
        bool first = true;
        for (const auto& b : refusal) {
            if (!first) out += ",";
            out += b;
            first = false;
        }
        out += "}) of the " + side + " only";
        break;
    }
    case Kind::ImpossibleFuture: {
        out = "impossible future (" + to_string(trace) + "; {";
        bool first = true;
        for (const auto& f : future) {
            if (!first) out += ",";
            out += to_string(f);
            first = false;
        }
        out += "}) of the " + side + " only";
        break;
    }
    case Kind::TraceDifference:
        out = "trace " + to_string(trace) + " of the " + side + " only";
        break;
    case Kind::TauCondition:
        out = std::string("tau-condition: the ") + side + " has an initial tau, the other side does not";
        break;
    case Kind::CompletedTrace:
        out = "completed trace " + to_string(trace) + " of the " + side + " only";
        break;
    }
    if (substitution) {
        out += "\nunder substitution:\n" + to_string(*substitution);
    }
    return out;
}

namespace {

template <typename Set>
bool subset_of(const Set& a, const Set& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::optional<Witness> leq_wf(Lts& lts, int p, int q) {
    const auto& dp = lts.derivatives(p);
    const auto& dq = lts.derivatives(q);
    for (const auto& [sigma, states] : dp) {
        auto it = dq.find(sigma);
        for (int pk : states) {
            const auto& ip = lts.initials(pk);
            bool ok = false;
            std::set<std::string> refusal;
            if (it != dq.end()) {
                for (int qk : it->second) {
                    const auto& iq = lts.initials(qk);
                    if (subset_of(iq, ip)) {
                        ok = true;
                        break;
                    }
                    for (const auto& s : iq) {
                        if (!ip.count(s)) refusal.insert(s.name);
                    }
                }
            }
            if (!ok) {
                Witness w;
                w.kind = Witness::Kind::FailurePair;
                w.trace = sigma;
                w.refusal = std::move(refusal);
                return w;
            }
        }
    }
    return std::nullopt;
}

std::optional<Witness> wif_futures(Lts& lts, int p, int q) {
    const auto& dp = lts.derivatives(p);
    const auto& dq = lts.derivatives(q);
    for (const auto& [sigma, states] : dp) {
        auto it = dq.find(sigma);
        for (int pk : states) {
            const auto& tp = lts.traces(pk);
            bool ok = false;
            std::set<Trace> future;
            if (it != dq.end()) {
                for (int qk : it->second) {
                    const auto& tq = lts.traces(qk);
                    if (subset_of(tq, tp)) {
                        ok = true;
                        break;
                    }
                    for (const auto& tr : tq) {
                        if (!tp.count(tr)) future.insert(tr);
                    }
                }
            }
            if (!ok) {
                Witness w;
                w.kind = Witness::Kind::ImpossibleFuture;
                w.trace = sigma;
                w.future = std::move(future);
                return w;
            }
        }
    }
    return std::nullopt;
}

std::optional<Witness> trace_difference(Lts& lts, int p, int q) {
    const auto& tp = lts.traces(p);
    const auto& tq = lts.traces(q);
    for (const auto& tr : tp) {
        if (!tq.count(tr)) {
            return Witness{Witness::Kind::TraceDifference, tr, {}, {}, false, {}};
        }
    }
    for (const auto& tr : tq) {
        if (!tp.count(tr)) {
            return Witness{Witness::Kind::TraceDifference, tr, {}, {}, true, {}};
        }
    }
    return std::nullopt;
}

std::optional<Witness> tau_condition(Lts& lts, int p, int q) {
    if (lts.has_tau(p) && !lts.has_tau(q)) {
        Witness w;
        w.kind = Witness::Kind::TauCondition;
        return w;
    }
    return std::nullopt;
}

std::optional<Witness> completed_inclusion(Lts& lts, int p, int q) {
    auto completed = [&](int s) {
        std::set<Trace> out;
        for (const auto& [sigma, states] : lts.derivatives(s)) {
            for (int st : states) {
                if (lts.initials(st).empty()) {
                    out.insert(sigma);
                    break;
                }
            }
        }
        return out;
    };
    auto cp = completed(p);
    auto cq = completed(q);
    for (const auto& tr : cp) {
        if (!cq.count(tr)) {
            return Witness{Witness::Kind::CompletedTrace, tr, {}, {}, false, {}};
        }
    }
    return std::nullopt;
}

std::optional<Witness> preorder(Lts& lts, int p, int q, Relation rel) {
    switch (rel) {
    case Relation::LeqWF: return leq_wf(lts, p, q);
    case Relation::PreorderWF:
        if (auto w = leq_wf(lts, p, q)) return w;
        return tau_condition(lts, p, q);
    case Relation::PreorderWIF:
        if (auto w = trace_difference(lts, p, q)) return w;
        if (auto w = wif_futures(lts, p, q)) return w;
        return tau_condition(lts, p, q);
    case Relation::TraceEq: return trace_difference(lts, p, q);
    case Relation::CompletedTraceInclusion: return completed_inclusion(lts, p, q);
    default: break;
    }
    return std::nullopt;
}

} // namespace

CompareResult compare(const Term& p, const Term& q, Relation rel) {
    if (!is_closed(p) || !is_closed(q)) {
        throw UsageError("closed-mode comparison needs closed terms");
    }
    Lts lts(false);
    int ip = lts.add(p);
    int iq = lts.add(q);
    std::optional<Witness> w;
    if (rel == Relation::EquivWF || rel == Relation::EquivWIF) {
        Relation half = rel == Relation::EquivWF ? Relation::PreorderWF : Relation::PreorderWIF;
        w = preorder(lts, ip, iq, half);
        if (!w) {
            w = preorder(lts, iq, ip, half);
            if (w) {
                w->reversed = !w->reversed;
            }
        }
    } else {
        w = preorder(lts, ip, iq, rel);
    }
    return CompareResult{!w.has_value(), std::move(w)};
}

CompareResult compare_open(const Term& t, const Term& u, Relation rel, const std::vector<Substitution>& family) {
    for (const auto& sigma : family) {
        auto r = compare(sigma.apply(t), sigma.apply(u), rel);
        if (!r.holds) {
            r.witness->substitution = sigma;
            return r;
        }
    }
    return {};
}

std::vector<std::string> variables_in_order(const Term& t, const Term& u) {
    std::vector<std::string> out;
    std::function<void(const Term&)> walk = [&](const Term& s) {
        switch (s.kind()) {
        case TermKind::Var:
            if (std::find(out.begin(), out.end(), s.var_name()) == out.end()) {
                out.push_back(s.var_name());
            }
            break;
        case TermKind::Prefix: walk(s.body()); break;
        case TermKind::Sum:
            walk(s.left());
            walk(s.right());
            break;
        case TermKind::Nil: break;
        }
    };
    walk(t);
    walk(u);
    return out;
}

std::vector<Substitution> canonical_family(const Term& t, const Term& u, const Alphabet& alphabet) {
    auto vars = variables_in_order(t, u);
    std::vector<std::string> acts;
    if (alphabet.is_finite()) {
        acts = alphabet.names();
    } else {
        auto used = actions(t);
        auto more = actions(u);
        used.insert(more.begin(), more.end());
        acts.assign(used.begin(), used.end());
        std::string f1 = alphabet.fresh(used);
        used.insert(f1);
        acts.push_back(f1);
        if (acts.size() < 2) {
            acts.push_back(alphabet.fresh(used));
        }
    }
    const std::string& a = acts.front();

    std::vector<Substitution> family;
    std::set<std::string> seen;
    auto push = [&](Substitution s) {
        if (seen.insert(to_string(s)).second) {
            family.push_back(std::move(s));
        }
    };
    auto zero_all = [&] {
        Substitution s;
        for (const auto& v : vars) s.bind(v, Term::nil());
        return s;
    };

    push(zero_all());

    std::vector<Term> small{Term::nil()};
    for (const auto& b : acts) {
        small.push_back(Term::act(b, Term::nil()));
    }
    double combos = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) combos *= static_cast<double>(small.size());
    if (combos <= 729) {
        std::vector<std::size_t> idx(vars.size(), 0);
        while (true) {
            Substitution s;
            for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], small[idx[i]]);
            push(std::move(s));
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == small.size()) {
                idx[k] = 0;
                ++k;
            }
            if (k == idx.size()) break;
        }
    } else {
        for (const auto& v : vars) {
            for (std::size_t i = 1; i < small.size(); ++i) {
                push(zero_all().bind(v, small[i]));
            }
        }
    }

    std::size_t d = depth(t) + depth(u) + 1;
    for (const auto& v : vars) {
        for (const auto& b : acts) {
            push(zero_all().bind(v, action_power(b, d)));
        }
    }
    if (vars.size() <= 8) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << vars.size()); ++mask) {
            Substitution s;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                s.bind(vars[i], (mask >> i) & 1 ? Term::nil() : action_power(a, d));
            }
            push(std::move(s));
        }
    }

    std::size_t m = std::max(depth(t), depth(u)) + 1;
    Substitution plain;
    Substitution marked;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        plain.bind(vars[i], action_power(a, (i + 1) * m));
        if (acts.size() > 1) {
            marked.bind(vars[i], action_power(a, (i + 1) * m, Term::act(acts[1], Term::nil())));
        }
    }
    push(std::move(plain));
    if (acts.size() > 1) {
        push(std::move(marked));
    }
    return family;
}

} // namespace bccs
