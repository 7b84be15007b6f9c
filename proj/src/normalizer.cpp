#include "bccs/normalizer.hpp"

#include "bccs/error.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace bccs {

std::vector<std::string> LSet::symbols() const {
    std::vector<std::string> out(actions.begin(), actions.end());
    out.insert(out.end(), vars.begin(), vars.end());
    std::sort(out.begin(), out.end());
    return out;
}

bool LSet::subset_of(const LSet& other) const {
    return std::includes(other.actions.begin(), other.actions.end(), actions.begin(), actions.end()) &&
           std::includes(other.vars.begin(), other.vars.end(), vars.begin(), vars.end());
}

LSet LSet::united(const LSet& other) const {
    LSet out = *this;
    out.actions.insert(other.actions.begin(), other.actions.end());
    out.vars.insert(other.vars.begin(), other.vars.end());
    return out;
}

LSet LSet::minus(const LSet& other) const {
    LSet out;
    std::set_difference(actions.begin(), actions.end(), other.actions.begin(), other.actions.end(),
                        std::inserter(out.actions, out.actions.end()));
    std::set_difference(vars.begin(), vars.end(), other.vars.begin(), other.vars.end(),
                        std::inserter(out.vars, out.vars.end()));
    return out;
}

std::string LSet::str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& s : symbols()) {
        if (!first) os << ',';
        os << s;
        first = false;
    }
    os << '}';
    return os.str();
}

bool LSet::operator<(const LSet& other) const {
    auto a = symbols();
    auto b = other.symbols();
    if (a != b) return a < b;
    return actions < other.actions;
}

std::string to_string(const Family& f) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& l : f) {
        if (!first) os << ", ";
        os << l.str();
        first = false;
    }
    os << '}';
    return os.str();
}

namespace {

Family union_closure(Family f) {
    std::vector<LSet> work(f.begin(), f.end());
    for (std::size_t i = 0; i < work.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            LSet u = work[i].united(work[j]);
            if (f.insert(u).second) work.push_back(u);
        }
    }
    return f;
}

/// All L with lo <= L <= hi.
void interval(const LSet& lo, const LSet& hi, Family& out) {
    LSet gap = hi.minus(lo);
    std::vector<std::pair<bool, std::string>> free;
    for (const auto& a : gap.actions) free.emplace_back(true, a);
    for (const auto& v : gap.vars) free.emplace_back(false, v);
    if (free.size() > 20) throw UsageError("saturation: interval too large");
    for (std::size_t mask = 0; mask < (std::size_t{1} << free.size()); ++mask) {
        LSet l = lo;
        for (std::size_t k = 0; k < free.size(); ++k) {
            if (!(mask >> k & 1)) continue;
            (free[k].first ? l.actions : l.vars).insert(free[k].second);
        }
        out.insert(l);
    }
}

} // namespace

Family saturate(const Family& f) {
    if (f.empty()) throw UsageError("cannot saturate an empty family");
    Family closed = union_closure(f);
    Family out = closed;
    for (const auto& lo : closed) {
        for (const auto& hi : closed) {
            if (lo != hi && lo.subset_of(hi)) interval(lo, hi, out);
        }
    }
    return out;
}

bool is_saturated(const Family& f) { return !f.empty() && saturate(f) == f; }

LSet NormalForm::top() const {
    LSet out;
    for (const auto& l : family) out = out.united(l);
    return out;
}

Term NormalForm::body(const LSet& l) const {
    std::vector<Term> parts;
    for (const auto& a : l.actions) {
        auto it = children.find(a);
        if (it == children.end()) throw InternalInconsistency("normal form lacks a derivative for " + a);
        parts.push_back(Term::act(a, it->second->render()));
    }
    for (const auto& v : l.vars) parts.push_back(Term::var(v));
    return Term::sum_of(parts);
}

Term NormalForm::render() const {
    if (kind == Kind::Action) return body(top());
    std::vector<Term> parts;
    for (const auto& l : family) parts.push_back(Term::tau(body(l)));
    return Term::sum_of(parts);
}

namespace {

/// The L-set of a tau-free body with one derivative per action, recording
/// derivatives in `children`; nullopt when the body is not of that shape.
std::optional<LSet> read_body(const Term& body, std::map<std::string, Term>& children) {
    LSet l;
    for (const auto& s : summands(body)) {
        if (s.is_var()) {
            l.vars.insert(s.var_name());
            continue;
        }
        if (!s.is_prefix() || !s.label().is_action()) return std::nullopt;
        const auto& a = s.label().name;
        if (!l.actions.insert(a).second) return std::nullopt;
        auto [it, fresh] = children.emplace(a, s.body());
        if (!fresh && it->second != s.body()) return std::nullopt;
    }
    return l;
}

bool canonical_is_nf(const Term& c) {
    auto ss = summands(c);
    std::size_t taus = std::count_if(ss.begin(), ss.end(), [](const Term& s) { return s.is_prefix() && s.label().is_tau(); });
    std::map<std::string, Term> children;
    if (taus == 0) {
        if (!read_body(c, children)) return false;
    } else if (taus == ss.size()) {
        Family f;
        for (const auto& s : ss) {
            auto l = read_body(s.body(), children);
            if (!l) return false;
            f.insert(*l);
        }
        if (!is_saturated(f)) return false;
    } else {
        return false;
    }
    return std::all_of(children.begin(), children.end(), [](const auto& kv) { return canonical_is_nf(kv.second); });
}

std::set<std::string> all_variables(const Term& t, const Term& u) {
    auto v = variables(t);
    auto w = variables(u);
    v.insert(w.begin(), w.end());
    return v;
}

Substitution zero_on(const std::set<std::string>& vars) {
    Substitution s;
    for (const auto& v : vars) s.bind(v, Term::nil());
    return s;
}

class Engine {
public:
    struct Result {
        NormalFormPtr nf;
        Proof proof;
    };

    struct Outcome {
        Proof proof; // null when the inequation fails
        std::optional<Substitution> witness;
        bool ok() const { return proof != nullptr; }
    };

    Engine(const Alphabet& alphabet, const NormalizeOptions& opts)
        : alphabet_(alphabet), opts_(opts), axioms_(builtin_axioms("wf-preorder", alphabet)),
          lib_(lemma_library(ScriptBase::WF, alphabet)), pb_(axioms_, lib_.get()) {}

    const AxiomSet& axioms() const { return axioms_; }
    std::shared_ptr<Library> library() const { return lib_; }
    const ProofBuilder& builder() const { return pb_; }

    Result normalize(const Term& t) {
        Term c = canonical(t);
        auto it = cache_.find(c);
        Result r;
        if (it != cache_.end()) {
            r = it->second;
        } else {
            auto ss = summands(c);
            bool tau = std::any_of(ss.begin(), ss.end(), [](const Term& s) { return s.is_prefix() && s.label().is_tau(); });
            r = tau ? normalize_tau(c) : normalize_action(c);
            r.proof = restate(r.proof, Statement::eq(c, r.nf->render()));
            cache_.emplace(c, r);
        }
        return {r.nf, pb_.trans({pb_.dedup(t), r.proof})};
    }

    Outcome decide_terms(const Term& t, const Term& u) {
        Result nt = normalize(t);
        Result nu = normalize(u);
        Outcome o = decide_nf(nt.nf, nu.nf);
        if (!o.ok()) return {nullptr, repair(t, u, o.witness)};
        return {pb_.trans({nt.proof, o.proof, pb_.sym(nu.proof)}), std::nullopt};
    }

    /// A candidate witness if it separates t and u, else one from the
    /// canonical family.
    std::optional<Substitution> repair(const Term& t, const Term& u, const std::optional<Substitution>& candidate) const {
        auto vars = all_variables(t, u);
        auto separates = [&](const Substitution& s) {
            Substitution closed = zero_on(vars);
            for (const auto& [v, img] : s.terms()) closed.bind(v, img);
            return compare(closed.apply(t), closed.apply(u), Relation::PreorderWF).holds ? std::optional<Substitution>()
                                                                                           : std::optional(closed);
        };
        if (candidate) {
            if (auto s = separates(*candidate)) return s;
        }
        for (const auto& s : canonical_family(t, u, alphabet_)) {
            if (auto r = separates(s)) return r;
        }
        return std::nullopt;
    }

private:
    Proof d5(const std::string& a, const std::vector<Term>& xs) {
        ensure_arity(xs.size());
        Substitution s;
        s.bind_label("$a", Label::action(a));
        for (std::size_t i = 0; i < xs.size(); ++i) s.bind("x" + std::to_string(i + 1), xs[i]);
        return pb_.lemma("D5_" + std::to_string(xs.size()), s);
    }

    Proof d9(const std::string& a, const std::vector<Term>& xs, const std::vector<Term>& ys) {
        ensure_arity(xs.size());
        Substitution s;
        s.bind_label("$a", Label::action(a));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            s.bind("x" + std::to_string(i + 1), xs[i]);
            s.bind("y" + std::to_string(i + 1), ys[i]);
        }
        return pb_.lemma("D9_" + std::to_string(xs.size()), s);
    }

    Proof lemma(const std::string& name, std::initializer_list<std::pair<const char*, Term>> binds) const {
        Substitution s;
        for (const auto& [v, t] : binds) s.bind(v, t);
        return pb_.lemma(name, s);
    }

    void ensure_arity(std::size_t n) {
        if (!lib_->find("D9_" + std::to_string(n))) extend_arity(*lib_, ScriptBase::WF, axioms_, n);
    }

    void check_cap(const LSet& l) const {
        if (opts_.max_symbols && l.size() > opts_.max_symbols) {
            std::ostringstream os;
            os << "normal form needs " << l.size() << " symbols, above the cap of " << opts_.max_symbols;
            throw UsageError(os.str());
        }
    }

    /// c is canonical without tau summands: group equal actions with D5.
    Result normalize_action(const Term& c) {
        std::map<std::string, std::vector<Term>> by_action;
        std::vector<Term> vars;
        for (const auto& s : summands(c)) {
            if (s.is_var()) {
                vars.push_back(s);
            } else if (s.is_prefix() && s.label().is_action()) {
                by_action[s.label().name].push_back(s.body());
            } else {
                throw UsageError("cannot normalize a term with label variables: " + to_string(c));
            }
        }
        auto nf = std::make_shared<NormalForm>();
        LSet l;
        std::vector<Proof> parts;
        for (const auto& [a, bodies] : by_action) {
            Proof group = d5(a, bodies);
            Result child = normalize(group->conclusion.rhs.body());
            parts.push_back(pb_.trans({group, pb_.prefix(Label::action(a), child.proof)}));
            nf->children[a] = child.nf;
            l.actions.insert(a);
        }
        for (const auto& v : vars) {
            parts.push_back(pb_.refl(v));
            l.vars.insert(v.var_name());
        }
        check_cap(l);
        nf->kind = NormalForm::Kind::Action;
        nf->family.insert(l);
        return {nf, parts.empty() ? pb_.refl(Term::nil()) : pb_.sum(parts)};
    }

    /// c is canonical with a tau summand.
    Result normalize_tau(const Term& c) {
        std::vector<Term> bodies;
        std::vector<Term> rest;
        auto file = [&](const Term& s) {
            if (s.is_prefix() && s.label().is_tau()) {
                bodies.push_back(s.body());
            } else {
                rest.push_back(s);
            }
        };
        for (const auto& s : summands(c)) file(s);
        auto taus_except = [&](std::size_t skip) {
            std::vector<Term> out;
            for (std::size_t i = 0; i < bodies.size(); ++i) {
                if (i != skip) out.push_back(Term::tau(bodies[i]));
            }
            return out;
        };
        auto current = [&] {
            auto out = taus_except(bodies.size());
            out.insert(out.end(), rest.begin(), rest.end());
            return Term::sum_of(out);
        };
        std::vector<Proof> chain;

        // Lift nested tau summands to the top with D2.
        for (;;) {
            std::size_t i = 0;
            std::size_t j = 0;
            bool found = false;
            for (; i < bodies.size() && !found; ++i) {
                auto ss = summands(bodies[i]);
                for (j = 0; j < ss.size(); ++j) {
                    if (ss[j].is_prefix() && ss[j].label().is_tau()) {
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (!found) break;
            auto ss = summands(bodies[i]);
            Term x = ss[j].body();
            ss.erase(ss.begin() + static_cast<std::ptrdiff_t>(j));
            auto others = taus_except(i);
            others.insert(others.end(), rest.begin(), rest.end());
            chain.push_back(pb_.plus(lemma("D2", {{"x", x}, {"y", Term::sum_of(ss)}}), Term::sum_of(others)));
            bodies.erase(bodies.begin() + static_cast<std::ptrdiff_t>(i));
            bodies.push_back(x);
            for (const auto& s : ss) file(s);
        }

        // Absorb the remaining summands into a new tau summand with D6.
        if (!rest.empty()) {
            Term b = bodies.front();
            Term r = Term::sum_of(rest);
            chain.push_back(pb_.plus(lemma("D6", {{"x", b}, {"y", r}}), Term::sum_of(taus_except(0))));
            bodies.push_back(Term::sum(b, r));
            rest.clear();
        }
        Term cur = current();
        chain.push_back(pb_.dedup(cur));
        bodies.clear();
        for (const auto& s : summands(canonical(cur))) bodies.push_back(s.body());

        // Normalize each body.
        struct Body {
            std::map<std::string, Term> acts;
            std::set<std::string> vars;
            Term term() const {
                std::vector<Term> parts;
                for (const auto& [a, t] : acts) parts.push_back(Term::act(a, t));
                for (const auto& v : vars) parts.push_back(Term::var(v));
                return Term::sum_of(parts);
            }
            Term without(const std::string& a) const {
                Body b = *this;
                b.acts.erase(a);
                return b.term();
            }
        };
        std::vector<Body> shaped;
        {
            std::vector<Proof> parts;
            for (const auto& b : bodies) {
                Result r = normalize_action(b);
                parts.push_back(pb_.prefix(Label::tau(), r.proof));
                Body sb;
                for (const auto& [a, child] : r.nf->children) sb.acts[a] = child->render();
                sb.vars = r.nf->top().vars;
                shaped.push_back(std::move(sb));
            }
            chain.push_back(pb_.sum(parts));
        }
        auto shaped_sum = [&](const std::vector<std::size_t>& idx) {
            std::vector<Term> out;
            for (auto i : idx) out.push_back(Term::tau(shaped[i].term()));
            return Term::sum_of(out);
        };

        // Share one derivative per action across all bodies with D9.
        std::set<std::string> acts;
        for (const auto& b : shaped) {
            for (const auto& [a, t] : b.acts) acts.insert(a);
        }
        std::map<std::string, Term> shared;
        for (const auto& a : acts) {
            std::vector<std::size_t> in;
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < shaped.size(); ++i) (shaped[i].acts.count(a) ? in : out).push_back(i);
            std::vector<Term> xs;
            std::vector<Term> ys;
            std::vector<Term> taus;
            for (auto i : in) {
                xs.push_back(shaped[i].acts.at(a));
                ys.push_back(shaped[i].without(a));
                taus.push_back(Term::tau(xs.back()));
            }
            Term u = Term::sum_of(taus);
            chain.push_back(pb_.plus(d9(a, xs, ys), shaped_sum(out)));
            for (auto i : in) shaped[i].acts[a] = u;
            shared[a] = u;
        }

        auto nf = std::make_shared<NormalForm>();
        nf->kind = NormalForm::Kind::Tau;
        std::map<std::string, Proof> child_proofs;
        for (const auto& [a, u] : shared) {
            Result r = normalize(u);
            nf->children[a] = r.nf;
            child_proofs[a] = r.proof;
        }
        {
            std::vector<Proof> parts;
            for (const auto& b : shaped) {
                std::vector<Proof> inner;
                for (const auto& [a, t] : b.acts) inner.push_back(pb_.prefix(Label::action(a), child_proofs.at(a)));
                for (const auto& v : b.vars) inner.push_back(pb_.refl(Term::var(v)));
                parts.push_back(pb_.prefix(Label::tau(), pb_.sum(inner)));
                LSet l;
                for (const auto& [a, t] : b.acts) l.actions.insert(a);
                l.vars = b.vars;
                nf->family.insert(l);
            }
            chain.push_back(pb_.sum(parts));
        }
        check_cap(nf->top());

        // Saturate: unions with D7, then convex fill with D8.
        auto render_family = [&](const Family& f) {
            std::vector<Term> out;
            for (const auto& l : f) out.push_back(Term::tau(nf->body(l)));
            return Term::sum_of(out);
        };
        auto except = [&](const Family& f, std::initializer_list<LSet> drop) {
            std::vector<Term> out;
            for (const auto& l : f) {
                if (std::find(drop.begin(), drop.end(), l) == drop.end()) out.push_back(Term::tau(nf->body(l)));
            }
            return Term::sum_of(out);
        };
        Family fam = nf->family;
        chain.push_back(pb_.a14(chain.back()->conclusion.rhs, render_family(fam)));
        auto advance = [&](const Proof& step, const LSet& added) {
            chain.push_back(step);
            Family next = fam;
            next.insert(added);
            chain.push_back(pb_.a14(step->conclusion.rhs, render_family(next)));
            fam = std::move(next);
        };
        for (bool grew = true; grew;) {
            grew = false;
            for (auto i = fam.begin(); i != fam.end() && !grew; ++i) {
                for (auto j = std::next(i); j != fam.end() && !grew; ++j) {
                    LSet u = i->united(*j);
                    if (fam.count(u)) continue;
                    LSet l1 = *i;
                    LSet l2 = *j;
                    Proof step = pb_.plus(lemma("D7", {{"x", nf->body(l1)}, {"y", nf->body(l2)}}), except(fam, {l1, l2}));
                    advance(step, u);
                    grew = true;
                }
            }
        }
        const Family closed = fam;
        for (const auto& l3 : saturate(closed)) {
            if (fam.count(l3)) continue;
            LSet l1;
            const LSet* l2 = nullptr;
            for (const auto& m : closed) {
                if (m.subset_of(l3)) l1 = l1.united(m);
                if (!l2 && l3.subset_of(m)) l2 = &m;
            }
            if (!l2 || !closed.count(l1)) throw InternalInconsistency("convex fill without bounds for " + l3.str());
            Proof step = pb_.plus(lemma("D8", {{"x", nf->body(l1)}, {"y", nf->body(l3.minus(l1))}, {"z", nf->body(l2->minus(l3))}}),
                                  except(fam, {l1, *l2}));
            advance(step, l3);
        }
        nf->family = fam;
        return {nf, pb_.trans(chain)};
    }

    std::string some_action(const std::set<std::string>& avoid, const Term& t, const Term& u) const {
        if (alphabet_.is_finite()) {
            for (const auto& a : alphabet_.names()) {
                if (!avoid.count(a)) return a;
            }
            return {};
        }
        auto used = actions(t);
        auto more = actions(u);
        used.insert(more.begin(), more.end());
        used.insert(avoid.begin(), avoid.end());
        return alphabet_.fresh(used);
    }

    /// sigma(z) = 0 on V_L and b.0 elsewhere, with b outside A_L.
    std::optional<Substitution> outside(const LSet& l, const Term& t, const Term& u) const {
        std::string b = some_action(l.actions, t, u);
        if (b.empty()) return std::nullopt;
        Substitution s;
        for (const auto& v : all_variables(t, u)) s.bind(v, l.vars.count(v) ? Term::nil() : Term::act(b, Term::nil()));
        return s;
    }

    bool full(const LSet& l) const { return alphabet_.is_finite() && l.actions.size() >= alphabet_.size(); }

    /// a.t_a <= a.u_a through t_a <= tau.u_a; on failure the child's witness
    /// is lifted with chop.
    std::optional<Proof> step_down(const std::string& a, const Term& ta, const Term& ua, const Term& t, const Term& u,
                                   std::optional<Substitution>& witness) {
        Outcome o = decide_terms(ta, Term::tau(ua));
        if (o.ok()) {
            Substitution s;
            s.bind("x1", ua).bind_label("$a", Label::action(a));
            return pb_.trans({pb_.prefix(Label::action(a), o.proof), pb_.sym(pb_.lemma("D5_1", s))});
        }
        if (o.witness) {
            const Substitution& rho = *o.witness;
            CompareResult cr = compare(rho.apply(ta), rho.apply(Term::tau(ua)), Relation::PreorderWF);
            if (!cr.holds && cr.witness && cr.witness->kind == Witness::Kind::FailurePair && !cr.witness->reversed) {
                Substitution lifted;
                for (const auto& v : all_variables(t, u)) {
                    Term img = rho.lookup(v).value_or(Term::nil());
                    lifted.bind(v, chop(cr.witness->trace.size(), cr.witness->refusal, img));
                }
                witness = lifted;
            }
        }
        return std::nullopt;
    }

public:
    Outcome decide_nf(const NormalFormPtr& t, const NormalFormPtr& u) {
        using K = NormalForm::Kind;
        const Term tt = t->render();
        const Term ut = u->render();
        const LSet lt = t->top();
        const LSet lu = u->top();
        auto fail = [](std::optional<Substitution> w) { return Outcome{nullptr, std::move(w)}; };

        if (!lt.subset_of(lu)) {
            LSet d = lt.minus(lu);
            auto vars = all_variables(tt, ut);
            if (!d.actions.empty()) return fail(zero_on(vars));
            Substitution s = zero_on(vars);
            std::size_t n = std::max(depth(tt), depth(ut)) + 1;
            s.bind(*d.vars.begin(), action_power(some_action({}, tt, ut), n));
            return fail(s);
        }
        if (t->kind == K::Tau && u->kind == K::Action) return fail(zero_on(all_variables(tt, ut)));
        if (t->kind == K::Action && u->kind == K::Tau) {
            auto lifted = std::make_shared<NormalForm>(*t);
            lifted->kind = K::Tau;
            Outcome o = decide_nf(lifted, u);
            if (!o.ok()) return o;
            Proof wf3 = pb_.ax("WF3", Substitution().bind("x", tt).bind("y", Term::nil()));
            return {pb_.trans({wf3, o.proof}), std::nullopt};
        }

        if (t->kind == K::Action && !full(lt) && lt != lu) return fail(outside(lt, tt, ut));
        if (t->kind == K::Tau) {
            for (const auto& l : t->family) {
                if (!full(l) && !u->family.count(l)) return fail(outside(l, tt, ut));
            }
        }
        std::optional<Substitution> witness;
        std::map<std::string, Proof> down;
        for (const auto& a : lt.actions) {
            auto p = step_down(a, t->children.at(a)->render(), u->children.at(a)->render(), tt, ut, witness);
            if (!p) return fail(witness);
            down[a] = *p;
        }
        auto u_child = [&](const std::string& a) { return u->children.at(a)->render(); };
        auto t_child = [&](const std::string& a) { return t->children.at(a)->render(); };
        auto raise = [&](const LSet& l) {
            std::vector<Proof> parts;
            for (const auto& a : l.actions) parts.push_back(down.at(a));
            for (const auto& v : l.vars) parts.push_back(pb_.refl(Term::var(v)));
            return parts.empty() ? pb_.refl(Term::nil()) : pb_.sum(parts);
        };
        auto shared_body = [&](const LSet& l) {
            std::vector<Term> parts;
            for (const auto& a : l.actions) parts.push_back(Term::act(a, u_child(a)));
            for (const auto& v : l.vars) parts.push_back(Term::var(v));
            return Term::sum_of(parts);
        };
        auto wf_a = [&](auto child, const Term& y) {
            Substitution s;
            for (const auto& a : alphabet_.names()) s.bind("x_" + a, child(a));
            s.bind("y", y);
            return pb_.ax("WF_A", s);
        };
        auto vars_sum = [](const std::set<std::string>& vs) {
            std::vector<Term> parts;
            for (const auto& v : vs) parts.push_back(Term::var(v));
            return Term::sum_of(parts);
        };
        std::vector<Term> s_t_parts;
        std::vector<Term> s_u_parts;
        if (full(lt)) {
            for (const auto& a : alphabet_.names()) {
                s_t_parts.push_back(Term::act(a, t_child(a)));
                s_u_parts.push_back(Term::act(a, u_child(a)));
            }
        }
        const Term s_t = Term::sum_of(s_t_parts);
        const Term s_u = Term::sum_of(s_u_parts);
        LSet acts_only;
        acts_only.actions = lt.actions;

        if (t->kind == K::Action) {
            if (!full(lt)) return {raise(lt), std::nullopt};
            const Term w = vars_sum(lt.vars);
            Proof p1 = pb_.plus(wf_a(t_child, ut), w);
            Proof p2 = pb_.sum({raise(acts_only), pb_.refl(ut), pb_.refl(w)});
            Proof p3 = pb_.a14(p2->conclusion.rhs, ut);
            return {pb_.trans({p1, p2, p3}), std::nullopt};
        }

        // Both tau normal forms.
        std::vector<Proof> to_shared;
        std::vector<Term> shared_taus;
        for (const auto& l : t->family) {
            to_shared.push_back(pb_.prefix(Label::tau(), raise(l)));
            shared_taus.push_back(Term::tau(shared_body(l)));
        }
        Proof p_shared = pb_.sum(to_shared); // t <= T'
        const Term t_shared = Term::sum_of(shared_taus);

        if (!full(lt)) {
            const LSet& l0 = *t->family.begin();
            std::vector<Term> others(shared_taus.begin() + 1, shared_taus.end());
            Proof grow = pb_.plus(lemma("D4", {{"x", shared_body(l0)}, {"y", ut}}), Term::sum_of(others));
            return {pb_.trans({p_shared, grow, pb_.a14(grow->conclusion.rhs, ut)}), std::nullopt};
        }

        auto drop_member = [&](const NormalFormPtr& nf, const LSet& skip, auto body) {
            std::vector<Term> out;
            for (const auto& l : nf->family) {
                if (l != skip) out.push_back(Term::tau(body(l)));
            }
            return Term::sum_of(out);
        };
        auto t_body = [&](const LSet& l) { return t->body(l); };
        auto u_body = [&](const LSet& l) { return u->body(l); };
        // t == t + S_t
        Proof e1 = pb_.sym(pb_.plus(lemma("D1", {{"x", s_t}, {"y", vars_sum(lt.vars)}}), drop_member(t, lt, t_body)));
        // <= t + S_t + u
        Proof e2 = pb_.plus(wf_a(t_child, ut), tt);
        // <= T' + S_u + u
        Proof e3 = pb_.sum({p_shared, raise(acts_only), pb_.refl(ut)});
        // == T' + u
        Proof e4 = pb_.plus(lemma("D1", {{"x", s_u}, {"y", vars_sum(lu.vars)}}),
                            Term::sum(t_shared, drop_member(u, lu, u_body)));
        // full members of T' move up to the top member of u
        std::vector<Proof> lift;
        for (const auto& l : t->family) {
            if (!full(l)) {
                lift.push_back(pb_.refl(Term::tau(shared_body(l))));
                continue;
            }
            Proof w = pb_.plus(wf_a(u_child, vars_sum(lu.minus(l).vars)), vars_sum(l.vars));
            lift.push_back(pb_.prefix(Label::tau(), w));
        }
        Proof e5 = pb_.sum({pb_.sum(lift), pb_.refl(ut)});
        Proof e6 = pb_.a14(e5->conclusion.rhs, ut);
        return {pb_.trans({e1, e2, e3, e4, e5, e6}), std::nullopt};
    }

private:
    Alphabet alphabet_;
    NormalizeOptions opts_;
    AxiomSet axioms_;
    std::shared_ptr<Library> lib_;
    ProofBuilder pb_;
    std::unordered_map<Term, Result, TermHash> cache_;
};

} // namespace

bool is_normal_form(const Term& t) { return canonical_is_nf(canonical(t)); }

Normalized normalize(const Term& t, const NormalizeOptions& opts) {
    Engine e(Alphabet::countable(), opts);
    auto r = e.normalize(t);
    return {r.nf, restate(r.proof, Statement::eq(t, r.nf->render())), e.library()};
}

Verdict decide_preorder_WF(const Term& t, const Term& u, const Alphabet& alphabet, const NormalizeOptions& opts) {
    Engine e(alphabet, opts);
    Verdict v;
    v.statement = Statement::leq(t, u);
    v.base = e.axioms();
    v.lemmas = e.library();
    auto o = e.decide_terms(t, u);
    if (o.ok()) {
        v.derivable = true;
        v.proof = restate(o.proof, v.statement);
        return v;
    }
    if (!o.witness) {
        throw InternalInconsistency("no separating substitution found for " + to_string(t) + " <= " + to_string(u));
    }
    v.witness = o.witness;
    v.observation = compare(o.witness->apply(t), o.witness->apply(u), Relation::PreorderWF).witness;
    if (v.observation) v.observation->substitution = o.witness;
    return v;
}

EquivVerdict decide_equiv_WF(const Term& t, const Term& u, const Alphabet& alphabet, const NormalizeOptions& opts) {
    return {decide_preorder_WF(t, u, alphabet, opts), decide_preorder_WF(u, t, alphabet, opts)};
}

} // namespace bccs
