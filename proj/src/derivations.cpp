#include "bccs/derivations.hpp"

#include "bccs/error.hpp"

#include <algorithm>

namespace bccs {

namespace {

using Bind = std::initializer_list<std::pair<const char*, Term>>;

Substitution S(Bind binds) {
    Substitution s;
    for (const auto& [v, t] : binds) s.bind(v, t);
    return s;
}

Term v(const std::string& n) { return Term::var(n); }
Term tau(Term t) { return Term::tau(std::move(t)); }
Term plus(std::initializer_list<Term> ts) { return Term::sum_of(ts); }
Term on(const Label& l, Term t) { return Term::prefix(l, std::move(t)); }

const Label kA = Label::action_meta("a");
const Label kB = Label::action_meta("b");
const Label kTau = Label::tau();

std::string xi(std::size_t i) { return "x" + std::to_string(i); }
std::string yi(std::size_t i) { return "y" + std::to_string(i); }

class Scripts {
public:
    Scripts(ScriptBase b, const AxiomSet& axioms, Library& lib) : b_(b), lib_(lib), pb_(axioms, &lib) {}

    void core() {
        const Term x = v("x"), y = v("y");
        add("T", Statement::eq(tau(x), plus({tau(x), x})), t_law());

        const Term p = tau(plus({x, y}));
        Proof grow = pb_.trans({
            pb_.lemma("T", S({{"x", plus({x, y})}})),
            pb_.plus(pb_.sym(pb_.ax("A3", S({{"x", x}}))), plus({p, y})),
            pb_.plus(pb_.sym(pb_.lemma("T", S({{"x", plus({x, y})}}))), x),
        });
        add("D1", Statement::eq(plus({p, x}), p), pb_.sym(grow));

        add("TT", tt_statement(), tt_law());
        add("D2", Statement::eq(tau(plus({tau(x), y})), plus({tau(x), y})), d2_law());
    }

    void wf_only() {
        const Term x = v("x"), y = v("y"), z = v("z");
        Proof d3_le = pb_.trans({
            pb_.plus(pb_.prefix(kTau, pb_.plus(pb_.trans({
                         pb_.prefix(kA, pb_.ax("WF3", S({{"x", y}, {"y", tau(x)}}))),
                         pb_.ax("WF1", S({{"x", x}, {"y", y}}), true),
                     }), z)), on(kA, x)),
            pb_.plus(pb_.lemma("D1", S({{"x", on(kA, x)}, {"y", plus({on(kA, y), z})}})), Term::nil()),
        });
        Proof d3_ge = pb_.ax("WF2", S({{"x", plus({on(kA, y), z})}, {"y", on(kA, x)}}));
        add("D3", Statement::eq(plus({on(kA, x), tau(plus({on(kA, y), z}))}), tau(plus({on(kA, x), on(kA, y), z}))),
            pb_.antisym(d3_le, d3_ge));

        add("D4", Statement::leq(tau(x), plus({tau(x), y})),
            pb_.trans({pb_.ax("WF3", S({{"x", tau(x)}, {"y", y}})),
                       pb_.plus(pb_.lemma("D2", S({{"x", x}, {"y", Term::nil()}})), y)}));
    }

    void d5(std::size_t n) {
        std::string name = "D5_" + std::to_string(n);
        if (lib_.find(name)) return;
        if (n > 2) d5(n - 1);
        Proof p;
        if (n == 1) {
            p = pb_.trans({
                pb_.sym(pb_.ax("A3", S({{"x", on(kA, v(xi(1)))}}))),
                pb_.ax("WF1", S({{"x", v(xi(1))}, {"y", v(xi(1))}})),
                pb_.prefix(kA, pb_.ax("A3", S({{"x", tau(v(xi(1)))}}))),
            });
        } else if (n == 2) {
            p = pb_.ax("WF1", S({{"x", v(xi(1))}, {"y", v(xi(2))}}));
        } else {
            std::vector<Term> taus;
            std::vector<Term> rest;
            for (std::size_t i = 1; i < n; ++i) {
                taus.push_back(tau(v(xi(i))));
                if (i > 1) rest.push_back(tau(v(xi(i))));
            }
            Term s = Term::sum_of(taus);
            p = pb_.trans({
                pb_.plus(pb_.lemma("D5_" + std::to_string(n - 1)), on(kA, v(xi(n)))),
                pb_.ax("WF1", S({{"x", s}, {"y", v(xi(n))}})),
                pb_.prefix(kA, pb_.plus(pb_.lemma("D2", S({{"x", v(xi(1))}, {"y", Term::sum_of(rest)}})), tau(v(xi(n))))),
            });
        }
        add(name, d5_statement(n), p);
    }

    void wf_tail() {
        const Term x = v("x"), y = v("y"), z = v("z");
        const Term txy = tau(plus({x, y}));
        Proof d6_le = pb_.trans({
            pb_.plus(pb_.lemma("D4", S({{"x", x}, {"y", txy}})), y),
            pb_.plus(pb_.lemma("D1", S({{"x", y}, {"y", x}})), tau(x)),
        });
        Proof d6_ge = pb_.trans({
            pb_.sum({pb_.refl(tau(x)), pb_.ax("WF2", S({{"x", x}, {"y", y}}))}),
            pb_.plus(pb_.ax("A3", S({{"x", tau(x)}})), y),
        });
        add("D6", Statement::eq(plus({tau(x), y}), plus({tau(x), txy})), pb_.antisym(d6_le, d6_ge));

        Proof d7_le = pb_.plus(pb_.lemma("D4", S({{"x", x}, {"y", txy}})), tau(y));
        Proof d7_ge = pb_.trans({
            pb_.sum({pb_.refl(tau(x)), pb_.ax("WF2", S({{"x", x}, {"y", y}})), pb_.refl(tau(y))}),
            pb_.plus(pb_.ax("A3", S({{"x", tau(x)}})), plus({y, tau(y)})),
            pb_.plus(pb_.sym(pb_.lemma("T", S({{"x", y}}))), tau(x)),
        });
        add("D7", Statement::eq(plus({tau(x), tau(y)}), plus({tau(x), txy, tau(y)})), pb_.antisym(d7_le, d7_ge));

        const Term txyz = tau(plus({x, y, z}));
        Proof d8_le = pb_.plus(pb_.lemma("D4", S({{"x", x}, {"y", txy}})), txyz);
        Proof d8_ge = pb_.trans({
            pb_.sum({pb_.refl(tau(x)), pb_.ax("WF2", S({{"x", x}, {"y", y}})), pb_.refl(txyz)}),
            pb_.plus(pb_.ax("A3", S({{"x", tau(x)}})), plus({y, txyz})),
            pb_.plus(pb_.lemma("D1", S({{"x", y}, {"y", plus({x, z})}})), tau(x)),
        });
        add("D8", Statement::eq(plus({tau(x), txyz}), plus({tau(x), txy, txyz})), pb_.antisym(d8_le, d8_ge));
    }

    void d9(std::size_t n) {
        std::string name = "D9_" + std::to_string(n);
        if (lib_.find(name)) return;
        d5(n);
        std::vector<Term> ax_terms;
        for (std::size_t j = 1; j <= n; ++j) ax_terms.push_back(on(kA, v(xi(j))));
        const Term u = Term::sum_of(ax_terms);

        // the tau-summands and the loose summands of the current term
        std::vector<std::vector<Term>> bodies;
        for (std::size_t i = 1; i <= n; ++i) bodies.push_back({on(kA, v(xi(i))), v(yi(i))});
        std::vector<Term> loose;
        auto current = [&](std::size_t skip) {
            std::vector<Term> parts;
            for (std::size_t i = 0; i < bodies.size(); ++i) {
                if (i != skip) parts.push_back(tau(Term::sum_of(bodies[i])));
            }
            parts.insert(parts.end(), loose.begin(), loose.end());
            return Term::sum_of(parts);
        };
        const std::size_t all = bodies.size();

        std::vector<Proof> chain;
        std::vector<Proof> grow;
        for (std::size_t i = 1; i <= n; ++i) {
            grow.push_back(pb_.sym(pb_.lemma("D1", S({{"x", on(kA, v(xi(i)))}, {"y", v(yi(i))}}))));
        }
        chain.push_back(pb_.sum(grow));
        for (std::size_t k = 1; k < n; ++k) {
            Term rest = current(all);
            chain.push_back(pb_.plus(pb_.sym(pb_.ax("A3", S({{"x", u}}))), rest));
            loose.insert(loose.end(), ax_terms.begin(), ax_terms.end());
        }
        loose.insert(loose.end(), ax_terms.begin(), ax_terms.end());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 1; j <= n; ++j) {
                Term absorbed = on(kA, v(xi(j)));
                auto pos = std::find(loose.begin(), loose.end(), absorbed);
                loose.erase(pos);
                std::vector<Term> z_parts(bodies[i].begin() + 1, bodies[i].end());
                Term z = Term::sum_of(z_parts);
                Term others = current(i);
                Proof step = pb_.lemma("D3", S({{"x", v(xi(j))}, {"y", v(xi(i + 1))}, {"z", z}}));
                chain.push_back(pb_.plus(step, others));
                bodies[i].insert(bodies[i].begin() + 1, absorbed);
            }
        }
        std::vector<Term> target_parts;
        for (std::size_t i = 1; i <= n; ++i) target_parts.push_back(tau(plus({u, v(yi(i))})));
        chain.push_back(pb_.a14(current(all), Term::sum_of(target_parts)));
        std::vector<Proof> fold;
        for (std::size_t i = 1; i <= n; ++i) {
            fold.push_back(pb_.prefix(kTau, pb_.plus(pb_.lemma("D5_" + std::to_string(n)), v(yi(i)))));
        }
        chain.push_back(pb_.sum(fold));
        add(name, d9_statement(n), pb_.trans(chain));
    }

    const ProofBuilder& builder() const { return pb_; }

private:
    void add(const std::string& name, const Statement& target, const Proof& p) {
        if (!equal_modulo_ac(p->conclusion, target)) {
            throw InternalInconsistency("script " + name + " concludes " + to_string(p->conclusion) + ", expected " +
                                        to_string(target));
        }
        lib_.add(name, target, p);
    }

    Proof weak3(const Term& x) {
        if (b_ == ScriptBase::WIF) return pb_.ax("WIF3", S({{"x", x}}));
        return pb_.ax("WF3", S({{"x", x}, {"y", Term::nil()}}));
    }

    Proof t_law() {
        const Term x = v("x");
        if (b_ == ScriptBase::WFE) {
            return pb_.trans({
                pb_.sym(pb_.ax("A3", S({{"x", tau(x)}}))),
                pb_.sum({pb_.prefix(kTau, pb_.sym(pb_.ax("A3", S({{"x", x}})))), pb_.refl(tau(x))}),
                pb_.ax("WFE2", S({{"x", x}, {"y", x}})),
            });
        }
        Proof le = pb_.trans({pb_.prefix(kTau, pb_.sym(pb_.ax("A3", S({{"x", x}})))), pb_.ax("WF2", S({{"x", x}, {"y", x}}))});
        Proof ge = pb_.trans({pb_.sum({weak3(x), pb_.refl(tau(x))}), pb_.ax("A3", S({{"x", tau(x)}}))});
        return pb_.antisym(le, ge);
    }

    Statement tt_statement() const {
        const Term x = v("x");
        if (b_ == ScriptBase::WFE) return Statement::eq(tau(tau(x)), tau(x));
        return Statement::leq(tau(tau(x)), tau(x));
    }

    Proof tt_law() {
        const Term x = v("x");
        if (b_ == ScriptBase::WFE) {
            return pb_.trans({
                pb_.lemma("T", S({{"x", tau(x)}})),
                pb_.plus(pb_.prefix(kTau, pb_.lemma("T", S({{"x", x}}))), tau(x)),
                pb_.ax("WFE2", S({{"x", x}, {"y", tau(x)}})),
                pb_.ax("A3", S({{"x", tau(x)}})),
            });
        }
        return pb_.trans({
            pb_.prefix(kTau, pb_.sym(pb_.lemma("D1", S({{"x", x}, {"y", Term::nil()}})))),
            pb_.ax("WF2", S({{"x", x}, {"y", tau(x)}})),
            pb_.ax("A3", S({{"x", tau(x)}})),
        });
    }

    Proof d2_law() {
        const Term x = v("x"), y = v("y");
        const Term lhs = tau(plus({tau(x), y}));
        if (b_ == ScriptBase::WFE) {
            return pb_.trans({
                pb_.sym(pb_.lemma("D1", S({{"x", tau(x)}, {"y", y}}))),
                pb_.sum({pb_.refl(lhs), pb_.sym(pb_.lemma("TT"))}),
                pb_.ax("WFE2", S({{"x", tau(x)}, {"y", y}})),
                pb_.plus(pb_.lemma("TT"), y),
            });
        }
        Proof le = pb_.trans({pb_.ax("WF2", S({{"x", tau(x)}, {"y", y}})), pb_.plus(pb_.lemma("TT"), y)});
        Proof ge = b_ == ScriptBase::WIF ? pb_.ax("WIF3", S({{"x", plus({tau(x), y})}}))
                                         : pb_.ax("WF3", S({{"x", plus({tau(x), y})}, {"y", Term::nil()}}));
        return pb_.antisym(le, ge);
    }

    ScriptBase b_;
    Library& lib_;
    ProofBuilder pb_;
};

} // namespace

std::string base_name(ScriptBase b) {
    switch (b) {
    case ScriptBase::WF: return "A1-4+WF1-3";
    case ScriptBase::WIF: return "A1-4+WF1-2+WIF3";
    case ScriptBase::WFE: return "A1-4+WFE";
    }
    return "?";
}

AxiomSet script_axioms(ScriptBase b, const Alphabet& alphabet) {
    if (b == ScriptBase::WFE) {
        return builtin_axioms(alphabet.is_finite() ? "A1-4+WFE+WFE_A" : "A1-4+WFE", alphabet);
    }
    return builtin_axioms(base_name(b), alphabet);
}

void extend_arity(Library& lib, ScriptBase b, const AxiomSet& axioms, std::size_t n) {
    Scripts s(b, axioms, lib);
    for (std::size_t k = 1; k <= n; ++k) {
        s.d5(k);
        if (b == ScriptBase::WF) s.d9(k);
    }
}

std::shared_ptr<Library> lemma_library(ScriptBase b, const Alphabet& alphabet, std::size_t arity) {
    auto lib = std::make_shared<Library>();
    AxiomSet axioms = script_axioms(b, alphabet);
    Scripts s(b, axioms, *lib);
    s.core();
    if (b == ScriptBase::WF) s.wf_only();
    for (std::size_t k = 1; k <= arity; ++k) s.d5(k);
    if (b == ScriptBase::WF) {
        s.wf_tail();
        for (std::size_t k = 1; k <= arity; ++k) s.d9(k);
    }
    return lib;
}

namespace {

/// From tau.P + tau.Q == tau.Q to l.P + l.Q == l.Q for a visible label l.
Proof lift_visible(const ProofBuilder& pb, const Label& l, const Term& p, const Term& q, const Proof& tau_case) {
    Substitution wf1 = S({{"x", p}, {"y", q}});
    Substitution d5 = S({{"x1", q}});
    wf1.bind_label("$a", l);
    d5.bind_label("$a", l);
    return pb.trans({pb.ax("WF1", wf1), pb.prefix(l, tau_case), pb.sym(pb.lemma("D5_1", d5))});
}

std::vector<NamedDerivation> lemma_four(const Alphabet& alphabet) {
    auto lib = lemma_library(ScriptBase::WFE, alphabet, 1);
    AxiomSet axioms = script_axioms(ScriptBase::WFE, alphabet);
    ProofBuilder pb(axioms, lib.get());
    AxiomSet table = builtin_axioms("TAB-AUX", alphabet);
    std::vector<NamedDerivation> out;

    auto emit = [&](const std::string& table_name, const Substitution& labels, const std::string& suffix, const Proof& p) {
        const auto* ax = table.find(table_name);
        Statement target = ax->statement.apply(labels);
        Proof flat = expand_lemmas(p, *lib);
        if (!equal_modulo_ac(flat->conclusion, target)) {
            throw InternalInconsistency("table script " + table_name + suffix + " concludes " + to_string(flat->conclusion));
        }
        out.push_back({"L4:" + table_name + suffix, axioms.name(), target, restate(flat, target)});
    };
    auto labels = [](std::initializer_list<std::pair<const char*, Label>> ls) {
        Substitution s;
        for (const auto& [m, l] : ls) s.bind_label(m, l);
        return s;
    };

    const Term x = v("x"), y = v("y"), z = v("z");

    emit("WF1", {}, "", pb.ax("WF1"));
    emit("WF2^a", {}, "", pb.trans({pb.plus(pb.ax("WFE2"), y), pb.plus(pb.ax("A3", S({{"x", y}})), tau(x))}));
    emit("WF3^a", {}, "", pb.plus(pb.sym(pb.lemma("T")), y));

    {
        Proof t = pb.trans({
            pb.sum({pb.lemma("D2", S({{"x", plus({x, y})}, {"y", z}})), pb.lemma("D2", S({{"x", x}, {"y", plus({y, z})}}))}),
            pb.plus(pb.ax("WFE2"), plus({y, z, z})),
            pb.a14(plus({tau(x), y, y, z, z}), plus({tau(x), y, z})),
            pb.sym(pb.lemma("D2", S({{"x", x}, {"y", plus({y, z})}}))),
        });
        emit("WF2^b", labels({{"%alpha", kTau}}), "[tau]", t);
        emit("WF2^b", labels({{"%alpha", kA}}), "[$a]",
             lift_visible(pb, kA, plus({tau(plus({x, y})), z}), plus({tau(x), y, z}), t));
    }
    {
        Proof t = pb.trans({
            pb.plus(pb.lemma("D2", S({{"x", x}, {"y", plus({y, z})}})), tau(plus({x, z}))),
            pb.plus(pb.ax("WFE2", S({{"x", x}, {"y", z}})), plus({y, z})),
            pb.a14(plus({tau(x), z, y, z}), plus({tau(x), y, z})),
            pb.sym(pb.lemma("D2", S({{"x", x}, {"y", plus({y, z})}}))),
        });
        emit("WF3^b", labels({{"%alpha", kTau}}), "[tau]", t);
        emit("WF3^b", labels({{"%alpha", kA}}), "[$a]", lift_visible(pb, kA, plus({x, z}), plus({tau(x), y, z}), t));
    }
    {
        Proof tt = pb.trans({
            pb.sum({pb.lemma("D2", S({{"x", x}, {"y", z}})), pb.lemma("D2", S({{"x", x}, {"y", plus({tau(y), z})}}))}),
            pb.a14(plus({tau(x), z, tau(x), tau(y), z}), plus({tau(x), tau(y), z})),
            pb.sym(pb.lemma("D2", S({{"x", x}, {"y", plus({tau(y), z})}}))),
        });
        Proof ta = pb.trans({
            pb.ax("WFE2", S({{"x", plus({on(kA, x), z})}, {"y", on(kA, y)}})),
            pb.ax("WFE3", S({{"x", y}, {"y", x}, {"z", z}})),
        });
        emit("RS", labels({{"%beta", kTau}, {"%alpha", kTau}}), "[tau,tau]", tt);
        emit("RS", labels({{"%beta", kTau}, {"%alpha", kA}}), "[tau,$a]", ta);
        emit("RS", labels({{"%beta", kB}, {"%alpha", kTau}}), "[$b,tau]",
             lift_visible(pb, kB, plus({tau(x), z}), plus({tau(x), tau(y), z}), tt));
        emit("RS", labels({{"%beta", kB}, {"%alpha", kA}}), "[$b,$a]",
             lift_visible(pb, kB, plus({on(kA, x), z}), plus({on(kA, x), on(kA, y), z}), ta));
    }
    if (alphabet.is_finite()) {
        Term sum = alphabet_sum(alphabet);
        emit("WF_A^a", {}, "", pb.plus(pb.ax("A3", S({{"x", sum}})), y));
        Proof t = pb.ax("WFE_A");
        emit("WF_A^b", labels({{"%alpha", kTau}}), "[tau]", t);
        emit("WF_A^b", labels({{"%alpha", kB}}), "[$b]", lift_visible(pb, kB, plus({sum, z}), plus({sum, y, z}), t));
    }
    return out;
}

} // namespace

std::vector<NamedDerivation> builtin_derivations(const Alphabet& alphabet) {
    std::vector<NamedDerivation> out;
    auto take = [&](ScriptBase b, const std::vector<std::string>& names) {
        auto lib = lemma_library(b, alphabet, 3);
        for (const auto& n : names) {
            const auto* e = lib->find(n);
            std::string prefix = b == ScriptBase::WIF ? "WIF:" : "";
            out.push_back({prefix + n, base_name(b), e->statement, restate(expand_lemmas(e->script, *lib), e->statement)});
        }
    };
    take(ScriptBase::WF, {"D1", "D2", "D3", "D4", "D5_1", "D5_2", "D5_3", "D6", "D7", "D8", "D9_1", "D9_2", "D9_3"});
    take(ScriptBase::WIF, {"D1", "D2", "D5_1", "D5_2", "D5_3"});
    auto l4 = lemma_four(alphabet);
    out.insert(out.end(), l4.begin(), l4.end());
    return out;
}

} // namespace bccs
