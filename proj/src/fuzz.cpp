#include "bccs/fuzz.hpp"

#include <functional>

namespace bccs {

Term TermGenerator::leaf() {
    if (!vars_.empty() && below(2)) return Term::var(vars_[below(vars_.size())]);
    return Term::nil();
}

Label TermGenerator::label(bool allow_tau) {
    std::size_t n = actions_.size() + (allow_tau ? 1 : 0);
    std::size_t k = below(n);
    if (k == actions_.size()) return Label::tau();
    return Label::action(actions_[k]);
}

Term TermGenerator::term(std::size_t max_depth) {
    // Shapes: leaf, tau-prefix, action prefix, sum. Weights keep sizes moderate.
    std::size_t pick = below(10);
    if (max_depth == 0) {
        if (pick < 6) return leaf();
        if (pick < 8) return Term::tau(leaf());
        return Term::sum(leaf(), Term::tau(leaf()));
    }
    if (pick < 2) return leaf();
    if (pick < 4) return Term::tau(term(max_depth));
    if (pick < 7) return Term::act(actions_[below(actions_.size())], term(max_depth - 1));
    return Term::sum(term(max_depth), term(max_depth));
}

std::vector<std::string> sample_actions(const Alphabet& alphabet) {
    if (alphabet.is_finite()) return alphabet.names();
    return {"a", "b", "c"};
}

namespace {

void collect_metas(const Term& t, std::set<Label>& out) {
    switch (t.kind()) {
    case TermKind::Prefix:
        if (t.label().is_meta()) out.insert(t.label());
        collect_metas(t.body(), out);
        break;
    case TermKind::Sum:
        collect_metas(t.left(), out);
        collect_metas(t.right(), out);
        break;
    default: break;
    }
}

} // namespace

std::vector<SoundnessReport> fuzz_soundness(const AxiomSet& axioms, Relation preorder, const Alphabet& alphabet,
                                            std::size_t samples, std::uint64_t seed, std::size_t image_depth) {
    TermGenerator gen(seed, sample_actions(alphabet));
    std::vector<SoundnessReport> out;
    for (const auto& ax : axioms.axioms()) {
        SoundnessReport r;
        r.axiom = ax.name;
        const Statement& s = ax.statement;
        auto vars = variables(s.lhs);
        auto more = variables(s.rhs);
        vars.insert(more.begin(), more.end());
        std::set<Label> metas;
        collect_metas(s.lhs, metas);
        collect_metas(s.rhs, metas);
        for (std::size_t i = 0; i < samples; ++i) {
            Substitution sub;
            for (const auto& v : vars) sub.bind(v, gen.term(image_depth));
            for (const auto& m : metas) {
                sub.bind_label(m.str(), gen.label(m.kind == Label::Kind::AnyMeta));
            }
            Term l = sub.apply(s.lhs);
            Term u = sub.apply(s.rhs);
            bool ok = compare(l, u, preorder).holds && (!s.is_equation() || compare(u, l, preorder).holds);
            ++r.instances;
            if (!ok) {
                ++r.violations;
                if (!r.counterexample) r.counterexample = to_string(Statement{s.kind, l, u});
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace bccs
