#include "bccs/cli.hpp"

#include "bccs/derivations.hpp"
#include "bccs/error.hpp"
#include "bccs/fuzz.hpp"
#include "bccs/negative.hpp"
#include "bccs/normalizer.hpp"
#include "bccs/wif.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace bccs {

namespace {

struct SessionConfig {
    std::string alphabet;
    std::string format = "human";
    std::uint64_t seed = 1;
    std::size_t samples = 0; // 0: the command's default
    std::size_t depth = 3;
    std::size_t max_symbols = 12;

    bool structured() const { return format == "structured"; }
    Alphabet resolve(const std::string& fallback = "countable") const {
        return Alphabet::parse(alphabet.empty() ? fallback : alphabet);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

std::string join(const std::set<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
    return out;
}

/// Axiom set named by --axioms FILE or --base NAME; the file's alphabet header wins.
AxiomSet load_axioms(const std::string& file, const std::string& base, Alphabet& alphabet) {
    if (!file.empty()) {
        AxiomFile f = parse_axiom_file(read_file(file), alphabet);
        alphabet = f.alphabet;
        if (f.axioms.name().empty()) f.axioms.set_name(file);
        return f.axioms;
    }
    return builtin_axioms(base, alphabet);
}

/// The separating observation, preceded by its substitution for open terms.
void print_witness(std::ostream& out, const SessionConfig& cfg, std::optional<Witness> w) {
    if (!w) return;
    if (cfg.structured() && w->substitution) {
        for (const auto& [v, t] : w->substitution->terms()) out << "substitution: " << v << " := " << to_string(t) << "\n";
        w->substitution.reset();
    }
    std::string text = w->describe();
    while (!text.empty() && text.back() == '\n') text.pop_back();
    out << "witness: " << text << "\n";
}

int cmd_parse(const SessionConfig& cfg, const std::vector<std::string>& texts, std::ostream& out) {
    Alphabet alphabet = cfg.resolve();
    for (const auto& text : texts) {
        Term t = parse_term(text, alphabet);
        if (cfg.structured()) {
            out << "term: " << to_string(t) << "\n"
                << "canonical: " << to_string(canonical(t)) << "\n"
                << "depth: " << depth(t) << "\n"
                << "variables: " << join(variables(t)) << "\n";
        } else {
            out << to_string(t) << "\n  canonical " << to_string(canonical(t)) << ", depth " << depth(t);
            if (!is_closed(t)) out << ", variables " << join(variables(t));
            out << "\n";
        }
    }
    return kHolds;
}

int cmd_normalize(const SessionConfig& cfg, const std::string& text, const std::string& derivation, std::ostream& out) {
    Alphabet alphabet = cfg.resolve();
    Term t = parse_term(text, alphabet);
    Normalized n = normalize(t, NormalizeOptions{cfg.max_symbols});
    const std::string rendered = to_string(n.nf->render());
    if (cfg.structured()) {
        out << "normal-form: " << rendered << "\n"
            << "kind: " << (n.nf->kind == NormalForm::Kind::Tau ? "tau" : "action") << "\n"
            << "family: " << to_string(n.nf->family) << "\n";
    } else {
        out << rendered << "\n";
        if (n.nf->kind == NormalForm::Kind::Tau) out << "family: " << to_string(n.nf->family) << "\n";
    }
    if (!derivation.empty()) {
        AxiomSet base = builtin_axioms("wf-preorder", Alphabet::countable());
        Proof flat = expand_lemmas(n.proof, *n.lemmas);
        check_derivation(flat, base);
        write_file(derivation, to_json(flat, Alphabet::countable(), "wf-preorder"));
    }
    return kHolds;
}

struct Pair {
    Term lhs;
    Term rhs;
};

Pair parse_pair(const std::vector<std::string>& texts, const Alphabet& alphabet) {
    if (texts.size() != 2) throw UsageError("expected two terms");
    return {parse_term(texts[0], alphabet), parse_term(texts[1], alphabet)};
}

int cmd_check(const SessionConfig& cfg, const std::string& rel_name, bool open_test,
              const std::vector<std::string>& texts, std::ostream& out) {
    Alphabet alphabet = cfg.resolve();
    Relation rel = parse_relation(rel_name);
    auto [t, u] = parse_pair(texts, alphabet);
    const bool closed = is_closed(t) && is_closed(u);
    if (!closed && !open_test) throw UsageError("open terms need --open-test");

    CompareResult r;
    std::size_t tried = 0;
    if (closed) {
        r = compare(t, u, rel);
    } else {
        auto family = canonical_family(t, u, alphabet);
        tried = family.size();
        r = compare_open(t, u, rel, family);
    }
    if (cfg.structured()) {
        out << "relation: " << to_string(rel) << "\n"
            << "lhs: " << to_string(t) << "\n"
            << "rhs: " << to_string(u) << "\n"
            << "mode: " << (closed ? "closed" : "open-test") << "\n"
            << "holds: " << (r.holds ? "true" : "false") << "\n";
        if (!closed) out << "substitutions: " << tried << "\n";
    } else if (r.holds) {
        out << (closed ? "true" : "no falsifying substitution among " + std::to_string(tried) + " canonical instances")
            << "\n";
    } else {
        out << "false\n";
    }
    if (!r.holds) print_witness(out, cfg, r.witness);
    return r.holds ? kHolds : kFails;
}

int cmd_prove(const SessionConfig& cfg, const std::string& rel_name, const std::vector<std::string>& texts,
              const std::string& output, std::ostream& out) {
    Alphabet alphabet = cfg.resolve();
    Relation rel = parse_relation(rel_name);
    auto [t, u] = parse_pair(texts, alphabet);
    NormalizeOptions opts{cfg.max_symbols};

    Verdict v;
    switch (rel) {
    case Relation::PreorderWF: v = decide_preorder_WF(t, u, alphabet, opts); break;
    case Relation::PreorderWIF: v = derive_ground_WIF(t, u, alphabet); break;
    case Relation::EquivWF:
    case Relation::EquivWIF: {
        Verdict fw = rel == Relation::EquivWF ? decide_preorder_WF(t, u, alphabet, opts) : derive_ground_WIF(t, u, alphabet);
        Verdict bw = rel == Relation::EquivWF ? decide_preorder_WF(u, t, alphabet, opts) : derive_ground_WIF(u, t, alphabet);
        if (!fw.derivable || !bw.derivable) {
            v = fw.derivable ? bw : fw;
            break;
        }
        auto lib = std::make_shared<Library>(*fw.lemmas);
        for (const auto& e : bw.lemmas->entries()) {
            if (!lib->find(e.name)) lib->add(e.name, e.statement, e.script);
        }
        ProofBuilder pb(fw.base, lib.get());
        v = fw;
        v.statement = Statement::eq(t, u);
        v.proof = pb.antisym(fw.proof, bw.proof);
        v.lemmas = lib;
        break;
    }
    default: throw UsageError("prove supports wf, wf-eq, wif and wif-eq");
    }

    if (!v.derivable) {
        if (cfg.structured()) {
            out << "statement: " << to_string(v.statement) << "\nderivable: false\n";
        } else {
            out << "not derivable: " << to_string(v.statement) << "\n";
        }
        print_witness(out, cfg, v.observation);
        return kFails;
    }
    Proof flat = expand_lemmas(v.proof, *v.lemmas);
    check_derivation(flat, v.base);
    const std::string base = rel == Relation::PreorderWF || rel == Relation::EquivWF ? "wf-preorder" : "wif-preorder";
    const std::string json = to_json(flat, alphabet, base);
    if (output.empty()) {
        out << json;
    } else {
        write_file(output, json);
        if (cfg.structured()) {
            out << "statement: " << to_string(v.statement) << "\nderivable: true\nnodes: " << proof_size(flat)
                << "\nfile: " << output << "\n";
        } else {
            out << "derivable: " << to_string(v.statement) << " (" << proof_size(flat) << " proof nodes, written to "
                << output << ")\n";
        }
    }
    return kHolds;
}

int cmd_verify(const SessionConfig& cfg, const std::string& path, const std::string& axioms_file,
               const std::string& expect, std::ostream& out) {
    DerivationFile f = parse_derivation(read_file(path));
    Alphabet alphabet = f.alphabet;
    if (axioms_file.empty() && f.base.empty()) throw UsageError("derivation names no base; pass --axioms");
    AxiomSet axioms = load_axioms(axioms_file, f.base, alphabet);
    try {
        Statement s = check_derivation(f.proof, axioms);
        if (!expect.empty() && !equal_modulo_ac(s, parse_statement(expect, f.alphabet))) {
            throw ProofError("concludes " + to_string(s) + ", expected " + expect);
        }
        if (cfg.structured()) {
            out << "valid: true\nconclusion: " << to_string(s) << "\naxioms: " << join(axioms_used(f.proof)) << "\n";
        } else {
            out << "valid: " << to_string(s) << "\n";
        }
        return kHolds;
    } catch (const ProofError& e) {
        out << (cfg.structured() ? "valid: false\nerror: " : "invalid: ") << e.what() << "\n";
        return kFails;
    }
}

int cmd_gen_axioms(const SessionConfig& cfg, const std::string& base, const std::string& file, std::ostream& out) {
    Alphabet alphabet = cfg.resolve();
    AxiomSet e = load_axioms(file, base, alphabet);
    out << to_axiom_file(generate_equivalence_axioms(e), alphabet);
    return kHolds;
}

std::string family_alphabet(FamilyId id) {
    switch (id) {
    case FamilyId::Phi: return "a,b";
    default: return "a";
    }
}

int cmd_counterexample(const SessionConfig& cfg, const std::string& family, std::size_t m, const std::string& base,
                       const std::string& file, std::ostream& out) {
    FamilyId id = parse_family(family);
    Alphabet alphabet = cfg.resolve(family_alphabet(id));
    AxiomSet e = load_axioms(file, base, alphabet);
    Relation rel = id == FamilyId::Equation ? Relation::EquivWIF : Relation::PreorderWIF;
    SeparationCertificate c = certify_nonderivability(id, m, e, rel, alphabet, CertifyOptions{cfg.samples ? cfg.samples : 200, cfg.seed});
    out << c.report();
    if (!cfg.structured()) out << (c.valid() ? "certificate valid" : "certificate invalid") << "\n";
    if (c.status == SeparationCertificate::Status::NoSeparation) return kInternal;
    return c.valid() ? kHolds : kFails;
}

int cmd_fuzz(const SessionConfig& cfg, const std::string& rel_name, const std::string& base, const std::string& file,
             std::ostream& out) {
    Alphabet alphabet = cfg.resolve("a,b");
    AxiomSet e = load_axioms(file, base, alphabet);
    Relation rel = parse_relation(rel_name);
    std::size_t violations = 0;
    for (const auto& r : fuzz_soundness(e, rel, alphabet, cfg.samples ? cfg.samples : 1000, cfg.seed, cfg.depth)) {
        violations += r.violations;
        if (cfg.structured()) {
            out << "axiom: " << r.axiom << "\ninstances: " << r.instances << "\nviolations: " << r.violations << "\n";
            if (r.counterexample) out << "counterexample: " << *r.counterexample << "\n";
        } else {
            out << r.axiom << ": " << r.instances << " instances, " << r.violations << " violations";
            if (r.counterexample) out << " (" << *r.counterexample << ")";
            out << "\n";
        }
    }
    return violations ? kFails : kHolds;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Workbench for BCCS weak failures and weak impossible futures"};
    app.name("bccs");
    app.require_subcommand(1);
    app.fallthrough();

    SessionConfig cfg;
    app.add_option("--alphabet", cfg.alphabet, "Actions as a,b,c or 'countable'");
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"human", "structured"}));
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--samples", cfg.samples, "Samples per axiom")->check(CLI::PositiveNumber);
    app.add_option("--depth", cfg.depth, "Depth cap for random images")->check(CLI::PositiveNumber);
    app.add_option("--max-symbols", cfg.max_symbols, "Symbol cap for saturated families")->check(CLI::PositiveNumber);

    std::vector<std::string> terms;
    std::string rel = "wf";
    std::string gen_base;
    std::string cex_base;
    std::string fuzz_base;
    std::string axioms_file;
    std::string path;
    std::string expect;
    std::string family;
    std::size_t m = 0;
    bool open_test = false;

    auto* parse = app.add_subcommand("parse", "Parse terms and print their canonical forms");
    parse->add_option("terms", terms)->required();

    auto* norm = app.add_subcommand("normalize", "Normal form and saturated family of a term");
    norm->add_option("term", terms)->required()->expected(1);
    norm->add_option("--derivation", path, "Write the derivation t == nf to FILE");

    auto* check = app.add_subcommand("check", "Decide a relation semantically");
    check->add_option("--rel", rel)->check(CLI::IsMember({"leq-wf", "wf", "wf-eq", "wif", "wif-eq"}));
    check->add_flag("--open-test", open_test, "Evaluate open terms on the canonical substitutions");
    check->add_option("terms", terms)->required()->expected(2);

    auto* prove = app.add_subcommand("prove", "Derive t <= u (or t == u) axiomatically");
    prove->add_option("--rel", rel)->check(CLI::IsMember({"wf", "wf-eq", "wif", "wif-eq"}));
    prove->add_option("-o,--output", path, "Derivation file");
    prove->add_option("terms", terms)->required()->expected(2);

    auto* verify = app.add_subcommand("verify", "Check a derivation file");
    verify->add_option("file", path)->required();
    verify->add_option("--axioms", axioms_file, "Axiom file instead of the recorded base");
    verify->add_option("--expect", expect, "Statement the derivation must conclude");

    auto* gen = app.add_subcommand("gen-axioms", "Axiomatize the kernel of a preorder axiomatization");
    gen->add_option("--base", gen_base, "Built-in axiom table")->default_val("wf-preorder");
    gen->add_option("--axioms", axioms_file, "Axiom file");

    auto* cex = app.add_subcommand("counterexample", "Non-derivability certificate for a family instance");
    cex->add_option("--family", family)->required();
    cex->add_option("--m", m)->required();
    cex->add_option("--base", cex_base, "Built-in axiom table")->default_val("wif-preorder");
    cex->add_option("--axioms", axioms_file, "Axiom file");

    auto* fuzz = app.add_subcommand("fuzz", "Sampled soundness check of an axiom set");
    fuzz->add_option("--rel", rel)->check(CLI::IsMember({"leq-wf", "wf", "wf-eq", "wif", "wif-eq"}));
    fuzz->add_option("--base", fuzz_base, "Built-in axiom table")->default_val("wf-preorder");
    fuzz->add_option("--axioms", axioms_file, "Axiom file");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kHolds : kUsage;
    }

    try {
        if (*parse) return cmd_parse(cfg, terms, out);
        if (*norm) return cmd_normalize(cfg, terms.front(), path, out);
        if (*check) return cmd_check(cfg, rel, open_test, terms, out);
        if (*prove) return cmd_prove(cfg, rel, terms, path, out);
        if (*verify) return cmd_verify(cfg, path, axioms_file, expect, out);
        if (*gen) return cmd_gen_axioms(cfg, gen_base, axioms_file, out);
        if (*cex) return cmd_counterexample(cfg, family, m, cex_base, axioms_file, out);
        if (*fuzz) return cmd_fuzz(cfg, rel, fuzz_base, axioms_file, out);
    } catch (const InternalInconsistency& e) {
        err << "internal inconsistency: " << e.what() << "\n";
        return kInternal;
    } catch (const ProofError& e) {
        err << "internal inconsistency: emitted derivation fails to check: " << e.what() << "\n";
        return kInternal;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace bccs
