#include "bccs/cli.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bccs;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("bccs_cli_" + name)).string();
}

} // namespace

TEST_CASE("cli: check") {
    Run r = run({"check", "--rel", "wf", "tau.0 + a.0", "0 + a.0"});
    CHECK(r.code == kFails);
    CHECK(r.out.rfind("false\nwitness: failure pair (ε; {a})", 0) == 0);

    CHECK(run({"check", "--rel", "leq-wf", "tau.0", "0"}).code == kHolds);
    CHECK(run({"check", "--rel", "wif-eq", "tau.a.a.0 + tau.(a.0 + a.a.0)", "tau.(a.0 + a.a.0)"}).code == kHolds);

    Run open = run({"check", "--rel", "wif", "a.x", "a.x + x"});
    CHECK(open.code == kUsage);
    Run tested = run({"check", "--rel", "wif", "--open-test", "--alphabet", "a,b", "a.x", "a.x + x", "--format",
                      "structured"});
    CHECK(tested.code == kFails);
    CHECK(tested.out.find("holds: false") != std::string::npos);
    CHECK(tested.out.find("substitution: x := ") != std::string::npos);
}

TEST_CASE("cli: normalize") {
    Run r = run({"normalize", "0"});
    CHECK(r.code == kHolds);
    CHECK(r.out == "0\n");
    Run t = run({"normalize", "tau.x + y"});
    CHECK(t.out == "tau.x + tau.(x + y)\nfamily: {{x}, {x,y}}\n");
    Run capped = run({"normalize", "--max-symbols", "1", "tau.x + y"});
    CHECK(capped.code == kUsage);
    CHECK(capped.err.find("cap") != std::string::npos);
    CHECK(run({"normalize", "a."}).code == kUsage);
}

TEST_CASE("cli: prove output passes verify") {
    struct Case {
        const char* rel;
        const char* lhs;
        const char* rhs;
    };
    for (auto c : {Case{"wf", "a.x", "a.(tau.x + tau.y)"}, Case{"wf-eq", "a.x + a.y", "a.(tau.x + tau.y)"},
                   Case{"wif", "0", "tau.0"}, Case{"wif-eq", "tau.a.a.0 + tau.(a.0 + a.a.0)", "tau.(a.0 + a.a.0)"}}) {
        const std::string file = temp_path(std::string(c.rel) + ".json");
        Run p = run({"prove", "--rel", c.rel, c.lhs, c.rhs, "-o", file});
        INFO(c.rel << " " << p.out << p.err);
        REQUIRE(p.code == kHolds);
        Run v = run({"verify", file});
        CHECK(v.code == kHolds);
        CHECK(v.out.rfind("valid: ", 0) == 0);
        std::remove(file.c_str());
    }
    Run no = run({"prove", "--rel", "wf", "a.x", "b.x"});
    CHECK(no.code == kFails);
    CHECK(no.out.find("not derivable") != std::string::npos);
    CHECK(run({"prove", "--rel", "wif", "x", "tau.x"}).code == kUsage);
}

TEST_CASE("cli: verify rejects tampered files") {
    const std::string file = temp_path("tamper.json");
    REQUIRE(run({"prove", "--rel", "wf", "x", "tau.x + y", "-o", file}).code == kHolds);
    CHECK(run({"verify", file, "--expect", "x <= tau.x + y"}).code == kHolds);
    CHECK(run({"verify", file, "--expect", "x <= tau.x"}).code == kFails);
    const std::string wif = temp_path("wif-base.ax");
    {
        std::ofstream(wif) << "A1: x + y == y + x\n";
    }
    CHECK(run({"verify", file, "--axioms", wif}).code == kFails);
    std::remove(file.c_str());
    std::remove(wif.c_str());
    CHECK(run({"verify", temp_path("missing.json")}).code == kUsage);
}

TEST_CASE("cli: gen-axioms") {
    Run r = run({"gen-axioms", "--base", "wf-preorder", "--alphabet", "a,b"});
    CHECK(r.code == kHolds);
    for (const char* line : {"WF2^a: tau.(x + y) + tau.x + y == tau.x + y",
                             "WF3^a: x + tau.x + y == tau.x + y",
                             "RS: %beta.(%alpha.x + z) + %beta.(%alpha.x + %alpha.y + z) == %beta.(%alpha.x + %alpha.y + z)",
                             "WF_A^a: (a.x_a + b.x_b) + (a.x_a + b.x_b) + y == (a.x_a + b.x_b) + y"}) {
        CHECK(r.out.find(line) != std::string::npos);
    }
    CHECK(run({"gen-axioms", "--base", "wf-preorder"}).out.find("WF_A") == std::string::npos);
}

TEST_CASE("cli: counterexample") {
    Run v = run({"counterexample", "--family", "eq", "--m", "2"});
    CHECK(v.code == kHolds);
    CHECK(v.out.find("status: valid") != std::string::npos);
    Run small = run({"counterexample", "--family", "eq", "--m", "1"});
    CHECK(small.code == kFails);
    CHECK(small.out.find("status: m-too-small") != std::string::npos);
    CHECK(run({"counterexample", "--family", "phi", "--m", "2", "--alphabet", "a"}).code == kUsage);
    CHECK(run({"counterexample", "--family", "single", "--m", "2", "--base", "wf-preorder"}).code == kFails);
}

TEST_CASE("cli: fuzz is reproducible") {
    std::vector<std::string> args{"fuzz", "--base", "wf-preorder", "--rel", "wf", "--samples", "40", "--seed", "5"};
    Run a = run(args);
    Run b = run(args);
    CHECK(a.code == kHolds);
    CHECK(a.out == b.out);
    CHECK(run({"fuzz", "--base", "wf-preorder", "--rel", "wif", "--samples", "200"}).code == kFails);
}

TEST_CASE("cli: usage errors") {
    CHECK(run({}).code == kUsage);
    CHECK(run({"frobnicate"}).code == kUsage);
    CHECK(run({"check", "--rel", "bogus", "0", "0"}).code == kUsage);
    CHECK(run({"check", "0"}).code == kUsage);
    CHECK(run({"parse", "--alphabet", "a", "b.0"}).code == kUsage);
    CHECK(run({"parse", "a.0 + x"}).out == "a.0 + x\n  canonical a.0 + x, depth 1, variables x\n");
    CHECK(run({"--help"}).code == kHolds);
}
