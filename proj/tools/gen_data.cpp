// Regenerates the shipped axiom tables and derivation files.
//   bccs_gen_data DIR

#include "bccs/derivations.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace bccs;

namespace {

std::string file_stem(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (c == ':' || c == '^' || c == '[' || c == ',') out += '_';
        else if (c != ']' && c != '$') out += c;
    }
    return out;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    std::cout << p.string() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: bccs_gen_data DIR\n";
        return 2;
    }
    const fs::path root = argv[1];
    fs::create_directories(root / "axioms");
    fs::create_directories(root / "derivations");

    const Alphabet ab = Alphabet::parse("a,b");
    for (const char* name : {"wf-preorder", "wif-preorder", "wf-equiv"}) {
        write(root / "axioms" / (std::string(name) + ".ax"), to_axiom_file(builtin_axioms(name, ab), ab));
    }
    write(root / "axioms" / "tab-aux.ax", to_axiom_file(generate_equivalence_axioms(builtin_axioms("wf-preorder", ab)), ab));
    write(root / "axioms" / "d-laws.ax", to_axiom_file(builtin_axioms("D1-9", ab), ab));

    for (const auto& d : builtin_derivations(ab)) {
        write(root / "derivations" / (file_stem(d.name) + ".json"), to_json(d.proof, ab, d.base));
    }
    return 0;
}
