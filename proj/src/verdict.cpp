#include "bccs/verdict.hpp"

#include <sstream>

namespace bccs {

std::string Verdict::describe() const {
    std::ostringstream os;
    if (derivable) {
        os << "derivable: " << to_string(statement) << " (" << proof_size(proof) << " proof nodes)";
        return os.str();
    }
    os << "not derivable: " << to_string(statement);
    if (witness) os << "\n  under " << to_string(*witness);
    if (observation) os << "\n  " << observation->describe();
    return os.str();
}

} // namespace bccs
