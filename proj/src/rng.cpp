#include "sdsnn/rng.hpp"

#include "sdsnn/errors.hpp"

#include <sstream>

namespace sdsnn {

std::string Rng::serialize() const {
    std::ostringstream out;
    out << engine_;
    return out.str();
}

void Rng::deserialize(const std::string& text) {
    std::istringstream in(text);
    in >> engine_;
    if (in.fail()) {
        throw ParseError("malformed RNG state string");
    }
}

} // namespace sdsnn
