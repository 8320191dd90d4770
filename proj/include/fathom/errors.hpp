#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fathom {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gluing a thick torus (class [I]) to a solid torus with essential exits
// (class [II]) produces a genus-2 boundary surface, which no flow boundary
// on S^3 admits.
struct BitorusError : Error {
    BitorusError()
        : Error("bitorus: a class [I] handle cannot be identified with a class [II] handle") {}
};

struct PolarityError : Error {
    using Error::Error;
};

struct SelectorError : Error {
    using Error::Error;
};

struct AmbiguityError : Error {
    std::vector<std::string> candidates;
    AmbiguityError(const std::string& what, std::vector<std::string> cands)
        : Error(what), candidates(std::move(cands)) {}
};

struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " at offset " + std::to_string(pos)), position(pos) {}
};

struct BoundError : Error {
    using Error::Error;
};

} // namespace fathom
