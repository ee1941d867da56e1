#pragma once

#include <stdexcept>
#include <string>

namespace swarmlab {

// Raised when a config, graph, or argument violates a documented precondition.
// The CLI maps this to exit code 1; anything else escaping is exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace swarmlab
