#pragma once

#include <stdexcept>
#include <string>

namespace spotsim {

// Failure classes the CLI maps onto its fixed exit-code table
// (usage=2, parse=3, empty filter=4, flat trace=5).

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyFilterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FlatTraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spotsim
