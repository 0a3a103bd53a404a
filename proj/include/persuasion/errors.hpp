#pragma once
#include <stdexcept>
#include <string>

namespace persuasion {

// Error taxonomy. The CLI maps these onto exit codes: input problems -> 1,
// solver problems -> 2, resource guards -> 3, property failures -> 4.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct SingularConfusion : Error {
    using Error::Error;
};
struct IllConditioned : Error {
    using Error::Error;
};
struct SpaceTagError : Error {
    using Error::Error;
};
struct ZeroProbabilitySignal : Error {
    using Error::Error;
};
struct NumericalInstability : Error {
    using Error::Error;
};
struct WelfareViolation : Error {
    using Error::Error;
};
struct GridTooLarge : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};

}  // namespace persuasion
