#pragma once

#include <stdexcept>
#include <string>

namespace kppw {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownEquation : Error {
    using Error::Error;
};
struct InvalidSpec : Error {
    using Error::Error;
};
struct DegenerateLeadingCoefficient : Error {
    using Error::Error;
};
struct BracketInvalid : Error {
    using Error::Error;
};
struct CenterModesPresent : Error {
    using Error::Error;
};
struct ClosureCountMismatch : Error {
    using Error::Error;
};
struct SingularJacobian : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct InterfaceNotFound : Error {
    using Error::Error;
};
struct NonPositiveN : Error {
    using Error::Error;
};
struct SpecMismatch : Error {
    using Error::Error;
};
struct RegularizationStall : Error {
    using Error::Error;
};

} // namespace kppw
