#pragma once

#include <stdexcept>
#include <string>

namespace wqed {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad parameters, malformed specs, unnormalized qubit inputs.
struct ValidationError : Error {
    using Error::Error;
};

// Numerical-resolution problems: a grid too narrow for the requested pulse,
// a delay that is not a multiple of the grid step, support running off the
// grid.
struct ResolutionError : Error {
    using Error::Error;
};

// Two packets that must share one grid (and carrier) do not.
struct GridMismatchError : Error {
    using Error::Error;
};

// Conditional-map extraction detected a protocol output that is not linear
// in the input state.  Signals a protocol-implementation bug, not bad data.
struct NonlinearityError : Error {
    using Error::Error;
};

}  // namespace wqed
