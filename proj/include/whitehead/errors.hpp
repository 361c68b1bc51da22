#pragma once

#include <stdexcept>
#include <string>

namespace whitehead {

// Malformed input: bad grammar, violated preconditions.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested operation is not implemented for this field tower.
struct UnsupportedTower : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A p-adic or Laurent computation ran past the declared precision.
struct PrecisionExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mathematically invalid input (zero divisor, non-disjoint data, ...).
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A decision procedure could not certify an answer.
struct Undecided : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace whitehead
