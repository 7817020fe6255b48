#pragma once

#include <stdexcept>
#include <string>

namespace gf {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad numeric construction or arithmetic domain (zero denominator, 0^-1,
// dimension mismatch, unknown id).
struct MathError : Error {
    using Error::Error;
};

// Malformed input text (DIMACS, JSON, rational strings).
struct ParseError : Error {
    using Error::Error;
};

// A constructed object violates a structural invariant.
struct StructureError : Error {
    using Error::Error;
};

// Enumeration limits for the brute-force oracles and the solver.
struct BudgetError : Error {
    using Error::Error;
};

// A completeness witness does not satisfy what it claims to witness.
struct WitnessError : Error {
    using Error::Error;
};

// A soundness extraction found a schedule/matching that contradicts the
// threshold assumptions (or a construction bug).
struct SoundnessError : Error {
    using Error::Error;
};

// An exact inequality certificate failed.
struct CertificateError : Error {
    using Error::Error;
};

} // namespace gf
