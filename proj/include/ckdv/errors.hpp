#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ckdv {

// Base class for every error raised by the library. Each concrete type maps
// to one failure mode named in the module contracts.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// s2 coincides with (sum w)^-1: L collapses to rank one.
struct DegenerateScale : Error {
    using Error::Error;
};

// A weight is zero (or numerically indistinguishable from zero).
struct ZeroWeight : Error {
    using Error::Error;
};

// L (or the Gram matrix Q^T rho Q) has no usable inverse.
struct SingularL : Error {
    using Error::Error;
};

// Component counts of two arguments disagree, or fields live on different grids.
struct DimensionMismatch : Error {
    using Error::Error;
};

// A time integration produced non-finite or absurdly large values.
struct BlowUp : Error {
    using Error::Error;
};

// |psi| fell below the vacuum threshold; the phase is undefined there.
struct VacuumPoint : Error {
    using Error::Error;
};

// The linearized wave operator has a non-positive squared eigenvalue.
struct ComplexEigenvalue : Error {
    using Error::Error;
};

// An extra condensate accidentally joins the degenerate family.
struct DegeneracyCollision : Error {
    using Error::Error;
};

// Requested perturbation amplitude drives a density non-positive.
struct NegativeDensity : Error {
    using Error::Error;
};

// A velocity perturbation with nonzero mean cannot be periodic in phase.
struct NonzeroMeanVelocity : Error {
    using Error::Error;
};

// Configuration rejected; carries every violation found, not just the first.
struct SchemaError : Error {
    std::vector<std::string> violations;

    explicit SchemaError(std::vector<std::string> v)
        : Error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "config schema violations:";
        for (const auto& s : v) {
            out += "\n  - ";
            out += s;
        }
        return out;
    }
};

} // namespace ckdv
