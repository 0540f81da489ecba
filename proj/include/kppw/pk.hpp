#pragma once

// Exact construction of the interface operator family
//     P_{k+1}[phi] = (P_k[phi])' + (gamma - k) P_k[phi],   P_0[phi] = phi,
// whose coefficients a_{K,j} are integer polynomials in gamma.  Coefficients
// are kept in exact big-integer arithmetic; numbers leave as doubles only at
// the evaluation boundary.

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kppw/errors.hpp"

namespace kppw {

using BigInt = boost::multiprecision::cpp_int;

/// Polynomial in gamma with exact integer coefficients (ascending order).
struct GammaPoly {
    std::vector<BigInt> c; // no trailing zeros; empty = zero polynomial

    static GammaPoly zero() { return {}; }
    static GammaPoly constant(BigInt v);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    GammaPoly operator+(const GammaPoly& o) const;
    bool operator==(const GammaPoly& o) const = default;

    /// Multiply by (gamma + shift).
    GammaPoly times_gamma_plus(const BigInt& shift) const;

    double eval(double gamma) const;
    BigInt eval_exact(const BigInt& gamma) const;

    /// Rendering like "3*g^2 - 6*g + 2" with g = gamma.
    std::string to_string() const;
};

/// P_K as a coefficient table: P_K[phi] = sum_j a_{K,j}(gamma) phi^(j).
struct PkOperator {
    int order = 0;
    std::vector<GammaPoly> coeffs; // a_{K,0} ... a_{K,K}
};

/// Build P_K exactly via the recursion a_{k+1,j} = a_{k,j-1} + (gamma-k) a_{k,j}.
PkOperator pk_build(int K);

/// Numeric coefficient vector a_{K,j}(gamma), j = 0..K.
std::vector<double> pk_eval(const PkOperator& op, double gamma);

/// Apply the operator to derivative samples (phi, phi', ..., phi^(K)) at a point.
double pk_apply(const PkOperator& op, double gamma,
                const std::vector<double>& derivative_samples);

} // namespace kppw
