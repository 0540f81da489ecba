#pragma once

// Characteristic polynomials of the linearizations at the equilibria f = 0
// and f = 1, their roots, and the asymptotic bundle bookkeeping used by the
// boundary closures and the root-collision diagnostic.

#include <complex>
#include <optional>
#include <vector>

#include "kppw/model.hpp"

namespace kppw {

struct CharSummary {
    int equilibrium = 0; // 0 or 1
    std::vector<std::complex<double>> roots;
    int n_minus = 0;  // Re < -tol_center
    int n_plus = 0;   // Re > +tol_center
    int n_center = 0; // |Re| <= tol_center
    double tol_center = 1e-9;
};

struct BundleSummary {
    CharSummary at_zero;
    CharSummary at_one;
    // n_minus(0) + n_plus(1) - (m + 1); zero marks the usual heteroclinic
    // count with one translation parameter.
    int shooting_balance = 0;
};

/// Coefficients (ascending, degree = system_order(lambda)) of
///     chi(theta) = s_x theta^k - s_t lambda^l theta^l + c,
/// with c = +1 at equilibrium 0 and c = -1 at equilibrium 1.
std::vector<double> characteristic_poly(const ProblemSpec& spec, double lambda,
                                        int equilibrium);

/// All complex roots with multiplicity (companion-matrix eigenvalues plus a
/// guarded Newton polish).  Throws DegenerateLeadingCoefficient.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs);

/// Evaluate a dense polynomial (ascending coefficients) at z.
std::complex<double> poly_eval(const std::vector<double>& coeffs,
                               std::complex<double> z);

/// Root classification at both equilibria plus the shooting balance.
BundleSummary bundle_dims(const ProblemSpec& spec, double lambda,
                          double tol_center = 1e-9);

/// Smallest lambda in [lo, hi] at which a tracked complex-conjugate root pair
/// of the characteristic polynomial reaches |Im| < tol (a real double-root
/// collision).  Returns nothing if no pair collides inside the bracket.
std::optional<double> root_collision_lambda(const ProblemSpec& spec, int equilibrium,
                                            double lo, double hi, double tol);

} // namespace kppw
