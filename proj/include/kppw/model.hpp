#pragma once

// Canonical travelling-wave ODE family
//
//     s_t * lambda^l * f^(l) = s_x * f^(k) + f(1 - f)
//
// written as a first-order system U' = G(U; lambda) with U_j = f^(j-1).
// Every equation in the catalog is one (k, l, s_t, s_x) tuple; the
// quasilinear member carries an exponent n > 0 and is handled separately.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kppw/errors.hpp"

namespace kppw {

/// The fixed logistic source f(1-f).
struct LogisticSource {
    static double value(double f) { return f * (1.0 - f); }
    static double derivative(double f) { return 1.0 - 2.0 * f; }
};

struct ProblemSpec {
    int k = 2;      // order of the spatial derivative term f^(k)
    int l = 1;      // order of the time-induced derivative term f^(l)
    int sign_t = -1; // sign of the lambda^l f^(l) term (left side)
    int sign_x = +1; // sign of the f^(k) term (right side)
    double n = 0.0;  // quasilinear exponent; 0 = semilinear
    std::string family;
    std::string label;

    /// Nominal order of the first-order system, m = max(k, l).
    int order() const { return k > l ? k : l; }

    /// Effective system order at a given speed.  At lambda = 0 with l > k the
    /// lambda^l term vanishes and the equation reduces to order k.
    int system_order(double lambda) const
    {
        return (lambda == 0.0 && l > k) ? k : order();
    }

    bool semilinear() const { return n == 0.0; }

    /// Throws InvalidSpec unless k,l >= 1, k != l, signs in {-1,+1}, n >= 0.
    void validate() const;
};

/// All catalogued equations, one ProblemSpec per named KPP-(k,l) member.
const std::vector<ProblemSpec>& catalog();

/// Looks up a catalogued equation; throws UnknownEquation if (family,k,l)
/// does not name one.
ProblemSpec catalog_lookup(const std::string& family, int k, int l);

/// lambda^p by repeated multiplication, sign preserved for odd p.
double int_pow(double lambda, int p);

/// Right-hand side G of the first-order system U' = G(U; lambda).
/// state must have spec.system_order(lambda) components.  Semilinear only.
Eigen::VectorXd system_rhs(const ProblemSpec& spec, const Eigen::VectorXd& state,
                           double lambda);

/// Exact Jacobian dG/dU of system_rhs.
Eigen::MatrixXd system_jacobian(const ProblemSpec& spec, const Eigen::VectorXd& state,
                                double lambda);

/// Pointwise defect of the canonical equation given derivative samples
/// f, f', ..., f^(order()).  Vanishes along exact solutions.
double equation_defect(const ProblemSpec& spec, const std::vector<double>& derivs,
                       double lambda);

} // namespace kppw
