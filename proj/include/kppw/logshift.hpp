#pragma once

// Large-time front-shift expansion for the dispersion KPP-(11,3) problem.
// Around a base profile f at speed lambda0 the correction w = (k/t) psi +
// (1/t^2) phi solves two bordered linear systems in the discrete linearized
// operator  B w = -D^11 w + (1-2f) w + lambda0^3 w''',  and the quality of
// the ansatz is measured by the full moving-frame residual as a function
// of t.  The log-coefficient k is an input throughout: the linear systems
// cannot determine it.

#include <map>

#include "kppw/bvp.hpp"

namespace kppw {

/// Front shift g(t) = k log t and its derivatives.
struct LogShift {
    double k = 1.0;
    double g(double t) const { return k * std::log(t); }
    double g1(double t) const { return k / t; }
    double g2(double t) const { return -k / (t * t); }
    double g3(double t) const { return 2.0 * k / (t * t * t); }
};

enum class RhsVariant { SecondDerivative, ThirdDerivative };

struct ShiftGridOptions {
    double ymin = -50.0;
    double ymax = 50.0;
    double h = 0.25;
    int fd_order = 6; // accuracy order of the D^11 / D^3 stencils
};

/// Discrete operator B on a uniform grid inside the profile domain, with
/// identity rows enforcing decay where the high-order stencil does not fit.
/// Holds the differentiation matrices and machine-accurate profile samples
/// (Taylor evaluation from the stored derivative components).
struct DiscreteB {
    std::vector<double> grid;
    double h = 0.0;
    int fd_order = 0;
    int boundary_width = 0;
    double lambda0 = 0.0;
    Eigen::MatrixXd B;
    Eigen::MatrixXd D1, D2, D3, D11;
    Eigen::VectorXd f, f1, f2, f3;
    Eigen::VectorXd ip_weights; // trapezoid weights of the discrete inner product

    double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const
    {
        return (ip_weights.array() * a.array() * b.array()).sum();
    }
};

/// Finite-difference weights for derivatives 0..m at point z over nodes x
/// (Fornberg recursion); column d holds the weights of derivative d.
Eigen::MatrixXd fd_weights(double z, const std::vector<double>& x, int m);

/// Derivatives f^(0..nderiv) of a profile at an arbitrary point, by Taylor
/// expansion from the nearest node using all stored components.
std::vector<double> sample_profile(const WaveProfile& p, double y, int nderiv);

/// Assemble B on the grid.  The profile must be a converged dispersion
/// KPP-(11,3) profile at lambda0 (SpecMismatch otherwise).
DiscreteB assemble_B(const WaveProfile& profile, double lambda0,
                     const ShiftGridOptions& opt = {});

/// Solve [B, f'; <f',.>, 0] [x; mu] = [rhs; 0]; the returned x satisfies the
/// gauge <x, f'> = 0 and B x + mu f' = rhs to solver precision.
Eigen::VectorXd bordered_solve(const DiscreteB& B, const Eigen::VectorXd& rhs,
                               double* mu_out = nullptr);

/// First expansion coefficient: B psi = 3 lambda0^2 f'' (SecondDerivative)
/// or 3 lambda0^2 f''' (ThirdDerivative; the variant that cancels the O(1/t)
/// residual layer of the moving-frame equation).
Eigen::VectorXd solve_psi(const DiscreteB& B, RhsVariant variant);

/// Second coefficient, for the chosen k:
///   B phi = k (3 l0 f'' - 3 l0^2 psi'' - f') + k^2 (psi^2 + 3 l0^2 psi''' - 3 l0 f''').
Eigen::VectorXd solve_phi(const DiscreteB& B, const Eigen::VectorXd& psi,
                          double k_shift, RhsVariant variant);

struct ShiftExpansion {
    double lambda0 = 0.0;
    double k_shift = 1.0;
    RhsVariant rhs_variant = RhsVariant::ThirdDerivative;
    Eigen::VectorXd psi, phi;
    std::map<double, double> residual_norms;
};

/// Max-norm of the full moving-frame residual of v = f + (k/t) psi +
/// (1/t^2) phi over the inner half of the grid (every term retained).
double expansion_residual(const DiscreteB& B, const ShiftExpansion& e, double t);

} // namespace kppw
