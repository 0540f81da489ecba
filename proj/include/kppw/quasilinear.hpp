#pragma once

// Degenerate quasilinear KPP-(11,1) solver.  The profile is computed in the
// transformed variable F = |f|^n f, whose equation is linear in the highest
// derivative; the singular factor |F|^(-n/(n+1)) is regularized by
// |F| -> sqrt(F^2 + delta^2) with geometric continuation in delta.  Profiles
// have a finite interface y0 with F identically ~0 beyond it; the local
// oscillatory component of the interface expansion solves a tenth-order
// interface-operator equation and is sought by Fourier collocation.

#include <optional>

#include "kppw/collocation.hpp"
#include "kppw/mesh.hpp"
#include "kppw/pk.hpp"

namespace kppw {

/// Interface envelope exponent gamma = 10/n (n > 0).
double interface_exponent(double n);

/// Transform helpers: F = |f|^n f and its inverse.
double F_from_f(double f, double n);
double f_from_F(double F, double n);

struct QuasiProfile {
    double n = 1.0;
    double lambda = 0.0;
    Mesh mesh;
    Eigen::MatrixXd values; // nodes x 11, column j = F^(j)
    double delta = 0.0;     // regularization actually reached
    std::optional<double> interface_y0;
    SolveDiagnostics diagnostics;
};

struct QuasiOptions {
    double tol = 1e-8;
    double delta_start = 1e-3;
    double delta_target = 1e-9;
    double delta_ratio = 1e-2; // geometric step between continuation levels
    int max_iters = 100;
    double smoothing_width = 2.0;
};

struct QuasiSolveResult {
    std::optional<QuasiProfile> profile;
    SolveStatus status = SolveStatus::NoConvergence;
    double best_residual = 0.0;
    int iters = 0;

    bool converged() const { return status == SolveStatus::Converged; }
};

/// Solve the transformed equation on the mesh.  Without a guess the solver
/// continues in delta from delta_start down to delta_target; with a guess it
/// first attempts delta_target directly (warm starts along a speed sweep).
QuasiSolveResult solve_quasilinear(double n, double lambda, const Mesh& mesh,
                                   const QuasiOptions& opt = {},
                                   const Eigen::MatrixXd* guess = nullptr);

struct InterfaceFit {
    double y0 = 0.0;
    double envelope_exponent = 0.0; // expected near 10(n+1)/n
    int fit_points = 0;
};

/// Locate the finite interface: the first mesh point beyond which |F| stays
/// below the threshold (default 1e-6 * max|F| when threshold <= 0), plus a
/// log-log fit of the envelope exponent just inside it.
InterfaceFit interface_locate(const QuasiProfile& profile, double threshold = 0.0);

struct OscComponent {
    double n = 1.0;
    double lambda = 0.0;
    double gamma = 10.0;
    double period = 0.0;
    std::vector<double> samples; // one period, equispaced in s
    double residual_norm = 0.0;  // relative
    bool sign_changing = false;
};

struct OscResult {
    std::optional<OscComponent> component;
    std::string reason; // set on failure
    bool converged() const { return component.has_value(); }
};

/// Periodic solution of the interface-operator equation by Fourier
/// collocation with unknown period; seeded from the constant solution plus
/// the least-damped linearized mode.  Reported honestly as NoConvergence
/// when Newton fails or collapses back to the constant.
OscResult oscillatory_component(double n, double lambda, int fourier_modes = 64);

/// Residual of the interface-operator equation on the constant solution
/// c = (lambda / a_{10,0}(gamma))^(1/n), evaluated through the operator
/// coefficients; identically zero up to round-off.
double constant_orbit_residual(double n, double lambda);

/// Residual vector of the interface-operator equation for sample values of
/// the oscillatory component at equispaced points of one period 2*pi/omega.
Eigen::VectorXd osc_equation_residual(double n, double lambda,
                                      const Eigen::VectorXd& samples, double omega);

struct QuasiLambdaMaxResult {
    double lambda_in = 0.0;
    double lambda_out = 0.0;
    int solves = 0;
    double domain_left = 0.0, domain_right = 0.0;
    int mesh_intervals = 0;
};

/// Solvability bisection over solve_quasilinear, warm-started.
QuasiLambdaMaxResult lambda_max_quasi(double n, double lo, double hi, double tol,
                                      const Mesh& mesh, const QuasiOptions& opt = {});

} // namespace kppw
