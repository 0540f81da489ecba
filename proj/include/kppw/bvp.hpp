#pragma once

// Truncated two-point boundary value solver for a catalogued equation at a
// given speed: Heaviside-type initial iterate, Dirichlet or projection
// closure of the decay conditions, phase normalization f(0) = 1/2, damped
// Newton collocation, and residual-driven mesh refinement.

#include <optional>

#include "kppw/charroots.hpp"
#include "kppw/collocation.hpp"
#include "kppw/mesh.hpp"

namespace kppw {

struct SolveOptions {
    double tol = 1e-8;     // max-norm tolerance on the collocation equations
    double tol_bc = 1e-5;  // boundary/phase satisfaction reported in checks
    int max_iters = 100;
    bool refine_on_failure = true;
    BcMode mode = BcMode::DirichletSimple;
    double smoothing_width = 2.0; // Heaviside guess transition width
};

struct SolveResult {
    std::optional<WaveProfile> profile;
    SolveStatus status = SolveStatus::NoConvergence;
    double best_residual = 0.0;
    int iters = 0;

    bool converged() const { return status == SolveStatus::Converged; }
};

/// Smoothed-step initial iterate: f = (1 - tanh(y/width))/2 with derivative
/// components from analytic differentiation; value 1/2 at y = 0.
Eigen::MatrixXd heaviside_guess(const Mesh& mesh, int order, double smoothing_width);

/// The m boundary functionals closing the truncated problem.  DirichletSimple
/// pins f at both ends and the lowest-order derivatives, trading one row for
/// the phase condition when the shooting balance vanishes.  Projection uses
/// the left-invariant subspaces of the equilibrium linearizations and always
/// carries the phase row; it requires n_center = 0 at both equilibria.
std::vector<BoundaryFunctional> boundary_closure(const ProblemSpec& spec, double lambda,
                                                 BcMode mode, const Mesh& mesh);

/// Solve the truncated BVP.  A null guess means the Heaviside iterate.  On
/// Newton failure one refined-mesh retry is attempted before giving up.
SolveResult solve(const ProblemSpec& spec, double lambda, const Mesh& mesh,
                  const SolveOptions& opt = {}, const Eigen::MatrixXd* guess = nullptr);

/// Re-solve on a mesh refined where the solution varies fastest.
SolveResult refine(const WaveProfile& profile, double factor,
                   const SolveOptions& opt = {});

/// Max-norm checks of the WaveProfile contract (residual, boundary values,
/// phase).  Returns a human-readable violation or nothing.
std::optional<std::string> check_profile(const WaveProfile& p, const SolveOptions& opt);

} // namespace kppw
