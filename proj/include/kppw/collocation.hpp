#pragma once

// Damped-Newton collocation core shared by the semilinear and quasilinear
// solvers.  Discretization is the 3-point Lobatto IIIA scheme (fourth order)
// on the first-order system; the sparse Jacobian is assembled analytically
// and factored with a sparse LU.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kppw/mesh.hpp"

namespace kppw {

struct OdeSystem {
    int dim = 0;
    std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> rhs;
    std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)> jacobian;
};

/// Affine functional w . U(node) = rhs attached to one mesh node.
struct BoundaryFunctional {
    int node = 0;
    Eigen::VectorXd weights;
    double rhs = 0.0;
    std::string name;
};

struct NewtonOptions {
    double tol = 1e-8;
    int max_iters = 100;
    int max_halvings = 26;
};

enum class SolveStatus { Converged, NoConvergence, SingularJacobian };

struct CollocationResult {
    SolveStatus status = SolveStatus::NoConvergence;
    Eigen::MatrixXd values; // nodes x dim; best iterate when not converged
    int iters = 0;
    double residual_norm = 0.0; // max-norm at the final iterate
};

/// Solve the collocation equations with the given boundary rows from the
/// supplied initial iterate (nodes x dim).
CollocationResult collocate(const OdeSystem& sys, const Mesh& mesh,
                            const std::vector<BoundaryFunctional>& bcs,
                            const Eigen::MatrixXd& guess, const NewtonOptions& opt);

/// Mesh equidistributing a per-interval indicator derived from the iterate,
/// with roughly `factor` times as many intervals.  Keeps a node at y = 0.
Mesh refine_mesh(const Mesh& mesh, const Eigen::MatrixXd& values, double factor);

/// Component-wise cubic-Hermite interpolation of nodal values onto a new mesh
/// (component j uses component j+1 as its derivative).
Eigen::MatrixXd interpolate_values(const Mesh& from, const Eigen::MatrixXd& values,
                                   const Mesh& to);

} // namespace kppw
