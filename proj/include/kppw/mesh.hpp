#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kppw/errors.hpp"
#include "kppw/model.hpp"

namespace kppw {

/// Strictly increasing collocation mesh with finite endpoints.
struct Mesh {
    std::vector<double> points;

    /// Uniform mesh with n intervals; a node is placed at y = 0 whenever
    /// a < 0 < b (the phase condition anchors there).
    static Mesh uniform(double a, double b, int n);

    int intervals() const { return static_cast<int>(points.size()) - 1; }
    int nodes() const { return static_cast<int>(points.size()); }
    double left() const { return points.front(); }
    double right() const { return points.back(); }

    /// Index of the node closest to y.
    int nearest(double y) const;

    void validate() const;
};

enum class BcMode { DirichletSimple, Projection };

struct SolveDiagnostics {
    int newton_iters = 0;
    double final_residual_norm = 0.0;
    BcMode bc_mode = BcMode::DirichletSimple;
    bool phase_pinned = false;
    int mesh_refinements = 0;
    // set when center modes force an artificial boundary node instead of a
    // genuine decay condition (non-decaying oscillatory tails)
    bool artificial_boundary_node = false;
};

/// Travelling-wave profile: f and its derivatives up to order m-1 on a mesh.
struct WaveProfile {
    ProblemSpec spec;
    double lambda = 0.0;
    Mesh mesh;
    Eigen::MatrixXd values; // nodes x m, column j = f^(j)
    SolveDiagnostics diagnostics;

    int order() const { return static_cast<int>(values.cols()); }
    double f(int node) const { return values(node, 0); }
};

} // namespace kppw
