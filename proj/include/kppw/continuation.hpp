#pragma once

// Speed sweeps with warm starts and the maximal-speed bracket located by
// bisection on solvability.  "Failure" means the damped Newton did not
// converge from the warm start, from the Heaviside start, or after one mesh
// refinement.

#include <optional>
#include <utility>
#include <vector>

#include "kppw/bvp.hpp"

namespace kppw {

struct SweepRecord {
    double lambda = 0.0;
    bool converged = false;
    double best_residual = 0.0;
    std::optional<WaveProfile> profile;
};

struct ContinuationBranch {
    ProblemSpec spec;
    std::vector<SweepRecord> records; // sorted by lambda
    std::optional<std::pair<double, double>> lambda_max_bracket; // (solvable, unsolvable)
};

struct LambdaMaxResult {
    double lambda_in = 0.0;  // solve verified to succeed here
    double lambda_out = 0.0; // solve verified to fail here
    int solves = 0;
    bool refined_endpoints_consistent = true;
    std::vector<double> non_monotone_failures; // probe failures below lambda_in
    double domain_left = 0.0, domain_right = 0.0;
    int mesh_intervals = 0;
};

/// Solve at each lambda of a sorted list, warm-starting from the previous
/// success (Heaviside fallback).  Failures are recorded, never thrown.
ContinuationBranch sweep(const ProblemSpec& spec, const std::vector<double>& lambdas,
                         const Mesh& mesh, const SolveOptions& opt = {},
                         bool keep_profiles = false);

/// Bisect solvability over [lo, hi] until the bracket width is <= tol.
/// Preconditions (verified): solve succeeds at lo and fails at hi.
/// Both endpoints are re-verified on a once-refined mesh and the monotone
/// solvability assumption is probed at three interior points below lambda_in.
LambdaMaxResult lambda_max(const ProblemSpec& spec, double lo, double hi, double tol,
                           const Mesh& mesh, const SolveOptions& opt = {});

} // namespace kppw
