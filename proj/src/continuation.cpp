#include "kppw/continuation.hpp"

#include <algorithm>
#include <cmath>

#include "kppw/util.hpp"

namespace kppw {

namespace {

// warm start first when available, Heaviside otherwise; solve() itself holds
// the one refined-mesh retry
SolveResult attempt(const ProblemSpec& spec, double lambda, const Mesh& mesh,
                    const SolveOptions& opt, const WaveProfile* warm)
{
    if (warm) {
        Eigen::MatrixXd g = interpolate_values(warm->mesh, warm->values, mesh);
        SolveResult r = solve(spec, lambda, mesh, opt, &g);
        if (r.converged())
            return r;
    }
    return solve(spec, lambda, mesh, opt);
}

} // namespace

ContinuationBranch sweep(const ProblemSpec& spec, const std::vector<double>& lambdas,
                         const Mesh& mesh, const SolveOptions& opt, bool keep_profiles)
{
    if (lambdas.empty())
        throw BracketInvalid("sweep: empty speed list");
    if (!std::is_sorted(lambdas.begin(), lambdas.end()))
        throw BracketInvalid("sweep: speed list must be sorted");

    ContinuationBranch branch;
    branch.spec = spec;
    std::optional<WaveProfile> last;
    for (double lam : lambdas) {
        SolveResult r = attempt(spec, lam, mesh, opt, last ? &*last : nullptr);
        SweepRecord rec;
        rec.lambda = lam;
        rec.converged = r.converged();
        rec.best_residual = r.best_residual;
        if (r.converged()) {
            last = r.profile;
            if (keep_profiles)
                rec.profile = std::move(r.profile);
        }
        branch.records.push_back(std::move(rec));
    }
    return branch;
}

LambdaMaxResult lambda_max(const ProblemSpec& spec, double lo, double hi, double tol,
                           const Mesh& mesh, const SolveOptions& opt)
{
    if (!(lo < hi) || tol <= 0.0)
        throw BracketInvalid("lambda_max: need lo < hi and tol > 0");

    LambdaMaxResult out;
    out.domain_left = mesh.left();
    out.domain_right = mesh.right();
    out.mesh_intervals = mesh.intervals();

    SolveResult at_lo = solve(spec, lo, mesh, opt);
    ++out.solves;
    if (!at_lo.converged())
        throw BracketInvalid("lambda_max: solve does not succeed at the lower endpoint");
    SolveResult at_hi = solve(spec, hi, mesh, opt);
    ++out.solves;
    if (at_hi.converged())
        throw BracketInvalid("lambda_max: solve does not fail at the upper endpoint");

    double a = lo, b = hi;
    WaveProfile best = *at_lo.profile;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        SolveResult r = attempt(spec, mid, mesh, opt, &best);
        ++out.solves;
        if (r.converged()) {
            a = mid;
            best = *r.profile;
        } else {
            b = mid;
        }
        // bracket invariant: a solvable, b unsolvable, a < b
        if (!(a < b))
            throw BracketInvalid("lambda_max: bracket collapsed");
    }
    out.lambda_in = a;
    out.lambda_out = b;

    // endpoint re-verification on a once-refined mesh
    {
        Mesh fine = refine_mesh(best.mesh, best.values, 2.0);
        Eigen::MatrixXd g = interpolate_values(best.mesh, best.values, fine);
        SolveOptions o = opt;
        o.refine_on_failure = false;
        SolveResult ra = solve(spec, a, fine, o, &g);
        SolveResult rb = solve(spec, b, fine, o, &g);
        out.solves += 2;
        out.refined_endpoints_consistent = ra.converged() && !rb.converged();
    }

    // monotone solvability is checked, not trusted: probe below lambda_in
    const double plo = lo, phi = a;
    if (phi > plo) {
        std::vector<double> probes;
        for (int i = 1; i <= 3; ++i)
            probes.push_back(plo + (phi - plo) * i / 4.0);
        std::vector<char> failed(probes.size(), 0);
        parallel_for(probes.size(), [&](size_t i) {
            SolveResult r = solve(spec, probes[i], mesh, opt);
            failed[i] = r.converged() ? 0 : 1;
        });
        out.solves += static_cast<int>(probes.size());
        for (size_t i = 0; i < probes.size(); ++i)
            if (failed[i])
                out.non_monotone_failures.push_back(probes[i]);
    }
    return out;
}

} // namespace kppw
