#include "kppw/bvp.hpp"

#include <algorithm>
#include <cmath>

namespace kppw {

namespace {

// Derivatives of tanh as polynomials in T = tanh:  d/dy tanh = 1 - T^2,
// and each further derivative applies p -> p'(T) (1 - T^2).
std::vector<std::vector<double>> tanh_derivative_polys(int max_order)
{
    std::vector<std::vector<double>> polys;
    polys.push_back({0.0, 1.0}); // order 0: T itself
    for (int j = 1; j <= max_order; ++j) {
        const auto& p = polys.back();
        std::vector<double> dp(p.size() >= 2 ? p.size() - 1 : 1, 0.0);
        for (size_t i = 1; i < p.size(); ++i)
            dp[i - 1] = p[i] * static_cast<double>(i);
        // multiply by (1 - T^2)
        std::vector<double> q(dp.size() + 2, 0.0);
        for (size_t i = 0; i < dp.size(); ++i) {
            q[i] += dp[i];
            q[i + 2] -= dp[i];
        }
        while (q.size() > 1 && q.back() == 0.0)
            q.pop_back();
        polys.push_back(std::move(q));
    }
    return polys;
}

double eval_poly(const std::vector<double>& p, double t)
{
    double v = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        v = v * t + *it;
    return v;
}

} // namespace

Eigen::MatrixXd heaviside_guess(const Mesh& mesh, int order, double smoothing_width)
{
    if (smoothing_width <= 0.0)
        throw InvalidSpec("heaviside_guess: smoothing width must be positive");
    const auto polys = tanh_derivative_polys(std::max(0, order - 1));
    Eigen::MatrixXd g(mesh.nodes(), order);
    for (int i = 0; i < mesh.nodes(); ++i) {
        const double t = std::tanh(mesh.points[i] / smoothing_width);
        g(i, 0) = 0.5 * (1.0 - t);
        double wpow = 1.0;
        for (int j = 1; j < order; ++j) {
            wpow *= smoothing_width;
            g(i, j) = -0.5 * eval_poly(polys[j], t) / wpow;
        }
    }
    return g;
}

namespace {

BoundaryFunctional dirichlet_row(int node, int component, double value, int m,
                                 const std::string& name)
{
    BoundaryFunctional bc;
    bc.node = node;
    bc.weights = Eigen::VectorXd::Zero(m);
    bc.weights[component] = 1.0;
    bc.rhs = value;
    bc.name = name;
    return bc;
}

// Rows of the inverse Vandermonde for the selected root subset: the left
// eigenvectors of the companion matrix, realified over conjugate pairs.
std::vector<Eigen::VectorXd> left_mode_rows(const std::vector<std::complex<double>>& roots,
                                            const std::vector<int>& selected)
{
    const int m = static_cast<int>(roots.size());
    Eigen::MatrixXcd vand(m, m);
    for (int c = 0; c < m; ++c) {
        std::complex<double> p(1.0, 0.0);
        for (int r = 0; r < m; ++r) {
            vand(r, c) = p;
            p *= roots[c];
        }
    }
    Eigen::MatrixXcd inv = vand.inverse();

    std::vector<Eigen::VectorXd> rows;
    std::vector<bool> done(m, false);
    for (int idx : selected) {
        if (done[idx])
            continue;
        done[idx] = true;
        const double im = roots[idx].imag();
        if (std::abs(im) < 1e-10) {
            rows.push_back(inv.row(idx).real().transpose());
        } else {
            // use Re and Im of one member; mark the conjugate as consumed
            for (int j : selected)
                if (!done[j] && std::abs(roots[j].real() - roots[idx].real()) < 1e-8 &&
                    std::abs(roots[j].imag() + im) < 1e-8) {
                    done[j] = true;
                    break;
                }
            rows.push_back(inv.row(idx).real().transpose());
            rows.push_back(inv.row(idx).imag().transpose());
        }
    }
    for (auto& r : rows) {
        const double nrm = r.norm();
        if (nrm > 0)
            r /= nrm;
    }
    return rows;
}

} // namespace

std::vector<BoundaryFunctional> boundary_closure(const ProblemSpec& spec, double lambda,
                                                 BcMode mode, const Mesh& mesh)
{
    const int m = spec.system_order(lambda);
    const BundleSummary bundles = bundle_dims(spec, lambda);
    const int node_zero = mesh.nearest(0.0);
    const bool extra_right = bundles.at_zero.n_minus >= bundles.at_one.n_plus;

    std::vector<BoundaryFunctional> rows;

    if (mode == BcMode::Projection) {
        if (bundles.at_zero.n_center > 0 || bundles.at_one.n_center > 0)
            throw CenterModesPresent(
                "projection closure: center modes present (pure-imaginary "
                "characteristic roots); use DirichletSimple");
        if (bundles.shooting_balance != 0)
            throw ClosureCountMismatch("projection closure: shooting balance " +
                                       std::to_string(bundles.shooting_balance) +
                                       " cannot reach m conditions");

        // +L: kill the non-decaying content of U(+L) relative to equilibrium 0
        std::vector<int> grow0;
        for (int i = 0; i < m; ++i)
            if (bundles.at_zero.roots[i].real() > bundles.at_zero.tol_center)
                grow0.push_back(i);
        for (auto& w : left_mode_rows(bundles.at_zero.roots, grow0)) {
            BoundaryFunctional bc;
            bc.node = mesh.nodes() - 1;
            bc.weights = w;
            bc.rhs = 0.0;
            bc.name = "projection(+L)";
            rows.push_back(std::move(bc));
        }
        // -L: the deviation from (1,0,...,0) keeps only modes growing in y
        std::vector<int> nongrow1;
        for (int i = 0; i < m; ++i)
            if (bundles.at_one.roots[i].real() < -bundles.at_one.tol_center)
                nongrow1.push_back(i);
        for (auto& w : left_mode_rows(bundles.at_one.roots, nongrow1)) {
            BoundaryFunctional bc;
            bc.node = 0;
            bc.weights = w;
            bc.rhs = w[0]; // w . (U - e_1) = 0
            bc.name = "projection(-L)";
            rows.push_back(std::move(bc));
        }
        rows.push_back(dirichlet_row(node_zero, 0, 0.5, m, "phase"));
        if (static_cast<int>(rows.size()) != m)
            throw ClosureCountMismatch("projection closure: produced " +
                                       std::to_string(rows.size()) + " rows for m = " +
                                       std::to_string(m));
        return rows;
    }

    // DirichletSimple
    if (m == 1) {
        if (bundles.shooting_balance == 0)
            rows.push_back(dirichlet_row(node_zero, 0, 0.5, 1, "phase"));
        else
            rows.push_back(dirichlet_row(0, 0, 1.0, 1, "f(-L)=1"));
        return rows;
    }

    int q = (m - 2) / 2; // derivative conditions at +L
    int p = (m - 2) - q;
    if (extra_right)
        std::swap(p, q);

    std::vector<BoundaryFunctional> left, right;
    left.push_back(dirichlet_row(0, 0, 1.0, m, "f(-L)=1"));
    for (int j = 1; j <= p; ++j)
        left.push_back(dirichlet_row(0, j, 0.0, m, "f^(" + std::to_string(j) + ")(-L)=0"));
    right.push_back(dirichlet_row(mesh.nodes() - 1, 0, 0.0, m, "f(+L)=0"));
    for (int j = 1; j <= q; ++j)
        right.push_back(
            dirichlet_row(mesh.nodes() - 1, j, 0.0, m, "f^(" + std::to_string(j) + ")(+L)=0"));

    bool phase = false;
    if (bundles.shooting_balance == 0) {
        // the translation family is pinned by f(0) = 1/2 in place of the
        // highest-order condition at the end holding the extra one
        auto& side = extra_right ? right : left;
        side.pop_back();
        phase = true;
    }
    rows = std::move(left);
    rows.insert(rows.end(), right.begin(), right.end());
    if (phase)
        rows.push_back(dirichlet_row(node_zero, 0, 0.5, m, "phase"));
    if (static_cast<int>(rows.size()) != m)
        throw ClosureCountMismatch("dirichlet closure: produced " +
                                   std::to_string(rows.size()) + " rows for m = " +
                                   std::to_string(m));
    return rows;
}

namespace {

OdeSystem semilinear_system(const ProblemSpec& spec, double lambda)
{
    OdeSystem sys;
    sys.dim = spec.system_order(lambda);
    sys.rhs = [spec, lambda](const Eigen::VectorXd& u, Eigen::VectorXd& g) {
        g = system_rhs(spec, u, lambda);
    };
    sys.jacobian = [spec, lambda](const Eigen::VectorXd& u, Eigen::MatrixXd& j) {
        j = system_jacobian(spec, u, lambda);
    };
    return sys;
}

bool has_phase(const std::vector<BoundaryFunctional>& bcs)
{
    for (const auto& b : bcs)
        if (b.name == "phase")
            return true;
    return false;
}

WaveProfile make_profile(const ProblemSpec& spec, double lambda, const Mesh& mesh,
                         const CollocationResult& res, const SolveOptions& opt,
                         const std::vector<BoundaryFunctional>& bcs, int refinements,
                         bool centers)
{
    WaveProfile p;
    p.spec = spec;
    p.lambda = lambda;
    p.mesh = mesh;
    p.values = res.values;
    p.diagnostics.newton_iters = res.iters;
    p.diagnostics.final_residual_norm = res.residual_norm;
    p.diagnostics.bc_mode = opt.mode;
    p.diagnostics.phase_pinned = has_phase(bcs);
    p.diagnostics.mesh_refinements = refinements;
    p.diagnostics.artificial_boundary_node = centers;
    return p;
}

// The time-dominant equations with a tiny lambda^l coefficient sit on a slow
// manifold s_x f^(k) + f(1-f) ~ 0; seed the top component accordingly.
void seed_slow_manifold(const ProblemSpec& spec, double lambda, Eigen::MatrixXd& guess)
{
    if (spec.l <= spec.k || std::abs(int_pow(lambda, spec.l)) > 1e-2)
        return;
    const int comp = spec.k; // f^(k) is component index k
    if (comp >= guess.cols())
        return;
    for (int i = 0; i < guess.rows(); ++i)
        guess(i, comp) = -spec.sign_x * LogisticSource::value(guess(i, 0));
}

} // namespace

SolveResult solve(const ProblemSpec& spec, double lambda, const Mesh& mesh,
                  const SolveOptions& opt, const Eigen::MatrixXd* guess)
{
    if (!spec.semilinear())
        throw InvalidSpec("bvp::solve handles semilinear specs only");
    spec.validate();
    const int m = spec.system_order(lambda);

    const OdeSystem sys = semilinear_system(spec, lambda);
    const auto bundles = bundle_dims(spec, lambda);
    const bool centers = bundles.at_zero.n_center > 0 || bundles.at_one.n_center > 0;
    auto bcs = boundary_closure(spec, lambda, opt.mode, mesh);

    Eigen::MatrixXd x0;
    if (guess) {
        if (guess->rows() != mesh.nodes() || guess->cols() != m)
            throw InvalidSpec("solve: guess has wrong shape");
        x0 = *guess;
    } else {
        x0 = heaviside_guess(mesh, m, opt.smoothing_width);
        seed_slow_manifold(spec, lambda, x0);
    }

    NewtonOptions nopt;
    nopt.tol = opt.tol;
    nopt.max_iters = opt.max_iters;
    CollocationResult res = collocate(sys, mesh, bcs, x0, nopt);

    SolveResult out;
    out.status = res.status;
    out.best_residual = res.residual_norm;
    out.iters = res.iters;
    if (res.status == SolveStatus::Converged) {
        out.profile = make_profile(spec, lambda, mesh, res, opt, bcs, 0, centers);
        return out;
    }
    if (res.status == SolveStatus::SingularJacobian || !opt.refine_on_failure)
        return out;

    // one refined-mesh retry from the best iterate
    Mesh fine = refine_mesh(mesh, res.values, 2.0);
    Eigen::MatrixXd xr = interpolate_values(mesh, res.values, fine);
    auto bcs2 = boundary_closure(spec, lambda, opt.mode, fine);
    CollocationResult res2 = collocate(sys, fine, bcs2, xr, nopt);
    out.iters += res2.iters;
    out.best_residual = std::min(out.best_residual, res2.residual_norm);
    out.status = res2.status;
    if (res2.status == SolveStatus::Converged)
        out.profile = make_profile(spec, lambda, fine, res2, opt, bcs2, 1, centers);
    return out;
}

SolveResult refine(const WaveProfile& profile, double factor, const SolveOptions& opt)
{
    Mesh fine = refine_mesh(profile.mesh, profile.values, factor);
    Eigen::MatrixXd xr = interpolate_values(profile.mesh, profile.values, fine);
    SolveOptions o = opt;
    o.mode = profile.diagnostics.bc_mode;
    o.refine_on_failure = false;
    SolveResult r = solve(profile.spec, profile.lambda, fine, o, &xr);
    if (r.profile)
        r.profile->diagnostics.mesh_refinements = profile.diagnostics.mesh_refinements + 1;
    return r;
}

std::optional<std::string> check_profile(const WaveProfile& p, const SolveOptions& opt)
{
    if (p.diagnostics.final_residual_norm >= opt.tol)
        return "residual " + std::to_string(p.diagnostics.final_residual_norm);
    if (std::abs(p.values(0, 0) - 1.0) > opt.tol_bc)
        return "f(-L) away from 1";
    if (std::abs(p.values(p.mesh.nodes() - 1, 0)) > opt.tol_bc)
        return "f(+L) away from 0";
    if (p.diagnostics.phase_pinned) {
        const int j0 = p.mesh.nearest(0.0);
        if (std::abs(p.values(j0, 0) - 0.5) > opt.tol_bc)
            return "phase f(0) away from 1/2";
    }
    return std::nullopt;
}

} // namespace kppw
