#include "kppw/quasilinear.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "kppw/bvp.hpp"

namespace kppw {

double interface_exponent(double n)
{
    if (n <= 0.0)
        throw NonPositiveN("interface_exponent: n must be positive");
    return 10.0 / n;
}

double F_from_f(double f, double n)
{
    return std::pow(std::abs(f), n) * f;
}

double f_from_F(double F, double n)
{
    return (F >= 0 ? 1.0 : -1.0) * std::pow(std::abs(F), 1.0 / (n + 1.0));
}

namespace {

constexpr int kOrder = 11;

// F^(11) = (lambda/(n+1)) A F' + A F (1 - A F), A = (F^2 + delta^2)^(-n/(2(n+1)))
OdeSystem quasi_system(double n, double lambda, double delta)
{
    const double expo = -n / (2.0 * (n + 1.0));
    const double cl = lambda / (n + 1.0);
    OdeSystem sys;
    sys.dim = kOrder;
    sys.rhs = [=](const Eigen::VectorXd& u, Eigen::VectorXd& g) {
        g.resize(kOrder);
        for (int j = 0; j + 1 < kOrder; ++j)
            g[j] = u[j + 1];
        const double r2 = u[0] * u[0] + delta * delta;
        const double A = std::pow(r2, expo);
        const double B = A * u[0];
        g[kOrder - 1] = cl * A * u[1] + B * (1.0 - B);
    };
    sys.jacobian = [=](const Eigen::VectorXd& u, Eigen::MatrixXd& j) {
        j = Eigen::MatrixXd::Zero(kOrder, kOrder);
        for (int r = 0; r + 1 < kOrder; ++r)
            j(r, r + 1) = 1.0;
        const double r2 = u[0] * u[0] + delta * delta;
        const double A = std::pow(r2, expo);
        const double dA = 2.0 * expo * A * u[0] / r2;
        const double B = A * u[0];
        const double dB = A + u[0] * dA;
        j(kOrder - 1, 0) = cl * u[1] * dA + (1.0 - 2.0 * B) * dB;
        j(kOrder - 1, 1) = cl * A;
    };
    return sys;
}

std::vector<BoundaryFunctional> quasi_closure(double n, const Mesh& mesh)
{
    auto row = [&](int node, int comp, double value, const char* name) {
        BoundaryFunctional bc;
        bc.node = node;
        bc.weights = Eigen::VectorXd::Zero(kOrder);
        bc.weights[comp] = 1.0;
        bc.rhs = value;
        bc.name = name;
        return bc;
    };
    std::vector<BoundaryFunctional> rows;
    rows.push_back(row(0, 0, 1.0, "F(-L)=1"));
    for (int j = 1; j <= 4; ++j)
        rows.push_back(row(0, j, 0.0, "dF(-L)=0"));
    rows.push_back(row(mesh.nodes() - 1, 0, 0.0, "F(+L)=0"));
    for (int j = 1; j <= 4; ++j)
        rows.push_back(row(mesh.nodes() - 1, j, 0.0, "dF(+L)=0"));
    // phase F(0) = 2^-(n+1), i.e. f(0) = 1/2
    rows.push_back(row(mesh.nearest(0.0), 0, std::pow(0.5, n + 1.0), "phase"));
    return rows;
}

Eigen::MatrixXd quasi_guess(double n, const Mesh& mesh, double width)
{
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(mesh.nodes(), kOrder);
    for (int i = 0; i < mesh.nodes(); ++i) {
        const double t = std::tanh(mesh.points[i] / width);
        const double s = 0.5 * (1.0 - t);
        const double ds = -0.5 * (1.0 - t * t) / width;
        g(i, 0) = std::pow(s, n + 1.0);
        g(i, 1) = (n + 1.0) * std::pow(s, n) * ds;
    }
    return g;
}

QuasiProfile make_quasi_profile(double n, double lambda, const Mesh& mesh,
                                const CollocationResult& res, double delta)
{
    QuasiProfile p;
    p.n = n;
    p.lambda = lambda;
    p.mesh = mesh;
    p.values = res.values;
    p.delta = delta;
    p.diagnostics.newton_iters = res.iters;
    p.diagnostics.final_residual_norm = res.residual_norm;
    p.diagnostics.phase_pinned = true;
    return p;
}

} // namespace

QuasiSolveResult solve_quasilinear(double n, double lambda, const Mesh& mesh,
                                   const QuasiOptions& opt, const Eigen::MatrixXd* guess)
{
    if (n <= 0.0)
        throw NonPositiveN("solve_quasilinear: n must be positive");

    const auto bcs = quasi_closure(n, mesh);
    NewtonOptions nopt;
    nopt.tol = opt.tol;
    nopt.max_iters = opt.max_iters;

    QuasiSolveResult out;

    if (guess) {
        if (guess->rows() != mesh.nodes() || guess->cols() != kOrder)
            throw InvalidSpec("solve_quasilinear: guess has wrong shape");
        const OdeSystem sys = quasi_system(n, lambda, opt.delta_target);
        CollocationResult res = collocate(sys, mesh, bcs, *guess, nopt);
        out.iters += res.iters;
        out.best_residual = res.residual_norm;
        if (res.status == SolveStatus::Converged) {
            out.status = SolveStatus::Converged;
            out.profile = make_quasi_profile(n, lambda, mesh, res, opt.delta_target);
            return out;
        }
        // fall through to the full continuation
    }

    Eigen::MatrixXd x = quasi_guess(n, mesh, opt.smoothing_width);
    double delta = opt.delta_start;
    double prev_delta = delta;
    int subdivisions = 0;
    out.best_residual = std::numeric_limits<double>::infinity();

    while (true) {
        const OdeSystem sys = quasi_system(n, lambda, delta);
        CollocationResult res = collocate(sys, mesh, bcs, x, nopt);
        out.iters += res.iters;
        out.best_residual = std::min(out.best_residual, res.residual_norm);
        if (res.status == SolveStatus::Converged) {
            x = res.values;
            if (delta <= opt.delta_target) {
                out.status = SolveStatus::Converged;
                out.profile = make_quasi_profile(n, lambda, mesh, res, delta);
                return out;
            }
            prev_delta = delta;
            delta = std::max(opt.delta_target, delta * opt.delta_ratio);
            subdivisions = 0;
        } else {
            if (res.status == SolveStatus::SingularJacobian) {
                out.status = res.status;
                return out;
            }
            if (++subdivisions > 4) {
                out.status = SolveStatus::NoConvergence;
                return out; // RegularizationStall-grade failure, reported as status
            }
            delta = std::sqrt(prev_delta * delta); // back off geometrically
        }
    }
}

InterfaceFit interface_locate(const QuasiProfile& profile, double threshold)
{
    const auto& F = profile.values;
    const int nn = profile.mesh.nodes();
    double fmax = 0.0;
    for (int i = 0; i < nn; ++i)
        fmax = std::max(fmax, std::abs(F(i, 0)));
    if (threshold <= 0.0)
        threshold = 1e-6 * fmax;

    int last_above = -1;
    for (int i = nn - 1; i >= 0; --i)
        if (std::abs(F(i, 0)) >= threshold) {
            last_above = i;
            break;
        }
    if (last_above < 0 || last_above >= nn - 1)
        throw InterfaceNotFound("interface_locate: profile does not decay below threshold");

    InterfaceFit fit;
    const double y0_mesh = profile.mesh.points[last_above + 1];

    // Envelope exponent: fit log|F| = beta log(y0 - y) + c over samples where
    // |F| spans [threshold, 1e-2 * max], letting y0 float a few cells around
    // the mesh estimate (the fit is very sensitive to y0).
    const double h = profile.mesh.points[last_above + 1] - profile.mesh.points[last_above];
    auto fit_at = [&](double y0, double& slope) {
        std::vector<double> lx, ly;
        for (int i = 0; i < nn; ++i) {
            const double y = profile.mesh.points[i];
            const double v = std::abs(F(i, 0));
            if (y < y0 && v >= threshold && v <= 1e-2 * fmax) {
                lx.push_back(std::log(y0 - y));
                ly.push_back(std::log(v));
            }
        }
        if (lx.size() < 3)
            return std::numeric_limits<double>::infinity();
        const size_t np = lx.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < np; ++i) {
            sx += lx[i];
            sy += ly[i];
            sxx += lx[i] * lx[i];
            sxy += lx[i] * ly[i];
        }
        const double det = np * sxx - sx * sx;
        slope = (np * sxy - sx * sy) / det;
        const double icpt = (sy - slope * sx) / np;
        double err = 0.0;
        for (size_t i = 0; i < np; ++i) {
            const double d = ly[i] - slope * lx[i] - icpt;
            err += d * d;
        }
        fit.fit_points = static_cast<int>(np);
        return err;
    };

    double best_err = std::numeric_limits<double>::infinity();
    double best_y0 = y0_mesh, best_slope = 0.0;
    for (int s = -2; s <= 6; ++s) {
        const double y0 = y0_mesh + 0.5 * s * h;
        double slope = 0.0;
        const double err = fit_at(y0, slope);
        if (err < best_err) {
            best_err = err;
            best_y0 = y0;
            best_slope = slope;
        }
    }
    fit.y0 = best_y0;
    fit.envelope_exponent = best_slope;
    return fit;
}

namespace {

// Spectral differentiation matrices for 2*pi-periodic trigonometric
// interpolation on M equispaced points; the Nyquist mode is dropped for odd
// orders.
std::vector<Eigen::MatrixXd> periodic_diff_matrices(int M, int max_order)
{
    using C = std::complex<double>;
    Eigen::MatrixXcd dft(M, M), idft(M, M);
    for (int k = 0; k < M; ++k)
        for (int p = 0; p < M; ++p) {
            const double ang = -2.0 * M_PI * k * p / M;
            dft(k, p) = C(std::cos(ang), std::sin(ang)) / double(M);
            idft(p, k) = C(std::cos(-ang), std::sin(-ang));
        }
    std::vector<Eigen::MatrixXd> out;
    for (int j = 0; j <= max_order; ++j) {
        Eigen::VectorXcd symbol(M);
        for (int k = 0; k < M; ++k) {
            int kk = (k <= M / 2) ? k : k - M;
            if (kk == M / 2 && j % 2 == 1)
                kk = 0;
            symbol[k] = std::pow(C(0.0, kk), j);
        }
        out.push_back((idft * symbol.asDiagonal() * dft).real());
    }
    return out;
}

} // namespace

double constant_orbit_residual(double n, double lambda)
{
    if (n <= 0.0)
        throw NonPositiveN("constant_orbit_residual: n must be positive");
    if (lambda <= 0.0)
        throw InvalidSpec("constant_orbit_residual: lambda must be positive");
    const double gamma = interface_exponent(n);
    const PkOperator op = pk_build(10);
    const double a0 = op.coeffs[0].eval(gamma);
    const double c = std::pow(lambda / a0, 1.0 / n);
    std::vector<double> samples(11, 0.0);
    samples[0] = F_from_f(c, n);
    return pk_apply(op, gamma, samples) - lambda * c;
}

Eigen::VectorXd osc_equation_residual(double n, double lambda,
                                      const Eigen::VectorXd& samples, double omega)
{
    const int M = static_cast<int>(samples.size());
    const double gamma = interface_exponent(n);
    const PkOperator op = pk_build(10);
    const auto a = pk_eval(op, gamma);
    const auto D = periodic_diff_matrices(M, 10);

    Eigen::VectorXd psi(M);
    for (int i = 0; i < M; ++i)
        psi[i] = F_from_f(samples[i], n);

    Eigen::VectorXd r = -lambda * samples;
    double wj = 1.0;
    for (int j = 0; j <= 10; ++j) {
        r += a[j] * wj * (D[j] * psi);
        wj *= omega;
    }
    return r;
}

OscResult oscillatory_component(double n, double lambda, int fourier_modes)
{
    if (n <= 0.0)
        throw NonPositiveN("oscillatory_component: n must be positive");
    if (lambda <= 0.0)
        throw InvalidSpec("oscillatory_component: lambda must be positive");
    const int M = std::max(16, fourier_modes);
    const double gamma = interface_exponent(n);
    const PkOperator op = pk_build(10);
    const auto a = pk_eval(op, gamma);
    const auto D = periodic_diff_matrices(M, 10);

    const double c = std::pow(lambda / a[0], 1.0 / n);
    const double dpsi_c = (n + 1.0) * std::pow(c, n);

    // least-damped linearized mode about the constant: minimize |h(omega)|
    // with h = dpsi_c * sum_j a_j (i omega)^j - lambda
    auto hmag = [&](double w) {
        std::complex<double> s(0.0, 0.0);
        std::complex<double> iw(0.0, w), p(1.0, 0.0);
        for (int j = 0; j <= 10; ++j) {
            s += a[j] * p;
            p *= iw;
        }
        return std::abs(dpsi_c * s - lambda);
    };
    double omega = 1.0, best = std::numeric_limits<double>::infinity();
    for (double w = 0.05; w <= 6.0; w += 1e-3) {
        const double v = hmag(w);
        if (v < best) {
            best = v;
            omega = w;
        }
    }

    Eigen::VectorXd x(M + 1);
    for (int i = 0; i < M; ++i)
        x[i] = c * (1.0 + 0.1 * std::cos(2.0 * M_PI * i / M));
    x[M] = omega;

    const double scale0 = std::abs(a[0]) * std::pow(std::abs(c), n + 1) + lambda * std::abs(c);

    auto residual = [&](const Eigen::VectorXd& z, Eigen::VectorXd& r) {
        const double w = z[M];
        Eigen::VectorXd phi = z.head(M);
        Eigen::VectorXd psi(M);
        for (int i = 0; i < M; ++i)
            psi[i] = F_from_f(phi[i], n);
        r.resize(M + 1);
        Eigen::VectorXd acc = -lambda * phi;
        double wj = 1.0;
        for (int j = 0; j <= 10; ++j) {
            acc += a[j] * wj * (D[j] * psi);
            wj *= w;
        }
        r.head(M) = acc;
        r[M] = D[1].row(0).dot(phi); // phase: phi'(0) = 0
    };
    auto jacobian = [&](const Eigen::VectorXd& z, Eigen::MatrixXd& J) {
        const double w = z[M];
        Eigen::VectorXd phi = z.head(M);
        Eigen::VectorXd psi(M), dpsi(M);
        for (int i = 0; i < M; ++i) {
            psi[i] = F_from_f(phi[i], n);
            dpsi[i] = (n + 1.0) * std::pow(std::abs(phi[i]), n);
        }
        J = Eigen::MatrixXd::Zero(M + 1, M + 1);
        double wj = 1.0;
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(M, M);
        Eigen::VectorXd dw = Eigen::VectorXd::Zero(M);
        double wjm1 = 0.0;
        for (int j = 0; j <= 10; ++j) {
            acc += a[j] * wj * D[j];
            if (j >= 1)
                dw += a[j] * j * wjm1 * (D[j] * psi);
            wjm1 = wj;
            wj *= w;
        }
        J.topLeftCorner(M, M) = acc * dpsi.asDiagonal();
        J.topLeftCorner(M, M).diagonal().array() -= lambda;
        J.col(M).head(M) = dw;
        J.row(M).head(M) = D[1].row(0);
    };

    Eigen::VectorXd r;
    residual(x, r);
    double rnorm = r.cwiseAbs().maxCoeff();
    Eigen::MatrixXd J;
    for (int it = 0; it < 60 && rnorm > 1e-10 * scale0; ++it) {
        jacobian(x, J);
        Eigen::VectorXd step = J.fullPivLu().solve(-r);
        double alpha = 1.0;
        bool ok = false;
        for (int h = 0; h < 24; ++h) {
            Eigen::VectorXd xt = x + alpha * step;
            if (xt[M] > 1e-3) {
                Eigen::VectorXd rt;
                residual(xt, rt);
                const double rtn = rt.cwiseAbs().maxCoeff();
                if (std::isfinite(rtn) && rtn < (1.0 - 1e-4 * alpha) * rnorm) {
                    x = xt;
                    r = rt;
                    rnorm = rtn;
                    ok = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!ok)
            break;
    }

    OscResult out;
    if (rnorm > 1e-8 * scale0) {
        out.reason = "newton stalled at relative residual " +
                     std::to_string(rnorm / scale0);
        return out;
    }
    const double lo = x.head(M).minCoeff(), hi = x.head(M).maxCoeff();
    if (hi - lo < 1e-6 * std::abs(c)) {
        out.reason = "collapsed to the constant solution";
        return out;
    }
    if (!(lo < 0.0 && hi > 0.0)) {
        out.reason = "periodic orbit found but not sign-changing";
        return out;
    }
    OscComponent comp;
    comp.n = n;
    comp.lambda = lambda;
    comp.gamma = gamma;
    comp.period = 2.0 * M_PI / x[M];
    comp.samples.assign(x.data(), x.data() + M);
    comp.residual_norm = rnorm / scale0;
    comp.sign_changing = true;
    out.component = std::move(comp);
    return out;
}

QuasiLambdaMaxResult lambda_max_quasi(double n, double lo, double hi, double tol,
                                      const Mesh& mesh, const QuasiOptions& opt)
{
    if (!(lo < hi) || tol <= 0.0)
        throw BracketInvalid("lambda_max_quasi: need lo < hi and tol > 0");

    QuasiLambdaMaxResult out;
    out.domain_left = mesh.left();
    out.domain_right = mesh.right();
    out.mesh_intervals = mesh.intervals();

    QuasiSolveResult at_lo = solve_quasilinear(n, lo, mesh, opt);
    ++out.solves;
    if (!at_lo.converged())
        throw BracketInvalid("lambda_max_quasi: no solution at the lower endpoint");
    Eigen::MatrixXd warm = at_lo.profile->values;
    QuasiSolveResult at_hi = solve_quasilinear(n, hi, mesh, opt, &warm);
    ++out.solves;
    if (at_hi.converged())
        throw BracketInvalid("lambda_max_quasi: solve succeeds at the upper endpoint");

    double a = lo, b = hi;
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        QuasiSolveResult r = solve_quasilinear(n, mid, mesh, opt, &warm);
        ++out.solves;
        if (r.converged()) {
            a = mid;
            warm = r.profile->values;
        } else {
            b = mid;
        }
    }
    out.lambda_in = a;
    out.lambda_out = b;
    return out;
}

} // namespace kppw
