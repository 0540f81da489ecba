#include "kppw/logshift.hpp"

#include <cmath>

namespace kppw {

Eigen::MatrixXd fd_weights(double z, const std::vector<double>& x, int m)
{
    // Fornberg's recursion, weights for derivatives 0..m at z over nodes x.
    const int nd = static_cast<int>(x.size());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nd, m + 1);
    double c1 = 1.0;
    double c4 = x[0] - z;
    c(0, 0) = 1.0;
    for (int i = 1; i < nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int s = mn; s >= 1; --s)
                    c(i, s) = c1 * (s * c(i - 1, s - 1) - c5 * c(i - 1, s)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int s = mn; s >= 1; --s)
                c(j, s) = (c4 * c(j, s) - s * c(j, s - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

std::vector<double> sample_profile(const WaveProfile& p, double y, int nderiv)
{
    const int i = p.mesh.nearest(y);
    const double d = y - p.mesh.points[i];
    const int m = p.order();
    std::vector<double> out(nderiv + 1, 0.0);
    for (int j = 0; j <= nderiv; ++j) {
        double term = 0.0, dp = 1.0, fact = 1.0;
        for (int q = j; q < m; ++q) {
            term += p.values(i, q) * dp / fact;
            dp *= d;
            fact *= (q - j + 1);
        }
        out[j] = term;
    }
    return out;
}

namespace {

// dense differentiation matrix of order `deriv` with centered stencils; rows
// where the stencil does not fit are left zero
Eigen::MatrixXd diff_matrix(int nn, double h, int deriv, int acc_order, int* half_width)
{
    int npts = deriv + acc_order;
    if (npts % 2 == 0)
        ++npts;
    const int hw = (npts - 1) / 2;
    if (half_width)
        *half_width = hw;

    std::vector<double> xloc(npts);
    for (int j = 0; j < npts; ++j)
        xloc[j] = (j - hw) * h;
    const Eigen::MatrixXd w = fd_weights(0.0, xloc, deriv);

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nn, nn);
    for (int i = hw; i < nn - hw; ++i)
        for (int j = 0; j < npts; ++j)
            D(i, i - hw + j) = w(j, deriv);
    return D;
}

} // namespace

DiscreteB assemble_B(const WaveProfile& profile, double lambda0,
                     const ShiftGridOptions& opt)
{
    if (profile.spec.family != "dispersion" || profile.spec.k != 11 || profile.spec.l != 3)
        throw SpecMismatch("assemble_B: base profile must solve dispersion KPP-(11,3)");
    if (std::abs(profile.lambda - lambda0) > 1e-12)
        throw SpecMismatch("assemble_B: profile speed differs from lambda0");
    if (opt.ymin < profile.mesh.left() || opt.ymax > profile.mesh.right())
        throw SpecMismatch("assemble_B: grid exceeds the profile domain");

    DiscreteB b;
    b.h = opt.h;
    b.fd_order = opt.fd_order;
    b.lambda0 = lambda0;
    const int nn = static_cast<int>(std::lround((opt.ymax - opt.ymin) / opt.h)) + 1;
    b.grid.resize(nn);
    for (int i = 0; i < nn; ++i)
        b.grid[i] = opt.ymin + i * opt.h;

    int hw1 = 0, hw11 = 0;
    b.D1 = diff_matrix(nn, opt.h, 1, opt.fd_order, &hw1);
    b.D2 = diff_matrix(nn, opt.h, 2, opt.fd_order, nullptr);
    b.D3 = diff_matrix(nn, opt.h, 3, opt.fd_order, nullptr);
    b.D11 = diff_matrix(nn, opt.h, 11, opt.fd_order, &hw11);
    b.boundary_width = hw11;

    b.f.resize(nn);
    b.f1.resize(nn);
    b.f2.resize(nn);
    b.f3.resize(nn);
    for (int i = 0; i < nn; ++i) {
        const auto d = sample_profile(profile, b.grid[i], 3);
        b.f[i] = d[0];
        b.f1[i] = d[1];
        b.f2[i] = d[2];
        b.f3[i] = d[3];
    }

    b.B = -b.D11 + lambda0 * lambda0 * lambda0 * b.D3;
    for (int i = 0; i < nn; ++i)
        b.B(i, i) += 1.0 - 2.0 * b.f[i];
    // decay rows where the stencil does not fit
    for (int i = 0; i < nn; ++i)
        if (i < hw11 || i >= nn - hw11) {
            b.B.row(i).setZero();
            b.B(i, i) = 1.0;
        }

    b.ip_weights = Eigen::VectorXd::Constant(nn, opt.h);
    b.ip_weights[0] = b.ip_weights[nn - 1] = 0.5 * opt.h;
    return b;
}

Eigen::VectorXd bordered_solve(const DiscreteB& B, const Eigen::VectorXd& rhs,
                               double* mu_out)
{
    const int nn = static_cast<int>(B.grid.size());
    if (rhs.size() != nn)
        throw SingularSystem("bordered_solve: rhs size mismatch");

    Eigen::VectorXd r = rhs;
    for (int i = 0; i < nn; ++i)
        if (i < B.boundary_width || i >= nn - B.boundary_width)
            r[i] = 0.0;

    Eigen::MatrixXd M(nn + 1, nn + 1);
    M.topLeftCorner(nn, nn) = B.B;
    M.col(nn).head(nn) = B.f1;
    M.row(nn).head(nn) = (B.ip_weights.array() * B.f1.array()).matrix().transpose();
    M(nn, nn) = 0.0;

    Eigen::VectorXd full(nn + 1);
    full.head(nn) = r;
    full[nn] = 0.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    Eigen::VectorXd sol = lu.solve(full);
    const double resid = (M * sol - full).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
    if (!sol.allFinite() || resid > 1e-8 * scale)
        throw SingularSystem("bordered_solve: system residual " + std::to_string(resid));
    if (mu_out)
        *mu_out = sol[nn];
    return sol.head(nn);
}

Eigen::VectorXd solve_psi(const DiscreteB& B, RhsVariant variant)
{
    const double c = 3.0 * B.lambda0 * B.lambda0;
    Eigen::VectorXd rhs =
        (variant == RhsVariant::SecondDerivative) ? (c * B.f2).eval() : (c * B.f3).eval();
    return bordered_solve(B, rhs);
}

Eigen::VectorXd solve_phi(const DiscreteB& B, const Eigen::VectorXd& psi,
                          double k_shift, RhsVariant)
{
    const double l0 = B.lambda0;
    const Eigen::VectorXd psi2 = B.D2 * psi;
    const Eigen::VectorXd psi3 = B.D3 * psi;
    Eigen::VectorXd rhs =
        k_shift * (3.0 * l0 * B.f2 - 3.0 * l0 * l0 * psi2 - B.f1) +
        k_shift * k_shift *
            (psi.cwiseProduct(psi) + 3.0 * l0 * l0 * psi3 - 3.0 * l0 * B.f3);
    return bordered_solve(B, rhs);
}

double expansion_residual(const DiscreteB& B, const ShiftExpansion& e, double t)
{
    if (t < 10.0)
        throw InvalidSpec("expansion_residual: t must be >= 10");
    const int nn = static_cast<int>(B.grid.size());
    const double l0 = e.lambda0;
    const LogShift g{e.k_shift};

    const double p = g.g1(t), q = 1.0 / (t * t);
    const double p1 = -e.k_shift / (t * t), p2 = 2.0 * e.k_shift / (t * t * t),
                 p3 = -6.0 * e.k_shift / (t * t * t * t);
    const double q1 = -2.0 / (t * t * t), q2 = 6.0 / (t * t * t * t),
                 q3 = -24.0 / (t * t * t * t * t);
    const double yd = -l0 + g.g1(t); // dy/dt of the moving frame

    const Eigen::VectorXd psi1 = B.D1 * e.psi, psi2 = B.D2 * e.psi, psi3 = B.D3 * e.psi;
    const Eigen::VectorXd phi1 = B.D1 * e.phi, phi2 = B.D2 * e.phi, phi3 = B.D3 * e.phi;
    const Eigen::VectorXd Apsi = -(B.D11 * e.psi), Aphi = -(B.D11 * e.phi);

    double nrm = 0.0;
    const double span = B.grid.back() - B.grid.front();
    const double mid = 0.5 * (B.grid.back() + B.grid.front());
    for (int i = B.boundary_width; i < nn - B.boundary_width; ++i) {
        if (std::abs(B.grid[i] - mid) > 0.25 * span)
            continue; // inner half only
        const double v = B.f[i] + p * e.psi[i] + q * e.phi[i];
        const double vy = B.f1[i] + p * psi1[i] + q * phi1[i];
        const double vyy = B.f2[i] + p * psi2[i] + q * phi2[i];
        const double vyyy = B.f3[i] + p * psi3[i] + q * phi3[i];
        const double vt = p1 * e.psi[i] + q1 * e.phi[i];
        (void)vt;
        const double vttt = p3 * e.psi[i] + q3 * e.phi[i];
        const double vty = p1 * psi1[i] + q1 * phi1[i];
        const double vtty = p2 * psi1[i] + q2 * phi1[i];
        const double vtyy = p1 * psi2[i] + q1 * phi2[i];
        // A f via the profile equation; A is linear
        const double Af = -l0 * l0 * l0 * B.f3[i] - B.f[i] * (1.0 - B.f[i]);
        const double Av = Af + p * Apsi[i] + q * Aphi[i];
        const double r = vttt + 3.0 * yd * vtty + 3.0 * yd * yd * vtyy +
                         yd * yd * yd * vyyy + 3.0 * g.g2(t) * (vty + yd * vyy) +
                         g.g3(t) * vy - Av - v * (1.0 - v);
        nrm = std::max(nrm, std::abs(r));
    }
    return nrm;
}

} // namespace kppw
