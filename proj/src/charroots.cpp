#include "kppw/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace kppw {

std::vector<double> characteristic_poly(const ProblemSpec& spec, double lambda,
                                        int equilibrium)
{
    if (!spec.semilinear())
        throw InvalidSpec("characteristic_poly: semilinear specs only");
    if (equilibrium != 0 && equilibrium != 1)
        throw InvalidSpec("characteristic_poly: equilibrium must be 0 or 1");

    const int deg = spec.system_order(lambda);
    std::vector<double> c(deg + 1, 0.0);
    c[0] = (equilibrium == 0) ? 1.0 : -1.0; // source derivative 1 - 2f
    c[spec.k] += spec.sign_x;
    if (spec.l <= deg)
        c[spec.l] -= spec.sign_t * int_pow(lambda, spec.l);
    return c;
}

std::complex<double> poly_eval(const std::vector<double>& coeffs,
                               std::complex<double> z)
{
    std::complex<double> v(0.0, 0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        v = v * z + *it;
    return v;
}

namespace {

std::complex<double> poly_eval_deriv(const std::vector<double>& coeffs,
                                     std::complex<double> z)
{
    std::complex<double> v(0.0, 0.0);
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 1; --i)
        v = v * z + static_cast<double>(i) * coeffs[i];
    return v;
}

} // namespace

namespace {

// Parlett-Reinsch balancing (powers of two, no roundoff); companion matrices
// of badly scaled polynomials need it before the QR iteration.
void balance(Eigen::MatrixXd& a)
{
    const int n = static_cast<int>(a.rows());
    bool again = true;
    while (again) {
        again = false;
        for (int i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0)
                continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if ((c + r) < 0.95 * s && f != 1.0) {
                again = true;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

} // namespace

std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs)
{
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1)
        throw DegenerateLeadingCoefficient("poly_roots: degree must be >= 1");
    double scale = 0.0;
    for (double c : coeffs)
        scale = std::max(scale, std::abs(c));
    if (scale == 0.0 || std::abs(coeffs[deg]) < 1e-14 * scale)
        throw DegenerateLeadingCoefficient("poly_roots: leading coefficient vanishes");

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
    balance(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(deg);
    for (int i = 0; i < deg; ++i)
        roots[i] = es.eigenvalues()[i];

    // Newton polish; skipped near multiple roots where chi' degenerates.
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const auto f = poly_eval(coeffs, r);
            const auto df = poly_eval_deriv(coeffs, r);
            if (std::abs(df) < 1e-8 * scale)
                break;
            const auto step = f / df;
            if (std::abs(step) > 0.1 * (1.0 + std::abs(r)))
                break;
            r -= step;
        }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

namespace {

CharSummary summarize(int equilibrium, std::vector<std::complex<double>> roots,
                      double tol_center)
{
    CharSummary s;
    s.equilibrium = equilibrium;
    s.tol_center = tol_center;
    s.roots = std::move(roots);
    for (const auto& r : s.roots) {
        if (r.real() < -tol_center)
            ++s.n_minus;
        else if (r.real() > tol_center)
            ++s.n_plus;
        else
            ++s.n_center;
    }
    return s;
}

} // namespace

BundleSummary bundle_dims(const ProblemSpec& spec, double lambda, double tol_center)
{
    BundleSummary b;
    b.at_zero = summarize(0, poly_roots(characteristic_poly(spec, lambda, 0)), tol_center);
    b.at_one = summarize(1, poly_roots(characteristic_poly(spec, lambda, 1)), tol_center);
    const int m = spec.system_order(lambda);
    b.shooting_balance = b.at_zero.n_minus + b.at_one.n_plus - (m + 1);
    return b;
}

namespace {

// Match each root of `cur` against `prev` by greedy nearest-neighbour pairing,
// returning cur permuted into prev's ordering.
std::vector<std::complex<double>> match_roots(const std::vector<std::complex<double>>& prev,
                                              std::vector<std::complex<double>> cur)
{
    const size_t n = prev.size();
    std::vector<std::complex<double>> out(n);
    std::vector<bool> used(cur.size(), false);
    for (size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::max();
        size_t arg = 0;
        for (size_t j = 0; j < cur.size(); ++j) {
            if (used[j])
                continue;
            const double d = std::abs(cur[j] - prev[i]);
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        used[arg] = true;
        out[i] = cur[arg];
    }
    return out;
}

} // namespace

std::optional<double> root_collision_lambda(const ProblemSpec& spec, int equilibrium,
                                            double lo, double hi, double tol)
{
    if (!(lo < hi))
        throw BracketInvalid("root_collision_lambda: need lo < hi");
    if (tol <= 0.0)
        throw BracketInvalid("root_collision_lambda: tol must be positive");

    const int steps = 256;
    auto roots_at = [&](double lam) {
        return poly_roots(characteristic_poly(spec, lam, equilibrium));
    };

    std::vector<std::complex<double>> tracked = roots_at(lo);
    std::vector<bool> eligible(tracked.size());
    for (size_t i = 0; i < tracked.size(); ++i)
        eligible[i] = std::abs(tracked[i].imag()) >= tol;

    auto any_collided = [&](const std::vector<std::complex<double>>& r) {
        for (size_t i = 0; i < r.size(); ++i)
            if (eligible[i] && std::abs(r[i].imag()) < tol)
                return true;
        return false;
    };

    if (any_collided(tracked))
        return lo;

    double prev_lam = lo;
    for (int s = 1; s <= steps; ++s) {
        const double lam = lo + (hi - lo) * s / steps;
        auto matched = match_roots(tracked, roots_at(lam));
        if (any_collided(matched)) {
            // bisect [prev_lam, lam]; the tracked basis at prev_lam stays valid
            // because the interval is already small.
            double a = prev_lam, b = lam;
            while (b - a > 0.5 * tol) {
                const double mid = 0.5 * (a + b);
                auto rm = match_roots(tracked, roots_at(mid));
                if (any_collided(rm))
                    b = mid;
                else
                    a = mid;
            }
            return b;
        }
        // roots that become complex along the way are collision candidates too
        for (size_t i = 0; i < matched.size(); ++i)
            if (std::abs(matched[i].imag()) >= tol)
                eligible[i] = true;
        tracked = std::move(matched);
        prev_lam = lam;
    }
    return std::nullopt;
}

} // namespace kppw
