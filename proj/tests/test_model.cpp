#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "kppw/model.hpp"

using namespace kppw;

TEST_CASE("logistic source fixed points and slopes")
{
    CHECK(LogisticSource::value(0.0) == 0.0);
    CHECK(LogisticSource::value(1.0) == 0.0);
    CHECK(LogisticSource::derivative(0.0) == 1.0);
    CHECK(LogisticSource::derivative(1.0) == -1.0);
}

TEST_CASE("catalog lookups carry the exact sign conventions")
{
    auto d = catalog_lookup("dispersion", 11, 1);
    CHECK(d.sign_t == -1);
    CHECK(d.sign_x == -1);
    CHECK(d.n == 0.0);

    auto h = catalog_lookup("hyperbolic", 10, 2);
    CHECK(h.sign_t == +1);
    CHECK(h.sign_x == +1);

    auto c = catalog_lookup("classic", 2, 1);
    CHECK(c.sign_t == -1);
    CHECK(c.sign_x == +1);

    auto dp = catalog_lookup("dispersion-parabolic", 10, 5);
    CHECK(dp.sign_t == -1);
    CHECK(dp.sign_x == +1);

    CHECK_THROWS_AS(catalog_lookup("dispersion", 7, 1), UnknownEquation);
    CHECK_THROWS_AS(catalog_lookup("no-such-family", 2, 1), UnknownEquation);
}

TEST_CASE("catalog entries validate and k != l throughout")
{
    for (const auto& s : catalog()) {
        CHECK_NOTHROW(s.validate());
        CHECK(s.k != s.l);
        CHECK(s.order() == std::max(s.k, s.l));
    }
    ProblemSpec bad;
    bad.k = 3;
    bad.l = 3;
    CHECK_THROWS_AS(bad.validate(), InvalidSpec);
}

TEST_CASE("residual vanishes at both equilibria for every catalogued equation")
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    for (const auto& s : catalog()) {
        if (!s.semilinear())
            continue;
        for (int trial = 0; trial < 8; ++trial) {
            const double lambda = lam(rng);
            const int m = s.system_order(lambda);
            Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
            Eigen::VectorXd one = Eigen::VectorXd::Zero(m);
            one[0] = 1.0;
            CHECK(system_rhs(s, zero, lambda).cwiseAbs().maxCoeff() == 0.0);
            CHECK(system_rhs(s, one, lambda).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

// the printed right-hand sides, written out independently per family, solved
// for the highest derivative
namespace {
double expected_highest(const ProblemSpec& s, const Eigen::VectorXd& u, double lam)
{
    const double src = u[0] * (1.0 - u[0]);
    auto P = [&](int p) { return kppw::int_pow(lam, p); };
    if (s.family == "classic") // -lambda f' = f'' + f(1-f)
        return -lam * u[1] - src;
    if (s.family == "she") // -lambda f' = s_x f^(2m) + f(1-f)
        return s.sign_x * (-lam * u[1] - src);
    if (s.family == "dispersion") // -lambda^l f^(l) = -f^(11) + f(1-f)
        return P(s.l) * u[s.l] + src;
    if (s.family == "dispersion-hyperbolic") // lambda^l f^(l) = -f^(11) + f(1-f)
        return -P(s.l) * u[s.l] + src;
    if (s.family == "dispersion-parabolic") // -lambda^l f^(l) = s_x f^(10) + f(1-f)
        return s.sign_x * (-P(s.l) * u[s.l] - src);
    if (s.family == "hyperbolic" || s.family == "elliptic")
        return s.sign_x * (P(s.l) * u[s.l] - src);
    if (s.family == "exotic" && s.k == 10) // -lambda^11 f^(11) = -f^(10) + f(1-f)
        return (u[10] - src) / P(11);
    if (s.family == "exotic" && s.k == 11) // lambda^12 f^(12) = -f^(11) + f(1-f)
        return (-u[11] + src) / P(12);
    if (s.family == "t11") // -lambda^11 f^(11) = -f^(k) + f(1-f)
        return (u[s.k] - src) / P(11);
    FAIL("family not audited: ", s.family);
    return 0.0;
}
} // namespace

TEST_CASE("sign and order audit against the printed equations")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    for (const auto& s : catalog()) {
        if (!s.semilinear())
            continue;
        for (double lam : {0.7, -1.3, 2.1}) {
            const int m = s.system_order(lam);
            Eigen::VectorXd u(m);
            for (int i = 0; i < m; ++i)
                u[i] = uni(rng);
            const auto g = system_rhs(s, u, lam);
            for (int i = 0; i + 1 < m; ++i)
                CHECK(g[i] == u[i + 1]);
            const double want = expected_highest(s, u, lam);
            CHECK(std::abs(g[m - 1] - want) <= 1e-12 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("jacobian matches central finite differences of the residual")
{
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> uni(-1.0, 1.5);
    const std::vector<ProblemSpec> specs = {
        catalog_lookup("dispersion", 11, 1), catalog_lookup("classic", 2, 1),
        catalog_lookup("hyperbolic", 10, 2), catalog_lookup("t11", 2, 11),
        catalog_lookup("she", 4, 1)};
    int checked = 0;
    for (const auto& s : specs) {
        for (int trial = 0; trial < 20; ++trial) {
            const double lam = uni(rng) + 1.6; // keep away from 0 for l > k
            const int m = s.system_order(lam);
            Eigen::VectorXd u(m);
            for (int i = 0; i < m; ++i)
                u[i] = uni(rng);
            const auto J = system_jacobian(s, u, lam);
            const double h = 1e-6;
            for (int c = 0; c < m; ++c) {
                Eigen::VectorXd up = u, dn = u;
                up[c] += h;
                dn[c] -= h;
                Eigen::VectorXd fd = (system_rhs(s, up, lam) - system_rhs(s, dn, lam)) / (2 * h);
                for (int r = 0; r < m; ++r)
                    CHECK(std::abs(J(r, c) - fd[r]) <= 1e-6 * (1.0 + std::abs(fd[r])));
            }
            ++checked;
        }
    }
    CHECK(checked == 100);
}

TEST_CASE("decreasing logistic satisfies the sign-flipped first-order reduction")
{
    // variant of the first-order-in-x, eleventh-order-in-t equation with the
    // spatial sign flipped so the lambda = 0 reduction reads f' = -f(1-f)
    ProblemSpec v;
    v.family = "t11-flipped";
    v.k = 1;
    v.l = 11;
    v.sign_t = -1;
    v.sign_x = +1;
    v.label = "sign-flipped decreasing variant";
    v.validate();

    CHECK(v.system_order(0.0) == 1);
    CHECK(v.system_order(0.5) == 11);

    auto logistic = [](double y) { return 1.0 / (1.0 + std::exp(y)); };
    for (double y : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
        const double f = logistic(y);
        const double f1 = -f * (1.0 - f);
        std::vector<double> derivs(12, 0.0);
        derivs[0] = f;
        derivs[1] = f1;
        CHECK(std::abs(equation_defect(v, derivs, 0.0)) < 1e-15);
    }

    // the reduced system right-hand side reproduces f' on the logistic
    Eigen::VectorXd u(1);
    u[0] = logistic(0.0);
    const auto g = system_rhs(v, u, 0.0);
    CHECK(g[0] == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("quasilinear member is rejected by the semilinear system")
{
    auto q = catalog_lookup("quasilinear", 11, 1);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(q.order());
    CHECK_THROWS_AS(system_rhs(q, u, 1.0), InvalidSpec);
    CHECK_THROWS_AS(system_jacobian(q, u, 1.0), InvalidSpec);
}
