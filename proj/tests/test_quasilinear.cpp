#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kppw/quasilinear.hpp"

using namespace kppw;

TEST_CASE("interface exponent")
{
    CHECK(interface_exponent(1.0) == 10.0);
    CHECK(interface_exponent(2.0) == 5.0);
    CHECK(interface_exponent(4.0) == 2.5);
    CHECK_THROWS_AS(interface_exponent(0.0), NonPositiveN);
    CHECK_THROWS_AS(interface_exponent(-1.0), NonPositiveN);
}

TEST_CASE("transform round trip away from the degenerate point")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uf(-2.0, 2.0);
    std::uniform_real_distribution<double> un(0.5, 4.0);
    for (int t = 0; t < 200; ++t) {
        const double f = uf(rng), n = un(rng);
        if (std::abs(f) < 1e-3)
            continue;
        const double back = f_from_F(F_from_f(f, n), n);
        CHECK(std::abs(back - f) <= 1e-10 * std::abs(f));
    }
}

TEST_CASE("constant solution of the interface-operator equation")
{
    for (double n : {1.0, 2.0, 4.0})
        for (double lam : {0.5, 1.0, 2.0})
            CHECK(std::abs(constant_orbit_residual(n, lam)) < 1e-18 * std::max(1.0, lam));

    // through the Fourier evaluator the same constant is a zero of the
    // residual down to the conditioning of the high-order derivative symbols
    const double n = 1.0, lam = 1.0;
    const double gamma = interface_exponent(n);
    auto op = pk_build(10);
    const double c = std::pow(lam / pk_eval(op, gamma)[0], 1.0 / n);
    Eigen::VectorXd phi = Eigen::VectorXd::Constant(64, c);
    auto r = osc_equation_residual(n, lam, phi, 1.0);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-10);

    CHECK_THROWS_AS(constant_orbit_residual(1.0, 0.0), InvalidSpec);
    CHECK_THROWS_AS(oscillatory_component(1.0, -1.0), InvalidSpec);
    CHECK_THROWS_AS(oscillatory_component(0.0, 1.0), NonPositiveN);
}

TEST_CASE("oscillatory component contract: genuine orbit or honest failure")
{
    auto res = oscillatory_component(1.0, 1.0, 64);
    if (res.converged()) {
        const auto& c = *res.component;
        CHECK(c.period > 0.0);
        CHECK(c.residual_norm < 1e-8);
        CHECK(c.sign_changing);
        double lo = 1e30, hi = -1e30;
        for (double v : c.samples) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo < 0.0);
        CHECK(hi > 0.0);
    } else {
        CHECK(!res.reason.empty());
    }
}

TEST_CASE("quasilinear profile with a finite interface")
{
    Mesh mesh = Mesh::uniform(-50.0, 20.0, 1200);
    QuasiOptions opt;
    auto r = solve_quasilinear(1.0, 1.0, mesh, opt);
    REQUIRE(r.converged());
    const auto& p = *r.profile;
    CHECK(p.values(mesh.nearest(0.0), 0) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(p.delta <= opt.delta_target);

    auto fit = interface_locate(p);
    CHECK(fit.y0 > 0.0);
    CHECK(fit.y0 < mesh.right());

    // beyond the located interface F stays at the threshold floor
    double fmax = p.values.col(0).cwiseAbs().maxCoeff();
    for (int i = 0; i < p.mesh.nodes(); ++i)
        if (p.mesh.points[i] > fit.y0 + 0.1)
            CHECK(std::abs(p.values(i, 0)) <= 1e-5 * fmax);

    // envelope exponent near 10(n+1)/n = 20 for n = 1
    CHECK(fit.envelope_exponent == doctest::Approx(20.0).epsilon(0.2));
}

TEST_CASE("regularization continuation has converged in delta")
{
    Mesh mesh = Mesh::uniform(-40.0, 15.0, 900);
    QuasiOptions opt;
    auto fine = solve_quasilinear(1.0, 0.5, mesh, opt);
    REQUIRE(fine.converged());

    QuasiOptions coarser = opt;
    coarser.delta_target = 10.0 * opt.delta_target;
    auto coarse = solve_quasilinear(1.0, 0.5, mesh, coarser);
    REQUIRE(coarse.converged());

    const double diff =
        (fine.profile->values.col(0) - coarse.profile->values.col(0)).cwiseAbs().maxCoeff();
    CHECK(diff < 1e-4);
}

TEST_CASE("negative speeds converge")
{
    Mesh mesh = Mesh::uniform(-40.0, 15.0, 900);
    auto r = solve_quasilinear(1.0, -0.25, mesh);
    CHECK(r.converged());
}

TEST_CASE("rejects n <= 0")
{
    Mesh mesh = Mesh::uniform(-10.0, 10.0, 100);
    CHECK_THROWS_AS(solve_quasilinear(0.0, 1.0, mesh), NonPositiveN);
    CHECK_THROWS_AS(solve_quasilinear(-1.0, 1.0, mesh), NonPositiveN);
}
