#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kppw/bvp.hpp"

using namespace kppw;

TEST_CASE("heaviside guess shape")
{
    Mesh mesh = Mesh::uniform(-60.0, 60.0, 200);
    auto g = heaviside_guess(mesh, 4, 1.0);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(mesh.nodes() - 1, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g(mesh.nearest(0.0), 0) == doctest::Approx(0.5));
    CHECK(g(mesh.nearest(0.0), 1) < 0.0); // decreasing step

    // width -> 0: the step is exactly 0/1 one unit away from the origin
    auto sharp = heaviside_guess(mesh, 1, 1e-3);
    CHECK(sharp(mesh.nearest(-1.0), 0) == 1.0);
    CHECK(sharp(mesh.nearest(1.0), 0) == 0.0);

    CHECK_THROWS_AS(heaviside_guess(mesh, 2, 0.0), InvalidSpec);
}

TEST_CASE("boundary closure counts")
{
    Mesh mesh = Mesh::uniform(-40.0, 40.0, 400);

    auto d11 = catalog_lookup("dispersion", 11, 1);
    auto rows = boundary_closure(d11, 1.0, BcMode::DirichletSimple, mesh);
    CHECK(rows.size() == 11);
    int phase = 0;
    for (const auto& r : rows)
        phase += (r.name == "phase");
    CHECK(phase == 1);

    auto classic = catalog_lookup("classic", 2, 1);
    auto proj = boundary_closure(classic, 2.0, BcMode::Projection, mesh);
    CHECK(proj.size() == 2); // (2-2) at +L, (2-1) at -L, plus the phase row

    // pure-imaginary characteristic roots block the projection closure
    auto hyp = catalog_lookup("hyperbolic", 10, 2);
    CHECK_THROWS_AS(boundary_closure(hyp, 1.0, BcMode::Projection, mesh),
                    CenterModesPresent);
}

TEST_CASE("exact logistic recovery through the reduced first-order equation")
{
    ProblemSpec v;
    v.family = "t11-flipped";
    v.k = 1;
    v.l = 11;
    v.sign_t = -1;
    v.sign_x = +1;

    Mesh mesh = Mesh::uniform(-25.0, 25.0, 800);
    SolveOptions opt;
    auto res = solve(v, 0.0, mesh, opt);
    REQUIRE(res.converged());
    const auto& p = *res.profile;
    CHECK(p.diagnostics.phase_pinned);

    double err = 0.0;
    for (int i = 0; i < p.mesh.nodes(); ++i) {
        const double y = p.mesh.points[i];
        if (y < -20.0 || y > 20.0)
            continue;
        err = std::max(err, std::abs(p.values(i, 0) - 1.0 / (1.0 + std::exp(y))));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("classic front at the minimal speed")
{
    auto classic = catalog_lookup("classic", 2, 1);
    Mesh mesh = Mesh::uniform(-60.0, 60.0, 1200);
    SolveOptions opt;
    auto res = solve(classic, 2.0, mesh, opt);
    REQUIRE(res.converged());
    const auto& p = *res.profile;
    CHECK(!check_profile(p, opt).has_value());

    // monotone decreasing
    for (int i = 0; i + 1 < p.mesh.nodes(); ++i)
        CHECK(p.values(i + 1, 0) <= p.values(i, 0) + 1e-9);

    // right-tail log-slope near the double characteristic root -1: average
    // f'/f far enough out that the algebraic prefactor correction ~1/y of the
    // double root has decayed
    double acc = 0.0;
    int cnt = 0;
    for (int i = 0; i < p.mesh.nodes(); ++i) {
        const double f = p.values(i, 0);
        if (f > 1e-10 && f < 1e-8) {
            acc += p.values(i, 1) / f;
            ++cnt;
        }
    }
    REQUIRE(cnt > 0);
    CHECK(std::abs(acc / cnt + 1.0) < 0.05);
}

TEST_CASE("translation pinning: shifted guesses converge to the same front")
{
    auto classic = catalog_lookup("classic", 2, 1);
    Mesh mesh = Mesh::uniform(-40.0, 40.0, 800);
    SolveOptions opt;

    auto shifted_guess = [&](double shift) {
        Eigen::MatrixXd g = heaviside_guess(mesh, 2, 2.0);
        for (int i = 0; i < mesh.nodes(); ++i) {
            const double t = std::tanh((mesh.points[i] - shift) / 2.0);
            g(i, 0) = 0.5 * (1.0 - t);
            g(i, 1) = -0.25 * (1.0 - t * t);
        }
        return g;
    };

    auto ga = shifted_guess(-3.0);
    auto gb = shifted_guess(+3.0);
    auto ra = solve(classic, 2.5, mesh, opt, &ga);
    auto rb = solve(classic, 2.5, mesh, opt, &gb);
    REQUIRE(ra.converged());
    REQUIRE(rb.converged());
    const double diff =
        (ra.profile->values.col(0) - rb.profile->values.col(0)).cwiseAbs().maxCoeff();
    CHECK(diff < 1e-6);
}

TEST_CASE("dispersion profile, both closures agree on the inner half")
{
    auto d11 = catalog_lookup("dispersion", 11, 1);
    Mesh mesh = Mesh::uniform(-40.0, 40.0, 900);
    SolveOptions opt;

    auto rd = solve(d11, 1.0, mesh, opt);
    REQUIRE(rd.converged());
    CHECK(!check_profile(*rd.profile, opt).has_value());

    SolveOptions popt = opt;
    popt.mode = BcMode::Projection;
    auto rp = solve(d11, 1.0, mesh, popt);
    REQUIRE(rp.converged());

    double diff = 0.0;
    for (int i = 0; i < mesh.nodes(); ++i)
        if (std::abs(mesh.points[i]) <= 20.0)
            diff = std::max(diff,
                            std::abs(rd.profile->values(i, 0) - rp.profile->values(i, 0)));
    CHECK(diff < 10.0 * opt.tol_bc);
}

TEST_CASE("stationary dispersion profile exists")
{
    auto d11 = catalog_lookup("dispersion", 11, 1);
    Mesh mesh = Mesh::uniform(-40.0, 40.0, 900);
    auto res = solve(d11, 0.0, mesh);
    REQUIRE(res.converged());
    CHECK(res.profile->values(mesh.nearest(0.0), 0) == doctest::Approx(0.5));
}

TEST_CASE("refinement keeps the contract")
{
    auto classic = catalog_lookup("classic", 2, 1);
    Mesh mesh = Mesh::uniform(-30.0, 30.0, 300);
    SolveOptions opt;
    auto res = solve(classic, 2.0, mesh, opt);
    REQUIRE(res.converged());

    auto fine = refine(*res.profile, 2.0, opt);
    REQUIRE(fine.converged());
    CHECK(fine.profile->mesh.intervals() > res.profile->mesh.intervals());
    CHECK(fine.profile->diagnostics.final_residual_norm <= opt.tol);
    // phase stays pinned exactly
    const int j0 = fine.profile->mesh.nearest(0.0);
    CHECK(fine.profile->mesh.points[j0] == 0.0);
    CHECK(fine.profile->values(j0, 0) == doctest::Approx(0.5).epsilon(1e-9));
}
