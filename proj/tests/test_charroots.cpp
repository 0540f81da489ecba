#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kppw/charroots.hpp"

using namespace kppw;

TEST_CASE("characteristic polynomial coefficients")
{
    auto classic = catalog_lookup("classic", 2, 1);
    auto c = characteristic_poly(classic, 2.0, 0); // theta^2 + 2 theta + 1
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == 2.0);
    CHECK(c[2] == 1.0);

    auto d = catalog_lookup("dispersion", 11, 1);
    auto cd = characteristic_poly(d, 0.0, 0); // -theta^11 + 1
    REQUIRE(cd.size() == 12);
    CHECK(cd[0] == 1.0);
    CHECK(cd[11] == -1.0);
    for (int i = 1; i < 11; ++i)
        CHECK(cd[i] == 0.0);

    auto she4 = catalog_lookup("she", 4, 1);
    for (double lam : {0.5, 1.3}) {
        auto cs = characteristic_poly(she4, lam, 0); // -theta^4 + lambda theta + 1
        REQUIRE(cs.size() == 5);
        CHECK(cs[4] == -1.0);
        CHECK(cs[1] == doctest::Approx(lam));
        CHECK(cs[0] == 1.0);
    }
}

TEST_CASE("roots of simple polynomials")
{
    // double root at -1
    auto r = poly_roots({1.0, 2.0, 1.0});
    REQUIRE(r.size() == 2);
    for (const auto& z : r) {
        CHECK(std::abs(z.real() + 1.0) < 1e-6);
        CHECK(std::abs(z.imag()) < 1e-6);
    }

    // theta^11 = 1: eleventh roots of unity, exactly 6 in the left half plane
    std::vector<double> c(12, 0.0);
    c[0] = -1.0;
    c[11] = 1.0;
    auto ru = poly_roots(c);
    REQUIRE(ru.size() == 11);
    int left = 0;
    for (const auto& z : ru) {
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-10);
        if (z.real() < 0)
            ++left;
    }
    CHECK(left == 6);

    // Vieta for theta^4 - theta - 1: product of roots = -1
    auto rq = poly_roots({-1.0, -1.0, 0.0, 0.0, 1.0});
    std::complex<double> prod(1.0, 0.0);
    for (const auto& z : rq)
        prod *= z;
    CHECK(std::abs(prod.real() + 1.0) < 1e-10);
    CHECK(std::abs(prod.imag()) < 1e-10);

    CHECK_THROWS_AS(poly_roots({1.0}), DegenerateLeadingCoefficient);
    CHECK_THROWS_AS(poly_roots({1.0, 1.0, 0.0}), DegenerateLeadingCoefficient);
}

TEST_CASE("bundle dimensions and the shooting balance")
{
    auto classic = catalog_lookup("classic", 2, 1);
    auto b = bundle_dims(classic, 2.0);
    CHECK(b.at_zero.n_minus == 2);
    CHECK(b.at_one.n_plus == 1);
    CHECK(b.shooting_balance == 0);

    auto d = catalog_lookup("dispersion", 11, 1);
    auto bd = bundle_dims(d, 0.0);
    CHECK(bd.at_zero.n_minus == 6);
    CHECK(bd.at_zero.n_plus == 5);
    CHECK(bd.at_one.n_plus == 6);
}

TEST_CASE("classification is stable under tolerance halving away from the margin")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    for (const auto& s : catalog()) {
        if (!s.semilinear())
            continue;
        for (int t = 0; t < 5; ++t) {
            double l = lam(rng);
            while (s.l > s.k && std::abs(int_pow(l, s.l)) < 1e-9)
                l = lam(rng);
            const double tol = 1e-9;
            auto b1 = bundle_dims(s, l, tol);
            bool marginal = false;
            for (const auto& cs : {b1.at_zero, b1.at_one})
                for (const auto& r : cs.roots) {
                    const double a = std::abs(r.real());
                    if (a >= tol / 2 && a <= 2 * tol)
                        marginal = true;
                }
            if (marginal)
                continue;
            auto b2 = bundle_dims(s, l, tol / 2);
            CHECK(b1.at_zero.n_minus == b2.at_zero.n_minus);
            CHECK(b1.at_zero.n_center == b2.at_zero.n_center);
            CHECK(b1.at_one.n_plus == b2.at_one.n_plus);
            CHECK(b1.at_one.n_center == b2.at_one.n_center);
        }
    }
}

TEST_CASE("root multiset properties over the catalog")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    for (const auto& s : catalog()) {
        if (!s.semilinear())
            continue;
        for (int t = 0; t < 20; ++t) {
            double l = lam(rng);
            // a numerically vanishing leading coefficient is the documented
            // DegenerateLeadingCoefficient path, exercised separately
            while (s.l > s.k && std::abs(int_pow(l, s.l)) < 1e-9)
                l = lam(rng);
            const auto coeffs = characteristic_poly(s, l, t % 2);
            const auto roots = poly_roots(coeffs);
            const int m = s.system_order(l);
            REQUIRE(static_cast<int>(roots.size()) == m);

            // residual bound from the summary contract
            for (const auto& z : roots) {
                const double bound = 1e-8 * std::pow(1.0 + std::abs(z), m);
                CHECK(std::abs(poly_eval(coeffs, z)) < bound);
            }

            // complex roots occur in conjugate pairs
            for (const auto& z : roots) {
                if (std::abs(z.imag()) < 1e-9)
                    continue;
                bool found = false;
                for (const auto& w : roots)
                    if (std::abs(w.real() - z.real()) < 1e-6 &&
                        std::abs(w.imag() + z.imag()) < 1e-6)
                        found = true;
                CHECK(found);
            }

            // Vieta: product of roots = (-1)^m c0 / cm
            std::complex<double> prod(1.0, 0.0);
            for (const auto& z : roots)
                prod *= z;
            const double want = (m % 2 == 0 ? 1.0 : -1.0) * coeffs[0] / coeffs[m];
            CHECK(std::abs(prod - want) <= 1e-8 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("root collision threshold of the classic front")
{
    auto classic = catalog_lookup("classic", 2, 1);
    auto hit = root_collision_lambda(classic, 0, 1.0, 3.0, 1e-6);
    REQUIRE(hit.has_value());
    CHECK(std::abs(*hit - 2.0) < 1e-6);

    // feeding the result back yields a near-real pair
    auto roots = poly_roots(characteristic_poly(classic, *hit, 0));
    double min_im = 1e9;
    for (const auto& z : roots)
        min_im = std::min(min_im, std::abs(z.imag()));
    CHECK(min_im < 1e-6);

    // pair already real beyond the threshold
    CHECK(!root_collision_lambda(classic, 0, 3.0, 5.0, 1e-6).has_value());

    CHECK_THROWS_AS(root_collision_lambda(classic, 0, 3.0, 1.0, 1e-6), BracketInvalid);
}

TEST_CASE("root collision of the fourth-order equation at equilibrium 1")
{
    // chi = -theta^4 + lambda theta - 1 collides where chi and chi' vanish:
    // 3 theta^4 = 1, lambda = 4 theta^3  =>  lambda = 4 * 3^(-3/4)
    auto she4 = catalog_lookup("she", 4, 1);
    const double expected = 4.0 * std::pow(3.0, -0.75);
    auto hit = root_collision_lambda(she4, 1, 1.0, 2.0, 1e-8);
    REQUIRE(hit.has_value());
    CHECK(std::abs(*hit - expected) < 1e-6);
}
