#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hardylab/fields.hpp"

using namespace hardylab;
using namespace hardylab::fields;

namespace {

std::vector<double> sample_point(std::mt19937& rng, int n, int positive) {
    std::uniform_real_distribution<double> pos(0.05, 3.0), any(-3.0, 3.0);
    std::vector<double> x(n);
    for (int d = 0; d < n; ++d) x[d] = d < positive ? pos(rng) : any(rng);
    return x;
}

}  // namespace

TEST_CASE("identity residual stays below 1e-10 on seeded half-space samples") {
    std::mt19937 rng(20260814u);
    std::uniform_real_distribution<double> alpha_draw(-2.0, 0.0);
    for (int n : {2, 3, 4, 5}) {
        double worst = 0.0;
        for (int s = 0; s < 1000; ++s) {
            AlphaVector a;
            a.v.resize(n);
            for (double& ai : a.v) ai = alpha_draw(rng);
            auto spec = half_space_field(a);
            Point p{sample_point(rng, n, 1), Domain::HalfSpace, 1};
            worst = std::max(worst, identity_residual(spec, p));
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("identity residual stays below 1e-10 on quarter-space samples") {
    std::mt19937 rng(17u);
    for (int k : {1, 2, 3}) {
        auto spec = quarter_space_field(k);
        double worst = 0.0;
        for (int s = 0; s < 1000; ++s) {
            Point p{sample_point(rng, 3, k), Domain::QuarterSpace, k};
            worst = std::max(worst, identity_residual(spec, p));
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("drift equals minus the gradient of log phi") {
    AlphaVector a{{-0.3, -0.7, 0.0}};
    auto spec = half_space_field(a);
    Point p{{0.7, -0.4, 1.1}, Domain::HalfSpace, 1};
    auto F = eval_F(spec, p);
    const double h = 1e-6;
    for (int d = 0; d < 3; ++d) {
        Point pp = p, pm = p;
        pp.x[d] += h;
        pm.x[d] -= h;
        const double fd = -(std::log(eval_phi(spec, pp)) - std::log(eval_phi(spec, pm))) / (2 * h);
        CHECK(F[d] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("divergence combination matches a finite-difference evaluation") {
    AlphaVector a{{-0.5, -0.25, -1.0}};
    auto spec = half_space_field(a);
    Point p{{0.9, 0.3, -0.8}, Domain::HalfSpace, 1};
    const double h = 1e-5;
    double div_fd = 0.0;
    for (int d = 0; d < 3; ++d) {
        Point pp = p, pm = p;
        pp.x[d] += h;
        pm.x[d] -= h;
        div_fd += (eval_F(spec, pp)[d] - eval_F(spec, pm)[d]) / (2 * h);
    }
    double f2 = 0.0;
    for (double fi : eval_F(spec, p)) f2 += fi * fi;
    CHECK(eval_divF_minus_Fsq(spec, p) == doctest::Approx(div_fd - f2).epsilon(1e-6));
}

TEST_CASE("quarter-space potential terms are coordinate-wise") {
    auto spec = quarter_space_field(2);
    Point p{{0.5, 1.5, -2.0}, Domain::QuarterSpace, 2};
    auto pot = eval_potential(spec, p);
    REQUIRE(pot.terms.size() == 2);
    CHECK(pot.terms[0] == doctest::Approx(0.25 / (0.5 * 0.5)).epsilon(1e-15));
    CHECK(pot.terms[1] == doctest::Approx(0.25 / (1.5 * 1.5)).epsilon(1e-15));
    CHECK(pot.sum == doctest::Approx(pot.terms[0] + pot.terms[1]).epsilon(1e-15));
}

TEST_CASE("half-space potential terms carry the recursion coefficients") {
    AlphaVector a{{0.0, 0.0, -0.5}};
    auto spec = half_space_field(a);
    Point p{{1.0, 2.0, -1.0}, Domain::HalfSpace, 1};
    auto pot = eval_potential(spec, p);
    const double r1 = 1.0, r2 = 5.0, r3 = 6.0;  // squared prefix radii
    CHECK(pot.terms[0] == doctest::Approx(spec.beta.v[0] / r1).epsilon(1e-14));
    CHECK(pot.terms[1] == doctest::Approx(spec.beta.v[1] / r2).epsilon(1e-14));
    CHECK(pot.terms[2] == doctest::Approx(spec.beta.v[2] / r3).epsilon(1e-14));
}

TEST_CASE("field from gamma agrees with field from the generator") {
    AlphaVector a{{-0.4, -0.9, -0.2}};
    auto from_alpha = half_space_field(a);
    auto from_gamma = half_space_field_from_gamma(gamma_from_alpha(normalize_alpha(a)));
    REQUIRE(from_gamma.gamma.v.size() == from_alpha.gamma.v.size());
    for (size_t i = 0; i < from_alpha.gamma.v.size(); ++i) {
        CHECK(from_gamma.gamma.v[i] == doctest::Approx(from_alpha.gamma.v[i]).epsilon(1e-13));
        CHECK(from_gamma.beta.v[i] == doctest::Approx(from_alpha.beta.v[i]).epsilon(1e-13));
    }
    Point p{{0.3, 1.2, 0.7}, Domain::HalfSpace, 1};
    CHECK(eval_divF_minus_Fsq(from_gamma, p) ==
          doctest::Approx(eval_divF_minus_Fsq(from_alpha, p)).epsilon(1e-12));
}

TEST_CASE("log-space weight evaluation survives extreme exponents") {
    // Each factor alone overflows a double (2^2000.5), but the product is
    // order one; summing logs first must keep it finite.
    AlphaVector a{{-2000.0, 0.0, -2000.0, 0.0}};
    auto spec = half_space_field(a);
    Point p{{2.0, 0.1, 0.1, 0.1}, Domain::HalfSpace, 1};
    const double phi = eval_phi(spec, p);
    CHECK(std::isfinite(phi));
    CHECK(phi > 0.0);
    CHECK(identity_residual(spec, p) <= 1e-10);

    // near-wall but legal coordinate stays finite and accurate as well
    AlphaVector a0{{0.0, 0.0, 0.0}};
    auto spec0 = half_space_field(a0);
    Point q{{1e-11, 1.0, 1.0}, Domain::HalfSpace, 1};
    const double phi0 = eval_phi(spec0, q);
    CHECK(std::isfinite(phi0));
    CHECK(phi0 > 0.0);
    CHECK(identity_residual(spec0, q) <= 1e-10);
}

TEST_CASE("unusable points are rejected") {
    auto spec = half_space_field(AlphaVector{{0.0, 0.0, 0.0}});
    const Point on_wall{{0.0, 1.0, 1.0}, Domain::HalfSpace, 1};
    const Point too_close{{1e-13, 1.0, 1.0}, Domain::HalfSpace, 1};
    const Point short_dim{{1.0, 1.0}, Domain::HalfSpace, 1};
    const Point not_finite{{std::nan(""), 1.0, 1.0}, Domain::HalfSpace, 1};
    CHECK_THROWS_AS(validate_point(spec, on_wall), std::domain_error);
    CHECK_THROWS_AS(validate_point(spec, too_close), std::domain_error);
    CHECK_THROWS(validate_point(spec, short_dim));
    CHECK_THROWS(validate_point(spec, not_finite));
    auto qspec = quarter_space_field(2);
    const Point second_wall{{1.0, 0.0, 1.0}, Domain::QuarterSpace, 2};
    CHECK_THROWS_AS(validate_point(qspec, second_wall), std::domain_error);
}
