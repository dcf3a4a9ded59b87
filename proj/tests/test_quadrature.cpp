#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hardylab/quadrature.hpp"

using namespace hardylab::quad;

TEST_CASE("Gauss-Legendre rules integrate polynomials of degree 2m-1 exactly") {
    const auto& rule = gauss_legendre(5);
    REQUIRE(rule.x.size() == 5);
    double odd = 0.0, even = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
        odd += rule.w[i] * std::pow(rule.x[i], 9);
        even += rule.w[i] * std::pow(rule.x[i], 8);
    }
    CHECK(std::abs(odd) <= 1e-15);
    CHECK(even == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("logarithmic pieces integrate 1/r exactly across many octaves") {
    std::vector<Piece> pieces = {{1e-8, 1.0, Map::Log, 16}};
    auto r = build_rule(pieces);
    Sum s;
    for (size_t i = 0; i < r.x.size(); ++i) s.add(r.w[i] / r.x[i]);
    CHECK(s.value() == doctest::Approx(std::log(1e8)).epsilon(1e-13));
}

TEST_CASE("mixed piece lists chain linear and log maps") {
    std::vector<Piece> pieces = {{1e-6, 0.5, Map::Log, 32}, {0.5, 2.0, Map::Linear, 32}};
    auto r = build_rule(pieces);
    Sum s;
    for (size_t i = 0; i < r.x.size(); ++i) s.add(r.w[i] * r.x[i]);
    CHECK(s.value() == doctest::Approx(0.5 * (4.0 - 1e-12)).epsilon(1e-13));
}

TEST_CASE("compensated sum survives catastrophic cancellation") {
    Sum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
    Sum alt;
    for (int i = 0; i < 1000; ++i) {
        alt.add(0.1);
        alt.add(1e12);
        alt.add(-1e12);
    }
    CHECK(alt.value() == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("sin-power quadrature matches the gamma-function closed form") {
    CHECK(sin_power_exact(0.0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(sin_power_exact(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sin_power_exact(2.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
    CHECK(sin_power_exact(3.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    for (double p : {0.0, 1.0, 2.0, 3.0, 4.5, 7.0, 11.25})
        CHECK(sin_power_integral(p) == doctest::Approx(sin_power_exact(p)).epsilon(1e-12));
}

TEST_CASE("nested integration handles coordinate-dependent inner limits") {
    // integral over 0 < y < x < 1 of 1 dy dx = 1/2
    std::vector<AxisGenerator> axes;
    axes.push_back(fixed_axis({{0.0, 1.0, Map::Linear, 24}}));
    axes.push_back([](std::span<const double> outer) {
        return std::vector<Piece>{{0.0, outer[0], Map::Linear, 24}};
    });
    double v = integrate_nested(axes, [](std::span<const double>) { return 1.0; });
    CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("multi-component sweep matches separate passes") {
    std::vector<AxisGenerator> axes;
    axes.push_back(fixed_axis({{0.0, 1.0, Map::Linear, 16}}));
    axes.push_back(fixed_axis({{1e-4, 1.0, Map::Log, 16}}));
    auto f0 = [](std::span<const double> x) { return x[0] * x[0] / x[1]; };
    auto f1 = [](std::span<const double> x) { return std::cos(x[0]) * x[1]; };
    double a = integrate_nested(axes, f0);
    double b = integrate_nested(axes, f1);
    double out[2];
    integrate_nested_multi(
        axes, 2,
        [&](std::span<const double> x, std::span<double> o) {
            o[0] = f0(x);
            o[1] = f1(x);
        },
        std::span<double>(out, 2));
    CHECK(out[0] == doctest::Approx(a).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("polar convention: first coordinate positive, radii consistent") {
    double x[3];
    const double r = 2.0, th[2] = {std::numbers::pi / 3, std::numbers::pi / 4};
    polar_to_cartesian(3, r, std::span<const double>(th, 2), std::span<double>(x, 3));
    CHECK(x[0] == doctest::Approx(r * std::sin(th[1]) * std::sin(th[0])).epsilon(1e-14));
    CHECK(x[2] == doctest::Approx(r * std::cos(th[1])).epsilon(1e-14));
    CHECK(std::hypot(x[0], x[1], x[2]) == doctest::Approx(r).epsilon(1e-14));
    CHECK(x[0] > 0.0);
    CHECK(std::hypot(x[0], x[1]) ==
          doctest::Approx(r * std::sin(th[1])).epsilon(1e-14));
}

TEST_CASE("polar integration reproduces the half-ball volume") {
    std::vector<Piece> radial = {{0.0, 1.0, Map::Linear, 32}};
    double vol = integrate_polar(
        [](double r, std::span<const double> th) {
            return r * r * std::sin(th[1]);  // measure r^2 sin(th_2)
        },
        3, radial, 48);
    CHECK(vol == doctest::Approx(2.0 * std::numbers::pi / 3.0).epsilon(1e-12));
}

TEST_CASE("worker count does not change integration results") {
    std::vector<Piece> radial = {{1e-6, 1.0, Map::Log, 24}};
    auto f = [](double r, std::span<const double> th) {
        return std::sqrt(r) * std::sin(th[1]) * (1.0 + std::cos(th[0]));
    };
    const double one = integrate_polar(f, 3, radial, 24, 1);
    const double four = integrate_polar(f, 3, radial, 24, 4);
    CHECK(one == four);  // bitwise: deterministic reduction order
}
