#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hardylab/constants.hpp"
#include "hardylab/testfunctions.hpp"

using namespace hardylab;
using namespace hardylab::testfn;

namespace {

const Resolution kRes;  // production resolution

double fd_gradient_error(const TestFunction& tf, const double* x0) {
    auto fp = eval_test_function(tf, std::span<const double>(x0, 3));
    const double h = 1e-5;
    double worst = 0.0;
    for (int d = 0; d < 3; ++d) {
        double xp[3] = {x0[0], x0[1], x0[2]}, xm[3] = {x0[0], x0[1], x0[2]};
        xp[d] += h;
        xm[d] -= h;
        const double fd = (eval_test_function(tf, std::span<const double>(xp, 3)).value -
                           eval_test_function(tf, std::span<const double>(xm, 3)).value) /
                          (2 * h);
        worst = std::max(worst,
                         std::abs(fd - fp.grad[d]) / std::max(1.0, std::abs(fp.grad[d])));
    }
    return worst;
}

}  // namespace

TEST_CASE("logarithmic cutoff ramp") {
    auto [v_lo, d_lo] = eval_cutoff(10.0, 0.005);
    CHECK(v_lo == 0.0);
    CHECK(d_lo == 0.0);
    auto [v_hi, d_hi] = eval_cutoff(10.0, 0.2);
    CHECK(v_hi == 1.0);
    CHECK(d_hi == 0.0);
    auto [v_mid, d_mid] = eval_cutoff(10.0, 0.05);
    CHECK(v_mid == doctest::Approx(1.0 + std::log(0.5) / std::log(10.0)).epsilon(1e-14));
    CHECK(d_mid == doctest::Approx(1.0 / (0.05 * std::log(10.0))).epsilon(1e-14));
    // derivative consistent with a finite difference inside the band
    const double h = 1e-7;
    const double fd =
        (eval_cutoff(10.0, 0.05 + h).first - eval_cutoff(10.0, 0.05 - h).first) / (2 * h);
    CHECK(d_mid == doctest::Approx(fd).epsilon(1e-6));
    CHECK_THROWS_AS(eval_cutoff(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(eval_cutoff(10.0, -0.1), std::invalid_argument);
}

TEST_CASE("bump profile plateaus and closed-form derivative") {
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(0.5) == 1.0);
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(2.0) == 0.0);
    CHECK(bump_deriv(0.3) == 0.0);
    CHECK(bump_deriv(1.5) == 0.0);
    CHECK(bump(0.75) > 0.0);
    CHECK(bump(0.75) < 1.0);
    for (double r : {0.55, 0.6, 0.75, 0.9, 0.97}) {
        const double h = 1e-6;
        const double fd = (bump(r + h) - bump(r - h)) / (2 * h);
        CHECK(bump_deriv(r) == doctest::Approx(fd).epsilon(1e-6));
        CHECK(bump_deriv(r) < 0.0);  // monotone transition
    }
}

TEST_CASE("family members have correct closed-form gradients") {
    const double x[3] = {0.31, -0.12, 0.44};
    CHECK(fd_gradient_error(step1_function(3, 100.0), x) <= 2e-5);
    AlphaVector a{{-0.5, 0.0, 0.0}};
    CHECK(fd_gradient_error(general_q_function(2, a, 1e3, 1e2, false), x) <= 2e-5);
    CHECK(fd_gradient_error(general_q_function(2, a, 1e3, 1e2, true), x) <= 2e-5);
    AlphaVector a0{{0.0, 0.0, 0.0}};
    CHECK(fd_gradient_error(sobolev_null_function(a0, 0.2, 1e3), x) <= 2e-5);
}

TEST_CASE("first-stage member realizes its plateau value") {
    // u = sqrt(x_1) h_k(x_1) bump(|x|): inside the plateau of both factors the
    // value is just sqrt(x_1).
    auto tf = step1_function(3, 100.0);
    const double x[3] = {0.04, 0.0, 0.2};
    auto fp = eval_test_function(tf, std::span<const double>(x, 3));
    CHECK(fp.value == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("substituted and full members differ by the leading power product") {
    AlphaVector a{{-0.5, 0.0, 0.0}};
    auto full = general_q_function(2, a, 1e3, 1e2, false);
    auto sub = general_q_function(2, a, 1e3, 1e2, true);
    auto g = gamma_from_alpha(normalize_alpha(a));
    const double x[3] = {0.2, 0.1, 0.05};
    const double vf = eval_test_function(full, std::span<const double>(x, 3)).value;
    const double vs = eval_test_function(sub, std::span<const double>(x, 3)).value;
    const double w = std::pow(std::abs(x[0]), -g.v[0]);  // q = 2: one leading factor
    CHECK(vf == doctest::Approx(vs * w).epsilon(1e-12));
}

TEST_CASE("quadrature self-check accepts the production resolution") {
    CHECK_NOTHROW(check_quadrature_exactness(kRes));
}

TEST_CASE("first-stage quotient schedule reproduces the frozen values") {
    const double refs[4] = {0.757018, 0.562174, 0.475231, 0.426083};
    const double dens[4] = {8.3024, 13.1105, 17.9186, 22.7268};
    const double ks[4] = {1e2, 1e3, 1e4, 1e5};
    BetaVector tail{{0.25, 0.25}};
    std::vector<double> values, denominators;
    for (int i = 0; i < 4; ++i) {
        auto r = quotient_step1(tail, ks[i], kRes);
        CHECK(r.family == "step1");
        CHECK(r.q == 1);
        CHECK(r.k_or_eps == ks[i]);
        CHECK(!r.flagged);
        CHECK(std::abs(r.value - refs[i]) / refs[i] <= 1e-4);
        CHECK(std::abs(r.denominator - dens[i]) / dens[i] <= 1e-3);
        values.push_back(r.value);
        denominators.push_back(r.denominator);
    }
    for (int i = 1; i < 4; ++i) CHECK(values[i] < values[i - 1]);
    for (double v : values) CHECK(v >= 0.25 - 1e-3);
    // The denominator grows linearly in log k: per-decade increments agree.
    const double d1 = denominators[1] - denominators[0];
    const double d2 = denominators[2] - denominators[1];
    const double d3 = denominators[3] - denominators[2];
    CHECK(std::abs(d2 / d1 - 1.0) <= 0.15);
    CHECK(std::abs(d3 / d2 - 1.0) <= 0.15);
}

TEST_CASE("second-stage quotient frozen values and exact offset") {
    AlphaVector a0{{0.0, 0.0, 0.0}};
    auto r100 = quotient_general(2, a0, kNoCutoff, 1e2, kRes);
    auto r1000 = quotient_general(2, a0, kNoCutoff, 1e3, kRes);
    CHECK(std::abs(r100.value - 0.726448) / 0.726448 <= 1e-4);
    CHECK(std::abs(r1000.value - 0.546816) / 0.546816 <= 1e-4);
    CHECK(r1000.value < r100.value);
    CHECK(!r100.flagged);

    // Shifting the leading generator entry from 0 to -1/2 raises the quotient
    // by exactly (1 - 1/4) = 3/4: the families coincide, only the subtracted
    // coefficient and the target change.
    AlphaVector ah{{-0.5, 0.0, 0.0}};
    auto h1000 = quotient_general(2, ah, kNoCutoff, 1e3, kRes);
    CHECK(h1000.value - r1000.value == doctest::Approx(0.75).epsilon(2e-3));
}

TEST_CASE("substituted and direct quotient routes agree at finite inner cutoff") {
    AlphaVector a0{{0.0, 0.0, 0.0}};
    auto sub = quotient_general(2, a0, 1e4, 1e2, kRes);
    auto dir = quotient_general_direct(2, a0, 1e4, 1e2, kRes);
    CHECK(std::abs(sub.value - dir.value) / sub.value <= 1e-3);
}

TEST_CASE("critical-norm quotient schedule reproduces the frozen values") {
    const double refs[4] = {7.693331, 6.042005, 4.770295, 3.776232};
    const double eps[4] = {0.2, 0.1, 0.05, 0.025};
    AlphaVector a0{{0.0, 0.0, 0.0}};
    std::vector<double> values;
    for (int i = 0; i < 4; ++i) {
        auto r = sobolev_null_quotient(a0, eps[i], kNoCutoff, kRes);
        CHECK(r.family == "sobolev-null");
        CHECK(!r.flagged);
        CHECK(std::abs(r.value - refs[i]) / refs[i] <= 1e-4);
        values.push_back(r.value);
    }
    for (int i = 1; i < 4; ++i) CHECK(values[i] < values[i - 1]);
    // log-log slope across the schedule: expected (n-2)/n = 1/3 for n = 3
    const double slope = std::log(values[0] / values[3]) / std::log(eps[0] / eps[3]);
    CHECK(slope == doctest::Approx(1.0 / 3.0).epsilon(0.36));  // 1/3 +- 0.12
}

TEST_CASE("subcritical companion quotient stays above a positive floor") {
    const double ref_first = 10.651021, ref_last = 9.027753;
    AlphaVector ac{{0.0, 0.0, -0.25}};
    auto first = sobolev_null_quotient(ac, 0.2, kNoCutoff, kRes);
    auto last = sobolev_null_quotient(ac, 0.025, kNoCutoff, kRes);
    CHECK(std::abs(first.value - ref_first) / ref_first <= 1e-4);
    CHECK(std::abs(last.value - ref_last) / ref_last <= 1e-4);
    CHECK(last.value / first.value >= 0.5);
}

TEST_CASE("quotients are dilation invariant") {
    BetaVector tail{{0.25, 0.25}};
    auto s1 = quotient_step1(tail, 1e3, kRes, 1.0);
    auto s2 = quotient_step1(tail, 1e3, kRes, 2.0);
    auto s05 = quotient_step1(tail, 1e3, kRes, 0.5);
    CHECK(std::abs(s2.value - s1.value) / s1.value <= 1e-12);
    CHECK(std::abs(s05.value - s1.value) / s1.value <= 1e-12);
}

TEST_CASE("two-resolution error estimates are small and recorded") {
    BetaVector tail{{0.25, 0.25}};
    auto r = quotient_step1(tail, 1e3, kRes);
    CHECK(r.error_estimate >= 0.0);
    CHECK(r.error_estimate < 5e-3);
    CHECK(r.resolution >= kRes.angular);
}
