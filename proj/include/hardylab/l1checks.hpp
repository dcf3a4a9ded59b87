#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hardylab/constants.hpp"
#include "hardylab/fields.hpp"

// Quadrature spot-checks of the weighted L1 machinery: the divergence-theorem
// inequality |int div F |v|| <= int |F||grad v|, the chained step inequalities
// with constants c_l, and the weighted L1 hypothesis that controls whether a
// Sobolev remainder can be added to the L2 inequality.
//
// Sample functions are closed-form products of one-axis bump profiles
// (optionally times a Gaussian and a sign-changing linear factor), so |v| and
// |grad v| are evaluated exactly rather than differenced.

namespace hardylab::l1 {

struct SampleFunction {
    std::string name;
    int n = 3;
    double amp = 1.0;
    // per-axis bump factor b(|x_d - center_d| / width_d)
    std::vector<double> center, width;
    // optional factor exp(-sum a_d (x_d - gauss_c_d)^2); empty = absent
    std::vector<double> gauss_a, gauss_c;
    // optional factor (x_axis - shift): makes the sample change sign
    int linear_axis = -1;
    double linear_shift = 0.0;

    // support box per axis: [center_d - width_d, center_d + width_d]
    double support_lo(int d) const { return center[d] - width[d]; }
    double support_hi(int d) const { return center[d] + width[d]; }
};

struct SampleValue {
    double v = 0.0;
    std::vector<double> grad;
};
SampleValue eval_sample(const SampleFunction& s, std::span<const double> x);

// Fixed library: `deterministic` hand-picked members (member 0 is the zero
// function; members 1..3 are pinned by unit tests) followed by `random`
// seeded draws.  All supports lie strictly inside the box of half-width
// `box_half` and keep the first `positive_axes` coordinates positive, so
// every field used by the checks is smooth on every support.
std::vector<SampleFunction> make_sample_library(int n, std::uint32_t seed,
                                                int deterministic = 20, int random = 180,
                                                int positive_axes = 1, double box_half = 4.0);

struct CheckResult {
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;    // lhs / rhs, 0 when skipped
    bool skipped = false;  // zero sample, or sigma_l = 0 step
    int resolution = 0;    // Gauss points per axis
    double slack() const { return rhs - lhs; }
};

// F = (prod_{j<l} |X_j|^(sigma_j)) |X_l|^(sigma_l - 1) X_l; for l = 1 this is
// the single-component field (x_1^(sigma_1), 0, ..., 0).
struct StepField {
    int l = 1;
    std::vector<double> sigma;  // sigma_1..sigma_l
};

// Divergence constant of the step field: div F = s_l W |X_l|^(sigma_l - 1)
// with s_l = sigma_1 + ... + sigma_l + l - 1; the step constant is |s_l|.
double step_divergence_sum(const StepField& f);

CheckResult div_ineq_check(const StepField& f, const SampleFunction& v, int rule);
CheckResult div_ineq_check(const fields::FieldSpec& spec, const SampleFunction& v, int rule);

// c_l-weighted step inequality
//   c_l int W |X_l|^(sigma_l-1) |v| <= int W |X_l|^(sigma_l) |grad v|,
// W = prod_{j<l} |X_j|^(sigma_j).  Returns lhs already multiplied by c_l.
// sigma_l = 0 -> skipped; c_l = 0 with sigma_l != 0 is the degenerate-step
// boundary and is refused (std::domain_error).
CheckResult step_inequality_check(int l, const SigmaVector& sigma, const SampleFunction& v,
                                  int rule);

// Weighted L1 hypothesis for the ground-state weight (n >= 3):
//   lhs = int phi^(n/(n-2)) |grad phi| |v|,  rhs = int phi^(2(n-1)/(n-2)) |grad v|.
// The reported ratio over a library estimates the reciprocal of the best
// constant; an unbounded ratio along concentrating sequences means no
// Sobolev remainder exists.
CheckResult thmC_hypothesis_check(const fields::FieldSpec& spec, const SampleFunction& v,
                                  int rule);

// Ratio sequence for radial shells concentrating at the origin: member j is
// supported on |x| in [R 4^(-j-1)/2, R] intersected with a fixed wedge away
// from the boundary plane.  Growing ratios expose the critical case
// (canonical a_n = 0); bounded ratios accompany a_n < 0.  n = 3 only.
std::vector<double> thmC_concentration_ratios(const AlphaVector& alpha, int count,
                                              double R = 1.0, int radial_points = 40,
                                              int angular_points = 40);

}  // namespace hardylab::l1
