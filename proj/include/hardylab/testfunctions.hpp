#pragma once

#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardylab/constants.hpp"

namespace hardylab::testfn {

// ---------------------------------------------------------------------------
// Smooth building blocks
// ---------------------------------------------------------------------------

// Logarithmic cutoff ramp with scale k > 1:
//
//   h(t) = 0                     for t < 1/k^2
//   h(t) = 1 + ln(k t) / ln(k)   for 1/k^2 <= t <= 1/k
//   h(t) = 1                     for t > 1/k
//
// Returns (value, derivative).  The derivative is 1/(t ln k) inside the
// transition band and 0 outside; at the two kink points the band-side
// derivative is returned so that h' * t integrals over the closed band are
// well defined.  Throws std::invalid_argument for k <= 1 or t < 0.
std::pair<double, double> eval_cutoff(double k, double t);

// Radial bump profile: 1 on [0, 1/2], 0 on [1, inf), and a C-infinity
// monotone transition on (1/2, 1) built from the standard exp(-1/t)
// mollifier ratio.  bump_deriv is the closed-form derivative (identically
// zero on both plateaus, including all higher-order contact at the ends).
double bump(double r);
double bump_deriv(double r);

// ---------------------------------------------------------------------------
// Test functions: products of factors, each a function of one prefix radius
// ---------------------------------------------------------------------------
//
// Every member of the sharpness families has the form
//
//   u(x) = prod_t f_t(|X_{m_t}|),   |X_m|^2 = x_1^2 + ... + x_m^2,
//
// where each factor is a pure power, a logarithmic cutoff, or the radial
// bump.  Because grad |X_m| = X_m/|X_m| and X_a . X_b = |X_min(a,b)|^2, the
// squared gradient of such a product depends on the prefix radii alone:
//
//   |grad u|^2 = sum_{t,s} c_t c_s |X_min(m_t,m_s)|^2 / (|X_{m_t}| |X_{m_s}|)
//
// with c_t = f_t' * prod_{s != t} f_s.  All quadrature below works directly
// in polar coordinates adapted to the prefix radii; no Cartesian grid is
// ever constructed.

struct Factor {
    enum class Kind { Power, Cutoff, Bump };
    Kind kind = Kind::Power;
    int m = 1;       // prefix index; the factor's argument is rho_m = |X_m|
    double p = 0.0;  // Power: exponent
    double k = 0.0;  // Cutoff: scale (> 1)
};

struct TestFunction {
    int n = 0;           // ambient dimension
    double scale = 1.0;  // the member evaluated is x -> u(scale * x)
    std::vector<Factor> factors;
};

// Marker for "no inner cutoff": the k1 -> infinity limit is realized
// analytically (the cutoff factor is dropped and the radial domain keeps a
// positive lower edge supplied by the surviving cutoff or by the integrand's
// own decay).
inline constexpr double kNoCutoff = std::numeric_limits<double>::infinity();

// First-stage family on the half-space: u = x_1^(1/2) h_{k1}(x_1) bump(|x|).
TestFunction step1_function(int n, double k1, double scale = 1.0);

// General-stage family for the q-th prefix weight.  With gamma derived from
// alpha, the full member is
//
//   u = prod_{j<q} |X_j|^(-gamma_j) * |X_q|^(alpha_{q-1} - 1/2)
//       * h_{k1}(x_1) * h_{kq}(|X_q|) * bump(|x|).
//
// substituted = true drops the leading power product (the weighted form
// carries those powers as an explicit integrand weight instead).
TestFunction general_q_function(int q, const AlphaVector& alpha,
                                double k1, double kq, bool substituted,
                                double scale = 1.0);

// Critical-norm family: v = |x|^(-gamma_n + eps) h_{k1}(x_1) bump(|x|).
TestFunction sobolev_null_function(const AlphaVector& alpha,
                                   double eps, double k1, double scale = 1.0);

struct FamilyPoint {
    double value = 0.0;
    std::vector<double> grad;
};

// Pointwise value and closed-form gradient at a Cartesian point with
// x_1 > 0 (used for finite-difference cross-checks).
FamilyPoint eval_test_function(const TestFunction& tf, std::span<const double> x);

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

struct Resolution {
    int angular = 48;  // Gauss points per angular axis
    int radial = 32;   // Gauss points per radial log piece
    int workers = 1;   // quadrature threads (deterministic at any count)
};

// Cheap self-check of the quadrature primitives behind the quotients: an
// angular sin-power rule and a logarithmic radial rule are built at the
// requested resolution and compared against closed forms.  Throws
// std::runtime_error on failure.  Called by every quotient evaluation.
void check_quadrature_exactness(const Resolution& res);

struct QuotientReport {
    std::string family;         // "step1", "general-q", "general-q-direct",
                                // "sobolev-null"
    int q = 1;                  // denominator prefix index
    int n = 0;                  // ambient dimension
    std::vector<double> alpha;  // generator parameters behind the member
    double k_or_eps = 0.0;      // schedule entry (cutoff scale or eps)
    double numerator = 0.0;
    double denominator = 0.0;
    double value = 0.0;         // numerator / denominator
    double tail = 0.0;          // subtracted potential-tail part of numerator
    int resolution = 0;         // angular points of the accepted evaluation
    double error_estimate = 0.0;// |refined - coarse| / |refined|
    bool flagged = false;       // error_estimate > 0.5e-2: do not trust silently
    double scale = 1.0;         // test-function dilation used
    double k1 = kNoCutoff;      // inner cutoff scale actually applied
};

// Quotient with denominator weight 1/x_1^2:
//
//   ( int |grad u|^2 - sum_{i=2}^n beta_tail_i int u^2/|X_i|^2 ) /
//     int u^2/x_1^2
//
// on u = step1_function(n, k1).  beta_tail holds the n-1 subtracted
// coefficients for prefix indices 2..n (so n = beta_tail.size() + 1).
QuotientReport quotient_step1(const BetaVector& beta_tail, double k1,
                              const Resolution& res, double scale = 1.0);

// Quotient with denominator weight 1/|X_q|^2 in substituted (weighted) form:
// the power product prod_{j<q}|X_j|^(-2 gamma_j) is carried as an integrand
// weight w, and
//
//   ( int w |grad v|^2 - sum_{i>q} beta_i int w v^2/|X_i|^2 ) /
//     int w v^2/|X_q|^2
//
// on v = general_q_function(q, alpha, k1, kq, substituted = true).  alpha
// must have n >= q entries: the leading q-1 entries shape the member, the
// rest supply the subtracted tail coefficients through the beta recursion.
// k1 may be kNoCutoff (the analytic inner limit, the production path) or a
// finite scale.
QuotientReport quotient_general(int q, const AlphaVector& alpha,
                                double k1, double kq, const Resolution& res,
                                double scale = 1.0);

// The same quotient evaluated without the substitution: the member carries
// its own powers, the weight is 1, and every beta_i with i != q is
// subtracted.  Requires finite k1 (the unsubstituted gradient integral needs
// the inner cutoff's support control).  Equality with quotient_general is an
// exact integration-by-parts identity; evaluating both records it instead of
// assuming it.
QuotientReport quotient_general_direct(int q, const AlphaVector& alpha,
                                       double k1, double kq, const Resolution& res,
                                       double scale = 1.0);

// Critical-norm quotient for the last prefix index:
//
//   N / D,  N = int w |grad v|^2 - beta_n int w v^2/|x|^2,
//           D = ( int w^(n/(n-2)) |v|^(2n/(n-2)) )^((n-2)/n),
//
// with w = prod_{j<n}|X_j|^(-2 gamma_j) and v = sobolev_null_function.
// Requires n >= 3 and eps in (0, 1/2].
QuotientReport sobolev_null_quotient(const AlphaVector& alpha,
                                     double eps, double k1, const Resolution& res,
                                     double scale = 1.0);

}  // namespace hardylab::testfn
