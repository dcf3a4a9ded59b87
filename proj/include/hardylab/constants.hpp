#pragma once

#include <optional>
#include <vector>

// Parameter calculus for multi-term inverse-square potentials on the
// half-space: sum_m beta_m / |X_m|^2 with |X_m|^2 = x_1^2 + ... + x_m^2.
//
// A coefficient vector (beta_1..beta_n) is admissible exactly when it can be
// produced from a nonpositive generator vector (a_1..a_n) via
//
//   beta_1 = 1/4 - a_1^2,      beta_m = (a_{m-1} - 1/2)^2 - a_m^2  (m >= 2),
//
// and the generator can be recovered front-to-back by taking the nonpositive
// square root at each step.  Everything in this header is that recursion plus
// the derived quantities used elsewhere (ground-state exponents gamma, the
// weighted-Sobolev exponents sigma and their step constants c_l).

namespace hardylab {

struct AlphaVector {
    std::vector<double> v;  // generator entries a_1..a_n (canonical form: all <= 0)
};

struct BetaVector {
    std::vector<double> v;  // potential coefficients beta_1..beta_n
};

struct GammaVector {
    std::vector<double> v;  // ground-state exponents: phi = prod_m |X_m|^(-gamma_m)
};

struct SigmaVector {
    std::vector<double> v;  // weight exponents sigma_m = -(2(n-1)/(n-2)) gamma_m
};

// beta from a generator vector (any real entries; signs of a_m do not matter
// for the produced beta except through a_m^2 and (a_{m-1}-1/2)^2).
BetaVector alpha_to_beta(const AlphaVector& alpha);

// Canonical nonpositive representative generating the same beta.  The needed
// radicands are provably >= a_m^2, so this never fails on finite input.
AlphaVector normalize_alpha(const AlphaVector& alpha);

struct AdmissibilityResult {
    bool admissible = false;
    // Reconstructed nonpositive generator (present iff admissible).
    std::optional<AlphaVector> alpha;
    // 1-based index of the first failing recursion step; 0 when admissible.
    int failed_index = 0;
};

// Decide admissibility of beta by running the square-root recursion.
// Radicands within [-kRadicandSlack, 0) are treated as exact zeros so that
// boundary cases (beta on the admissibility surface) round-trip cleanly.
inline constexpr double kRadicandSlack = 1e-12;
AdmissibilityResult beta_admissible(const BetaVector& beta);

// gamma_1 = a_1 - 1/2, gamma_m = a_m - a_{m-1} + 1/2.
// Partial sums satisfy sum_{j<=m} gamma_j = a_m + (m-2)/2.
GammaVector gamma_from_alpha(const AlphaVector& alpha);

struct SigmaAndC {
    SigmaVector sigma;
    std::vector<double> c;          // c_l = |sigma_1 + ... + sigma_l + l - 1|
    std::vector<double> c_closed;   // same via (2(n-1)/(n-2))|a_l - (n-l)/(2(n-1))|
    // Degenerate-step condition for the weighted L^1 -> L^1 chain:
    // every l with sigma_l != 0 must have c_l != 0.
    bool step_constants_usable = true;
};

// Weight exponents for the L^1 machinery in ambient dimension n >= 3.
// gamma may have length k <= n.  c is computed both from the sigma partial
// sums and from a closed form in the generator entries (recovered from the
// gamma partial sums); the two are required to agree to 1e-12 relative.
SigmaAndC sigma_and_c(const GammaVector& gamma, int n);

// Strict-subcriticality flag: canonical a_n < 0, i.e. beta_n strictly below
// its cap.  This is the condition under which a Sobolev remainder exists.
bool sobolev_remainder(const AlphaVector& alpha);

enum class Preset {
    // a_m = -m/2 for m < k, 0 for m >= k: beta = (0,..,0, k^2/4, 1/4,..,1/4).
    Corner,
    // all a_m = 0: beta = (1/4, 1/4, ..., 1/4).
    AllQuarter,
    // a_m = 0 through position k, then a_{k+l} = -(l-1)/2: every beta_m
    // with m >= k+2 vanishes (beta = 1/4 through position min(k+1, n)).
    TrailingZero,
};

// Named generator families (k is ignored for AllQuarter).
AlphaVector preset(Preset kind, int k, int n);

}  // namespace hardylab
