#include "hardylab/constants.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hardylab {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty vector");
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
}

// Compensated double-double helpers for the square-root recursion.  The
// reconstructed generator entry a_m feeds the next radicand through
// (a_m - 1/2)^2, which amplifies any rounding by |a_{m-1} - 1/2| / |a_m|, so
// the recursion state is carried with a trailing error term and rounded to a
// plain double only at the output.  (Knuth two_sum / fma two_prod.)

struct DD {
    double hi = 0.0, lo = 0.0;
};

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD dd_add(const DD& a, const DD& b) {
    DD s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return two_sum(s.hi, s.lo);
}

DD dd_sqr(const DD& a) {
    const double p = a.hi * a.hi;
    DD r{p, std::fma(a.hi, a.hi, -p) + 2.0 * a.hi * a.lo};
    return two_sum(r.hi, r.lo);
}

DD dd_neg(const DD& a) { return {-a.hi, -a.lo}; }

DD dd_sqrt(const DD& a) {  // a >= 0; one Newton correction on sqrt(hi)
    if (a.hi <= 0.0) return {0.0, 0.0};
    const double s = std::sqrt(a.hi);
    const double err = (std::fma(-s, s, a.hi) + a.lo) / (2.0 * s);
    return two_sum(s, err);
}

const DD kHalf{0.5, 0.0};

}  // namespace

BetaVector alpha_to_beta(const AlphaVector& alpha) {
    require_finite(alpha.v, "alpha_to_beta");
    const auto& a = alpha.v;
    BetaVector beta;
    beta.v.resize(a.size());
    beta.v[0] = 0.25 - a[0] * a[0];
    for (std::size_t m = 1; m < a.size(); ++m) {
        const double t = a[m - 1] - 0.5;
        beta.v[m] = t * t - a[m] * a[m];
    }
    return beta;
}

AlphaVector normalize_alpha(const AlphaVector& alpha) {
    require_finite(alpha.v, "normalize_alpha");
    const auto& a = alpha.v;
    AlphaVector out;
    out.v.resize(a.size());
    out.v[0] = -std::fabs(a[0]);
    DD carry{out.v[0], 0.0};  // canonical entry with its sub-ulp error term
    for (std::size_t m = 1; m < a.size(); ++m) {
        // radicand = (a'_{m-1} - 1/2)^2 - beta_m = a_m^2 + [(a'_{m-1}-1/2)^2 - (a_{m-1}-1/2)^2]
        // and |a'_{m-1} - 1/2| >= |a_{m-1} - 1/2| by induction, so this is >= a_m^2 >= 0
        // up to roundoff.
        const DD cap = dd_sqr(dd_add(carry, dd_neg(kHalf)));
        const DD t2 = dd_sqr(dd_add(DD{a[m - 1], 0.0}, dd_neg(kHalf)));
        const DD am2 = dd_sqr(DD{a[m], 0.0});
        DD rad = dd_add(dd_add(cap, dd_neg(t2)), am2);
        assert(rad.hi >= -kRadicandSlack);
        if (rad.hi <= 0.0) rad = DD{0.0, 0.0};
        const DD root = dd_sqrt(rad);
        out.v[m] = -root.hi;
        carry = dd_neg(root);
    }
    return out;
}

AdmissibilityResult beta_admissible(const BetaVector& beta) {
    require_finite(beta.v, "beta_admissible");
    AdmissibilityResult res;
    AlphaVector alpha;
    alpha.v.resize(beta.v.size());
    DD prev_shifted{-0.5, 0.0};  // a_0 - 1/2 with the convention a_0 "=" 0
    for (std::size_t m = 0; m < beta.v.size(); ++m) {
        const DD cap = dd_sqr(prev_shifted);  // (a_{m-1} - 1/2)^2, equals 1/4 at m=0
        DD rad = dd_add(cap, DD{-beta.v[m], 0.0});
        if (rad.hi < -kRadicandSlack) {
            res.admissible = false;
            res.failed_index = static_cast<int>(m) + 1;
            return res;
        }
        if (rad.hi <= 0.0) rad = DD{0.0, 0.0};
        const DD root = dd_sqrt(rad);
        alpha.v[m] = -root.hi;
        prev_shifted = dd_add(dd_neg(root), dd_neg(kHalf));
    }
    res.admissible = true;
    res.alpha = std::move(alpha);
    res.failed_index = 0;
    return res;
}

GammaVector gamma_from_alpha(const AlphaVector& alpha) {
    require_finite(alpha.v, "gamma_from_alpha");
    const auto& a = alpha.v;
    GammaVector g;
    g.v.resize(a.size());
    g.v[0] = a[0] - 0.5;
    for (std::size_t m = 1; m < a.size(); ++m) g.v[m] = a[m] - a[m - 1] + 0.5;
    return g;
}

SigmaAndC sigma_and_c(const GammaVector& gamma, int n) {
    require_finite(gamma.v, "sigma_and_c");
    if (n < 3) throw std::invalid_argument("sigma_and_c: ambient dimension must be >= 3");
    if (gamma.v.size() > static_cast<std::size_t>(n))
        throw std::invalid_argument("sigma_and_c: weight vector longer than ambient dimension");

    const double q = 2.0 * (n - 1) / (n - 2.0);

    SigmaAndC out;
    out.sigma.v.resize(gamma.v.size());
    out.c.resize(gamma.v.size());
    out.c_closed.resize(gamma.v.size());
    double run = 0.0;        // sigma_1 + ... + sigma_l
    double gamma_sum = 0.0;  // gamma_1 + ... + gamma_l, recovers a_l
    for (std::size_t l = 0; l < gamma.v.size(); ++l) {
        out.sigma.v[l] = -q * gamma.v[l];
        run += out.sigma.v[l];
        gamma_sum += gamma.v[l];
        // |sigma_1+..+sigma_l + (l-1)| with l 1-based.
        out.c[l] = std::fabs(run + static_cast<double>(l));
        // Generator entry from the partial-sum identity
        // gamma_1+..+gamma_l = a_l + (l-2)/2, then the closed form.
        const double a_l = gamma_sum - 0.5 * (static_cast<double>(l) + 1.0 - 2.0);
        const double l1 = static_cast<double>(l) + 1.0;
        out.c_closed[l] = q * std::fabs(a_l - (n - l1) / (2.0 * (n - 1.0)));
        if (std::fabs(out.c[l] - out.c_closed[l]) >
            1e-12 * std::max(1.0, std::fabs(out.c[l])))
            throw std::logic_error("sigma_and_c: definitional and closed-form c_l disagree");
        if (std::fabs(out.sigma.v[l]) > 1e-14 && out.c[l] <= 1e-12) out.step_constants_usable = false;
    }
    return out;
}

bool sobolev_remainder(const AlphaVector& alpha) {
    return normalize_alpha(alpha).v.back() < 0.0;
}

AlphaVector preset(Preset kind, int k, int n) {
    if (n < 1) throw std::invalid_argument("preset: n must be >= 1");
    AlphaVector a;
    a.v.assign(static_cast<std::size_t>(n), 0.0);
    switch (kind) {
        case Preset::AllQuarter:
            break;
        case Preset::Corner: {
            if (k < 1 || k > n) throw std::invalid_argument("preset: Corner needs 1 <= k <= n");
            for (int m = 1; m < k; ++m) a.v[m - 1] = -0.5 * m;
            break;
        }
        case Preset::TrailingZero: {
            if (k < 1 || k > n) throw std::invalid_argument("preset: TrailingZero needs 1 <= k <= n");
            for (int l = 1; k + l <= n; ++l) a.v[k + l - 1] = -0.5 * (l - 1);
            break;
        }
    }
    return a;
}

}  // namespace hardylab
