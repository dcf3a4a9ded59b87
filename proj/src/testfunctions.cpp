#include "hardylab/testfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "hardylab/quadrature.hpp"

namespace hardylab::testfn {

namespace {

double psi(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

}  // namespace

std::pair<double, double> eval_cutoff(double k, double t) {
    if (!(k > 1.0)) throw std::invalid_argument("eval_cutoff: scale must exceed 1");
    if (!(t >= 0.0)) throw std::invalid_argument("eval_cutoff: argument must be nonnegative");
    const double lo = 1.0 / (k * k);
    const double hi = 1.0 / k;
    if (t < lo) return {0.0, 0.0};
    if (t > hi) return {1.0, 0.0};
    const double lnk = std::log(k);
    // Band formula; at the closed band ends this yields exactly 0 and 1, and
    // the derivative reported there is the band-side one.
    return {1.0 + std::log(k * t) / lnk, 1.0 / (t * lnk)};
}

double bump(double r) {
    if (r <= 0.5) return 1.0;
    if (r >= 1.0) return 0.0;
    const double s = 2.0 * r - 1.0;  // transition variable in (0, 1)
    const double a = psi(1.0 - s);
    const double b = psi(s);
    return a / (a + b);
}

double bump_deriv(double r) {
    if (r <= 0.5 || r >= 1.0) return 0.0;
    const double s = 2.0 * r - 1.0;
    const double u = 1.0 - s;
    const double a = psi(u);
    const double b = psi(s);
    // d/ds of a/(a+b) is -a b (s^-2 + u^-2) / (a+b)^2; the factor 2 is the
    // chain rule of s = 2r - 1.  Grouped so the small mollifier values damp
    // the large reciprocals before they can overflow.
    const double frac = (a / (a + b)) * (b / (a + b));
    return -2.0 * frac * (1.0 / (s * s) + 1.0 / (u * u));
}

// ---------------------------------------------------------------------------
// Family builders
// ---------------------------------------------------------------------------

TestFunction step1_function(int n, double k1, double scale) {
    if (n < 2) throw std::invalid_argument("step1_function: need n >= 2");
    if (!(k1 > 1.0) || std::isinf(k1))
        throw std::invalid_argument("step1_function: need finite k1 > 1");
    if (!(scale > 0.0)) throw std::invalid_argument("step1_function: scale must be positive");
    TestFunction tf;
    tf.n = n;
    tf.scale = scale;
    tf.factors.push_back({Factor::Kind::Power, 1, 0.5, 0.0});
    tf.factors.push_back({Factor::Kind::Cutoff, 1, 0.0, k1});
    tf.factors.push_back({Factor::Kind::Bump, n, 0.0, 0.0});
    return tf;
}

TestFunction general_q_function(int q, const AlphaVector& alpha,
                                double k1, double kq, bool substituted,
                                double scale) {
    const int n = static_cast<int>(alpha.v.size());
    if (q < 2 || q > n) throw std::invalid_argument("general_q_function: need 2 <= q <= n");
    if (!(kq > 1.0) || std::isinf(kq))
        throw std::invalid_argument("general_q_function: need finite kq > 1");
    if (!std::isinf(k1) && !(k1 > 1.0))
        throw std::invalid_argument("general_q_function: k1 must exceed 1 or be kNoCutoff");
    if (!(scale > 0.0)) throw std::invalid_argument("general_q_function: scale must be positive");
    const GammaVector gamma = gamma_from_alpha(alpha);
    TestFunction tf;
    tf.n = n;
    tf.scale = scale;
    if (!substituted)
        for (int j = 1; j < q; ++j)
            tf.factors.push_back({Factor::Kind::Power, j, -gamma.v[j - 1], 0.0});
    tf.factors.push_back({Factor::Kind::Power, q, alpha.v[q - 2] - 0.5, 0.0});
    if (!std::isinf(k1)) tf.factors.push_back({Factor::Kind::Cutoff, 1, 0.0, k1});
    tf.factors.push_back({Factor::Kind::Cutoff, q, 0.0, kq});
    tf.factors.push_back({Factor::Kind::Bump, n, 0.0, 0.0});
    return tf;
}

TestFunction sobolev_null_function(const AlphaVector& alpha,
                                   double eps, double k1, double scale) {
    const int n = static_cast<int>(alpha.v.size());
    if (n < 3) throw std::invalid_argument("sobolev_null_function: need n >= 3");
    if (!(eps > 0.0) || eps > 0.5)
        throw std::invalid_argument("sobolev_null_function: need eps in (0, 1/2]");
    if (!std::isinf(k1) && !(k1 > 1.0))
        throw std::invalid_argument("sobolev_null_function: k1 must exceed 1 or be kNoCutoff");
    if (!(scale > 0.0)) throw std::invalid_argument("sobolev_null_function: scale must be positive");
    const GammaVector gamma = gamma_from_alpha(alpha);
    TestFunction tf;
    tf.n = n;
    tf.scale = scale;
    tf.factors.push_back({Factor::Kind::Power, n, -gamma.v[n - 1] + eps, 0.0});
    if (!std::isinf(k1)) tf.factors.push_back({Factor::Kind::Cutoff, 1, 0.0, k1});
    tf.factors.push_back({Factor::Kind::Bump, n, 0.0, 0.0});
    return tf;
}

// ---------------------------------------------------------------------------
// Factor evaluation over prefix radii
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxFactors = 8;

// Per-factor value and derivative at the scaled argument a = scale * rho_m;
// the chain-rule factor `scale` is folded into the coefficient later.
inline void eval_factor(const Factor& f, double a, double& val, double& der) {
    switch (f.kind) {
        case Factor::Kind::Power:
            val = std::pow(a, f.p);
            der = a > 0.0 ? f.p * val / a : 0.0;
            return;
        case Factor::Kind::Cutoff: {
            const auto [v, d] = eval_cutoff(f.k, a);
            val = v;
            der = d;
            return;
        }
        case Factor::Kind::Bump:
            val = bump(a);
            der = bump_deriv(a);
            return;
    }
    val = 0.0;
    der = 0.0;
}

// Product value and the gradient coefficients c_t = scale * f_t' *
// prod_{s != t} f_s, computed without dividing by factor values (cutoff and
// bump vanish on parts of the domain).
struct ProductEval {
    double u = 0.0;
    std::size_t count = 0;
    double coeff[kMaxFactors];   // c_t
    double rho_f[kMaxFactors];   // rho_{m_t}
    int midx[kMaxFactors];       // m_t
};

inline void eval_product(const TestFunction& tf, std::span<const double> rho,
                         ProductEval& out) {
    const std::size_t T = tf.factors.size();
    double val[kMaxFactors];
    double der[kMaxFactors];
    for (std::size_t t = 0; t < T; ++t) {
        const Factor& f = tf.factors[t];
        const double r = rho[static_cast<std::size_t>(f.m) - 1];
        eval_factor(f, tf.scale * r, val[t], der[t]);
        out.rho_f[t] = r;
        out.midx[t] = f.m;
    }
    double pre[kMaxFactors + 1];
    double suf[kMaxFactors + 1];
    pre[0] = 1.0;
    for (std::size_t t = 0; t < T; ++t) pre[t + 1] = pre[t] * val[t];
    suf[T] = 1.0;
    for (std::size_t t = T; t > 0; --t) suf[t - 1] = suf[t] * val[t - 1];
    out.u = pre[T];
    out.count = T;
    for (std::size_t t = 0; t < T; ++t)
        out.coeff[t] = tf.scale * der[t] * pre[t] * suf[t + 1];
}

// |grad u|^2 from the coefficients: X_a . X_b = |X_min(a,b)|^2.
inline double grad_sq(const ProductEval& pe) {
    double g = 0.0;
    for (std::size_t t = 0; t < pe.count; ++t) {
        g += pe.coeff[t] * pe.coeff[t];
        for (std::size_t s = t + 1; s < pe.count; ++s) {
            const double rmin = pe.midx[t] < pe.midx[s] ? pe.rho_f[t] : pe.rho_f[s];
            g += 2.0 * pe.coeff[t] * pe.coeff[s] * (rmin * rmin) /
                 (pe.rho_f[t] * pe.rho_f[s]);
        }
    }
    return g;
}

struct PowerTerm {
    int m;
    double e;
};

// Everything the quadrature needs to produce the functionals of one family
// member: the member itself, a fixed power weight, the list of potential
// indices, and optionally the critical-norm integrand.
struct IntegrandSpec {
    TestFunction tf;
    std::vector<PowerTerm> weight;  // w = prod rho_m^e (fixed, not dilated)
    std::vector<int> pot_idx;       // emit int w u^2 / rho_i^2 for these i
    bool critical = false;
    double crit_wexp = 0.0;  // w^crit_wexp ...
    double crit_uexp = 0.0;  // ... * |u|^crit_uexp
};

struct Functionals {
    double grad = 0.0;        // int w |grad u|^2
    std::vector<double> pot;  // aligned with pot_idx
    double crit = 0.0;
};

// Net exponent of r in each output when only the power factors act (the
// small-radius regime).  Used to pick a radial lower edge for members with
// no cutoff: deep enough that the discarded mass is negligible, shallow
// enough that no intermediate power overflows.
double radial_floor(const IntegrandSpec& S) {
    double P = 0.0;
    for (const Factor& f : S.tf.factors)
        if (f.kind == Factor::Kind::Power) P += f.p;
    double W = 0.0;
    for (const PowerTerm& w : S.weight) W += w.e;
    const double base = static_cast<double>(S.tf.n - 1) + W;
    double mu = base + 2.0 * (P - 1.0) + 1.0;  // gradient output
    double amax = std::abs(base + 2.0 * (P - 1.0));
    if (!S.pot_idx.empty()) {
        const double a = base + 2.0 * P - 2.0;
        mu = std::min(mu, a + 1.0);
        amax = std::max(amax, std::abs(a));
    }
    if (S.critical) {
        const double a = static_cast<double>(S.tf.n - 1) + S.crit_wexp * W + S.crit_uexp * P;
        mu = std::min(mu, a + 1.0);
        amax = std::max(amax, std::abs(a));
    }
    if (mu <= 1e-9)
        throw std::runtime_error("quotient: radial integral does not converge at the origin");
    const double efolds = std::min(38.0 / mu, 620.0 / std::max(1.0, amax + 2.0));
    return std::exp(-efolds) / S.tf.scale;
}

constexpr double kMaxEfoldsPerPiece = 12.0;

// Radial pieces for one angular node: the domain (r_lo, 1/scale) split at
// every radius where some factor changes branch (cutoff band edges, bump
// plateau edge), each span log-mapped and subdivided to a bounded number of
// e-folds.  Below r_lo the member vanishes identically (cutoff) or carries
// negligible mass (power floor).
std::vector<quad::Piece> radial_pieces(const IntegrandSpec& S, double floor_r,
                                       int points, std::span<const double> s) {
    const double lam = S.tf.scale;
    const double r_hi = 1.0 / lam;
    double r_lo = floor_r;
    std::vector<double> bps;
    for (const Factor& f : S.tf.factors) {
        if (f.kind == Factor::Kind::Cutoff) {
            const double sm = s[static_cast<std::size_t>(f.m) - 1];
            r_lo = std::max(r_lo, 1.0 / (lam * f.k * f.k * sm));
            bps.push_back(1.0 / (lam * f.k * sm));
        } else if (f.kind == Factor::Kind::Bump) {
            bps.push_back(0.5 / lam);
        }
    }
    if (!(r_lo > 0.0))
        throw std::logic_error("radial_pieces: no positive lower edge");
    if (!(r_lo < r_hi)) return {};
    std::sort(bps.begin(), bps.end());
    std::vector<double> edges;
    edges.push_back(r_lo);
    for (double b : bps)
        if (b > edges.back() * (1.0 + 1e-12) && b < r_hi * (1.0 - 1e-12))
            edges.push_back(b);
    edges.push_back(r_hi);
    std::vector<quad::Piece> pieces;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        const double span = std::log(b / a);
        const int nsplit = std::max(1, static_cast<int>(std::ceil(span / kMaxEfoldsPerPiece)));
        for (int j = 0; j < nsplit; ++j) {
            const double ra = a * std::exp(span * j / nsplit);
            const double rb = (j + 1 == nsplit) ? b : a * std::exp(span * (j + 1) / nsplit);
            pieces.push_back({ra, rb, quad::Map::Log, points});
        }
    }
    return pieces;
}

// Angular axis pieces.  Every integrand here depends on theta_j only through
// sin(theta_j) (prefix radii and the polar measure are sine products), so the
// axis is symmetric about pi/2: integrate (0, pi/2] and double.  The small-
// angle end carries logarithmically spread mass whenever a cutoff confines a
// prefix radius to [1/k^2, ...] -- linear nodes cannot resolve sin(theta)
// down to 1/k^2, log-mapped pieces can.
std::vector<quad::Piece> angular_pieces(double tmin, int linear_points) {
    constexpr double kSplit = 0.4;
    const int plog = std::max(12, linear_points / 3);
    std::vector<quad::Piece> ps;
    if (tmin < kSplit) {
        const double span = std::log(kSplit / tmin);
        const int nsplit = std::max(1, static_cast<int>(std::ceil(span / 8.0)));
        for (int j = 0; j < nsplit; ++j) {
            const double a = tmin * std::exp(span * j / nsplit);
            const double b = (j + 1 == nsplit) ? kSplit : tmin * std::exp(span * (j + 1) / nsplit);
            ps.push_back({a, b, quad::Map::Log, plog});
        }
    }
    ps.push_back({std::min(kSplit, std::numbers::pi / 2.0), std::numbers::pi / 2.0,
                  quad::Map::Linear, linear_points});
    return ps;
}

Functionals integrate_member(const IntegrandSpec& S, const Resolution& res) {
    const int n = S.tf.n;
    bool has_cutoff = false;
    double tmin = 1e-10;
    for (const Factor& f : S.tf.factors)
        if (f.kind == Factor::Kind::Cutoff) {
            has_cutoff = true;
            tmin = std::min(tmin, 1.0 / (f.k * f.k));
        }
    tmin *= 0.5;
    const double floor_r = has_cutoff ? 0.0 : radial_floor(S);

    // Axes: theta_1 .. theta_{n-1} on (0, pi/2] (doubled through the measure),
    // then the radial axis whose pieces depend on the angular node through
    // the suffix sine products.
    std::vector<quad::AxisGenerator> axes;
    for (int j = 1; j < n; ++j)
        axes.push_back(quad::fixed_axis(angular_pieces(tmin, res.angular)));
    axes.push_back([&S, floor_r, n, points = res.radial](std::span<const double> th) {
        std::vector<double> s(static_cast<std::size_t>(n), 1.0);
        for (int m = n - 1; m >= 1; --m)
            s[m - 1] = s[m] * std::sin(th[m - 1]);
        return radial_pieces(S, floor_r, points, s);
    });

    const std::size_t n_out = 1 + S.pot_idx.size() + (S.critical ? 1 : 0);
    std::vector<double> result(n_out, 0.0);
    std::vector<double> rho(static_cast<std::size_t>(n), 0.0);
    std::vector<double> s(static_cast<std::size_t>(n), 1.0);
    ProductEval pe;

    // Shared scratch is only safe single-threaded; give each worker its own.
    auto integrand = [&S, n](std::span<const double> c, std::span<double> out,
                             std::vector<double>& rho_l, std::vector<double>& s_l,
                             ProductEval& pe_l) {
        const double r = c[static_cast<std::size_t>(n) - 1];
        s_l[n - 1] = 1.0;
        for (int m = n - 1; m >= 1; --m)
            s_l[m - 1] = s_l[m] * std::sin(c[m - 1]);
        for (int m = 1; m <= n; ++m)
            rho_l[m - 1] = r * s_l[m - 1];
        eval_product(S.tf, rho_l, pe_l);
        // Power weight in log space; the weight is part of the functional,
        // not of the member, so it is not dilated.
        double lw = 0.0;
        for (const PowerTerm& w : S.weight)
            lw += w.e * std::log(rho_l[static_cast<std::size_t>(w.m) - 1]);
        const double w = std::exp(lw);
        // Polar measure r^(n-1) prod_{j>=2} sin^(j-1) theta_j, times 2^(n-1)
        // for the half-axes (each theta axis covers (0, pi/2] only).
        double meas = std::pow(r, n - 1) * static_cast<double>(1 << (n - 1));
        for (int j = 2; j < n; ++j)
            meas *= std::pow(std::sin(c[j - 1]), j - 1);
        out[0] = meas * w * grad_sq(pe_l);
        std::size_t o = 1;
        const double u2 = pe_l.u * pe_l.u;
        for (int idx : S.pot_idx) {
            const double ri = rho_l[static_cast<std::size_t>(idx) - 1];
            out[o++] = meas * w * u2 / (ri * ri);
        }
        if (S.critical)
            out[o] = meas * std::exp(S.crit_wexp * lw) *
                     std::pow(std::abs(pe_l.u), S.crit_uexp);
    };

    if (res.workers <= 1) {
        quad::integrate_nested_multi(
            axes, static_cast<int>(n_out),
            [&](std::span<const double> c, std::span<double> out) {
                integrand(c, out, rho, s, pe);
            },
            result, 1);
    } else {
        quad::integrate_nested_multi(
            axes, static_cast<int>(n_out),
            [&](std::span<const double> c, std::span<double> out) {
                thread_local std::vector<double> rho_t;
                thread_local std::vector<double> s_t;
                thread_local ProductEval pe_t;
                if (rho_t.size() != static_cast<std::size_t>(n)) {
                    rho_t.resize(static_cast<std::size_t>(n));
                    s_t.resize(static_cast<std::size_t>(n));
                }
                integrand(c, out, rho_t, s_t, pe_t);
            },
            result, res.workers);
    }

    Functionals F;
    F.grad = result[0];
    F.pot.assign(result.begin() + 1, result.begin() + 1 + S.pot_idx.size());
    if (S.critical) F.crit = result[n_out - 1];
    return F;
}

}  // namespace

FamilyPoint eval_test_function(const TestFunction& tf, std::span<const double> x) {
    const int n = tf.n;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("eval_test_function: wrong point dimension");
    if (!(x[0] > 0.0))
        throw std::invalid_argument("eval_test_function: need x_1 > 0");
    std::vector<double> rho(static_cast<std::size_t>(n), 0.0);
    double sq = 0.0;
    for (int m = 1; m <= n; ++m) {
        sq += x[m - 1] * x[m - 1];
        rho[m - 1] = std::sqrt(sq);
    }
    ProductEval pe;
    eval_product(tf, rho, pe);
    FamilyPoint fp;
    fp.value = pe.u;
    fp.grad.assign(static_cast<std::size_t>(n), 0.0);
    for (std::size_t t = 0; t < pe.count; ++t) {
        const double c = pe.coeff[t] / pe.rho_f[t];
        for (int i = 0; i < pe.midx[t]; ++i) fp.grad[i] += c * x[i];
    }
    return fp;
}

// ---------------------------------------------------------------------------
// Quadrature self-check and the quotient drivers
// ---------------------------------------------------------------------------

void check_quadrature_exactness(const Resolution& res) {
    if (res.angular < 4 || res.radial < 4)
        throw std::invalid_argument("Resolution: need at least 4 points per axis");
    const quad::Rule1D ang = quad::build_rule(
        std::vector<quad::Piece>{{0.0, std::numbers::pi, quad::Map::Linear, res.angular}});
    quad::Sum s2, s3;
    for (std::size_t i = 0; i < ang.x.size(); ++i) {
        const double si = std::sin(ang.x[i]);
        s2.add(ang.w[i] * si * si);
        s3.add(ang.w[i] * si * si * si);
    }
    if (std::abs(s2.value() - std::numbers::pi / 2.0) > 1e-12 ||
        std::abs(s3.value() - 4.0 / 3.0) > 1e-10)
        throw std::runtime_error("quadrature self-check failed: angular sin powers");
    const double k = 1e3;
    const quad::Rule1D rad = quad::build_rule(
        std::vector<quad::Piece>{{1.0 / k, 0.5, quad::Map::Log, res.radial}});
    quad::Sum sr;
    for (std::size_t i = 0; i < rad.x.size(); ++i) sr.add(rad.w[i] / rad.x[i]);
    if (std::abs(sr.value() - std::log(k / 2.0)) > 1e-12)
        throw std::runtime_error("quadrature self-check failed: logarithmic radial rule");
}

namespace {

struct QuotientParts {
    double num = 0.0;
    double den = 0.0;
    double tail = 0.0;
};

// Two-resolution protocol shared by all quotient families: evaluate at the
// requested resolution and once more with both axis counts doubled; report
// the refined value with the coarse-vs-refined relative change as the error
// estimate, flagging anything above 0.5e-2.
template <typename Reduce>
QuotientReport run_two_resolutions(const IntegrandSpec& S, const Resolution& res,
                                   Reduce reduce, QuotientReport report) {
    check_quadrature_exactness(res);
    const Resolution fine{res.angular * 2, res.radial * 2, res.workers};
    const QuotientParts coarse = reduce(integrate_member(S, res));
    const QuotientParts refined = reduce(integrate_member(S, fine));
    if (!(refined.den > 0.0))
        throw std::runtime_error("quotient: nonpositive denominator");
    const double qc = coarse.num / coarse.den;
    const double qf = refined.num / refined.den;
    report.numerator = refined.num;
    report.denominator = refined.den;
    report.value = qf;
    report.tail = refined.tail;
    report.resolution = fine.angular;
    report.error_estimate = std::abs(qf - qc) / std::max(std::abs(qf), 1e-300);
    report.flagged = report.error_estimate > 0.5e-2;
    report.scale = S.tf.scale;
    return report;
}

}  // namespace

QuotientReport quotient_step1(const BetaVector& beta_tail, double k1,
                              const Resolution& res, double scale) {
    const int n = static_cast<int>(beta_tail.v.size()) + 1;
    IntegrandSpec S;
    S.tf = step1_function(n, k1, scale);
    for (int i = 1; i <= n; ++i) S.pot_idx.push_back(i);

    QuotientReport rep;
    rep.family = "step1";
    rep.q = 1;
    rep.n = n;
    rep.alpha = beta_tail.v;
    rep.k_or_eps = k1;
    rep.k1 = k1;
    return run_two_resolutions(
        S, res,
        [&](const Functionals& F) {
            QuotientParts p;
            p.den = F.pot[0];
            for (int i = 2; i <= n; ++i) p.tail += beta_tail.v[i - 2] * F.pot[i - 1];
            p.num = F.grad - p.tail;
            return p;
        },
        std::move(rep));
}

QuotientReport quotient_general(int q, const AlphaVector& alpha,
                                double k1, double kq, const Resolution& res,
                                double scale) {
    const int n = static_cast<int>(alpha.v.size());
    IntegrandSpec S;
    S.tf = general_q_function(q, alpha, k1, kq, /*substituted=*/true, scale);
    const GammaVector gamma = gamma_from_alpha(alpha);
    const BetaVector beta = alpha_to_beta(alpha);
    for (int j = 1; j < q; ++j) S.weight.push_back({j, -2.0 * gamma.v[j - 1]});
    S.pot_idx.push_back(q);
    for (int i = q + 1; i <= n; ++i) S.pot_idx.push_back(i);

    QuotientReport rep;
    rep.family = "general-q";
    rep.q = q;
    rep.n = n;
    rep.alpha = alpha.v;
    rep.k_or_eps = kq;
    rep.k1 = k1;
    return run_two_resolutions(
        S, res,
        [&](const Functionals& F) {
            QuotientParts p;
            p.den = F.pot[0];
            for (int i = q + 1; i <= n; ++i)
                p.tail += beta.v[i - 1] * F.pot[i - q];
            p.num = F.grad - p.tail;
            return p;
        },
        std::move(rep));
}

QuotientReport quotient_general_direct(int q, const AlphaVector& alpha,
                                       double k1, double kq, const Resolution& res,
                                       double scale) {
    if (std::isinf(k1))
        throw std::invalid_argument(
            "quotient_general_direct: the unsubstituted form needs a finite k1");
    const int n = static_cast<int>(alpha.v.size());
    IntegrandSpec S;
    S.tf = general_q_function(q, alpha, k1, kq, /*substituted=*/false, scale);
    const BetaVector beta = alpha_to_beta(alpha);
    S.pot_idx.push_back(q);
    for (int i = 1; i <= n; ++i)
        if (i != q) S.pot_idx.push_back(i);

    QuotientReport rep;
    rep.family = "general-q-direct";
    rep.q = q;
    rep.n = n;
    rep.alpha = alpha.v;
    rep.k_or_eps = kq;
    rep.k1 = k1;
    return run_two_resolutions(
        S, res,
        [&](const Functionals& F) {
            QuotientParts p;
            p.den = F.pot[0];
            std::size_t o = 1;
            for (int i = 1; i <= n; ++i) {
                if (i == q) continue;
                p.tail += beta.v[i - 1] * F.pot[o++];
            }
            p.num = F.grad - p.tail;
            return p;
        },
        std::move(rep));
}

QuotientReport sobolev_null_quotient(const AlphaVector& alpha,
                                     double eps, double k1, const Resolution& res,
                                     double scale) {
    const int n = static_cast<int>(alpha.v.size());
    IntegrandSpec S;
    S.tf = sobolev_null_function(alpha, eps, k1, scale);
    const GammaVector gamma = gamma_from_alpha(alpha);
    const BetaVector beta = alpha_to_beta(alpha);
    for (int j = 1; j < n; ++j) S.weight.push_back({j, -2.0 * gamma.v[j - 1]});
    S.pot_idx.push_back(n);
    S.critical = true;
    S.crit_wexp = static_cast<double>(n) / (n - 2);
    S.crit_uexp = 2.0 * n / (n - 2);
    const double dual = (n - 2.0) / n;

    QuotientReport rep;
    rep.family = "sobolev-null";
    rep.q = n;
    rep.n = n;
    rep.alpha = alpha.v;
    rep.k_or_eps = eps;
    rep.k1 = k1;
    return run_two_resolutions(
        S, res,
        [&](const Functionals& F) {
            QuotientParts p;
            p.tail = beta.v[n - 1] * F.pot[0];
            p.num = F.grad - p.tail;
            p.den = std::pow(F.crit, dual);
            return p;
        },
        std::move(rep));
}

}  // namespace hardylab::testfn
