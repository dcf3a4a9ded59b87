#include "hardylab/l1checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hardylab/quadrature.hpp"
#include "hardylab/testfunctions.hpp"

namespace hardylab::l1 {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

void check_sample(const SampleFunction& s) {
    const std::size_t n = static_cast<std::size_t>(s.n);
    if (s.n < 2 || s.center.size() != n || s.width.size() != n)
        throw std::invalid_argument("SampleFunction: inconsistent dimensions");
    if (!s.gauss_a.empty() && (s.gauss_a.size() != n || s.gauss_c.size() != n))
        throw std::invalid_argument("SampleFunction: bad gaussian parameters");
    if (s.linear_axis >= s.n)
        throw std::invalid_argument("SampleFunction: linear axis out of range");
    for (double w : s.width)
        if (!(w > 0.0)) throw std::invalid_argument("SampleFunction: widths must be positive");
}

}  // namespace

SampleValue eval_sample(const SampleFunction& s, std::span<const double> x) {
    check_sample(s);
    if (x.size() != static_cast<std::size_t>(s.n))
        throw std::invalid_argument("eval_sample: point dimension mismatch");
    const int n = s.n;

    double fac[8], dfac[8];
    for (int d = 0; d < n; ++d) {
        const double t = std::abs(x[d] - s.center[d]) / s.width[d];
        fac[d] = testfn::bump(t);
        dfac[d] = testfn::bump_deriv(t) * sgn(x[d] - s.center[d]) / s.width[d];
    }
    SampleValue out;
    out.grad.assign(n, 0.0);
    double prod = s.amp;
    for (int d = 0; d < n; ++d) prod *= fac[d];
    out.v = prod;
    for (int d = 0; d < n; ++d) {
        double others = s.amp;
        for (int e = 0; e < n; ++e)
            if (e != d) others *= fac[e];
        out.grad[d] = dfac[d] * others;
    }
    if (!s.gauss_a.empty()) {
        double g = 1.0;
        for (int d = 0; d < n; ++d) g *= std::exp(-s.gauss_a[d] * (x[d] - s.gauss_c[d]) * (x[d] - s.gauss_c[d]));
        for (int d = 0; d < n; ++d)
            out.grad[d] = out.grad[d] * g + out.v * g * (-2.0 * s.gauss_a[d] * (x[d] - s.gauss_c[d]));
        out.v *= g;
    }
    if (s.linear_axis >= 0) {
        const double lin = x[s.linear_axis] - s.linear_shift;
        for (int d = 0; d < n; ++d) out.grad[d] *= lin;
        out.grad[s.linear_axis] += out.v;
        out.v *= lin;
    }
    return out;
}

std::vector<SampleFunction> make_sample_library(int n, std::uint32_t seed, int deterministic,
                                                int random, int positive_axes, double box_half) {
    if (n < 2 || n > 8) throw std::invalid_argument("make_sample_library: n must lie in [2, 8]");
    if (positive_axes < 1 || positive_axes > n)
        throw std::invalid_argument("make_sample_library: positive_axes must lie in [1, n]");
    const double lim = box_half - 0.2;  // supports stay strictly inside the box
    if (lim < 1.0) throw std::invalid_argument("make_sample_library: box too small");

    struct Det {
        double amp;
        double c[3], w[3];
        bool gauss;
        double a[3], gc[3];
        int lin;
        double shift;
    };
    static const Det table[20] = {
        {0.0, {1.0, 0.0, 0.0}, {0.5, 0.5, 0.5}, false, {}, {}, -1, 0.0},
        {1.0, {1.0, 0.3, -0.4}, {0.6, 0.8, 0.9}, false, {}, {}, -1, 0.0},
        {1.5, {0.9, -0.5, 0.2}, {0.5, 0.7, 0.6}, true, {0.5, 0.3, 0.2}, {0.9, -0.5, 0.2}, -1, 0.0},
        {1.0, {1.2, 0.0, 0.5}, {0.7, 0.9, 0.8}, false, {}, {}, 1, 0.1},
        {1.0, {0.35, 1.0, -1.0}, {0.3, 0.6, 0.6}, false, {}, {}, -1, 0.0},
        {1.0, {1.9, 0.0, 0.0}, {1.8, 1.8, 1.8}, false, {}, {}, -1, 0.0},
        {1.0, {0.8, 2.0, -2.0}, {0.25, 0.3, 0.35}, false, {}, {}, -1, 0.0},
        {1.0, {1.5, 1.0, 1.0}, {1.0, 1.0, 1.0}, true, {2.0, 1.0, 1.5}, {1.2, 1.3, 0.8}, -1, 0.0},
        {1.0, {1.4, -0.7, 0.3}, {0.8, 0.9, 0.7}, false, {}, {}, 0, 1.3},
        {1.0, {0.9, 0.4, -0.2}, {0.6, 0.8, 1.0}, false, {}, {}, 2, -0.1},
        {-2.0, {2.2, -1.5, 1.2}, {0.9, 1.0, 0.8}, false, {}, {}, -1, 0.0},
        {1.0, {2.0, 0.5, 0.5}, {1.6, 0.4, 0.4}, false, {}, {}, -1, 0.0},
        {1.0, {0.7, 0.0, 0.0}, {0.35, 1.7, 1.7}, false, {}, {}, -1, 0.0},
        {1.0, {1.1, 0.9, -0.9}, {0.8, 0.8, 0.8}, true, {0.7, 0.7, 0.7}, {1.4, 0.5, -1.2}, -1, 0.0},
        {1.0, {0.4, 0.1, 0.1}, {0.3, 0.3, 0.3}, false, {}, {}, -1, 0.0},
        {1.0, {2.6, 1.6, -1.4}, {1.1, 1.2, 1.0}, false, {}, {}, -1, 0.0},
        {1.0, {1.3, -0.4, 0.6}, {0.7, 0.9, 0.8}, true, {0.4, 0.5, 0.3}, {1.3, -0.4, 0.6}, 1, -0.4},
        {1.0, {1.0, -2.2, 2.2}, {0.7, 1.2, 1.2}, false, {}, {}, -1, 0.0},
        {0.3, {0.6, 0.5, -0.5}, {0.45, 0.5, 0.55}, false, {}, {}, -1, 0.0},
        {1.0, {1.7, 2.4, 0.2}, {1.3, 1.0, 0.5}, false, {}, {}, -1, 0.0},
    };

    std::vector<SampleFunction> lib;
    lib.reserve(static_cast<std::size_t>(deterministic + random));

    auto clamp_axes = [&](SampleFunction& s) {
        for (int d = 0; d < s.n; ++d) {
            // keep the support inside the box ...
            const double room = lim - s.width[d];
            s.center[d] = std::clamp(s.center[d], -room, room);
            // ... and strictly positive on the positive axes
            if (d < positive_axes) {
                const double lo = s.width[d] + 0.05;
                if (s.center[d] < lo) s.center[d] = std::max(std::abs(s.center[d]), lo);
            }
        }
    };

    for (int i = 0; i < deterministic; ++i) {
        const Det& t = table[i % 20];
        SampleFunction s;
        s.name = "det" + std::to_string(i);
        s.n = n;
        s.amp = t.amp;
        s.center.assign(t.c, t.c + std::min(n, 3));
        s.width.assign(t.w, t.w + std::min(n, 3));
        for (int d = 3; d < n; ++d) {  // extend past the table's 3 axes
            s.center.push_back(t.c[d % 3] * 0.5);
            s.width.push_back(t.w[d % 3]);
        }
        if (t.gauss) {
            s.gauss_a.assign(t.a, t.a + std::min(n, 3));
            s.gauss_c.assign(t.gc, t.gc + std::min(n, 3));
            for (int d = 3; d < n; ++d) {
                s.gauss_a.push_back(t.a[d % 3]);
                s.gauss_c.push_back(t.gc[d % 3] * 0.5);
            }
        }
        if (t.lin >= 0 && t.lin < n) {
            s.linear_axis = t.lin;
            s.linear_shift = t.shift;
        }
        clamp_axes(s);
        lib.push_back(std::move(s));
    }

    std::mt19937 rng(seed);
    auto unif = [&rng](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };
    for (int i = 0; i < random; ++i) {
        SampleFunction s;
        s.name = "rand" + std::to_string(i);
        s.n = n;
        s.amp = unif(0.5, 2.0);
        s.center.resize(n);
        s.width.resize(n);
        for (int d = 0; d < n; ++d) s.width[d] = unif(0.3, 1.2);
        for (int d = 0; d < n; ++d) {
            if (d < positive_axes)
                s.center[d] = unif(s.width[d] + 0.05, 2.5);
            else
                s.center[d] = unif(-2.5, 2.5);
        }
        if (unif(0.0, 1.0) < 0.3) {
            s.gauss_a.resize(n);
            s.gauss_c.resize(n);
            for (int d = 0; d < n; ++d) {
                s.gauss_a[d] = unif(0.1, 1.0);
                s.gauss_c[d] = s.center[d] + unif(-0.3, 0.3) * s.width[d];
            }
        }
        if (unif(0.0, 1.0) < 0.2) {
            s.linear_axis = static_cast<int>(unif(0.0, static_cast<double>(n)));
            if (s.linear_axis >= n) s.linear_axis = n - 1;
            s.linear_shift = s.center[s.linear_axis] + unif(-0.5, 0.5) * s.width[s.linear_axis];
        }
        clamp_axes(s);
        lib.push_back(std::move(s));
    }
    return lib;
}

namespace {

// Tensor Gauss sweep over the sample's support box; `f` adds each node's
// integrand values to the compensated accumulators.
void integrate_support(const SampleFunction& s, int rule,
                       const std::function<void(std::span<const double>, double, const SampleValue&,
                                                std::span<quad::Sum>)>& f,
                       std::span<quad::Sum> acc) {
    if (rule < 2 || rule > 200) throw std::invalid_argument("l1 checks: rule out of range");
    const int n = s.n;
    const quad::GaussRule& g = quad::gauss_legendre(rule);
    std::vector<double> x(n);
    std::vector<int> idx(n, 0);
    std::vector<double> mid(n), half(n);
    for (int d = 0; d < n; ++d) {
        mid[d] = 0.5 * (s.support_lo(d) + s.support_hi(d));
        half[d] = 0.5 * (s.support_hi(d) - s.support_lo(d));
    }
    const std::int64_t total = [&] {
        std::int64_t t = 1;
        for (int d = 0; d < n; ++d) t *= rule;
        return t;
    }();
    for (std::int64_t c = 0; c < total; ++c) {
        double w = 1.0;
        for (int d = 0; d < n; ++d) {
            x[d] = mid[d] + half[d] * g.x[idx[d]];
            w *= half[d] * g.w[idx[d]];
        }
        const SampleValue sv = eval_sample(s, x);
        f(x, w, sv, acc);
        for (int d = n - 1; d >= 0; --d) {
            if (++idx[d] < rule) break;
            idx[d] = 0;
        }
    }
}

double grad_norm(const SampleValue& sv) {
    double g2 = 0.0;
    for (double gd : sv.grad) g2 += gd * gd;
    return std::sqrt(g2);
}

void require_positive_support(const SampleFunction& s, int axes, const char* who) {
    for (int d = 0; d < axes; ++d)
        if (!(s.support_lo(d) > 0.0))
            throw std::invalid_argument(std::string(who) +
                                        ": sample support touches a singular hyperplane");
}

void prefix_norms(std::span<const double> x, std::span<double> rho) {
    double acc = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
        acc += x[m] * x[m];
        rho[m] = std::sqrt(acc);
    }
}

}  // namespace

double step_divergence_sum(const StepField& f) {
    if (f.l < 1 || f.sigma.size() != static_cast<std::size_t>(f.l))
        throw std::invalid_argument("StepField: need sigma_1..sigma_l");
    double s = static_cast<double>(f.l) - 1.0;
    for (double sj : f.sigma) s += sj;
    return s;
}

CheckResult div_ineq_check(const StepField& f, const SampleFunction& v, int rule) {
    const double s_l = step_divergence_sum(f);
    if (f.l > v.n) throw std::invalid_argument("div_ineq_check: field index exceeds dimension");
    require_positive_support(v, 1, "div_ineq_check");

    std::vector<quad::Sum> acc(2);
    std::vector<double> rho(v.n);
    integrate_support(
        v, rule,
        [&](std::span<const double> x, double w, const SampleValue& sv, std::span<quad::Sum> a) {
            prefix_norms(x, rho);
            double wgt = 1.0;
            for (int j = 0; j + 1 < f.l; ++j) wgt *= std::pow(rho[j], f.sigma[j]);
            const double core = wgt * std::pow(rho[f.l - 1], f.sigma[f.l - 1] - 1.0);
            a[0].add(w * s_l * core * std::abs(sv.v));             // signed div F |v|
            a[1].add(w * core * rho[f.l - 1] * grad_norm(sv));     // |F| |grad v|
        },
        acc);
    CheckResult r;
    r.check = "divergence";
    r.lhs = std::abs(acc[0].value());
    r.rhs = acc[1].value();
    r.skipped = r.lhs == 0.0 && r.rhs == 0.0;
    r.ratio = r.skipped ? 0.0 : r.lhs / r.rhs;
    r.resolution = rule;
    return r;
}

CheckResult div_ineq_check(const fields::FieldSpec& spec, const SampleFunction& v, int rule) {
    const int pos = spec.domain == fields::Domain::QuarterSpace ? spec.k : 1;
    require_positive_support(v, pos, "div_ineq_check");

    std::vector<quad::Sum> acc(2);
    fields::Point p;
    p.domain = spec.domain;
    p.k = spec.k;
    p.x.resize(v.n);
    integrate_support(
        v, rule,
        [&](std::span<const double> x, double w, const SampleValue& sv, std::span<quad::Sum> a) {
            std::copy(x.begin(), x.end(), p.x.begin());
            const std::vector<double> F = fields::eval_F(spec, p);
            double F2 = 0.0;
            for (double Fi : F) F2 += Fi * Fi;
            const double divF = fields::eval_divF_minus_Fsq(spec, p) + F2;
            a[0].add(w * divF * std::abs(sv.v));
            a[1].add(w * std::sqrt(F2) * grad_norm(sv));
        },
        acc);
    CheckResult r;
    r.check = "divergence";
    r.lhs = std::abs(acc[0].value());
    r.rhs = acc[1].value();
    r.skipped = r.lhs == 0.0 && r.rhs == 0.0;
    r.ratio = r.skipped ? 0.0 : r.lhs / r.rhs;
    r.resolution = rule;
    return r;
}

CheckResult step_inequality_check(int l, const SigmaVector& sigma, const SampleFunction& v,
                                  int rule) {
    if (l < 1 || static_cast<std::size_t>(l) > sigma.v.size())
        throw std::invalid_argument("step_inequality_check: need sigma_1..sigma_l");
    if (l > v.n) throw std::invalid_argument("step_inequality_check: step exceeds dimension");
    StepField f;
    f.l = l;
    f.sigma.assign(sigma.v.begin(), sigma.v.begin() + l);
    const double sigma_l = f.sigma.back();

    CheckResult r;
    r.check = "step";
    r.resolution = rule;
    if (sigma_l == 0.0) {  // the chain skips exponent-free steps
        r.skipped = true;
        return r;
    }
    const double c_l = std::abs(step_divergence_sum(f));
    if (c_l <= 1e-12)
        throw std::domain_error(
            "step_inequality_check: step constant vanishes while sigma_l != 0 "
            "(degenerate-step boundary; the chain cannot use this step)");
    require_positive_support(v, 1, "step_inequality_check");

    std::vector<quad::Sum> acc(2);
    std::vector<double> rho(v.n);
    integrate_support(
        v, rule,
        [&](std::span<const double> x, double w, const SampleValue& sv, std::span<quad::Sum> a) {
            prefix_norms(x, rho);
            double wgt = 1.0;
            for (int j = 0; j + 1 < l; ++j) wgt *= std::pow(rho[j], f.sigma[j]);
            const double core = wgt * std::pow(rho[l - 1], sigma_l - 1.0);
            a[0].add(w * core * std::abs(sv.v));
            a[1].add(w * core * rho[l - 1] * grad_norm(sv));
        },
        acc);
    r.lhs = c_l * acc[0].value();
    r.rhs = acc[1].value();
    r.skipped = r.lhs == 0.0 && r.rhs == 0.0;
    r.ratio = r.skipped ? 0.0 : r.lhs / r.rhs;
    return r;
}

CheckResult thmC_hypothesis_check(const fields::FieldSpec& spec, const SampleFunction& v,
                                  int rule) {
    if (v.n < 3) throw std::invalid_argument("thmC_hypothesis_check: needs n >= 3");
    if (spec.domain != fields::Domain::HalfSpace ||
        spec.gamma.v.size() != static_cast<std::size_t>(v.n))
        throw std::invalid_argument("thmC_hypothesis_check: half-space weight of full length required");
    require_positive_support(v, 1, "thmC_hypothesis_check");
    const double p = 2.0 * (v.n - 1) / (v.n - 2);

    std::vector<quad::Sum> acc(2);
    fields::Point pt;
    pt.domain = spec.domain;
    pt.k = spec.k;
    pt.x.resize(v.n);
    integrate_support(
        v, rule,
        [&](std::span<const double> x, double w, const SampleValue& sv, std::span<quad::Sum> a) {
            std::copy(x.begin(), x.end(), pt.x.begin());
            const double phi = fields::eval_phi(spec, pt);
            const std::vector<double> F = fields::eval_F(spec, pt);
            double F2 = 0.0;
            for (double Fi : F) F2 += Fi * Fi;
            const double wgt = w * std::pow(phi, p);
            a[0].add(wgt * std::sqrt(F2) * std::abs(sv.v));  // phi^(n/(n-2)) |grad phi| |v|
            a[1].add(wgt * grad_norm(sv));
        },
        acc);
    CheckResult r;
    r.check = "thmC";
    r.lhs = acc[0].value();
    r.rhs = acc[1].value();
    r.skipped = r.lhs == 0.0 && r.rhs == 0.0;
    r.ratio = r.skipped ? 0.0 : r.lhs / r.rhs;
    r.resolution = rule;
    return r;
}

std::vector<double> thmC_concentration_ratios(const AlphaVector& alpha, int count, double R,
                                              int radial_points, int angular_points) {
    if (alpha.v.size() != 3)
        throw std::invalid_argument("thmC_concentration_ratios: implemented for n = 3");
    if (count < 1 || !(R > 0.0))
        throw std::invalid_argument("thmC_concentration_ratios: bad parameters");
    const GammaVector gam = gamma_from_alpha(alpha);
    const double g1 = gam.v[0], g2 = gam.v[1], g3 = gam.v[2];
    constexpr double kDelta = 0.15;  // wedge margin away from the boundary plane
    const double W = std::numbers::pi / 2.0 - kDelta;

    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        const double eps = R * std::pow(4.0, -(j + 1));
        std::vector<quad::AxisGenerator> axes;
        axes.push_back(quad::fixed_axis({{eps / 2.0, eps, quad::Map::Log, radial_points},
                                         {eps, R / 2.0, quad::Map::Log, radial_points},
                                         {R / 2.0, R, quad::Map::Log, radial_points}}));
        axes.push_back(quad::fixed_axis(
            {{kDelta, std::numbers::pi - kDelta, quad::Map::Linear, angular_points}}));
        axes.push_back(
            quad::fixed_axis({{0.0, std::numbers::pi, quad::Map::Linear, angular_points}}));

        double out[2];
        quad::integrate_nested_multi(
            axes, 2,
            [&](std::span<const double> c, std::span<double> val) {
                const double r = c[0], th1 = c[1], th2 = c[2];
                const double s1 = std::sin(th1), s2 = std::sin(th2);
                const double rho1 = r * s1 * s2, rho2 = r * s2, rho3 = r;
                const double H = testfn::bump(r / R) - testfn::bump(r / eps);
                const double dH =
                    testfn::bump_deriv(r / R) / R - testfn::bump_deriv(r / eps) / eps;
                const double u = std::abs(th1 - std::numbers::pi / 2.0) / W;
                const double G = testfn::bump(u);
                const double dG =
                    testfn::bump_deriv(u) * sgn(th1 - std::numbers::pi / 2.0) / W;
                const double v = H * G;
                const double gv = std::hypot(dH * G, H * dG / rho2);
                const double lphi =
                    -(g1 * std::log(rho1) + g2 * std::log(rho2) + g3 * std::log(rho3));
                const double F2 = std::max(
                    0.0, g1 * g1 / (rho1 * rho1) + g2 * g2 / (rho2 * rho2) +
                             g3 * g3 / (rho3 * rho3) + 2.0 * g1 * g2 / (rho2 * rho2) +
                             2.0 * (g1 + g2) * g3 / (rho3 * rho3));  // |F|^2, clamp roundoff
                const double wgt = std::exp(4.0 * lphi);  // phi^(2(n-1)/(n-2)), n = 3
                const double meas = r * r * s2;
                val[0] = meas * wgt * std::sqrt(F2) * std::abs(v);
                val[1] = meas * wgt * gv;
            },
            out, 1);
        if (!(out[1] > 0.0))
            throw std::runtime_error("thmC_concentration_ratios: degenerate denominator");
        ratios.push_back(out[0] / out[1]);
    }
    return ratios;
}

}  // namespace hardylab::l1
