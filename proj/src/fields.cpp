#include "hardylab/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab::fields {

namespace {

// Recover the generator from gamma partial sums: sum_{j<=m} gamma_j = a_m + (m-2)/2.
AlphaVector alpha_from_gamma(const GammaVector& gamma) {
    AlphaVector a;
    a.v.resize(gamma.v.size());
    double run = 0.0;
    for (std::size_t m = 0; m < gamma.v.size(); ++m) {
        run += gamma.v[m];
        a.v[m] = run - 0.5 * (static_cast<double>(m) + 1.0 - 2.0);
    }
    return a;
}

// Squared prefix norms s_m = x_1^2 + ... + x_m^2 for m = 1..count.
std::vector<double> prefix_sq(const std::vector<double>& x, std::size_t count) {
    std::vector<double> s(count);
    double acc = 0.0;
    for (std::size_t m = 0; m < count; ++m) {
        acc += x[m] * x[m];
        s[m] = acc;
    }
    return s;
}

}  // namespace

FieldSpec half_space_field(const AlphaVector& alpha) {
    FieldSpec spec;
    spec.domain = Domain::HalfSpace;
    spec.gamma = gamma_from_alpha(alpha);
    spec.beta = alpha_to_beta(alpha);
    return spec;
}

FieldSpec half_space_field_from_gamma(const GammaVector& gamma) {
    FieldSpec spec;
    spec.domain = Domain::HalfSpace;
    spec.gamma = gamma;
    spec.beta = alpha_to_beta(alpha_from_gamma(gamma));
    return spec;
}

FieldSpec quarter_space_field(int k) {
    if (k < 1) throw std::invalid_argument("quarter_space_field: k must be >= 1");
    FieldSpec spec;
    spec.domain = Domain::QuarterSpace;
    spec.k = k;
    return spec;
}

void validate_point(const FieldSpec& spec, const Point& p) {
    for (double c : p.x) {
        if (!std::isfinite(c)) throw std::invalid_argument("point has non-finite coordinate");
    }
    if (spec.domain == Domain::HalfSpace) {
        if (p.x.size() < spec.gamma.v.size())
            throw std::invalid_argument("point dimension below weight length");
        if (p.x.empty() || p.x[0] < kSingularTol)
            throw std::domain_error("point too close to the boundary hyperplane x_1 = 0");
        // x_1 >= tol bounds every prefix norm away from zero as well.
    } else {
        if (p.x.size() < static_cast<std::size_t>(spec.k))
            throw std::invalid_argument("point dimension below quarter coordinate count");
        for (int i = 0; i < spec.k; ++i) {
            if (p.x[i] < kSingularTol)
                throw std::domain_error("point too close to a quarter-domain face x_i = 0");
        }
    }
}

double eval_phi(const FieldSpec& spec, const Point& p) {
    validate_point(spec, p);
    double log_phi = 0.0;
    if (spec.domain == Domain::HalfSpace) {
        const auto s = prefix_sq(p.x, spec.gamma.v.size());
        for (std::size_t m = 0; m < spec.gamma.v.size(); ++m)
            log_phi += -spec.gamma.v[m] * 0.5 * std::log(s[m]);
    } else {
        for (int i = 0; i < spec.k; ++i) log_phi += 0.5 * std::log(p.x[i]);
    }
    return std::exp(log_phi);
}

std::vector<double> eval_F(const FieldSpec& spec, const Point& p) {
    validate_point(spec, p);
    std::vector<double> F(p.x.size(), 0.0);
    if (spec.domain == Domain::HalfSpace) {
        const std::size_t M = spec.gamma.v.size();
        const auto s = prefix_sq(p.x, M);
        // F_i = x_i * sum_{m >= i} gamma_m / s_m (suffix sums, innermost first).
        double suffix = 0.0;
        std::vector<double> tail(M);
        for (std::size_t m = M; m-- > 0;) {
            suffix += spec.gamma.v[m] / s[m];
            tail[m] = suffix;
        }
        for (std::size_t i = 0; i < M; ++i) F[i] = p.x[i] * tail[i];
    } else {
        for (int i = 0; i < spec.k; ++i) F[i] = -0.5 / p.x[i];
    }
    return F;
}

double eval_divF_minus_Fsq(const FieldSpec& spec, const Point& p) {
    validate_point(spec, p);
    if (spec.domain == Domain::HalfSpace) {
        const std::size_t M = spec.gamma.v.size();
        const auto s = prefix_sq(p.x, M);
        double div = 0.0, fsq = 0.0, gamma_prefix = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const double g = spec.gamma.v[m];
            div += g * (static_cast<double>(m) + 1.0 - 2.0) / s[m];
            // |F|^2 = sum_m gamma_m^2/s_m + 2 sum_{j<m} gamma_j gamma_m / s_m,
            // the cross terms landing on the larger-index prefix norm.
            fsq += (g * g + 2.0 * g * gamma_prefix) / s[m];
            gamma_prefix += g;
        }
        return div - fsq;
    }
    double div = 0.0, fsq = 0.0;
    for (int i = 0; i < spec.k; ++i) {
        const double inv2 = 1.0 / (p.x[i] * p.x[i]);
        div += 0.5 * inv2;   // d/dx_i of -1/(2 x_i)
        fsq += 0.25 * inv2;
    }
    return div - fsq;
}

PotentialValue eval_potential(const FieldSpec& spec, const Point& p) {
    validate_point(spec, p);
    PotentialValue out;
    if (spec.domain == Domain::HalfSpace) {
        const auto s = prefix_sq(p.x, spec.beta.v.size());
        out.terms.resize(spec.beta.v.size());
        for (std::size_t m = 0; m < spec.beta.v.size(); ++m) out.terms[m] = spec.beta.v[m] / s[m];
    } else {
        out.terms.resize(static_cast<std::size_t>(spec.k));
        for (int i = 0; i < spec.k; ++i) out.terms[i] = 0.25 / (p.x[i] * p.x[i]);
    }
    for (double t : out.terms) out.sum += t;
    return out;
}

double identity_residual(const FieldSpec& spec, const Point& p) {
    const double lhs = eval_divF_minus_Fsq(spec, p);
    const PotentialValue v = eval_potential(spec, p);
    double scale = 1.0;
    for (double t : v.terms) scale += std::fabs(t);
    return std::fabs(lhs - v.sum) / scale;
}

}  // namespace hardylab::fields
