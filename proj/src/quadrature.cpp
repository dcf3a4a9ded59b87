#include "hardylab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace hardylab::quad {

namespace {

GaussRule compute_gauss(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

Rule1D build_rule(std::span<const Piece> pieces) {
    Rule1D out;
    for (const Piece& p : pieces) {
        if (!(p.b > p.a)) {
            if (p.b == p.a) continue;  // empty piece, e.g. collapsed breakpoint
            throw std::invalid_argument("build_rule: piece has b < a");
        }
        const GaussRule& g = gauss_legendre(p.points);
        if (p.map == Map::Linear) {
            const double mid = 0.5 * (p.a + p.b), half = 0.5 * (p.b - p.a);
            for (int i = 0; i < p.points; ++i) {
                out.x.push_back(mid + half * g.x[i]);
                out.w.push_back(half * g.w[i]);
            }
        } else {
            if (!(p.a > 0.0))
                throw std::invalid_argument("build_rule: log piece needs a > 0");
            const double sa = std::log(p.a), sb = std::log(p.b);
            const double mid = 0.5 * (sa + sb), half = 0.5 * (sb - sa);
            for (int i = 0; i < p.points; ++i) {
                const double x = std::exp(mid + half * g.x[i]);
                out.x.push_back(x);
                out.w.push_back(half * g.w[i] * x);  // dx = x ds
            }
        }
    }
    return out;
}

namespace {

// Sequential recursion over axes [level..end); coordinates above are fixed.
void recurse(std::span<const AxisGenerator> axes, std::size_t level,
             std::vector<double>& coord, int n_out,
             const std::function<void(std::span<const double>, std::span<double>)>& f,
             std::span<Sum> acc, std::vector<double>& fbuf, double weight) {
    if (level == axes.size()) {
        for (int k = 0; k < n_out; ++k) fbuf[k] = 0.0;
        f(coord, std::span<double>(fbuf.data(), n_out));
        for (int k = 0; k < n_out; ++k) {
            if (!std::isfinite(fbuf[k]))
                throw std::runtime_error("integrate_nested: non-finite integrand sample");
            acc[k].add(weight * fbuf[k]);
        }
        return;
    }
    const std::vector<Piece> pieces =
        axes[level](std::span<const double>(coord.data(), level));
    const Rule1D rule = build_rule(pieces);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        coord[level] = rule.x[i];
        recurse(axes, level + 1, coord, n_out, f, acc, fbuf, weight * rule.w[i]);
    }
    coord[level] = 0.0;
}

}  // namespace

void integrate_nested_multi(std::span<const AxisGenerator> axes, int n_out,
                            const std::function<void(std::span<const double>, std::span<double>)>& f,
                            std::span<double> result, int workers) {
    if (axes.empty()) throw std::invalid_argument("integrate_nested: no axes");
    if (n_out < 1 || result.size() < static_cast<std::size_t>(n_out))
        throw std::invalid_argument("integrate_nested: bad output size");

    const Rule1D outer = build_rule(axes[0](std::span<const double>{}));
    const std::size_t n0 = outer.x.size();

    // Per-outer-node partial sums, reduced afterwards in index order, so the
    // result does not depend on how nodes are distributed over workers.
    std::vector<double> partial(n0 * n_out);
    auto run_node = [&](std::size_t i) {
        std::vector<double> coord(axes.size(), 0.0);
        std::vector<double> fbuf(n_out, 0.0);
        std::vector<Sum> acc(n_out);
        coord[0] = outer.x[i];
        if (axes.size() == 1) {
            f(coord, std::span<double>(fbuf.data(), n_out));
            for (int k = 0; k < n_out; ++k) acc[k].add(fbuf[k]);
        } else {
            recurse(axes, 1, coord, n_out, f, std::span<Sum>(acc), fbuf, 1.0);
        }
        for (int k = 0; k < n_out; ++k) partial[i * n_out + k] = acc[k].value();
    };

    const int nw = std::max(1, std::min<int>(workers, static_cast<int>(n0)));
    if (nw == 1) {
        for (std::size_t i = 0; i < n0; ++i) run_node(i);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errs(nw);
        pool.reserve(nw);
        for (int t = 0; t < nw; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    for (std::size_t i = t; i < n0; i += nw) run_node(i);
                } catch (...) {
                    errs[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& e : errs)
            if (e) std::rethrow_exception(e);
    }

    std::vector<Sum> total(n_out);
    for (std::size_t i = 0; i < n0; ++i)
        for (int k = 0; k < n_out; ++k) total[k].add(outer.w[i] * partial[i * n_out + k]);
    for (int k = 0; k < n_out; ++k) result[k] = total[k].value();
}

double integrate_nested(std::span<const AxisGenerator> axes,
                        const std::function<double(std::span<const double>)>& f,
                        int workers) {
    double out = 0.0;
    integrate_nested_multi(
        axes, 1,
        [&f](std::span<const double> x, std::span<double> o) { o[0] = f(x); },
        std::span<double>(&out, 1), workers);
    return out;
}

AxisGenerator fixed_axis(std::vector<Piece> pieces) {
    return [pieces = std::move(pieces)](std::span<const double>) { return pieces; };
}

double sin_power_integral(double p, int points) {
    if (p <= -1.0) throw std::invalid_argument("sin_power_integral: p must be > -1");
    // By symmetry about pi/2, integrate twice the left half.  Subtracting the
    // endpoint power theta^p (whose integral is known) leaves a correction
    // ~ theta^(p+2) that log-mapped Gauss handles to near machine precision,
    // uniformly in p, including the integrable singularity for p < 0.
    const double half_pi = 0.5 * std::numbers::pi;
    const double leading = std::pow(half_pi, p + 1.0) / (p + 1.0);
    const std::vector<Piece> pieces = {{1e-14, 1e-4, Map::Log, points},
                                       {1e-4, half_pi, Map::Log, points}};
    const Rule1D rule = build_rule(pieces);
    Sum s;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double th = rule.x[i];
        s.add(rule.w[i] * (std::pow(std::sin(th), p) - std::pow(th, p)));
    }
    return 2.0 * (leading + s.value());
}

double sin_power_exact(double p) {
    // sqrt(pi) * Gamma((p+1)/2) / Gamma(p/2 + 1)
    const double lg = 0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * (p + 1.0)) -
                      std::lgamma(0.5 * p + 1.0);
    return std::exp(lg);
}

void polar_to_cartesian(int q, double r, std::span<const double> thetas, std::span<double> x_out) {
    if (q < 1 || thetas.size() + 1 != static_cast<std::size_t>(q) ||
        x_out.size() < static_cast<std::size_t>(q))
        throw std::invalid_argument("polar_to_cartesian: size mismatch");
    // x_q = r cos th_{q-1}; descending: x_m = r cos th_{m-1} prod_{j>=m} sin th_j.
    double tail = r;  // r * prod of sines consumed so far
    for (int m = q; m >= 2; --m) {
        x_out[m - 1] = tail * std::cos(thetas[m - 2]);
        tail *= std::sin(thetas[m - 2]);
    }
    x_out[0] = tail;
}

double integrate_polar(const std::function<double(double, std::span<const double>)>& f,
                       int q, std::span<const Piece> radial, int angular_points,
                       int workers) {
    if (q < 1) throw std::invalid_argument("integrate_polar: q must be >= 1");
    std::vector<AxisGenerator> axes;
    axes.push_back(fixed_axis(std::vector<Piece>(radial.begin(), radial.end())));
    for (int j = 0; j < q - 1; ++j)
        axes.push_back(fixed_axis({{0.0, std::numbers::pi, Map::Linear, angular_points}}));
    return integrate_nested(
        axes,
        [&f](std::span<const double> c) {
            return f(c[0], c.subspan(1));
        },
        workers);
}

}  // namespace hardylab::quad
