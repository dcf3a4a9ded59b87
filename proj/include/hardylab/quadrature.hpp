#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

// Piecewise Gauss-Legendre quadrature with nested (coordinate-dependent) axis
// decomposition.  The integrands in this project are smooth except along
// known breakpoints (cutoff kinks, plateau edges) and carry r^(-1)-type
// weights that want a logarithmic substitution; every axis is therefore a
// list of pieces, each mapped linearly or via x = exp(s).
//
// Reductions are sequential compensated sums in a fixed order, so results are
// byte-identical from run to run and independent of the worker-thread count.

namespace hardylab::quad {

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

enum class Map { Linear, Log };

struct Piece {
    double a = 0.0, b = 0.0;
    Map map = Map::Linear;
    int points = 32;
};

// Nodes/weights for a list of pieces (weights include the map jacobian).
struct Rule1D {
    std::vector<double> x, w;
};
Rule1D build_rule(std::span<const Piece> pieces);

// Neumaier compensated accumulator.
class Sum {
  public:
    void add(double v) {
        const double t = s_ + v;
        if (std::abs(s_) >= std::abs(v)) {
            c_ += (s_ - t) + v;
        } else {
            c_ += (v - t) + s_;
        }
        s_ = t;
    }
    double value() const { return s_ + c_; }

  private:
    double s_ = 0.0, c_ = 0.0;
};

// An axis whose pieces may depend on the already-fixed outer coordinates
// (e.g. an inner breakpoint at the current outer radius).
using AxisGenerator = std::function<std::vector<Piece>(std::span<const double> outer)>;

// Integrate f over the nested tensor domain.  Axes are listed outermost
// first; f receives the full coordinate tuple.  `workers` >= 1 parallelizes
// over the outermost axis without changing the result.
double integrate_nested(std::span<const AxisGenerator> axes,
                        const std::function<double(std::span<const double>)>& f,
                        int workers = 1);

// Same geometry, several integrands in one sweep: f fills `out` (zeroed
// before each call) and the engine accumulates each component separately.
void integrate_nested_multi(std::span<const AxisGenerator> axes, int n_out,
                            const std::function<void(std::span<const double>, std::span<double>)>& f,
                            std::span<double> result, int workers = 1);

// Fixed axis helper.
AxisGenerator fixed_axis(std::vector<Piece> pieces);

// integral over (0, pi) of sin(theta)^p, by quadrature (p > -1).
double sin_power_integral(double p, int points = 64);

// Closed form of the same integral via lgamma: sqrt(pi) G((p+1)/2) / G(p/2+1).
// Used as the independent oracle in tests.
double sin_power_exact(double p);

// Polar-coordinate convention used throughout (first q coordinates):
//   x_1 = r sin th_{q-1} ... sin th_1,  x_2 = r sin th_{q-1} ... sin th_2 cos th_1,
//   ...,  x_q = r cos th_{q-1},
// angles th_1..th_{q-1} in (0, pi) (th_1 restricted to (0, pi) keeps x_1 > 0),
// surface measure prod_{j>=2} sin(th_j)^(j-1) d th.  Prefix radii satisfy
// |X_m| = r prod_{j>=m} sin th_j.
void polar_to_cartesian(int q, double r, std::span<const double> thetas, std::span<double> x_out);

// Integrate f(r, th_1..th_{q-1}) dr dth (no implicit jacobian; the integrand
// carries all measure factors) over radial pieces x angular boxes (0, pi).
double integrate_polar(const std::function<double(double r, std::span<const double> th)>& f,
                       int q, std::span<const Piece> radial, int angular_points,
                       int workers = 1);

}  // namespace hardylab::quad
