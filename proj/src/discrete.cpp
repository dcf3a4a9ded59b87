#include "hardylab/discrete.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCholesky>

namespace hardylab::fem {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kGaussOffset = 0.28867513459481287;  // 1/(2 sqrt 3)

}  // namespace

std::int64_t BoxMesh::node_index(const std::vector<int>& offsets) const {
    std::int64_t idx = 0;
    for (int d = 0; d < n; ++d) {
        if (offsets[d] < 0 || offsets[d] >= inner[d])
            throw std::out_of_range("BoxMesh::node_index: offset outside interior");
        idx = idx * inner[d] + offsets[d];
    }
    return idx;
}

BoxMesh make_box_mesh(int n, double L, int div, int k) {
    if (n < 2 || n > 6) throw std::invalid_argument("make_box_mesh: n must lie in [2, 6]");
    if (k < 1 || k > n) throw std::invalid_argument("make_box_mesh: k must lie in [1, n]");
    if (!(L > 0.0)) throw std::invalid_argument("make_box_mesh: L must be positive");
    if (div < 2) throw std::invalid_argument("make_box_mesh: need div >= 2 for interior nodes");

    BoxMesh mesh;
    mesh.n = n;
    mesh.L = L;
    mesh.div = div;
    mesh.k = k;
    mesh.h = L / div;
    mesh.axes.resize(n);
    mesh.inner.resize(n);
    mesh.dof = 1;
    for (int d = 0; d < n; ++d) {
        const double lo = d < k ? 0.0 : -L;
        const int cells = d < k ? div : 2 * div;
        auto& ax = mesh.axes[d];
        ax.resize(cells + 1);
        for (int i = 0; i <= cells; ++i) ax[i] = lo + i * mesh.h;
        ax.back() = L;  // pin the endpoint exactly
        mesh.inner[d] = cells - 1;
        mesh.dof *= mesh.inner[d];
    }
    return mesh;
}

namespace {

// Tabulated multilinear shape data at the 2^n tensor Gauss points of one
// cell: values and reference gradients per corner.  Corners and Gauss points
// are indexed by bitmask (bit d = offset along axis d).
struct CellBasis {
    int n;
    int corners;              // 2^n
    std::vector<double> shp;  // [gp * corners + c]
    std::vector<double> grd;  // [(gp * corners + c) * n + d]

    explicit CellBasis(int dim, double h) : n(dim), corners(1 << dim) {
        const double p[2] = {0.5 - kGaussOffset, 0.5 + kGaussOffset};
        shp.resize(static_cast<std::size_t>(corners) * corners);
        grd.resize(static_cast<std::size_t>(corners) * corners * n);
        for (int gp = 0; gp < corners; ++gp) {
            for (int c = 0; c < corners; ++c) {
                double s = 1.0;
                for (int d = 0; d < n; ++d) {
                    const double xi = p[(gp >> d) & 1];
                    s *= ((c >> d) & 1) ? xi : 1.0 - xi;
                }
                shp[static_cast<std::size_t>(gp) * corners + c] = s;
                for (int d = 0; d < n; ++d) {
                    double g = ((c >> d) & 1) ? 1.0 : -1.0;
                    g /= h;
                    for (int dd = 0; dd < n; ++dd) {
                        if (dd == d) continue;
                        const double xi = p[(gp >> dd) & 1];
                        g *= ((c >> dd) & 1) ? xi : 1.0 - xi;
                    }
                    grd[(static_cast<std::size_t>(gp) * corners + c) * n + d] = g;
                }
            }
        }
    }

    double gauss_abscissa(int which) const { return which ? 0.5 + kGaussOffset : 0.5 - kGaussOffset; }
};

// Shared assembly driver.  `weight` may be null (constant 1); `grad` selects
// the stiffness integrand.  Local matrices are built upper-triangular and
// mirrored so the scattered global matrix is symmetric to the last bit.
SpMat assemble_matrix(const BoxMesh& mesh, const WeightFn* weight, bool grad) {
    const int n = mesh.n;
    const int nc = 1 << n;
    const CellBasis basis(n, mesh.h);
    const double cellw = std::pow(mesh.h, n) / nc;  // equal Gauss weights (1/2 per axis)

    std::vector<int> cells(n);
    for (int d = 0; d < n; ++d) cells[d] = static_cast<int>(mesh.axes[d].size()) - 1;

    // Constant local matrix when no weight varies across elements.
    std::vector<double> loc(static_cast<std::size_t>(nc) * nc, 0.0);
    auto fill_local = [&](const double* corner_x0) {
        std::fill(loc.begin(), loc.end(), 0.0);
        double xg[8];
        for (int gp = 0; gp < nc; ++gp) {
            double wv = 1.0;
            if (weight) {
                for (int d = 0; d < n; ++d)
                    xg[d] = corner_x0[d] + basis.gauss_abscissa((gp >> d) & 1) * mesh.h;
                wv = (*weight)(xg);
                if (!std::isfinite(wv))
                    throw std::logic_error(
                        "assemble: weight is non-finite at a quadrature node "
                        "(node on a singular set)");
            }
            const double w = cellw * wv;
            for (int a = 0; a < nc; ++a) {
                for (int b = a; b < nc; ++b) {
                    double v;
                    if (grad) {
                        const double* ga = &basis.grd[(static_cast<std::size_t>(gp) * nc + a) * n];
                        const double* gb = &basis.grd[(static_cast<std::size_t>(gp) * nc + b) * n];
                        double dot = 0.0;
                        for (int d = 0; d < n; ++d) dot += ga[d] * gb[d];
                        v = w * dot;
                    } else {
                        v = w * basis.shp[static_cast<std::size_t>(gp) * nc + a] *
                            basis.shp[static_cast<std::size_t>(gp) * nc + b];
                    }
                    loc[static_cast<std::size_t>(a) * nc + b] += v;
                }
            }
        }
        for (int a = 0; a < nc; ++a)
            for (int b = 0; b < a; ++b)
                loc[static_cast<std::size_t>(a) * nc + b] = loc[static_cast<std::size_t>(b) * nc + a];
    };

    std::int64_t total_cells = 1;
    for (int d = 0; d < n; ++d) total_cells *= cells[d];

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(total_cells) * nc * nc);

    if (!weight) {
        double origin[8] = {0.0};
        fill_local(origin);  // congruent elements: one local matrix for all
    }

    std::vector<int> el(n, 0);
    std::vector<std::int64_t> gi(nc);
    double x0[8];
    for (std::int64_t e = 0; e < total_cells; ++e) {
        for (int d = 0; d < n; ++d) x0[d] = mesh.axes[d][el[d]];
        if (weight) fill_local(x0);

        for (int c = 0; c < nc; ++c) {
            std::int64_t idx = 0;
            bool interior = true;
            for (int d = 0; d < n; ++d) {
                const int node = el[d] + ((c >> d) & 1);
                if (node < 1 || node > cells[d] - 1) {
                    interior = false;
                    break;
                }
                idx = idx * mesh.inner[d] + (node - 1);
            }
            gi[c] = interior ? idx : -1;
        }
        for (int a = 0; a < nc; ++a) {
            if (gi[a] < 0) continue;
            for (int b = 0; b < nc; ++b) {
                if (gi[b] < 0) continue;
                trips.emplace_back(static_cast<int>(gi[a]), static_cast<int>(gi[b]),
                                   loc[static_cast<std::size_t>(a) * nc + b]);
            }
        }

        for (int d = n - 1; d >= 0; --d) {  // row-major advance, axis 0 slowest
            if (++el[d] < cells[d]) break;
            el[d] = 0;
        }
    }

    SpMat A(static_cast<int>(mesh.dof), static_cast<int>(mesh.dof));
    A.setFromTriplets(trips.begin(), trips.end());
    A.makeCompressed();
    return A;
}

}  // namespace

SymmetricSparseForm assemble_stiffness(const BoxMesh& mesh) {
    return {"stiffness", assemble_matrix(mesh, nullptr, true)};
}

SymmetricSparseForm assemble_mass(const BoxMesh& mesh) {
    return {"mass", assemble_matrix(mesh, nullptr, false)};
}

SymmetricSparseForm assemble_weighted_mass(const BoxMesh& mesh, const WeightFn& weight,
                                           std::string role) {
    if (!weight) throw std::invalid_argument("assemble_weighted_mass: null weight");
    return {std::move(role), assemble_matrix(mesh, &weight, false)};
}

SymmetricSparseForm assemble_potential_mass(const BoxMesh& mesh, const BetaVector& beta) {
    if (static_cast<int>(beta.v.size()) != mesh.n)
        throw std::invalid_argument("assemble_potential_mass: beta size != mesh dimension");
    const int n = mesh.n;
    const std::vector<double> b = beta.v;
    WeightFn w = [n, b](const double* x) {
        double acc = 0.0, s = 0.0;
        for (int m = 0; m < n; ++m) {
            acc += x[m] * x[m];
            s += b[m] / acc;
        }
        return s;
    };
    return assemble_weighted_mass(mesh, w, "potential-mass");
}

SymmetricSparseForm assemble_quarter_potential_mass(const BoxMesh& mesh, double scale) {
    const int k = mesh.k;
    WeightFn w = [k, scale](const double* x) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += 0.25 / (x[i] * x[i]);
        return scale * s;
    };
    return assemble_weighted_mass(mesh, w, "potential-mass");
}

SymmetricSparseForm assemble_weight_mass(const BoxMesh& mesh, int k) {
    if (k < 1 || k > mesh.n)
        throw std::invalid_argument("assemble_weight_mass: k must lie in [1, n]");
    WeightFn w = [k](const double* x) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += x[i] * x[i];
        return 1.0 / acc;
    };
    return assemble_weighted_mass(mesh, w, "weight-mass");
}

namespace {

// Shifted inverse iteration driver.  `backoff` allows the initial shift to
// retreat by factors of 4 until A - sigma B is positive definite (needed when
// A itself may be indefinite and sigma0 < 0 is only a guess at a lower bound).
EigenResult smallest_pencil(const SpMat& A, const SpMat& B, double sigma0, bool backoff,
                            double tol, int maxit) {
    const auto N = A.rows();
    if (N == 0) throw std::invalid_argument("smallest_pencil: empty system");
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("smallest_pencil: dimension mismatch");

    Eigen::SimplicialLDLT<SpMat> ldlt;
    auto factor_is_pd = [&](double sigma) {
        SpMat S = A - sigma * B;
        ldlt.compute(S);
        if (ldlt.info() != Eigen::Success) return false;
        return ldlt.vectorD().minCoeff() > 0.0;
    };

    double sigma = sigma0;
    if (backoff) {
        bool ok = false;
        for (int attempt = 0; attempt < 9; ++attempt) {
            if (factor_is_pd(sigma)) {
                ok = true;
                break;
            }
            sigma *= 4.0;
        }
        if (!ok)
            throw std::runtime_error(
                "smallest_pencil: could not find a positive-definite shift "
                "(form appears unbounded below at this scale)");
    } else {
        SpMat S = A - sigma * B;
        ldlt.compute(S);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("smallest_pencil: factorization failed at the initial shift");
    }

    Eigen::VectorXd v = Eigen::VectorXd::Ones(N);
    auto b_normalize = [&](Eigen::VectorXd& u) {
        const double nb = std::sqrt(u.dot(B * u));
        if (!(nb > 0.0) || !std::isfinite(nb))
            throw std::runtime_error("smallest_pencil: degenerate iterate");
        u /= nb;
    };
    b_normalize(v);

    EigenResult res;
    double lambda = v.dot(A * v);
    auto residual_of = [&](const Eigen::VectorXd& u, double lam) {
        const Eigen::VectorXd Au = A * u;
        const Eigen::VectorXd Bu = B * u;
        return (Au - lam * Bu).norm() / (Au.norm() + std::abs(lam) * Bu.norm());
    };

    int it = 0;
    bool refined = false;      // second-stage factorization done
    double best_res = 1e300;
    int since_improve = 0;
    double prev_lambda = lambda;

    while (it < maxit) {
        ++it;
        Eigen::VectorXd w = ldlt.solve(B * v);
        const double num = w.dot(A * w), den = w.dot(B * w);
        if (!(den > 0.0) || !std::isfinite(num))
            throw std::runtime_error("smallest_pencil: inner solve produced a degenerate iterate");
        lambda = num / den;
        v = std::move(w);
        b_normalize(v);

        const double r = residual_of(v, lambda);
        res.residual = r;
        if (r < best_res / 1.2) {
            best_res = r;
            since_improve = 0;
        } else if (++since_improve > 80) {
            throw std::runtime_error("smallest_pencil: inner-solve stagnation (residual " +
                                     std::to_string(r) + " after " + std::to_string(it) +
                                     " iterations)");
        }
        if (r <= tol) break;

        // Once the estimate settles, refactor just below it: the closer
        // shift turns slow geometric convergence into a fast one.
        const double settled = std::abs(lambda - prev_lambda) <= 1e-4 * (std::abs(lambda) + 1e-30);
        prev_lambda = lambda;
        if (!refined && (settled || it >= 60)) {
            double target = lambda - std::max(0.1 * (lambda - sigma), 1e-3 * (std::abs(lambda) + 1.0));
            for (int attempt = 0; attempt < 5; ++attempt) {
                if (target <= sigma) break;  // nothing better than the current shift
                if (factor_is_pd(target)) {
                    sigma = target;
                    break;
                }
                target = 0.5 * (target + sigma);  // overshot the eigenvalue: retreat
            }
            if (sigma != target) {
                // Backed off entirely: restore the stage-one factorization.
                SpMat S = A - sigma * B;
                ldlt.compute(S);
            }
            refined = true;
        }
    }
    if (res.residual > tol)
        throw std::runtime_error("smallest_pencil: no convergence to tol within " +
                                 std::to_string(maxit) + " iterations (residual " +
                                 std::to_string(res.residual) + ")");
    res.value = lambda;
    res.vector = std::move(v);
    res.iterations = it;
    return res;
}

}  // namespace

EigenResult min_rayleigh(const SymmetricSparseForm& A, const SymmetricSparseForm& B, double tol,
                         int max_iterations) {
    return smallest_pencil(A.mat, B.mat, 0.0, false, tol, max_iterations);
}

EigenResult form_smallest_eig(const SymmetricSparseForm& A_total, const SymmetricSparseForm& mass,
                              double tol, int max_iterations) {
    return smallest_pencil(A_total.mat, mass.mat, -1.0, true, tol, max_iterations);
}

EigenResult psd_check(const BoxMesh& mesh, const BetaVector& beta, double tol) {
    const SymmetricSparseForm K = assemble_stiffness(mesh);
    const SymmetricSparseForm P = assemble_potential_mass(mesh, beta);
    const SymmetricSparseForm M = assemble_mass(mesh);
    SymmetricSparseForm A{"stiffness-minus-potential", K.mat - P.mat};
    return form_smallest_eig(A, M, tol);
}

EigenResult quarter_psd_check(const BoxMesh& mesh, double scale, double tol) {
    const SymmetricSparseForm K = assemble_stiffness(mesh);
    const SymmetricSparseForm P = assemble_quarter_potential_mass(mesh, scale);
    const SymmetricSparseForm M = assemble_mass(mesh);
    SymmetricSparseForm A{"stiffness-minus-potential", K.mat - P.mat};
    return form_smallest_eig(A, M, tol);
}

}  // namespace hardylab::fem
