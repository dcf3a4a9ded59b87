#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "hardylab/constants.hpp"

// Conforming finite elements on a truncated box with full Dirichlet boundary.
//
// Every discrete function extends by zero to a compactly supported function on
// the half/quarter-space, so each assembled Rayleigh quotient is a true upper
// bound for the corresponding infimum.  Multilinear elements on a uniform
// axis-aligned grid; all matrices integrated with fixed 2-point Gauss per
// axis, whose nodes are interior to every element and therefore never touch a
// singular set of the potentials.

namespace hardylab::fem {

struct BoxMesh {
    int n = 3;       // space dimension (2 or 3 at desk scale)
    double L = 4.0;  // half-width; leading axes span (0, L), others (-L, L)
    int div = 8;     // elements across a length-L span
    int k = 1;       // number of leading positive axes (1 = half-space)
    double h = 0.5;  // spacing, L / div

    std::vector<std::vector<double>> axes;  // node coordinates incl. boundary
    std::vector<int> inner;                 // interior node count per axis
    std::int64_t dof = 0;                   // product of inner[]

    // Row-major interior node index from per-axis interior offsets (0-based).
    std::int64_t node_index(const std::vector<int>& offsets) const;
};

// Uniform mesh on (0,L)^k x (-L,L)^(n-k) with spacing L/div.
BoxMesh make_box_mesh(int n, double L, int div, int k = 1);

struct SymmetricSparseForm {
    std::string role;  // "stiffness", "mass", "potential-mass", "weight-mass"
    Eigen::SparseMatrix<double> mat;
};

// Pointwise coefficient; receives the n quadrature-point coordinates.
using WeightFn = std::function<double(const double*)>;

SymmetricSparseForm assemble_stiffness(const BoxMesh& mesh);
SymmetricSparseForm assemble_mass(const BoxMesh& mesh);

// General weighted L2 mass; throws std::logic_error if the weight evaluates
// non-finite at a quadrature node (a node landed on a singular set).
SymmetricSparseForm assemble_weighted_mass(const BoxMesh& mesh, const WeightFn& weight,
                                           std::string role);

// Half-space potential sum_m beta_m / |X_m|^2 (prefix norms).
SymmetricSparseForm assemble_potential_mass(const BoxMesh& mesh, const BetaVector& beta);

// Quarter-space potential scale * (1/4) * sum_{i<=k} 1/x_i^2 (mesh.k axes).
SymmetricSparseForm assemble_quarter_potential_mass(const BoxMesh& mesh, double scale = 1.0);

// Rayleigh-quotient denominator weight 1/|X_k|^2.
SymmetricSparseForm assemble_weight_mass(const BoxMesh& mesh, int k);

struct EigenResult {
    double value = 0.0;
    Eigen::VectorXd vector;  // B-normalized eigenvector coefficients
    double residual = 0.0;   // |Av - lambda Bv| / (|Av| + |lambda| |Bv|)
    int iterations = 0;
};

// Smallest lambda of A v = lambda B v (A symmetric, B SPD) by shifted inverse
// iteration: a first stage at shift sigma0 localizes the eigenvalue, a second
// stage refactors just below the estimate and polishes to `tol` relative
// residual.  Start vector is deterministically all ones.  Throws
// std::runtime_error on stagnation instead of returning an unconverged value.
EigenResult min_rayleigh(const SymmetricSparseForm& A, const SymmetricSparseForm& B,
                         double tol = 1e-8, int max_iterations = 2000);

// Smallest eigenvalue estimate of the quadratic form (stiffness - potential)
// relative to plain mass, i.e. min of (u'Au)/(u'Mu).  The initial shift
// starts at -1 and backs off by factors of 4 until A - sigma M is positive
// definite, so indefinite (supercritical) forms are handled too.
EigenResult form_smallest_eig(const SymmetricSparseForm& A_total,
                              const SymmetricSparseForm& mass, double tol = 1e-8,
                              int max_iterations = 4000);

// Half-space positivity check: smallest eig of stiffness - potential-mass(beta).
EigenResult psd_check(const BoxMesh& mesh, const BetaVector& beta, double tol = 1e-8);

// Quarter-space variant with the coordinate-wise potential; `scale` != 1
// probes the supercritical side.
EigenResult quarter_psd_check(const BoxMesh& mesh, double scale = 1.0, double tol = 1e-8);

}  // namespace hardylab::fem
