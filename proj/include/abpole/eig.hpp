#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "abpole/op.hpp"

namespace abpole {

/// Eigenpair of the lattice operator.  Vectors are normalized in the
/// mesh-weighted 2-norm (h^2-weighted, matching the continuum L^2
/// normalization); `cluster` groups eigenvalues closer than 1e-6
/// relative (near-degenerate, treated as one multiplet downstream).
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  double residual_norm = 0.0;
  int cluster = 0;
};

/// Phase convention data: after solving, the eigenvector is rotated so
/// that h^2 * sum premultiplier * v * conj(reference) is real positive.
struct PhaseReference {
  Eigen::VectorXcd reference;
  Eigen::VectorXcd premultiplier;
};

struct EigOptions {
  double tol = 1e-8;
  int max_iter = 500;
  int block = 0;  // 0: auto (count + 3)
  std::uint64_t seed = 0x2545F4914F6CDD1DULL;
  const PhaseReference* phase_ref = nullptr;
};

/// Lowest `count` eigenpairs of a hermitian positive semidefinite lattice
/// operator by block inverse iteration on a single factorization with
/// Rayleigh-Ritz extraction.  Deterministic for a fixed seed.  Throws
/// SolverFailure with the best residual on non-convergence.
std::vector<EigenPair> smallest_eigenpairs(const SparseOperator& op,
                                           int count, double tol,
                                           const EigOptions& opts = {});

/// Direct solve of a positive definite system to relative residual 1e-10
/// (iterative refinement on top of a sparse factorization).
Eigen::VectorXcd solve_pd(const SparseOperator& op,
                          const Eigen::VectorXcd& load);
Eigen::VectorXd solve_pd_real(const SparseOperator& op,
                              const Eigen::VectorXd& load);

struct ExtrapolationResult {
  std::vector<std::pair<double, double>> samples;  // (parameter, value)
  double value = 0.0;          // extrapolated limit
  double observed_order = 0.0; // meaningful only if order_known
  bool order_known = false;    // set when >= 3 samples allow an estimate
  double error = 0.0;          // |last sample - extrapolated|
  bool monotone = true;        // false: sign-changing differences, no extrap
  bool extrapolated = false;
};

/// Eliminate the leading error term from a sequence of values computed at
/// strictly decreasing parameters.  With model_order given, one Richardson
/// column at that order; otherwise the order is estimated from the last
/// triplet.  Non-monotone value sequences are flagged and returned
/// unextrapolated.
ExtrapolationResult richardson_extrapolate(
    const std::vector<std::pair<double, double>>& samples,
    std::optional<double> model_order = std::nullopt);

}  // namespace abpole
