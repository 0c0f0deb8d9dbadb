#pragma once

#include <vector>

#include "abpole/geom.hpp"

namespace abpole {

/// Homogeneous polynomial sum_j c[j] x1^{deg-j} x2^j.
struct HomogeneousPoly {
  int degree = 0;
  std::vector<double> c;  // size degree+1

  double eval(double x1, double x2) const;
  double eval_angle(double alpha) const;  // on the unit circle
  /// Coefficients of the Laplacian, a homogeneous polynomial of degree-2
  /// (empty for degree < 2).
  HomogeneousPoly laplacian() const;
};

/// prod_{j=1..k} sin(pi(2j-1)/(2k) - alpha); equals 2^{1-k} cos(k alpha).
double sin_product(int k, double alpha);

/// Rank of the k x (h+1) matrix M[j][i] = cos^{h-i}(t_j) sin^i(t_j) with
/// t_j = theta_bar + 2*pi*j/k, pivot threshold 1e-10.  Full column rank
/// h+1 whenever h < k: only the zero polynomial of degree < k vanishes on
/// all k directions.
int direction_rank(int h, int k, double theta_bar);

struct FactorRoots {
  std::vector<double> roots;    // in (0, pi), ascending
  bool theorem_consistent = true;  // false: fewer than k real roots
};

/// Roots in (0,pi) of g(alpha) = P(cos alpha, sin alpha) for a degree-k
/// homogeneous P with c0 != 0, via the cotangent substitution
/// g = sin^k(alpha) * Ptilde(cot alpha) and companion-matrix roots of the
/// one-variable polynomial, Newton-polished.
FactorRoots factor_roots(const HomogeneousPoly& g);

/// Coefficients of C0 * Re(e^{-i k alpha0} (x1 + i x2)^k).
HomogeneousPoly cosine_polynomial(int k, double C0, double alpha0);

}  // namespace abpole
