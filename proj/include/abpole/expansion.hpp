#pragma once

#include <string>
#include <vector>

#include "abpole/field.hpp"

namespace abpole {

/// Local data of an eigenfunction at its pole: vanishing order k/2,
/// coefficients (beta1, beta2) of the angular modes, and the
/// nodal-direction angle alpha0 in [0, 2*pi/k).
struct LocalExpansion {
  int k = 1;
  cplx beta1{0, 0};
  cplx beta2{0, 0};
  double alpha0 = 0.0;
  // diagnostics
  double order_fit_residual = 0.0;   // relative residual of the r^{k/2} fit
  double reality_defect = 0.0;       // |sin(arg(beta2 conj(beta1)))| when both large
  std::string source_id;             // normalization provenance

  double beta_norm2() const { return std::norm(beta1) + std::norm(beta2); }
};

struct InconclusiveOrder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Projections of the field restricted to the circle of radius r around
/// the pole onto the angular modes psi_1^j, psi_2^j (L^2(0,2pi) inner
/// products by trapezoid quadrature with >= max(256, 8j) samples).
std::pair<cplx, cplx> circle_fourier(const GridField& field,
                                     const Point& pole, double r, int j);

/// Identify the vanishing order (smallest odd j <= 9 whose coefficient
/// magnitude grows like r^{j/2}) and extract beta1, beta2 by scaled
/// two-point Richardson extrapolation in r, plus alpha0.
LocalExpansion extract_expansion(const GridField& field, const Point& pole,
                                 const std::vector<double>& radii);

/// alpha0 from the betas: (2/k) arccot(-beta2/beta1), arccot valued in
/// (0,pi); 0 when beta1 vanishes.  Reduced to [0, 2*pi/k).
double nodal_angle(int k, cplx beta1, cplx beta2);

/// Rotated-frame beta2 for the frame in which beta1 = 0 (coordinates
/// rotated by alpha0); |beta2_rot|^2 = |beta1|^2 + |beta2|^2.
cplx rotated_beta2(const LocalExpansion& e);

}  // namespace abpole
