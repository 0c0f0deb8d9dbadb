#pragma once

#include <memory>
#include <vector>

#include "abpole/eig.hpp"
#include "abpole/expansion.hpp"
#include "abpole/field.hpp"

namespace abpole {

/// Magnetic limit problem on the disk D_R with pole p = (cos alpha,
/// sin alpha): (i grad + A_p)^2 w_R = 0 with Dirichlet trace
/// e^{i(theta_p - theta_0^p)/2} e^{i theta_0/2} psi_k on |x| = R.
struct ProfileProblem {
  int k = 1;
  double alpha = 0.0;
  double R = 8.0;
  double h = 1.0 / 16;
};

struct ProfileSolution {
  ProfileProblem prob;
  std::shared_ptr<Grid> grid;
  GridField field;  // w_R with Dirichlet trace values on the ring
  cplx upsilon1{0, 0};  // upsilon_R(1) by gauged projection
};

/// Dirichlet boundary trace of the limit problem at x.
cplx profile_boundary_value(int k, double alpha, const Point& x);

ProfileSolution solve_wR(const ProfileProblem& prob);

/// Gauged Fourier-type coefficient
///   upsilon_R(r) = int_0^{2pi} e^{-i theta_p/2} w_R e^{i theta_0^p/2}
///                  conj(psi_2^k(t)) dt
/// on the circle of radius r (midpoint rule split at the cut angle).
cplx compute_upsilon(const ProfileSolution& sol, double r);
std::vector<std::pair<double, cplx>> compute_upsilon(
    const ProfileSolution& sol, const std::vector<double>& r_grid);

/// Two-term radial structure A r^{k/2} + B r^{-k/2} of upsilon_R:
/// closed-form coefficients from upsilon_R(1) and the boundary projection.
struct UpsilonLaw {
  cplx A, B;          // closed form
  cplx A_fit, B_fit;  // least squares through samples
  double fit_rel_rms = 0.0;   // residual of the fitted law
  double law_rel_rms = 0.0;   // residual of the closed-form law
};
UpsilonLaw upsilon_law(const ProfileSolution& sol,
                       const std::vector<std::pair<double, cplx>>& samples);

/// kappa_tilde_R = i k sqrt(pi) R^k (sqrt(pi) - upsilon_R(1)) / (R^k - 1).
cplx kappa_tilde(const ProfileSolution& sol);

struct FAlpha {
  double alpha = 0.0;
  int k = 1;
  double value = 0.0;   // f(alpha) = Re xi_p(1) - sqrt(pi)
  cplx xi1{0, 0};       // extrapolated xi_p(1)
  double sqrt_pi = 0.0;
  double err = 0.0;
  double imag_defect = 0.0;  // |Im xi| / (1 + |xi|), f is real in the limit
};

struct FalphaRow {
  int k;
  double alpha, R, h;
  double re_xi, im_xi, f;
};

/// xi_p(1) = lim_R upsilon_R(1), extrapolated first in R (two Richardson
/// columns at orders k and k+1), then in h.
FAlpha xi_and_f(int k, double alpha, const std::vector<double>& R_seq,
                const std::vector<double>& h_seq,
                std::vector<FalphaRow>* table = nullptr);

/// Pointwise R -> infinity extrapolation of w_R fields computed on nested
/// grids of identical spacing and anchor; represents the limit profile on
/// the smallest grid.
struct ProfileStack {
  int k = 1;
  double alpha = 0.0;
  std::shared_ptr<Grid> grid;
  GridField field;
};
ProfileStack extrapolate_profile(const std::vector<ProfileSolution>& sols);

/// Relative L2 distance on the annulus 1.5 <= |x| <= 3 (blow-up
/// coordinates) between the rescaled eigenfunction around `base` and the
/// rotated-frame multiple of the limit profile.
double blowup_compare(const GridField& eig_field, const Point& pole,
                      const Point& base, const LocalExpansion& expansion,
                      const ProfileStack& profile);

}  // namespace abpole
