#pragma once

#include <memory>
#include <string>
#include <vector>

#include "abpole/expansion.hpp"
#include "abpole/identities.hpp"
#include "abpole/profile.hpp"

namespace abpole {

/// Pole sweep configuration.  Spacings must be strictly decreasing and
/// dyadic (each a halving of the first): requested poles are snapped to
/// plaquette centers of the coarsest lattice, which are plaquette centers
/// of every finer lattice as well, so the effective pole is the same
/// geometric object at every spacing and the h-extrapolation of the
/// eigenvalue differences is meaningful.  Rows carry the snapped
/// positions.
struct SweepConfig {
  DomainSpec domain = DomainSpec::disk({0, 0}, 1.0);
  Point base_pole{0.3, 0.0};
  int n0 = 1;
  std::vector<double> radii{0.04, 0.06, 0.09, 0.135};
  std::vector<double> angles;  // empty: n_angles uniform in [0, 2pi)
  int n_angles = 16;
  std::vector<double> h_seq{1.0 / 128, 1.0 / 256};
  std::vector<double> extraction_radii;  // empty: scaled defaults
  double eig_tol = 1e-8;
  double diff_order = 0.9;  // observed order of the difference in h
  int jobs = 1;
  std::uint64_t seed = 0x5DEECE66DULL;

  std::vector<double> effective_angles() const;
};

struct SweepRow {
  double alpha_req = 0.0;   // requested direction (group key)
  double r_req = 0.0;       // requested |a - b|
  double alpha_eff = 0.0;   // direction of the snapped pole
  double r_eff = 0.0;       // |a_eff - b|
  Point pole;               // snapped pole (absolute coordinates)
  double diff = 0.0;        // extrapolated lambda_0 - lambda_a
  double err = 0.0;         // extrapolation error bar
  double lambda_a = 0.0;    // lambda_0_ext - diff
  std::vector<double> lambda_a_h;
  bool ok = false;
  std::string note;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  double lambda0 = 0.0;      // extrapolated
  double lambda0_err = 0.0;
  std::vector<double> lambda0_h;
  double gap_above = 0.0;    // lambda_{n0+1} - lambda_{n0} at finest h
  LocalExpansion expansion;  // local data of phi_0 at the base pole
  std::shared_ptr<Grid> grid_finest;
  std::shared_ptr<GridField> phi0;
  std::string run_id;
};

struct SimplicityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SweepResult run_sweep(const SweepConfig& config);

struct DirectionalLimit {
  double alpha = 0.0;
  double value = 0.0;  // lim (lambda_0 - lambda_a)/|a|^k along alpha
  double err = 0.0;
  int n_rows = 0;
};

/// Limit of (lambda_0 - lambda_a)/|a|^k along the rows of one requested
/// direction: weighted affine fit in |a| (leading correction order 1).
DirectionalLimit directional_limit(const SweepResult& result, double alpha,
                                   int k);

struct PolyFit {
  int k = 1;
  HomogeneousPoly poly;      // fitted degree-k homogeneous polynomial
  double C0 = 0.0;
  double alpha0_fit = 0.0;   // in [0, 2pi/k)
  double rms_residual = 0.0;
};

PolyFit fit_polynomial(const SweepResult& result, int k);

struct LowDegreeCheck {
  int degree;
  double max_coef;
  double noise_floor;  // 3x propagated error bar
  bool below_noise;
};

struct TheoremReport {
  double predicted_C0 = 0.0;  // -4 (|b1|^2+|b2|^2) m_k / pi
  double fitted_C0 = 0.0;
  double rel_err_C0 = 0.0;
  double alpha0_fit = 0.0;
  double alpha0_extracted = 0.0;
  double alpha0_diff = 0.0;  // wrapped to [-pi/k, pi/k]
  double harmonicity_defect = 0.0;
  std::vector<LowDegreeCheck> subleading;
  std::vector<double> recon_coef_diff;  // vs C0 Re(e^{-ik a0}(a1+i a2)^k)
  double fit_rms = 0.0;
};

/// Compare the fitted polynomial with the prediction assembled from the
/// local expansion and the slit constant; all inputs must come from the
/// same normalized run (enforced via the expansion's source id).
TheoremReport check_theorem(const PolyFit& fit, const LocalExpansion& exp,
                            double mk, const SweepResult& result);

}  // namespace abpole
