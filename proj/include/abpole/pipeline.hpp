#pragma once

#include "abpole/slit.hpp"
#include "abpole/sweep.hpp"

namespace abpole {

/// End-to-end verification run: pole sweep, local expansion, slit
/// constant, polynomial fit, cosine-law comparison, directional limits,
/// and the blow-up profile comparison.
struct FlagshipConfig {
  SweepConfig sweep;
  std::vector<double> mk_h_seq{1.0 / 16, 1.0 / 32, 1.0 / 64};
  std::vector<double> mk_R_seq{4.0, 8.0, 16.0};

  // blow-up comparison: poles along a lattice diagonal from the base so
  // the snapped direction is exact and shared by the whole sequence
  bool run_blowup = true;
  std::vector<int> blowup_steps{32, 16, 8, 4};  // units of h_fine, diagonal
  std::vector<double> blowup_R_seq{8.0, 12.0, 16.0};
  double blowup_h = 1.0 / 16;
};

struct BlowupPoint {
  double eps = 0.0;
  double discrepancy = 0.0;
};

struct FlagshipReport {
  SweepResult sweep;
  ExtrapolationResult mk;
  std::vector<MkRow> mk_table;
  PolyFit fit;
  TheoremReport theorem;
  std::vector<DirectionalLimit> limits;     // one per requested angle
  double alpha0_star = 0.0;                 // extraction angle snapped to grid
  DirectionalLimit limit_nodal, limit_orthogonal, limit_opposite;
  std::vector<BlowupPoint> blowup;
  double blowup_alpha_rel = 0.0;
};

FlagshipReport run_flagship(const FlagshipConfig& config);

/// Eigenfunction of the n0-th level at the given pole with the gauge
/// phase fixed against the reference family of the sweep (positive real
/// overlap after the half-angle rephasing).
GridField solve_aligned_eigenfunction(const SweepResult& sweep,
                                      const Point& pole, double tol = 1e-8);

}  // namespace abpole
