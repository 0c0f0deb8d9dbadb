#pragma once

#include <vector>

#include "abpole/eig.hpp"
#include "abpole/field.hpp"

namespace abpole {

/// Truncated variational problem for w_k on the upper half-plane with the
/// slit {x1 >= 1, x2 = 0}: Dirichlet 0 on the slit and on the artificial
/// arc |x| = R_trunc, Neumann data (k/2) x1^{k/2-1} on 0 < x1 < 1 and 0 on
/// x1 < 0.
struct SlitProblem {
  int k = 1;
  double R_trunc = 8.0;
  double h = 1.0 / 32;
  double data_scale = 1.0;  // multiplies the Neumann data (scaling tests)
};

struct SlitSolution {
  SlitProblem prob;
  Grid grid;
  Eigen::VectorXd w;        // unknown values
  double energy = 0.0;      // sum over edges of the discrete |grad w|^2
  double m_energy = 0.0;    // -energy/2
  double m_boundary = 0.0;  // -(1/2) int_0^1 data * w(.,0)
  double el_identity_gap = 0.0;  // |energy - load.w| / energy
};

SlitSolution solve_wk(const SlitProblem& prob);

struct MkRow {
  int k;
  double h, R;
  double m_energy, m_boundary;
};

/// Double extrapolation of the slit constant: first R -> infinity at fixed
/// h (known O(R^-k) truncation scale), then h -> 0 at the empirically
/// estimated order.  Rows of the (k,h,R) table are appended to *table when
/// given.
ExtrapolationResult compute_mk(int k, const std::vector<double>& h_seq,
                               const std::vector<double>& R_seq,
                               std::vector<MkRow>* table = nullptr,
                               bool use_boundary_form = false);

}  // namespace abpole
