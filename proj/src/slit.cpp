#include "abpole/slit.hpp"

#include <cmath>

namespace abpole {

SlitSolution solve_wk(const SlitProblem& prob) {
  if (prob.k < 1 || prob.k % 2 == 0)
    throw InvalidArgument("solve_wk: k must be odd");
  if (!(prob.R_trunc >= 4.0))
    throw InvalidArgument("solve_wk: R_trunc >= 4 required");
  if (!(prob.h <= 1.0 / 16))
    throw InvalidArgument("solve_wk: h <= 1/16 required");

  DomainSpec spec = DomainSpec::half_disk(prob.R_trunc);
  spec.extra_cuts.push_back(
      {{1.0, 0.0}, {prob.R_trunc + 2.0, 0.0}, BoundaryTag::Dirichlet});

  SlitSolution sol{prob, build_grid(spec, prob.h), {}, 0, 0, 0, 0};
  const Grid& g = sol.grid;

  auto [op, load] = assemble_mixed_laplacian(g, {prob.k, prob.data_scale});
  sol.w = solve_pd_real(op, load);

  // discrete energy: all edges touching an unknown (Dirichlet values are 0)
  const int dx[2] = {1, 0};
  const int dy[2] = {0, 1};
  double energy = 0.0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const int ra = g.idx(ix, iy);
      const bool a_unknown = g.unknown[ra] >= 0;
      const bool a_dir = g.dirichlet[ra] >= 0;
      if (!a_unknown && !a_dir) continue;
      const double ua = a_unknown ? sol.w[g.unknown[ra]] : 0.0;
      for (int d = 0; d < 2; ++d) {
        const int jx = ix + dx[d], jy = iy + dy[d];
        if (jx >= g.nx || jy >= g.ny) continue;
        const int rb = g.idx(jx, jy);
        const bool b_unknown = g.unknown[rb] >= 0;
        const bool b_dir = g.dirichlet[rb] >= 0;
        if (!b_unknown && !b_dir) continue;
        if (!a_unknown && !b_unknown) continue;
        const double ub = b_unknown ? sol.w[g.unknown[rb]] : 0.0;
        const double w = (d == 0 && g.on_neumann_line(iy)) ? 0.5 : 1.0;
        energy += w * (ua - ub) * (ua - ub);
      }
    }
  }
  sol.energy = energy;
  sol.m_energy = -0.5 * energy;

  // boundary form: -(1/2) int_0^1 data * w(x1, 0) with the same
  // hat-function quadrature that built the load
  const double load_dot = prob.h * prob.h * load.dot(sol.w);
  sol.m_boundary = -0.5 * load_dot;
  sol.el_identity_gap =
      energy > 0 ? std::abs(energy - load_dot) / energy : 0.0;
  return sol;
}

ExtrapolationResult compute_mk(int k, const std::vector<double>& h_seq,
                               const std::vector<double>& R_seq,
                               std::vector<MkRow>* table,
                               bool use_boundary_form) {
  if (h_seq.size() < 2 || R_seq.size() < 2)
    throw InvalidArgument("compute_mk: need >= 2 values in each sequence");

  std::vector<std::pair<double, double>> h_samples;
  for (double h : h_seq) {
    std::vector<std::pair<double, double>> r_samples;
    for (double R : R_seq) {
      SlitSolution sol = solve_wk({k, R, h});
      if (table) table->push_back({k, h, R, sol.m_energy, sol.m_boundary});
      r_samples.emplace_back(1.0 / R, use_boundary_form ? sol.m_boundary
                                                        : sol.m_energy);
    }
    // truncation error scales like R^{-k} (far-field decay of the
    // mode-k content)
    auto rext = richardson_extrapolate(r_samples, static_cast<double>(k));
    h_samples.emplace_back(h, rext.value);
  }
  std::optional<double> order;
  if (h_samples.size() < 3) order = 1.0;
  auto out = richardson_extrapolate(h_samples, order);
  if (!out.monotone && !out.extrapolated) {
    // flagged non-monotone convergence is reported, not fatal
    return out;
  }
  return out;
}

}  // namespace abpole
