#include "abpole/pipeline.hpp"

#include <cmath>

namespace abpole {

namespace {
const double PI = std::acos(-1.0);

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * PI);
  if (a < 0) a += 2.0 * PI;
  return a;
}
}  // namespace

GridField solve_aligned_eigenfunction(const SweepResult& sweep,
                                      const Point& pole, double tol) {
  const Grid& g = *sweep.grid_finest;
  const Point& b = sweep.config.base_pole;
  auto op = assemble_ab_laplacian(g, pole);

  PhaseReference ref;
  ref.reference.resize(g.n_unknown());
  ref.premultiplier.resize(g.n_unknown());
  const Point rel_pole = pole - b;
  for (int i = 0; i < g.n_unknown(); ++i) {
    const Point x = g.coord(g.unknown_raster[i]);
    ref.reference[i] = sweep.phi0->raw()[g.unknown_raster[i]];
    const Point rel = x - b;
    const double t0a = theta_pole(rel, rel_pole, true).value;
    const double ta = theta_pole(rel, rel_pole, false).value;
    ref.premultiplier[i] = std::polar(1.0, 0.5 * (t0a - ta));
  }
  EigOptions opts;
  opts.seed = sweep.config.seed;
  opts.phase_ref = &ref;
  auto pairs = smallest_eigenpairs(op, sweep.config.n0, tol, opts);
  return GridField(g, pairs[sweep.config.n0 - 1].vector);
}

FlagshipReport run_flagship(const FlagshipConfig& config) {
  FlagshipReport rep;
  rep.sweep = run_sweep(config.sweep);
  const int k = rep.sweep.expansion.k;

  rep.mk = compute_mk(k, config.mk_h_seq, config.mk_R_seq, &rep.mk_table);
  rep.fit = fit_polynomial(rep.sweep, k);
  rep.theorem = check_theorem(rep.fit, rep.sweep.expansion, rep.mk.value,
                              rep.sweep);

  const auto angles = config.sweep.effective_angles();
  for (double a : angles) rep.limits.push_back(directional_limit(rep.sweep, a, k));

  // snap the extracted nodal direction to the nearest requested angle so
  // the three sign-pattern limits read existing row groups
  double best = angles.front(), bd = 1e300;
  for (double a : angles) {
    double d = std::abs(wrap_2pi(rep.sweep.expansion.alpha0 - a));
    d = std::min(d, 2.0 * PI - d);
    if (d < bd) {
      bd = d;
      best = a;
    }
  }
  rep.alpha0_star = best;
  auto angle_at = [&](double offset) {
    double want = wrap_2pi(best + offset);
    for (double a : angles)
      if (std::abs(wrap_2pi(a - want)) < 1e-9 ||
          std::abs(wrap_2pi(a - want) - 2.0 * PI) < 1e-9)
        return a;
    throw InvalidArgument("run_flagship: required angle missing from sweep");
  };
  rep.limit_nodal = directional_limit(rep.sweep, angle_at(0.0), k);
  rep.limit_orthogonal =
      directional_limit(rep.sweep, angle_at(0.5 * PI / k), k);
  rep.limit_opposite = directional_limit(rep.sweep, angle_at(PI / k), k);

  if (config.run_blowup) {
    const double hf = config.sweep.h_seq.back();
    const Point& b = config.sweep.base_pole;
    // diagonal lattice direction: snapped poles are exactly on it
    const double dir = 0.25 * PI;
    rep.blowup_alpha_rel = wrap_2pi(dir - rep.sweep.expansion.alpha0);

    std::vector<ProfileSolution> sols;
    for (double R : config.blowup_R_seq)
      sols.push_back(solve_wR({k, rep.blowup_alpha_rel, R, config.blowup_h}));
    ProfileStack stack = extrapolate_profile(sols);

    for (int m : config.blowup_steps) {
      const Point pole{b.x1 + m * hf, b.x2 + m * hf};
      GridField phi_a = solve_aligned_eigenfunction(rep.sweep, pole);
      BlowupPoint pt;
      pt.eps = (pole - b).norm();
      pt.discrepancy =
          blowup_compare(phi_a, pole, b, rep.sweep.expansion, stack);
      rep.blowup.push_back(pt);
    }
  }
  return rep;
}

}  // namespace abpole
