#include "abpole/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "abpole/parallel.hpp"

namespace abpole {

namespace {
const double PI = std::acos(-1.0);

std::string format_run_id(const SweepConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "sweep|shape=" << static_cast<int>(c.domain.shape) << "|b=("
     << c.base_pole.x1 << "," << c.base_pole.x2 << ")|n0=" << c.n0
     << "|hfine=" << c.h_seq.back() << "|seed=" << c.seed;
  return os.str();
}

}  // namespace

std::vector<double> SweepConfig::effective_angles() const {
  if (!angles.empty()) return angles;
  std::vector<double> out;
  out.reserve(n_angles);
  for (int i = 0; i < n_angles; ++i) out.push_back(2.0 * PI * i / n_angles);
  return out;
}

SweepResult run_sweep(const SweepConfig& config) {
  if (config.n0 < 1) throw InvalidArgument("run_sweep: n0 >= 1");
  if (config.h_seq.size() < 2)
    throw InvalidArgument("run_sweep: need >= 2 spacings for extrapolation");
  for (std::size_t i = 1; i < config.h_seq.size(); ++i) {
    const double ratio = config.h_seq[i - 1] / config.h_seq[i];
    if (std::abs(ratio - 2.0) > 1e-12)
      throw InvalidArgument("run_sweep: h_seq must halve at each step");
  }
  if (config.radii.empty()) throw InvalidArgument("run_sweep: no radii");
  for (double r : config.radii)
    if (r < 4.0 * config.h_seq.front())
      throw InvalidArgument("run_sweep: radii must be >= 4h at every level");

  const auto angles = config.effective_angles();
  const int n_h = static_cast<int>(config.h_seq.size());

  // one grid per level, all anchored at the base pole
  std::vector<std::shared_ptr<Grid>> grids;
  for (double h : config.h_seq)
    grids.push_back(std::make_shared<Grid>(
        build_grid(config.domain, h, config.base_pole)));

  SweepResult res;
  res.config = config;
  res.run_id = format_run_id(config);

  // base solves; the n0-th eigenvalue must be simple
  std::vector<double> lambda0_h(n_h);
  std::vector<std::shared_ptr<GridField>> phi0_h(n_h);
  for (int ih = 0; ih < n_h; ++ih) {
    auto op = assemble_ab_laplacian(*grids[ih], config.base_pole);
    EigOptions opts;
    opts.seed = config.seed;
    auto pairs = smallest_eigenpairs(op, config.n0 + 1, config.eig_tol, opts);
    const auto& target = pairs[config.n0 - 1];
    int cluster_size = 0;
    for (const auto& p : pairs)
      if (p.cluster == target.cluster) ++cluster_size;
    if (cluster_size > 1)
      throw SimplicityViolation(
          "run_sweep: eigenvalue lambda_{n0} at the base pole is clustered");
    lambda0_h[ih] = target.value;
    phi0_h[ih] = std::make_shared<GridField>(*grids[ih], target.vector);
    if (ih == n_h - 1) {
      res.gap_above = pairs[config.n0].value - target.value;
      res.grid_finest = grids[ih];
      res.phi0 = phi0_h[ih];
    }
  }
  res.lambda0_h = lambda0_h;
  {
    std::vector<std::pair<double, double>> s;
    for (int ih = 0; ih < n_h; ++ih)
      s.emplace_back(config.h_seq[ih], lambda0_h[ih]);
    auto ext = richardson_extrapolate(s, config.diff_order);
    res.lambda0 = ext.value;
    res.lambda0_err = ext.error;
  }

  // snap requested poles to coarse-lattice plaquette centers (shared by
  // every finer dyadic level); identical plaquettes are solved once
  struct Task {
    Point pole;
    std::vector<double> lambda_h;
    bool ok = true;
    std::string note;
  };
  std::map<std::pair<long long, long long>, int> plaquette_index;
  std::vector<Task> tasks;
  std::vector<std::pair<std::size_t, int>> row_task;  // row -> task

  const Grid& coarse = *grids[0];
  for (double alpha : angles) {
    for (double r : config.radii) {
      const Point req = config.base_pole + polar(r, alpha);
      const Point eff = snap_to_plaquette_center(coarse, req);
      const long long ki =
          std::llround((eff.x1 - config.base_pole.x1) / coarse.h);
      const long long kj =
          std::llround((eff.x2 - config.base_pole.x2) / coarse.h);
      SweepRow row;
      row.alpha_req = alpha;
      row.r_req = r;
      row.pole = eff;
      const Point rel = eff - config.base_pole;
      row.r_eff = rel.norm();
      row.alpha_eff = theta0(rel).value;
      auto [it, inserted] =
          plaquette_index.try_emplace({ki, kj}, static_cast<int>(tasks.size()));
      if (inserted) {
        Task t;
        t.pole = eff;
        t.lambda_h.assign(n_h, 0.0);
        tasks.push_back(std::move(t));
      }
      row_task.emplace_back(res.rows.size(), it->second);
      res.rows.push_back(std::move(row));
    }
  }

  // concurrent map over (plaquette, level) solves
  const int n_tasks = static_cast<int>(tasks.size());
  parallel_for(n_tasks * n_h, config.jobs, [&](int idx) {
    const int it = idx / n_h;
    const int ih = idx % n_h;
    Task& t = tasks[it];
    try {
      auto op = assemble_ab_laplacian(*grids[ih], t.pole);
      EigOptions opts;
      opts.seed = config.seed;
      auto pairs =
          smallest_eigenpairs(op, config.n0, config.eig_tol, opts);
      t.lambda_h[ih] = pairs[config.n0 - 1].value;
    } catch (const std::exception& e) {
      t.ok = false;
      t.note = e.what();
    }
  });

  for (auto [ir, it] : row_task) {
    SweepRow& row = res.rows[ir];
    const Task& t = tasks[it];
    if (!t.ok) {
      row.ok = false;
      row.note = t.note;
      continue;
    }
    std::vector<std::pair<double, double>> s;
    for (int ih = 0; ih < n_h; ++ih)
      s.emplace_back(config.h_seq[ih], lambda0_h[ih] - t.lambda_h[ih]);
    auto ext = richardson_extrapolate(s, config.diff_order);
    row.diff = ext.value;
    row.err = std::max(ext.error, 1e-12);
    row.lambda_a = res.lambda0 - row.diff;
    row.lambda_a_h = t.lambda_h;
    row.ok = true;
  }

  // local expansion of phi_0 at the base pole, same normalized family;
  // |beta|^2 is gauge-invariant and carries the O(h) pole-cell bias, so it
  // is extrapolated across the levels (the per-level phases are arbitrary
  // and cannot be combined directly)
  std::vector<double> radii = config.extraction_radii;
  if (radii.empty()) {
    // legal for every level: the coarsest lattice needs r >= 4h as well
    const double r0 = std::max(0.06, 4.5 * config.h_seq.front());
    radii = {r0, 1.5 * r0, 2.25 * r0};
  }
  res.expansion = extract_expansion(*res.phi0, config.base_pole, radii);
  res.expansion.source_id = res.run_id;
  if (n_h >= 2) {
    std::vector<std::pair<double, double>> norms;
    bool orders_agree = true;
    for (int ih = 0; ih < n_h && orders_agree; ++ih) {
      bool radii_ok = true;
      for (double r : radii) radii_ok = radii_ok && r >= 4.0 * config.h_seq[ih];
      if (!radii_ok) continue;
      try {
        auto e = extract_expansion(*phi0_h[ih], config.base_pole, radii);
        if (e.k != res.expansion.k) orders_agree = false;
        norms.emplace_back(config.h_seq[ih], e.beta_norm2());
      } catch (const InconclusiveOrder&) {
        orders_agree = false;
      }
    }
    if (orders_agree && norms.size() >= 2) {
      auto ext = richardson_extrapolate(norms, 1.0);
      if (ext.extrapolated && ext.value > 0) {
        const double scale =
            std::sqrt(ext.value / res.expansion.beta_norm2());
        res.expansion.beta1 *= scale;
        res.expansion.beta2 *= scale;
      }
    }
  }
  return res;
}

DirectionalLimit directional_limit(const SweepResult& result, double alpha,
                                   int k) {
  std::vector<const SweepRow*> rows;
  for (const auto& r : result.rows)
    if (r.ok && std::abs(r.alpha_req - alpha) < 1e-12) rows.push_back(&r);
  if (rows.size() < 3)
    throw InvalidArgument("directional_limit: need >= 3 radii at this angle");
  std::sort(rows.begin(), rows.end(),
            [](auto* a, auto* b) { return a->r_eff < b->r_eff; });

  // weighted affine fit y = L + c r of y = diff / r^k: the leading
  // correction beyond the limit is one order higher in |a|
  double s0 = 0, s1 = 0, s2 = 0, b0 = 0, b1 = 0;
  for (auto* r : rows) {
    const double rk = std::pow(r->r_eff, k);
    const double y = r->diff / rk;
    const double sigma = std::max(r->err / rk, 1e-14);
    const double w = 1.0 / (sigma * sigma);
    s0 += w;
    s1 += w * r->r_eff;
    s2 += w * r->r_eff * r->r_eff;
    b0 += w * y;
    b1 += w * y * r->r_eff;
  }
  const double det = s0 * s2 - s1 * s1;
  if (det <= 0) throw InvalidArgument("directional_limit: degenerate radii");
  const double L = (s2 * b0 - s1 * b1) / det;
  const double c = (s0 * b1 - s1 * b0) / det;
  double chi2 = 0;
  for (auto* r : rows) {
    const double rk = std::pow(r->r_eff, k);
    const double sigma = std::max(r->err / rk, 1e-14);
    const double resid = (r->diff / rk - L - c * r->r_eff) / sigma;
    chi2 += resid * resid;
  }
  const int dof = static_cast<int>(rows.size()) - 2;
  const double inflate = dof > 0 ? std::max(1.0, std::sqrt(chi2 / dof)) : 1.0;
  DirectionalLimit out;
  out.alpha = alpha;
  out.value = L;
  out.err = std::sqrt(s2 / det) * inflate;
  out.n_rows = static_cast<int>(rows.size());
  return out;
}

PolyFit fit_polynomial(const SweepResult& result, int k) {
  if (k < 1 || k % 2 == 0) throw InvalidArgument("fit_polynomial: k odd");
  std::vector<const SweepRow*> rows;
  for (const auto& r : result.rows)
    if (r.ok) rows.push_back(&r);
  if (static_cast<int>(rows.size()) < 2 * (k + 1))
    throw InvalidArgument("fit_polynomial: need >= 2(k+1) rows");

  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXd X(m, k + 1);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    const Point rel = rows[i]->pole - result.config.base_pole;
    for (int j = 0; j <= k; ++j)
      X(i, j) = std::pow(rel.x1, k - j) * std::pow(rel.x2, j);
    y(i) = rows[i]->diff;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-12);
  if (qr.rank() < k + 1)
    throw InvalidArgument("fit_polynomial: rank-deficient design matrix");
  Eigen::VectorXd c = qr.solve(y);

  PolyFit fit;
  fit.k = k;
  fit.poly.degree = k;
  fit.poly.c.assign(c.data(), c.data() + k + 1);
  fit.rms_residual = std::sqrt((X * c - y).squaredNorm() / m);

  // C0 and alpha0 from the Fourier projection of g(alpha) = P(cos, sin)
  const int N = 4096;
  double A = 0, B = 0;
  for (int i = 0; i < N; ++i) {
    const double a = 2.0 * PI * i / N;
    const double g = fit.poly.eval_angle(a);
    A += g * std::cos(k * a);
    B += g * std::sin(k * a);
  }
  A *= 2.0 / N;
  B *= 2.0 / N;
  fit.C0 = std::hypot(A, B);
  double a0 = std::atan2(B, A) / k;
  const double period = 2.0 * PI / k;
  a0 = std::fmod(a0, period);
  if (a0 < 0) a0 += period;
  fit.alpha0_fit = a0;
  return fit;
}

TheoremReport check_theorem(const PolyFit& fit, const LocalExpansion& exp,
                            double mk, const SweepResult& result) {
  if (exp.source_id.empty() || exp.source_id != result.run_id)
    throw InvalidArgument(
        "check_theorem: expansion and sweep come from different normalized "
        "runs");
  const int k = fit.k;
  TheoremReport rep;
  rep.predicted_C0 = -4.0 * exp.beta_norm2() * mk / PI;
  rep.fitted_C0 = fit.C0;
  rep.rel_err_C0 =
      std::abs(rep.fitted_C0 - rep.predicted_C0) / std::abs(rep.predicted_C0);
  rep.alpha0_fit = fit.alpha0_fit;
  rep.alpha0_extracted = exp.alpha0;
  {
    const double period = 2.0 * PI / k;
    double d = std::fmod(fit.alpha0_fit - exp.alpha0, period);
    if (d < -0.5 * period) d += period;
    if (d >= 0.5 * period) d -= period;
    rep.alpha0_diff = std::abs(d);
  }
  if (k >= 2) {
    const auto lap = fit.poly.laplacian();
    double nl = 0, np = 0;
    for (double v : lap.c) nl += v * v;
    for (double v : fit.poly.c) np += v * v;
    rep.harmonicity_defect = std::sqrt(nl / np) / (k * (k - 1));
  }
  rep.fit_rms = fit.rms_residual;

  // joint weighted fit with nuisance degrees up to k+2: the lower-degree
  // Taylor blocks must come out statistically zero
  std::vector<const SweepRow*> rows;
  for (const auto& r : result.rows)
    if (r.ok) rows.push_back(&r);
  const int m = static_cast<int>(rows.size());
  int max_deg = k + 3;
  auto n_cols = [](int dmax) { return (dmax + 1) * (dmax + 2) / 2; };
  while (max_deg > k && n_cols(max_deg) > m / 2) --max_deg;
  const int nc = n_cols(max_deg);
  Eigen::MatrixXd X(m, nc);
  Eigen::VectorXd y(m), w(m);
  std::vector<std::pair<int, int>> col_id;  // (degree, j)
  for (int d = 0; d <= max_deg; ++d)
    for (int j = 0; j <= d; ++j) col_id.emplace_back(d, j);
  for (int i = 0; i < m; ++i) {
    const Point rel = rows[i]->pole - result.config.base_pole;
    for (int cix = 0; cix < nc; ++cix) {
      const auto [d, j] = col_id[cix];
      X(i, cix) = std::pow(rel.x1, d - j) * std::pow(rel.x2, j);
    }
    y(i) = rows[i]->diff;
    w(i) = 1.0 / std::max(rows[i]->err, 1e-12);
  }
  const Eigen::MatrixXd Xw = w.asDiagonal() * X;
  const Eigen::VectorXd yw = w.asDiagonal() * y;
  const Eigen::MatrixXd G = Xw.transpose() * Xw;
  const Eigen::VectorXd cfit = G.ldlt().solve(Xw.transpose() * yw);
  // row error bars are systematic extrapolation bounds, largely common
  // across rows; propagate them through the estimator as bounds:
  // c = M y with M = G^{-1} X^T Sigma^{-1}, floor_c = 3 sum_j |M_cj| err_j
  const Eigen::MatrixXd M =
      G.inverse() * (Xw.transpose() * w.asDiagonal().toDenseMatrix());
  for (int d = 0; d < k; ++d) {
    LowDegreeCheck chk;
    chk.degree = d;
    chk.max_coef = 0;
    chk.noise_floor = 0;
    for (int cix = 0; cix < nc; ++cix) {
      if (col_id[cix].first != d) continue;
      chk.max_coef = std::max(chk.max_coef, std::abs(cfit[cix]));
      double bound = 0.0;
      for (int j = 0; j < m; ++j)
        bound += std::abs(M(cix, j)) * std::max(rows[j]->err, 1e-12);
      chk.noise_floor = std::max(chk.noise_floor, 3.0 * bound);
    }
    chk.below_noise = chk.max_coef <= chk.noise_floor;
    rep.subleading.push_back(chk);
  }

  const auto recon = cosine_polynomial(k, fit.C0, fit.alpha0_fit);
  rep.recon_coef_diff.resize(k + 1);
  for (int j = 0; j <= k; ++j)
    rep.recon_coef_diff[j] = recon.c[j] - fit.poly.c[j];
  return rep;
}

}  // namespace abpole
