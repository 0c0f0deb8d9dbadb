#include "abpole/profile.hpp"

#include <cmath>

namespace abpole {

namespace {
const double PI = std::acos(-1.0);
const double SQRT_PI = std::sqrt(PI);

double wrap_2pi(double a) {
  a = std::fmod(a, 2.0 * PI);
  if (a < 0) a += 2.0 * PI;
  return a;
}
}  // namespace

cplx profile_boundary_value(int k, double alpha, const Point& x) {
  const Point p = polar(1.0, alpha);
  const double tp = theta_pole(x, p, false).value;
  const double t0p = theta_pole(x, p, true).value;
  const double t0 = theta0(x).value;
  return std::polar(1.0, 0.5 * (tp - t0p)) * std::polar(1.0, 0.5 * t0) *
         psi_k_eval(k, x);
}

ProfileSolution solve_wR(const ProfileProblem& prob) {
  if (prob.k < 1 || prob.k % 2 == 0)
    throw InvalidArgument("solve_wR: k must be odd");
  if (!(prob.R > 2.0)) throw InvalidArgument("solve_wR: R > 2 required");
  const Point p = polar(1.0, prob.alpha);

  // anchoring the lattice at the pole keeps the pole-cell error uniform
  // across alpha and makes reflected configurations exactly symmetric
  auto grid = std::make_shared<Grid>(
      build_grid(DomainSpec::disk({0, 0}, prob.R), prob.h, p));
  auto op = assemble_ab_laplacian(*grid, p);
  auto bv = [&](const Point& x) {
    return profile_boundary_value(prob.k, prob.alpha, x);
  };
  auto load = dirichlet_lift(*grid, op, bv);
  auto u = solve_pd(op, load);

  ProfileSolution sol{prob, grid, GridField(*grid, u, bv), cplx(0, 0)};
  sol.upsilon1 = compute_upsilon(sol, 1.0);
  return sol;
}

cplx compute_upsilon(const ProfileSolution& sol, double r) {
  if (!(r >= 1.0) || !(r <= sol.prob.R))
    throw InvalidArgument("compute_upsilon: r outside [1, R]");
  const int k = sol.prob.k;
  const Point p = polar(1.0, sol.prob.alpha);
  const int N = 512;
  // midpoint samples offset from the cut angle: the gauge factors jump
  // only across the ray through p, never at a sample
  cplx acc = 0.0;
  for (int m = 0; m < N; ++m) {
    const double t = sol.prob.alpha + (m + 0.5) * 2.0 * PI / N;
    const Point x = polar(r, t);
    const double tp = theta_pole(x, p, false).value;
    const double t0p = theta_pole(x, p, true).value;
    const cplx w = sol.field.bilinear(x);
    acc += std::polar(1.0, 0.5 * (t0p - tp)) * w *
           std::conj(angular_mode_eval({k, ModeKind::Sine}, t));
  }
  return acc * (2.0 * PI / N);
}

std::vector<std::pair<double, cplx>> compute_upsilon(
    const ProfileSolution& sol, const std::vector<double>& r_grid) {
  std::vector<std::pair<double, cplx>> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) out.emplace_back(r, compute_upsilon(sol, r));
  return out;
}

UpsilonLaw upsilon_law(const ProfileSolution& sol,
                       const std::vector<std::pair<double, cplx>>& samples) {
  const int k = sol.prob.k;
  const double Rk = std::pow(sol.prob.R, k);
  UpsilonLaw law;
  law.A = (Rk * SQRT_PI - sol.upsilon1) / (Rk - 1.0);
  law.B = -Rk * (SQRT_PI - sol.upsilon1) / (Rk - 1.0);

  Eigen::MatrixXcd X(samples.size(), 2);
  Eigen::VectorXcd y(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    X(i, 0) = std::pow(samples[i].first, 0.5 * k);
    X(i, 1) = std::pow(samples[i].first, -0.5 * k);
    y(i) = samples[i].second;
  }
  Eigen::Vector2cd ab = X.colPivHouseholderQr().solve(y);
  law.A_fit = ab[0];
  law.B_fit = ab[1];

  double rss_fit = 0, rss_law = 0, tss = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const cplx fit = ab[0] * X(i, 0) + ab[1] * X(i, 1);
    const cplx closed = law.A * X(i, 0) + law.B * X(i, 1);
    rss_fit += std::norm(samples[i].second - fit);
    rss_law += std::norm(samples[i].second - closed);
    tss += std::norm(samples[i].second);
  }
  law.fit_rel_rms = std::sqrt(rss_fit / tss);
  law.law_rel_rms = std::sqrt(rss_law / tss);
  return law;
}

cplx kappa_tilde(const ProfileSolution& sol) {
  const double Rk = std::pow(sol.prob.R, sol.prob.k);
  return cplx(0, 1) * static_cast<double>(sol.prob.k) * SQRT_PI * Rk *
         (SQRT_PI - sol.upsilon1) / (Rk - 1.0);
}

FAlpha xi_and_f(int k, double alpha, const std::vector<double>& R_seq,
                const std::vector<double>& h_seq,
                std::vector<FalphaRow>* table) {
  if (R_seq.size() < 2 || h_seq.size() < 2)
    throw InvalidArgument("xi_and_f: need >= 2 values in each sequence");

  std::vector<std::pair<double, double>> h_re, h_im;
  double r_stage_err = 0.0;
  for (double h : h_seq) {
    std::vector<std::pair<double, double>> re, im;
    for (double R : R_seq) {
      auto sol = solve_wR({k, alpha, R, h});
      if (table)
        table->push_back({k, alpha, R, h, sol.upsilon1.real(),
                          sol.upsilon1.imag(),
                          sol.upsilon1.real() - SQRT_PI});
      re.emplace_back(1.0 / R, sol.upsilon1.real());
      im.emplace_back(1.0 / R, sol.upsilon1.imag());
    }
    // truncation error O(R^-k); a second elimination column at order k+1
    // is applied when three radii are available
    auto re1 = richardson_extrapolate(re, static_cast<double>(k));
    auto im1 = richardson_extrapolate(im, static_cast<double>(k));
    double re_val = re1.value, im_val = im1.value;
    if (re.size() >= 3) {
      std::vector<std::pair<double, double>> col;
      for (std::size_t i = 0; i + 1 < re.size(); ++i) {
        const double rho = re[i].first / re[i + 1].first;
        const double den = std::pow(rho, k) - 1.0;
        col.emplace_back(re[i + 1].first,
                         re[i + 1].second + (re[i + 1].second - re[i].second) / den);
      }
      auto re2 = richardson_extrapolate(col, static_cast<double>(k + 1));
      if (re2.extrapolated) re_val = re2.value;
    }
    r_stage_err = std::max(r_stage_err, re1.error);
    h_re.emplace_back(h, re_val);
    h_im.emplace_back(h, im_val);
  }

  std::optional<double> h_order;
  if (h_re.size() < 3) h_order = 1.0;
  auto hr = richardson_extrapolate(h_re, h_order);
  auto hi = richardson_extrapolate(h_im, h_order);

  FAlpha f;
  f.alpha = alpha;
  f.k = k;
  f.xi1 = cplx(hr.value, hi.value);
  f.sqrt_pi = SQRT_PI;
  f.value = hr.value - SQRT_PI;
  f.err = hr.error + 0.25 * r_stage_err;
  f.imag_defect = std::abs(hi.value) / (1.0 + std::abs(f.xi1));
  return f;
}

ProfileStack extrapolate_profile(const std::vector<ProfileSolution>& sols) {
  if (sols.empty()) throw InvalidArgument("extrapolate_profile: no input");
  for (std::size_t i = 1; i < sols.size(); ++i) {
    if (sols[i].prob.h != sols[0].prob.h ||
        sols[i].prob.alpha != sols[0].prob.alpha ||
        sols[i].prob.k != sols[0].prob.k)
      throw InvalidArgument("extrapolate_profile: mixed problem families");
    if (!(sols[i].prob.R > sols[i - 1].prob.R))
      throw InvalidArgument("extrapolate_profile: R must increase");
  }
  const Grid& g0 = *sols[0].grid;
  ProfileStack out{sols[0].prob.k, sols[0].prob.alpha, sols[0].grid,
                   sols[0].field};
  if (sols.size() == 1) return out;

  const int k = sols[0].prob.k;
  Eigen::VectorXcd& v = out.field.raw();
  for (int iy = 0; iy < g0.ny; ++iy) {
    for (int ix = 0; ix < g0.nx; ++ix) {
      if (!out.field.defined_at(ix, iy)) continue;
      const Point x = g0.coord(ix, iy);
      bool ok = true;
      std::vector<std::pair<double, cplx>> seq;
      for (const auto& s : sols) {
        const Grid& g = *s.grid;
        const int jx = static_cast<int>(std::lround((x.x1 - g.x0) / g.h));
        const int jy = static_cast<int>(std::lround((x.x2 - g.y0) / g.h));
        if (!s.field.defined_at(jx, jy)) {
          ok = false;
          break;
        }
        seq.emplace_back(1.0 / s.prob.R, s.field.node(jx, jy));
      }
      if (!ok) continue;
      // one Richardson column at order k, per node, on (1/R)
      cplx val = seq.back().second;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const double rho = seq[i].first / seq[i + 1].first;
        const double den = std::pow(rho, k) - 1.0;
        val = seq[i + 1].second + (seq[i + 1].second - seq[i].second) / den;
      }
      v[g0.idx(ix, iy)] = val;
    }
  }
  return out;
}

double blowup_compare(const GridField& eig_field, const Point& pole,
                      const Point& base, const LocalExpansion& expansion,
                      const ProfileStack& profile) {
  if (expansion.k != profile.k)
    throw InvalidArgument("blowup_compare: order mismatch");
  const int k = expansion.k;
  const Point d = pole - base;
  const double eps = d.norm();
  if (eps == 0.0) throw InvalidArgument("blowup_compare: pole at base");
  const double dir = theta0(d).value;
  const double alpha_rel = wrap_2pi(dir - expansion.alpha0);
  if (std::abs(alpha_rel - profile.alpha) > 1e-9 &&
      std::abs(std::abs(alpha_rel - profile.alpha) - 2.0 * PI) > 1e-9)
    throw InvalidArgument(
        "blowup_compare: profile direction does not match the pole");

  const cplx c = rotated_beta2(expansion) / SQRT_PI;
  const double ca = std::cos(expansion.alpha0), sa = std::sin(expansion.alpha0);
  const double scale = std::pow(eps, 0.5 * k);

  const int nr = 12, nt = 192;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = 1.5 + (i + 0.5) * 1.5 / nr;
    for (int j = 0; j < nt; ++j) {
      const double t = (j + 0.5) * 2.0 * PI / nt;
      const Point xb = polar(r, t);
      const Point phys{base.x1 + eps * (ca * xb.x1 - sa * xb.x2),
                       base.x2 + eps * (sa * xb.x1 + ca * xb.x2)};
      cplx B, W;
      try {
        B = eig_field.bilinear(phys) / scale;
        W = c * profile.field.bilinear(xb);
      } catch (const InvalidArgument&) {
        throw InvalidArgument("blowup_compare: annulus exits the domain");
      }
      num += r * std::norm(B - W);
      den += r * std::norm(W);
    }
  }
  return std::sqrt(num / den);
}

}  // namespace abpole
