#include <doctest.h>

#include <cmath>

#include "abpole/sweep.hpp"

using namespace abpole;

namespace {
const double PI = std::acos(-1.0);

// synthetic sweep table with a prescribed difference law
SweepResult synthetic_sweep(const std::function<double(double a1, double a2)>& law,
                            int n_angles = 16,
                            std::vector<double> radii = {0.02, 0.03, 0.045},
                            double rotate = 0.0) {
  SweepResult res;
  res.config.base_pole = {0, 0};
  res.run_id = "synthetic";
  for (int i = 0; i < n_angles; ++i) {
    const double alpha = 2.0 * PI * i / n_angles + rotate;
    for (double r : radii) {
      SweepRow row;
      row.alpha_req = alpha;
      row.r_req = r;
      row.alpha_eff = alpha;
      row.r_eff = r;
      row.pole = polar(r, alpha);
      row.diff = law(row.pole.x1, row.pole.x2);
      row.err = 1e-9;
      row.ok = true;
      res.rows.push_back(row);
    }
  }
  return res;
}
}  // namespace

TEST_CASE("fit recovers an in-span cosine law exactly") {
  auto res = synthetic_sweep([](double a1, double a2) {
    const double r = std::hypot(a1, a2);
    const double alpha = std::atan2(a2, a1);
    return 2.0 * r * std::cos(alpha - 0.7);
  });
  auto fit = fit_polynomial(res, 1);
  CHECK(fit.C0 == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(fit.alpha0_fit == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(fit.rms_residual < 1e-12);
  // coefficients of 2 Re(e^{-i 0.7}(a1 + i a2))
  CHECK(fit.poly.c[0] == doctest::Approx(2.0 * std::cos(0.7)).epsilon(1e-10));
  CHECK(fit.poly.c[1] == doctest::Approx(2.0 * std::sin(0.7)).epsilon(1e-10));
}

TEST_CASE("harmonic-plus-noise: residual sits at the noise floor") {
  std::uint64_t s = 7;
  auto noise = [&s]() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return 2e-6 * (static_cast<double>(s >> 11) * 0x1p-53 - 0.5);
  };
  auto res = synthetic_sweep([&](double a1, double a2) {
    const double r = std::hypot(a1, a2);
    const double alpha = std::atan2(a2, a1);
    return 1.3 * r * std::cos(alpha - 0.2) + noise();
  });
  auto fit = fit_polynomial(res, 1);
  CHECK(fit.rms_residual < 2e-6);
  CHECK(fit.rms_residual > 1e-8);
  CHECK(fit.C0 == doctest::Approx(1.3).epsilon(1e-4));
}

TEST_CASE("rotation covariance of the fitted nodal angle") {
  for (double gamma : {0.3, 1.9}) {
    auto res = synthetic_sweep(
        [&](double a1, double a2) {
          const double r = std::hypot(a1, a2);
          const double alpha = std::atan2(a2, a1);
          return 0.8 * r * std::cos(alpha - (0.7 + gamma));
        },
        16, {0.02, 0.03, 0.045}, gamma);
    auto fit = fit_polynomial(res, 1);
    CHECK(fit.C0 == doctest::Approx(0.8).epsilon(1e-9));
    const double want = std::fmod(0.7 + gamma, 2.0 * PI);
    CHECK(fit.alpha0_fit == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("odd degree makes g antipodal-odd") {
  auto res = synthetic_sweep([](double a1, double a2) {
    return 0.4 * a1 + 0.9 * a2;
  });
  auto fit = fit_polynomial(res, 1);
  for (double a : {0.1, 1.0, 2.2, 4.4}) {
    CHECK(fit.poly.eval_angle(a + PI) ==
          doctest::Approx(-fit.poly.eval_angle(a)).epsilon(1e-12));
  }
}

TEST_CASE("rank-deficient designs are rejected") {
  // all poles on one line: a2 column is identically zero
  SweepResult res;
  res.config.base_pole = {0, 0};
  for (double r : {0.02, 0.03, 0.045, 0.06}) {
    SweepRow row;
    row.alpha_req = 0.0;
    row.r_eff = row.r_req = r;
    row.pole = {r, 0.0};
    row.diff = r;
    row.err = 1e-9;
    row.ok = true;
    res.rows.push_back(row);
  }
  CHECK_THROWS_AS(fit_polynomial(res, 1), InvalidArgument);
}

TEST_CASE("directional limit removes the next-order term") {
  auto res = synthetic_sweep([](double a1, double a2) {
    const double r = std::hypot(a1, a2);
    const double alpha = std::atan2(a2, a1);
    return r * (1.7 * std::cos(alpha) + 3.0 * r);
  });
  auto lim = directional_limit(res, 0.0, 1);
  CHECK(lim.value == doctest::Approx(1.7).epsilon(1e-9));
  auto lim2 = directional_limit(res, PI / 2, 1);
  CHECK(std::abs(lim2.value) < 1e-9);
  CHECK_THROWS_AS(directional_limit(res, 0.123, 1), InvalidArgument);
}

TEST_CASE("check_theorem wiring") {
  auto res = synthetic_sweep([](double a1, double a2) {
    const double r = std::hypot(a1, a2);
    const double alpha = std::atan2(a2, a1);
    return 0.5 * r * std::cos(alpha);
  });
  auto fit = fit_polynomial(res, 1);

  LocalExpansion e;
  e.k = 1;
  e.beta1 = 0.0;
  e.beta2 = 1.0;  // |beta|^2 = 1
  e.alpha0 = 0.0;
  e.source_id = "synthetic";
  // prediction -4 |beta|^2 m / pi = 0.5 requires m = -pi/8
  const double mk = -PI / 8.0;
  auto rep = check_theorem(fit, e, mk, res);
  CHECK(rep.predicted_C0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.rel_err_C0 < 1e-9);
  CHECK(rep.alpha0_diff < 1e-9);
  CHECK(rep.harmonicity_defect == 0.0);  // degree 1: trivially harmonic
  REQUIRE(rep.subleading.size() == 1);
  CHECK(rep.subleading[0].degree == 0);
  CHECK(rep.subleading[0].below_noise);
  for (double d : rep.recon_coef_diff) CHECK(std::abs(d) < 1e-9);

  // mixed normalization rejected
  LocalExpansion bad = e;
  bad.source_id = "another-run";
  CHECK_THROWS_AS(check_theorem(fit, bad, mk, res), InvalidArgument);
}

TEST_CASE("run_sweep on a small real configuration") {
  SweepConfig cfg;
  cfg.domain = DomainSpec::disk({0, 0}, 1.0);
  cfg.base_pole = {0.3, 0.0};
  cfg.n0 = 1;
  cfg.radii = {0.15, 0.2, 0.28};
  cfg.n_angles = 4;
  cfg.h_seq = {1.0 / 32, 1.0 / 64};
  cfg.extraction_radii = {0.1, 0.15, 0.225};
  auto res = run_sweep(cfg);

  CHECK(res.rows.size() == 12);
  int ok_rows = 0;
  for (const auto& r : res.rows) {
    if (!r.ok) continue;
    ++ok_rows;
    CHECK(r.err > 0.0);
    CHECK(std::abs(r.r_eff - r.r_req) < 1.5 * cfg.h_seq.front());
    // snapped pole is a plaquette center of both levels: offsets from the
    // base are integer multiples of the coarse spacing
    const Point rel = r.pole - cfg.base_pole;
    const double fx = rel.x1 / cfg.h_seq.front();
    const double fy = rel.x2 / cfg.h_seq.front();
    CHECK(std::abs(fx - std::round(fx)) < 1e-9);
    CHECK(std::abs(fy - std::round(fy)) < 1e-9);
  }
  CHECK(ok_rows == 12);
  CHECK(res.lambda0 > 6.0);
  CHECK(res.lambda0 < 9.0);
  CHECK(res.gap_above > 0.5);
  CHECK(res.expansion.k == 1);
  CHECK(res.expansion.source_id == res.run_id);

  // lambda_a -> lambda_0: differences shrink toward small radii along
  // every direction (error-bar dominated trend)
  for (double alpha : cfg.effective_angles()) {
    std::vector<const SweepRow*> dir;
    for (const auto& r : res.rows)
      if (r.alpha_req == alpha) dir.push_back(&r);
    REQUIRE(dir.size() == 3);
    CHECK(std::abs(dir[0]->diff) < std::abs(dir[2]->diff) + 5.0 * dir[2]->err);
  }

  // eigenvalue at the centered pole is double: sweep must refuse
  SweepConfig bad = cfg;
  bad.base_pole = {0.0, 0.0};
  bad.extraction_radii.clear();
  CHECK_THROWS_AS(run_sweep(bad), SimplicityViolation);

  // config validation
  SweepConfig bad2 = cfg;
  bad2.h_seq = {1.0 / 32, 1.0 / 50};
  CHECK_THROWS_AS(run_sweep(bad2), InvalidArgument);
  SweepConfig bad3 = cfg;
  bad3.radii = {0.05};  // below 4h at the coarse level
  CHECK_THROWS_AS(run_sweep(bad3), InvalidArgument);
}

TEST_CASE("physical rotation covariance: the nodal angle follows the base") {
  auto sweep_at = [](double gamma) {
    SweepConfig cfg;
    cfg.domain = DomainSpec::disk({0, 0}, 1.0);
    cfg.base_pole = polar(0.3, gamma);
    cfg.n0 = 1;
    cfg.radii = {0.15, 0.2, 0.28};
    cfg.n_angles = 8;
    cfg.h_seq = {1.0 / 32, 1.0 / 64};
    cfg.extraction_radii = {0.1, 0.15, 0.225};
    return fit_polynomial(run_sweep(cfg), 1);
  };
  const auto base = sweep_at(0.0);
  const auto rot = sweep_at(PI / 3.0);
  // the disk is rotation invariant, so rotating the base pole rotates the
  // nodal direction with it and leaves the amplitude unchanged
  double d = std::fmod(rot.alpha0_fit - base.alpha0_fit - PI / 3.0, 2.0 * PI);
  if (d < -PI) d += 2.0 * PI;
  if (d >= PI) d -= 2.0 * PI;
  CHECK(std::abs(d) < 0.05);
  CHECK(rot.C0 == doctest::Approx(base.C0).epsilon(0.05));
}
