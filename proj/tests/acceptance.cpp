// Acceptance suite: one criterion per test case, one PASS/FAIL line each.
// Heavy results (slit constant, f(alpha) table, flagship run) are shared
// across criteria through lazily computed state.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <optional>

#include "abpole/io.hpp"
#include "abpole/pipeline.hpp"

using namespace abpole;

namespace {

const double PI = std::acos(-1.0);
const double SQRT_PI = std::sqrt(PI);

struct Shared {
  std::optional<ExtrapolationResult> mk1, mk3;
  std::vector<MkRow> mk1_table, mk3_table;
  double mk_seconds = 0.0;

  std::vector<FAlpha> falpha;       // 12 uniform angles, k=1
  double falpha_seconds = 0.0;

  std::optional<FlagshipReport> flagship;
  double flagship_seconds = 0.0;
};

Shared& shared() {
  static Shared s;
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void ensure_mk() {
  Shared& s = shared();
  if (s.mk1) return;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> h_seq{1.0 / 16, 1.0 / 32, 1.0 / 64};
  const std::vector<double> R_seq{4.0, 8.0, 16.0};
  s.mk1 = compute_mk(1, h_seq, R_seq, &s.mk1_table);
  s.mk3 = compute_mk(3, h_seq, R_seq, &s.mk3_table);
  s.mk_seconds = seconds_since(t0);
}

void ensure_falpha() {
  Shared& s = shared();
  if (!s.falpha.empty()) return;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> R_seq{6.0, 9.0, 12.0};
  const std::vector<double> h_seq{1.0 / 16, 1.0 / 32};
  for (int i = 0; i < 12; ++i)
    s.falpha.push_back(xi_and_f(1, 2.0 * PI * i / 12.0, R_seq, h_seq));
  s.falpha_seconds = seconds_since(t0);
}

void ensure_flagship() {
  Shared& s = shared();
  if (s.flagship) return;
  const auto t0 = std::chrono::steady_clock::now();
  FlagshipConfig fc;
  fc.sweep.domain = DomainSpec::disk({0, 0}, 1.0);
  fc.sweep.base_pole = {0.3, 0.0};
  fc.sweep.n0 = 1;
  fc.sweep.radii = {0.04, 0.06, 0.09, 0.135};
  fc.sweep.n_angles = 16;
  fc.sweep.h_seq = {1.0 / 128, 1.0 / 256};
  fc.mk_h_seq = {1.0 / 16, 1.0 / 32, 1.0 / 64};
  fc.mk_R_seq = {4.0, 8.0, 16.0};
  fc.run_blowup = true;
  fc.blowup_steps = {32, 16, 8, 4};
  fc.blowup_R_seq = {8.0, 12.0, 16.0};
  fc.blowup_h = 1.0 / 16;
  s.flagship = run_flagship(fc);
  s.flagship_seconds = seconds_since(t0);
}

void verdict(int n, bool pass, const std::string& detail) {
  std::printf("ACCEPTANCE %d %s: %s\n", n, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

// boundary-form double extrapolation recomputed from a (k,h,R) table
double boundary_form_mk(const std::vector<MkRow>& table, int k,
                        const std::vector<double>& h_seq,
                        const std::vector<double>& R_seq) {
  std::vector<std::pair<double, double>> h_samples;
  for (double h : h_seq) {
    std::vector<std::pair<double, double>> r;
    for (double R : R_seq)
      for (const auto& row : table)
        if (row.h == h && row.R == R) r.emplace_back(1.0 / R, row.m_boundary);
    h_samples.emplace_back(h, richardson_extrapolate(r, double(k)).value);
  }
  return richardson_extrapolate(h_samples, std::nullopt).value;
}

}  // namespace

TEST_CASE("criterion 1: Bessel oracle on the centered disk") {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> h_seq{1.0 / 64, 1.0 / 128};
  std::vector<double> l1, l2;
  int multiplicity_fine = 0;
  for (double h : h_seq) {
    auto g = build_grid(DomainSpec::disk({0, 0}, 1.0), h);
    auto op = assemble_ab_laplacian(g, {0, 0});
    auto pairs = smallest_eigenpairs(op, 3, 1e-8);
    l1.push_back(pairs[0].value);
    l2.push_back(pairs[1].value);
    multiplicity_fine = 0;
    for (const auto& p : pairs)
      if (p.cluster == pairs[0].cluster) ++multiplicity_fine;
  }
  auto e1 = richardson_extrapolate({{h_seq[0], l1[0]}, {h_seq[1], l1[1]}}, 1.0);
  auto e2 = richardson_extrapolate({{h_seq[0], l2[0]}, {h_seq[1], l2[1]}}, 1.0);
  const double target = PI * PI;
  const double r1 = std::abs(e1.value - target) / target;
  const double r2 = std::abs(e2.value - target) / target;
  const double secs = seconds_since(t0);

  const bool pass = r1 <= 0.005 && r2 <= 0.005 && multiplicity_fine == 2 &&
                    secs <= 120.0;
  verdict(1, pass,
          "lambda=" + format_sig12(e1.value) + " vs pi^2, rel_err=" +
              format_sig12(r1) + ", multiplicity=" +
              std::to_string(multiplicity_fine) + ", " +
              format_sig12(secs) + "s");
  CHECK(r1 <= 0.005);
  CHECK(r2 <= 0.005);
  CHECK(multiplicity_fine == 2);
  CHECK(secs <= 120.0);
}

TEST_CASE("criterion 2: identity suite") {
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t s = 12345;
  auto uniform = [&s]() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return 2.0 * PI * (static_cast<double>(s >> 11) * 0x1p-53);
  };
  double worst = 0.0;
  for (int k : {1, 3, 5, 7, 9})
    for (int i = 0; i < 1000; ++i) {
      const double a = uniform();
      worst = std::max(worst, std::abs(sin_product(k, a) -
                                       std::pow(2.0, 1 - k) * std::cos(k * a)));
    }
  bool rank_ok = true;
  for (int k : {1, 3, 5, 7, 9})
    for (int h = 0; h < k; ++h)
      for (int t = 0; t < 20; ++t)
        rank_ok = rank_ok && direction_rank(h, k, uniform()) == h + 1;
  const double secs = seconds_since(t0);
  const bool pass = worst <= 1e-12 && rank_ok && secs <= 5.0;
  verdict(2, pass,
          "sin_product worst=" + format_sig12(worst) + ", ranks " +
              (rank_ok ? "full" : "deficient") + ", " + format_sig12(secs) +
              "s");
  CHECK(worst <= 1e-12);
  CHECK(rank_ok);
  CHECK(secs <= 5.0);
}

TEST_CASE("criterion 3: slit constant, energy vs boundary form") {
  ensure_mk();
  Shared& s = shared();
  const std::vector<double> h_seq{1.0 / 16, 1.0 / 32, 1.0 / 64};
  const std::vector<double> R_seq{4.0, 8.0, 16.0};
  const double m1_b = boundary_form_mk(s.mk1_table, 1, h_seq, R_seq);
  const double m3_b = boundary_form_mk(s.mk3_table, 3, h_seq, R_seq);
  const double d1 = std::abs(s.mk1->value - m1_b) / std::abs(s.mk1->value);
  const double d3 = std::abs(s.mk3->value - m3_b) / std::abs(s.mk3->value);
  const bool pass = d1 <= 0.01 && d3 <= 0.01 && s.mk1->value < 0 &&
                    s.mk3->value < 0 && s.mk_seconds <= 180.0;
  verdict(3, pass,
          "m_1=" + format_sig12(s.mk1->value) + " (forms differ " +
              format_sig12(d1) + "), m_3=" + format_sig12(s.mk3->value) +
              " (" + format_sig12(d3) + "), " + format_sig12(s.mk_seconds) +
              "s");
  CHECK(d1 <= 0.01);
  CHECK(d3 <= 0.01);
  CHECK(s.mk1->value < 0);
  CHECK(s.mk3->value < 0);
  CHECK(s.mk_seconds <= 180.0);
}

TEST_CASE("criterion 4: structure of f(alpha)") {
  ensure_falpha();
  Shared& s = shared();
  double fmax = 0.0;
  for (const auto& f : s.falpha) fmax = std::max(fmax, std::abs(f.value));

  // reflection f(alpha) = f(2 pi - alpha) over the 12 uniform angles
  double refl = 0.0;
  for (int i = 1; i < 12; ++i)
    refl = std::max(refl, std::abs(s.falpha[i].value -
                                   s.falpha[(12 - i) % 12].value));

  // 2 pi / k periodicity probed by an off-grid angle re-run
  auto fa = xi_and_f(1, PI / 6.0, {6.0, 9.0, 12.0}, {1.0 / 16, 1.0 / 32});
  auto fb = xi_and_f(1, PI / 6.0 + 2.0 * PI, {6.0, 9.0, 12.0},
                     {1.0 / 16, 1.0 / 32});
  const double period = std::abs(fa.value - fb.value);

  // cosine energy fraction via the 12-point DFT
  std::complex<double> F1 = 0.0;
  double total = 0.0;
  for (int j = 0; j < 12; ++j) {
    const double a = 2.0 * PI * j / 12.0;
    F1 += s.falpha[j].value * std::polar(1.0, -a);
    total += s.falpha[j].value * s.falpha[j].value;
  }
  F1 /= 12.0;
  const double energy_frac = 2.0 * std::norm(F1) / (total / 12.0);

  const bool pass = refl <= 0.02 * fmax && period <= 0.02 * fmax &&
                    energy_frac >= 0.97 && s.falpha_seconds <= 600.0;
  verdict(4, pass,
          "reflection defect=" + format_sig12(refl) + ", periodicity=" +
              format_sig12(period) + ", cos(k a) energy=" +
              format_sig12(energy_frac) + ", " +
              format_sig12(s.falpha_seconds) + "s");
  CHECK(refl <= 0.02 * fmax);
  CHECK(period <= 0.02 * fmax);
  CHECK(energy_frac >= 0.97);
  CHECK(s.falpha_seconds <= 600.0);
}

TEST_CASE("criterion 5: cross-route constant f(0) vs slit m_1") {
  ensure_mk();
  ensure_falpha();
  Shared& s = shared();
  const double f0 = s.falpha[0].value;
  const double m_from_f = f0 * 1.0 * SQRT_PI / (-4.0);
  const double rel =
      std::abs(m_from_f - s.mk1->value) / std::abs(s.mk1->value);
  const bool pass = rel <= 0.03;
  verdict(5, pass,
          "f(0)->m = " + format_sig12(m_from_f) + " vs slit m_1 = " +
              format_sig12(s.mk1->value) + ", rel diff " + format_sig12(rel));
  CHECK(rel <= 0.03);
}

TEST_CASE("criterion 6: two-term radial law of upsilon_R") {
  auto sol = solve_wR({1, 0.7, 8.0, 1.0 / 32});
  std::vector<double> r_grid;
  const double r_hi = 8.0 - 4.0 / 32;
  for (int i = 0; i < 24; ++i)
    r_grid.push_back(1.0 + (r_hi - 1.0) * i / 23.0);
  auto samples = compute_upsilon(sol, r_grid);
  auto law = upsilon_law(sol, samples);
  const bool pass = law.law_rel_rms <= 0.01;
  verdict(6, pass, "closed-form law rel RMS = " + format_sig12(law.law_rel_rms));
  CHECK(law.law_rel_rms <= 0.01);
}

TEST_CASE("criterion 7: flagship cosine law on the disk") {
  ensure_flagship();
  Shared& s = shared();
  const auto& rep = *s.flagship;
  const auto& thm = rep.theorem;
  bool sub_ok = true;
  for (const auto& c : thm.subleading) sub_ok = sub_ok && c.below_noise;
  const bool pass = thm.rel_err_C0 <= 0.10 && thm.alpha0_diff <= 0.05 &&
                    thm.harmonicity_defect <= 0.05 && sub_ok &&
                    s.flagship_seconds <= 1800.0;
  verdict(7, pass,
          "C0 fitted=" + format_sig12(thm.fitted_C0) + " predicted=" +
              format_sig12(thm.predicted_C0) + " (rel " +
              format_sig12(thm.rel_err_C0) + "), alpha0 diff=" +
              format_sig12(thm.alpha0_diff) + ", harmonicity=" +
              format_sig12(thm.harmonicity_defect) + ", low degrees " +
              (sub_ok ? "zero" : "NONZERO") + ", " +
              format_sig12(s.flagship_seconds) + "s");
  CHECK(thm.rel_err_C0 <= 0.10);
  CHECK(thm.alpha0_diff <= 0.05);
  CHECK(thm.harmonicity_defect <= 0.05);
  CHECK(sub_ok);
  CHECK(s.flagship_seconds <= 1800.0);
}

TEST_CASE("criterion 8: sign and zero pattern of the directional limits") {
  ensure_flagship();
  const auto& rep = *shared().flagship;
  const double L = rep.limit_nodal.value;
  const bool pass = L > 0 &&
                    std::abs(rep.limit_orthogonal.value) <= 0.10 * L &&
                    std::abs(rep.limit_opposite.value + L) <= 0.10 * L;
  verdict(8, pass,
          "L(a0)=" + format_sig12(L) + ", L(a0+pi/2k)=" +
              format_sig12(rep.limit_orthogonal.value) + ", L(a0+pi/k)=" +
              format_sig12(rep.limit_opposite.value));
  CHECK(L > 0);
  CHECK(std::abs(rep.limit_orthogonal.value) <= 0.10 * L);
  CHECK(std::abs(rep.limit_opposite.value + L) <= 0.10 * L);
}

TEST_CASE("criterion 9: blow-up convergence to the limit profile") {
  ensure_flagship();
  const auto& rep = *shared().flagship;
  REQUIRE(rep.blowup.size() >= 3);
  bool decreasing = true;
  std::string seq;
  for (std::size_t i = 0; i < rep.blowup.size(); ++i) {
    if (i) decreasing = decreasing && rep.blowup[i].discrepancy <
                                          rep.blowup[i - 1].discrepancy;
    seq += " " + format_sig12(rep.blowup[i].discrepancy);
  }
  const double last = rep.blowup.back().discrepancy;
  const bool pass = decreasing && last <= 0.05;
  verdict(9, pass, "discrepancies:" + seq);
  CHECK(decreasing);
  CHECK(last <= 0.05);
}
