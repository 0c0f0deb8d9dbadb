#include "abpole/identities.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace abpole {

namespace {
const double PI = std::acos(-1.0);
}

double HomogeneousPoly::eval(double x1, double x2) const {
  double acc = 0.0;
  for (int j = 0; j <= degree; ++j)
    acc += c[j] * std::pow(x1, degree - j) * std::pow(x2, j);
  return acc;
}

double HomogeneousPoly::eval_angle(double alpha) const {
  return eval(std::cos(alpha), std::sin(alpha));
}

HomogeneousPoly HomogeneousPoly::laplacian() const {
  HomogeneousPoly out;
  if (degree < 2) {
    out.degree = 0;
    out.c = {0.0};
    return out;
  }
  out.degree = degree - 2;
  out.c.assign(degree - 1, 0.0);
  for (int j = 0; j <= degree; ++j) {
    const int m = degree - j;  // x1 power
    if (m >= 2) out.c[j] += m * (m - 1) * c[j];
    if (j >= 2) out.c[j - 2] += j * (j - 1) * c[j];
  }
  return out;
}

double sin_product(int k, double alpha) {
  if (k < 1 || k % 2 == 0) throw InvalidArgument("sin_product: k odd");
  double prod = 1.0;
  for (int j = 1; j <= k; ++j)
    prod *= std::sin(PI * (2 * j - 1) / (2.0 * k) - alpha);
  return prod;
}

int direction_rank(int h, int k, double theta_bar) {
  if (h < 0) throw InvalidArgument("direction_rank: h >= 0");
  if (k < 1 || k % 2 == 0) throw InvalidArgument("direction_rank: k odd");
  Eigen::MatrixXd M(k, h + 1);
  for (int j = 0; j < k; ++j) {
    const double t = theta_bar + 2.0 * PI * j / k;
    for (int i = 0; i <= h; ++i)
      M(j, i) = std::pow(std::cos(t), h - i) * std::pow(std::sin(t), i);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

FactorRoots factor_roots(const HomogeneousPoly& g) {
  const int k = g.degree;
  if (static_cast<int>(g.c.size()) != k + 1)
    throw InvalidArgument("factor_roots: coefficient count");
  if (g.c[0] == 0.0) throw InvalidArgument("factor_roots: c0 must be nonzero");

  // Ptilde(t) = sum_j c_j t^{k-j}, monic after dividing by c0
  Eigen::VectorXd a(k);  // monic coefficients of t^{k-1}..t^0
  for (int j = 1; j <= k; ++j) a[j - 1] = g.c[j] / g.c[0];

  // companion matrix: first row -a1..-ak, ones on the subdiagonal
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) companion(0, i) = -a[i];

  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  auto ptilde = [&](double t) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc = acc * t + g.c[j] / g.c[0] * 1.0;
    return acc;
  };
  auto dptilde = [&](double t) {
    double acc = 0.0;
    for (int j = 0; j < k; ++j) acc = acc * t + (k - j) * g.c[j] / g.c[0];
    return acc;
  };

  FactorRoots out;
  for (int i = 0; i < k; ++i) {
    const cplx z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-8 * (1.0 + std::abs(z.real()))) continue;
    double t = z.real();
    for (int it = 0; it < 4; ++it) {  // polish
      const double d = dptilde(t);
      if (d == 0.0) break;
      t -= ptilde(t) / d;
    }
    out.roots.push_back(std::atan2(1.0, t));  // arccot into (0, pi)
  }
  std::sort(out.roots.begin(), out.roots.end());
  // collapse duplicates from noisy conjugate pairs on the real axis
  out.roots.erase(std::unique(out.roots.begin(), out.roots.end(),
                              [](double a, double b) {
                                return std::abs(a - b) < 1e-9;
                              }),
                  out.roots.end());
  out.theorem_consistent = static_cast<int>(out.roots.size()) >= k;
  return out;
}

HomogeneousPoly cosine_polynomial(int k, double C0, double alpha0) {
  HomogeneousPoly p;
  p.degree = k;
  p.c.assign(k + 1, 0.0);
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    // Re(e^{-ik alpha0} i^j) = cos(j pi/2 - k alpha0)
    p.c[j] = C0 * binom * std::cos(0.5 * PI * j - k * alpha0);
    binom = binom * (k - j) / (j + 1.0);
  }
  return p;
}

}  // namespace abpole
