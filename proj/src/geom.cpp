#include "abpole/geom.hpp"

#include <cmath>

namespace abpole {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double Point::norm() const { return std::hypot(x1, x2); }

Point polar(double r, double t) { return {r * std::cos(t), r * std::sin(t)}; }

Point ab_potential(const Point& x, const Point& a) {
  const double d1 = x.x1 - a.x1;
  const double d2 = x.x2 - a.x2;
  const double q = d1 * d1 + d2 * d2;
  if (q == 0.0) throw SingularPoint("ab_potential: x coincides with the pole");
  return {-0.5 * d2 / q, 0.5 * d1 / q};
}

BranchedAngle theta0(const Point& x) {
  if (x.x1 == 0.0 && x.x2 == 0.0)
    throw SingularPoint("theta0: evaluation at the origin");
  double v;
  if (x.x1 > 0.0 && x.x2 >= 0.0)
    v = std::atan(x.x2 / x.x1);
  else if (x.x1 == 0.0 && x.x2 > 0.0)
    v = std::asin(1.0);  // pi/2
  else if (x.x1 < 0.0)
    v = std::acos(-1.0) + std::atan(x.x2 / x.x1);
  else if (x.x1 == 0.0 && x.x2 < 0.0)
    v = 3.0 * std::asin(1.0);  // 3 pi/2
  else                         // x1 > 0, x2 < 0
    v = kTwoPi + std::atan(x.x2 / x.x1);
  if (v >= kTwoPi) v = 0.0;  // guard the wrap at full angle
  return {v, 0.0};
}

namespace {

// Shift a raw atan2 angle into [base, base + 2*pi).
double into_branch(double raw, double base) {
  double v = raw + kTwoPi * std::ceil((base - raw) / kTwoPi);
  if (v < base) v += kTwoPi;
  if (v >= base + kTwoPi) v -= kTwoPi;
  return v;
}

}  // namespace

BranchedAngle theta_pole(const Point& x, const Point& b, bool centered) {
  if (b.x1 == 0.0 && b.x2 == 0.0)
    throw InvalidArgument("theta_pole: b = 0 leaves the branch undefined");
  const double alpha = theta0(b).value;
  const Point d = centered ? x : x - b;
  if (d.x1 == 0.0 && d.x2 == 0.0)
    throw SingularPoint("theta_pole: evaluation at the singular point");
  const double raw = std::atan2(d.x2, d.x1);
  return {into_branch(raw, alpha), alpha};
}

cplx peierls_phase(const Point& x, const Point& y, const Point& a) {
  const Point u = x - a;
  const Point v = y - a;
  const double cross = u.x1 * v.x2 - u.x2 * v.x1;
  const double dot = u.x1 * v.x1 + u.x2 * v.x2;
  if (cross == 0.0 && dot <= 0.0)
    throw SingularPoint("peierls_phase: segment passes through the pole");
  const double delta = std::atan2(cross, dot);
  return std::polar(1.0, 0.5 * delta);
}

cplx angular_mode_eval(const AngularMode& mode, double t) {
  if (mode.j < 1 || mode.j % 2 == 0)
    throw InvalidArgument("angular_mode_eval: j must be an odd natural");
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::acos(-1.0));
  const double trig = mode.kind == ModeKind::Cosine
                          ? std::cos(0.5 * mode.j * t)
                          : std::sin(0.5 * mode.j * t);
  return cplx(std::cos(0.5 * t), std::sin(0.5 * t)) * (inv_sqrt_pi * trig);
}

double psi_k_eval(int k, const Point& x) {
  if (k < 1 || k % 2 == 0)
    throw InvalidArgument("psi_k_eval: k must be an odd natural");
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  const double t = theta0(x).value;
  return std::pow(r, 0.5 * k) * std::sin(0.5 * k * t);
}

double psi_k_normal_derivative(int k, double x1) {
  if (k < 1 || k % 2 == 0)
    throw InvalidArgument("psi_k_normal_derivative: k must be odd");
  if (x1 <= 0.0)
    throw InvalidArgument("psi_k_normal_derivative: requires x1 > 0");
  return 0.5 * k * std::pow(x1, 0.5 * k - 1.0);
}

}  // namespace abpole
