#pragma once

#include <complex>

#include "abpole/errors.hpp"

namespace abpole {

using cplx = std::complex<double>;

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  Point() = default;
  Point(double a, double b) : x1(a), x2(b) {}

  Point operator+(const Point& o) const { return {x1 + o.x1, x2 + o.x2}; }
  Point operator-(const Point& o) const { return {x1 - o.x1, x2 - o.x2}; }
  Point operator*(double c) const { return {c * x1, c * x2}; }
  double norm() const;
};

Point polar(double r, double t);

/// Angle with an explicit branch: branch_base <= value < branch_base + 2*pi.
/// Downstream code never re-derives mod-2pi conventions; the 2*pi jumps of
/// the angle functions across their cut rays are load-bearing.
struct BranchedAngle {
  double value = 0.0;
  double branch_base = 0.0;
};

/// Half-flux Aharonov-Bohm vector potential with pole a:
///   A_a(x) = (1/2) * (-(x2-a2), x1-a1) / |x-a|^2.
Point ab_potential(const Point& x, const Point& a);

/// Polar angle of x in [0, 2*pi); cut on the positive x1-axis.
BranchedAngle theta0(const Point& x);

/// Angle functions attached to a pole b = |b| (cos alpha, sin alpha):
/// range [alpha, alpha+2*pi).  centered=false gives the angle at b
/// (cut on {t*b : t>=1}); centered=true gives the angle at the origin
/// with the b-branch (cut on {t*b : t>=0}).
BranchedAngle theta_pole(const Point& x, const Point& b, bool centered);

/// Exact gauge link exp(i * integral over [x,y] of A_a . dl) for the AB
/// potential: exp(i*Delta/2) with Delta the angle subtended at a from x
/// to y, taken in (-pi, pi).  Exact because the potential is a pure
/// (multivalued) gradient; no quadrature involved.
cplx peierls_phase(const Point& x, const Point& y, const Point& a);

enum class ModeKind { Cosine, Sine };

/// Angular eigenbasis psi_1^j, psi_2^j of the half-flux angular operator;
/// j odd.  L^2(0,2pi)-orthonormal.
struct AngularMode {
  int j = 1;
  ModeKind kind = ModeKind::Sine;
};

/// psi_1^j(t) = e^{it/2} cos(jt/2)/sqrt(pi),
/// psi_2^j(t) = e^{it/2} sin(jt/2)/sqrt(pi).
cplx angular_mode_eval(const AngularMode& mode, double t);

/// psi_k(r cos t, r sin t) = r^{k/2} sin(kt/2), the k/2-homogeneous
/// harmonic function on the plane slit along the positive x1-axis.
double psi_k_eval(int k, const Point& x);

/// d/dx2 of psi_k from above at (x1, 0), x1 > 0: (k/2) x1^{k/2-1}.
double psi_k_normal_derivative(int k, double x1);

}  // namespace abpole
