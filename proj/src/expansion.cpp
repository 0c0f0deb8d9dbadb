#include "abpole/expansion.hpp"

#include <cmath>

namespace abpole {

namespace {
const double PI = std::acos(-1.0);
}

std::pair<cplx, cplx> circle_fourier(const GridField& field,
                                     const Point& pole, double r, int j) {
  if (j < 1 || j % 2 == 0)
    throw InvalidArgument("circle_fourier: j must be odd");
  if (r < 4.0 * field.grid().h)
    throw InvalidArgument("circle_fourier: radius below 4h");
  const int N = std::max(256, 8 * j);
  cplx c1 = 0.0, c2 = 0.0;
  for (int m = 0; m < N; ++m) {
    const double t = 2.0 * PI * m / N;
    cplx u;
    try {
      u = field.bilinear(pole + polar(r, t));
    } catch (const InvalidArgument&) {
      throw InvalidArgument("circle_fourier: circle exits the domain");
    }
    c1 += u * std::conj(angular_mode_eval({j, ModeKind::Cosine}, t));
    c2 += u * std::conj(angular_mode_eval({j, ModeKind::Sine}, t));
  }
  const double dt = 2.0 * PI / N;
  return {c1 * dt, c2 * dt};
}

double nodal_angle(int k, cplx beta1, cplx beta2) {
  const double scale = std::sqrt(std::norm(beta1) + std::norm(beta2));
  double alpha0 = 0.0;
  // beta1 below 1% of the amplitude is treated as zero: a true ratio that
  // small moves alpha0 by at most 2/(100 k), and extraction noise on
  // lattice fields sits in that band
  if (std::abs(beta1) > 1e-2 * scale) {
    // -beta2/beta1 is real up to noise; arccot via atan2 lands in (0, pi)
    const cplx ratio = -beta2 / beta1;
    alpha0 = (2.0 / k) * std::atan2(1.0, ratio.real());
  }
  const double period = 2.0 * PI / k;
  alpha0 = std::fmod(alpha0, period);
  if (alpha0 < 0) alpha0 += period;
  return alpha0;
}

cplx rotated_beta2(const LocalExpansion& e) {
  const double half = 0.5 * e.k * e.alpha0;
  return std::polar(1.0, 0.5 * e.alpha0) *
         (-std::sin(half) * e.beta1 + std::cos(half) * e.beta2);
}

LocalExpansion extract_expansion(const GridField& field, const Point& pole,
                                 const std::vector<double>& radii) {
  if (radii.size() < 3)
    throw InvalidArgument("extract_expansion: need >= 3 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw InvalidArgument("extract_expansion: radii must increase");

  const std::size_t nr = radii.size();

  // field scale on the largest circle, for the dominance floor
  double circle_norm = 0.0;
  {
    const int N = 256;
    for (int m = 0; m < N; ++m) {
      const double t = 2.0 * PI * m / N;
      cplx u;
      try {
        u = field.bilinear(pole + polar(radii.back(), t));
      } catch (const InvalidArgument&) {
        throw InvalidArgument("extract_expansion: circle exits the domain");
      }
      circle_norm += std::norm(u);
    }
    circle_norm = std::sqrt(circle_norm * 2.0 * PI / N);
  }

  for (int j = 1; j <= 9; j += 2) {
    std::vector<std::pair<cplx, cplx>> coef(nr);
    std::vector<double> scaled(nr);
    for (std::size_t i = 0; i < nr; ++i) {
      coef[i] = circle_fourier(field, pole, radii[i], j);
      const double amp = std::sqrt(std::norm(coef[i].first) +
                                   std::norm(coef[i].second));
      scaled[i] = amp / std::pow(radii[i], 0.5 * j);
    }
    double mean = 0.0;
    for (double s : scaled) mean += s;
    mean /= static_cast<double>(nr);
    double rss = 0.0, tss = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
      const double amp = scaled[i] * std::pow(radii[i], 0.5 * j);
      const double mod = mean * std::pow(radii[i], 0.5 * j);
      rss += (amp - mod) * (amp - mod);
      tss += amp * amp;
    }
    const double rel_res = tss > 0 ? std::sqrt(rss / tss) : 1.0;
    const bool dominant =
        mean * std::pow(radii.back(), 0.5 * j) > 1e-2 * circle_norm;
    if (rel_res >= 0.10 || !dominant) continue;

    // two-point Richardson in r on the two smallest radii kills the
    // next-order term of the expansion
    auto scaled_pair = [&](std::size_t i) {
      const double w = std::pow(radii[i], -0.5 * j);
      return std::make_pair(coef[i].first * w, coef[i].second * w);
    };
    const auto [a1, a2] = scaled_pair(0);
    const auto [b1, b2] = scaled_pair(1);
    const double r1 = radii[0], r2 = radii[1];
    LocalExpansion e;
    e.k = j;
    e.beta1 = (r2 * a1 - r1 * b1) / (r2 - r1);
    e.beta2 = (r2 * a2 - r1 * b2) / (r2 - r1);
    e.alpha0 = nodal_angle(j, e.beta1, e.beta2);
    e.order_fit_residual = rel_res;
    const double s = std::sqrt(e.beta_norm2());
    if (std::abs(e.beta1) > 1e-2 * s && std::abs(e.beta2) > 1e-2 * s)
      e.reality_defect =
          std::abs(std::sin(std::arg(e.beta2 * std::conj(e.beta1))));
    return e;
  }
  throw InconclusiveOrder(
      "extract_expansion: no odd order <= 9 fits the circle coefficients");
}

}  // namespace abpole
