#include "abpole/eig.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace abpole {

namespace {

// Deterministic gaussians independent of the standard library's
// distribution implementations.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed ? seed : 1) {}
  std::uint64_t next() {  // splitmix64
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // (0,1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
  }
  double gauss() {
    const double u = uniform(), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }
};

void assign_clusters(std::vector<EigenPair>& pairs) {
  int cid = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) {
      const double gap = pairs[i].value - pairs[i - 1].value;
      if (gap > 1e-6 * std::max(1.0, std::abs(pairs[i].value))) ++cid;
    }
    pairs[i].cluster = cid;
  }
}

}  // namespace

std::vector<EigenPair> smallest_eigenpairs(const SparseOperator& op,
                                           int count, double tol,
                                           const EigOptions& opts) {
  if (count < 1) throw InvalidArgument("smallest_eigenpairs: count >= 1");
  SpMatC A;
  if (op.is_complex) {
    A = op.main_c;
  } else {
    A = op.main_r.cast<cplx>();
  }
  const int n = static_cast<int>(A.rows());
  if (count > n)
    throw InvalidArgument("smallest_eigenpairs: count exceeds dimension");
  const double h = op.h > 0 ? op.h : 1.0;

  std::vector<EigenPair> pairs;

  if (n == 1) {
    EigenPair p;
    p.value = A.coeff(0, 0).real();
    p.vector = Eigen::VectorXcd::Constant(1, cplx(1.0 / h, 0.0));
    p.residual_norm = 0.0;
    pairs.push_back(std::move(p));
    assign_clusters(pairs);
    return pairs;
  }

  const int m = std::min(n, opts.block > 0 ? std::max(opts.block, count)
                                           : std::max(count + 3, 4));

  Eigen::SimplicialLDLT<SpMatC, Eigen::Lower> ldlt;
  ldlt.compute(A);
  if (ldlt.info() != Eigen::Success)
    throw SolverFailure("smallest_eigenpairs: factorization failed", -1.0);

  Rng rng(opts.seed);
  Eigen::MatrixXcd X(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = cplx(rng.gauss(), rng.gauss());

  Eigen::VectorXd theta(m);
  Eigen::MatrixXcd AX;
  double best_res = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (int it = 0; it < opts.max_iter; ++it) {
    const Eigen::MatrixXcd Y = ldlt.solve(X);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
    const Eigen::MatrixXcd Q =
        qr.householderQ() * Eigen::MatrixXcd::Identity(n, m);
    const Eigen::MatrixXcd AQ = A * Q;
    Eigen::MatrixXcd T = Q.adjoint() * AQ;
    T = cplx(0.5, 0.0) * (T + T.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);
    if (es.info() != Eigen::Success)
      throw SolverFailure("smallest_eigenpairs: dense projection failed",
                          best_res);
    theta = es.eigenvalues();
    X = Q * es.eigenvectors();
    AX = AQ * es.eigenvectors();

    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const double r = (AX.col(i) - theta[i] * X.col(i)).norm();
      worst = std::max(worst, r / std::max(1.0, std::abs(theta[i])));
    }
    best_res = std::min(best_res, worst);
    if (worst <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw SolverFailure(
        "smallest_eigenpairs: iteration budget exhausted, best residual " +
            std::to_string(best_res),
        best_res);

  for (int i = 0; i < count; ++i) {
    EigenPair p;
    p.value = theta[i];
    p.vector = X.col(i) / h;  // mesh-weighted unit norm
    p.residual_norm = (AX.col(i) - theta[i] * X.col(i)).norm();
    pairs.push_back(std::move(p));
  }
  assign_clusters(pairs);

  if (opts.phase_ref) {
    const auto& ref = *opts.phase_ref;
    for (auto& p : pairs) {
      if (ref.reference.size() != p.vector.size() ||
          ref.premultiplier.size() != p.vector.size())
        throw InvalidArgument("smallest_eigenpairs: phase reference size");
      cplx c = 0.0;
      for (int i = 0; i < p.vector.size(); ++i)
        c += ref.premultiplier[i] * p.vector[i] * std::conj(ref.reference[i]);
      c *= h * h;
      if (std::abs(c) > 0.0) p.vector *= std::conj(c) / std::abs(c);
    }
  }
  return pairs;
}

namespace {

template <typename Mat, typename Vec>
Vec solve_refined(const Mat& A, const Vec& b, const char* what) {
  if (b.size() == 0) return b;
  const double bn = b.norm();
  if (bn == 0.0) return Vec::Zero(b.size());
  Eigen::SimplicialLDLT<Mat, Eigen::Lower> ldlt;
  ldlt.compute(A);
  if (ldlt.info() != Eigen::Success)
    throw SolverFailure(std::string(what) + ": factorization failed", -1.0);
  Vec x = ldlt.solve(b);
  double res = (A.template selfadjointView<Eigen::Lower>() * x - b).norm() / bn;
  for (int pass = 0; pass < 3 && res > 1e-13; ++pass) {
    const Vec r = b - A.template selfadjointView<Eigen::Lower>() * x;
    x += ldlt.solve(r);
    res = (A.template selfadjointView<Eigen::Lower>() * x - b).norm() / bn;
  }
  if (res > 1e-10)
    throw SolverFailure(std::string(what) + ": residual " +
                            std::to_string(res) + " above contract",
                        res);
  return x;
}

}  // namespace

Eigen::VectorXcd solve_pd(const SparseOperator& op,
                          const Eigen::VectorXcd& load) {
  if (!op.is_complex)
    throw InvalidArgument("solve_pd: operator is real, use solve_pd_real");
  return solve_refined<SpMatC, Eigen::VectorXcd>(op.main_c, load, "solve_pd");
}

Eigen::VectorXd solve_pd_real(const SparseOperator& op,
                              const Eigen::VectorXd& load) {
  if (op.is_complex)
    throw InvalidArgument("solve_pd_real: operator is complex");
  return solve_refined<SpMatR, Eigen::VectorXd>(op.main_r, load,
                                                "solve_pd_real");
}

namespace {

// Solve (h1^q - h2^q)/(h2^q - h3^q) = target for q by bisection.
std::optional<double> estimate_order(double h1, double h2, double h3,
                                     double target) {
  if (!(target > 0.0) || !std::isfinite(target)) return std::nullopt;
  auto ratio = [&](double q) {
    const double a = std::pow(h1, q) - std::pow(h2, q);
    const double b = std::pow(h2, q) - std::pow(h3, q);
    return a / b;
  };
  double lo = 0.05, hi = 10.0;
  double flo = ratio(lo) - target, fhi = ratio(hi) - target;
  if (flo * fhi > 0.0) return std::nullopt;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = ratio(mid) - target;
    if ((f < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = f;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ExtrapolationResult richardson_extrapolate(
    const std::vector<std::pair<double, double>>& samples,
    std::optional<double> model_order) {
  if (samples.size() < 2)
    throw InvalidArgument("richardson_extrapolate: need >= 2 samples");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first < samples[i - 1].first) ||
        !(samples[i].first > 0.0))
      throw InvalidArgument(
          "richardson_extrapolate: parameters must be positive and strictly "
          "decreasing");

  ExtrapolationResult out;
  out.samples = samples;
  const std::size_t n = samples.size();
  out.value = samples.back().second;

  // sign-changing consecutive differences: flagged, no extrapolation
  double prev_sign = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = samples[i].second - samples[i - 1].second;
    if (d == 0.0) continue;
    const double s = d > 0 ? 1.0 : -1.0;
    if (prev_sign != 0.0 && s != prev_sign) out.monotone = false;
    prev_sign = s;
  }

  if (n >= 3) {
    const auto& [h1, v1] = samples[n - 3];
    const auto& [h2, v2] = samples[n - 2];
    const auto& [h3, v3] = samples[n - 1];
    if (v2 != v3) {
      const auto q = estimate_order(h1, h2, h3, (v1 - v2) / (v2 - v3));
      if (q) {
        out.observed_order = *q;
        out.order_known = true;
      }
    }
  }

  if (!out.monotone) {
    out.error = std::abs(samples[n - 1].second - samples[n - 2].second);
    return out;
  }

  double p = 0.0;
  if (model_order) {
    p = *model_order;
  } else if (out.order_known) {
    p = out.observed_order;
  } else if (samples[n - 1].second == samples[n - 2].second) {
    out.value = samples.back().second;
    out.error = 0.0;
    out.extrapolated = true;
    return out;
  } else {
    if (n < 3)
      throw InvalidArgument(
          "richardson_extrapolate: 2 samples require model_order");
    out.error = std::abs(samples[n - 1].second - samples[n - 2].second);
    return out;  // order estimation failed; flagged via extrapolated=false
  }

  // one elimination column at order p
  std::vector<std::pair<double, double>> col(samples);
  std::vector<std::pair<double, double>> next;
  for (std::size_t i = 0; i + 1 < col.size(); ++i) {
    const double rho = col[i].first / col[i + 1].first;
    const double den = std::pow(rho, p) - 1.0;
    if (!(den > 0.0)) throw InvalidArgument("richardson: bad order/ratio");
    next.emplace_back(col[i + 1].first,
                      col[i + 1].second +
                          (col[i + 1].second - col[i].second) / den);
  }
  out.value = next.back().second;
  out.error = std::abs(samples.back().second - out.value);
  out.extrapolated = true;
  return out;
}

}  // namespace abpole
