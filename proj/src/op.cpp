#include "abpole/op.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace abpole {

namespace {

// Pole must avoid the lattice lines through nodes (plaquette boundaries).
void check_pole_off_lattice(const Grid& g, const Point& pole) {
  const double fx = (pole.x1 - g.x0) / g.h;
  const double fy = (pole.x2 - g.y0) / g.h;
  const double tol = 1e-9;
  if (std::abs(fx - std::round(fx)) < tol ||
      std::abs(fy - std::round(fy)) < tol)
    throw InvalidArgument(
        "assemble_ab_laplacian: pole lies on a lattice edge or node");
}

bool pole_in_bbox(const Grid& g, const Point& pole) {
  const double margin = 2 * g.h;
  return pole.x1 > g.x0 - margin && pole.x1 < g.x0 + (g.nx - 1) * g.h + margin &&
         pole.x2 > g.y0 - margin && pole.x2 < g.y0 + (g.ny - 1) * g.h + margin;
}

}  // namespace

void SparseOperator::dump_coordinate(std::ostream& os) const {
  char buf[128];
  if (is_complex) {
    for (int col = 0; col < main_c.outerSize(); ++col)
      for (SpMatC::InnerIterator it(main_c, col); it; ++it) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n",
                      static_cast<long>(it.row()), static_cast<long>(col),
                      it.value().real(), it.value().imag());
        os << buf;
      }
  } else {
    for (int col = 0; col < main_r.outerSize(); ++col)
      for (SpMatR::InnerIterator it(main_r, col); it; ++it) {
        std::snprintf(buf, sizeof buf, "%ld %ld %.17g 0\n",
                      static_cast<long>(it.row()), static_cast<long>(col),
                      it.value());
        os << buf;
      }
  }
}

SparseOperator assemble_ab_laplacian(const Grid& grid, const Point& pole,
                                     bool allow_outside_pole) {
  const bool inside = grid.spec.strictly_inside(pole);
  if (!inside && !allow_outside_pole)
    throw InvalidArgument("assemble_ab_laplacian: pole outside the domain");
  if (pole_in_bbox(grid, pole)) check_pole_off_lattice(grid, pole);

  const int n = grid.n_unknown();
  const int nd = grid.n_dirichlet();
  const double inv_h2 = 1.0 / (grid.h * grid.h);

  std::vector<Eigen::Triplet<cplx>> tm, tb;
  tm.reserve(static_cast<std::size_t>(n) * 5);
  tb.reserve(static_cast<std::size_t>(nd) * 2 + 16);

  for (int i = 0; i < n; ++i)
    tm.emplace_back(i, i, cplx(4.0 * inv_h2, 0.0));

  // One pass per unordered edge (right and top neighbor of each node) so
  // the conjugate pair is placed from a single phase evaluation and the
  // hermiticity entries(i,j) == conj(entries(j,i)) holds exactly.
  const int dx[2] = {1, 0};
  const int dy[2] = {0, 1};
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const int ra = grid.idx(ix, iy);
      const bool a_unknown = grid.unknown[ra] >= 0;
      const bool a_dir = grid.dirichlet[ra] >= 0;
      if (!a_unknown && !a_dir) continue;
      const Point xa = grid.coord(ix, iy);
      for (int d = 0; d < 2; ++d) {
        const int jx = ix + dx[d], jy = iy + dy[d];
        if (jx >= grid.nx || jy >= grid.ny) continue;
        const int rb = grid.idx(jx, jy);
        const bool b_unknown = grid.unknown[rb] >= 0;
        const bool b_dir = grid.dirichlet[rb] >= 0;
        if (!b_unknown && !b_dir) continue;
        if (!a_unknown && !b_unknown) continue;  // both eliminated
        const Point xb = grid.coord(jx, jy);
        // hop multiplying u(b) in the row of a: -exp(-i int_a^b A.dl)/h^2
        const cplx hop_ab = -std::conj(peierls_phase(xa, xb, pole)) * inv_h2;
        const cplx hop_ba = std::conj(hop_ab);
        if (a_unknown && b_unknown) {
          tm.emplace_back(grid.unknown[ra], grid.unknown[rb], hop_ab);
          tm.emplace_back(grid.unknown[rb], grid.unknown[ra], hop_ba);
        } else if (a_unknown) {
          tb.emplace_back(grid.unknown[ra], grid.dirichlet[rb], hop_ab);
        } else {
          tb.emplace_back(grid.unknown[rb], grid.dirichlet[ra], hop_ba);
        }
      }
    }
  }

  SparseOperator op;
  op.sym = Symmetry::Hermitian;
  op.is_complex = true;
  op.h = grid.h;
  op.main_c.resize(n, n);
  op.main_c.setFromTriplets(tm.begin(), tm.end());
  op.main_c.makeCompressed();
  op.bdry_c.resize(n, nd);
  op.bdry_c.setFromTriplets(tb.begin(), tb.end());
  op.bdry_c.makeCompressed();
  return op;
}

SparseOperator assemble_free_laplacian(const Grid& grid) {
  const int n = grid.n_unknown();
  const int nd = grid.n_dirichlet();
  const double inv_h2 = 1.0 / (grid.h * grid.h);

  std::vector<Eigen::Triplet<cplx>> tm, tb;
  tm.reserve(static_cast<std::size_t>(n) * 5);
  for (int i = 0; i < n; ++i)
    tm.emplace_back(i, i, cplx(4.0 * inv_h2, 0.0));

  const int dx[2] = {1, 0};
  const int dy[2] = {0, 1};
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const int ra = grid.idx(ix, iy);
      const bool a_unknown = grid.unknown[ra] >= 0;
      const bool a_dir = grid.dirichlet[ra] >= 0;
      if (!a_unknown && !a_dir) continue;
      for (int d = 0; d < 2; ++d) {
        const int jx = ix + dx[d], jy = iy + dy[d];
        if (jx >= grid.nx || jy >= grid.ny) continue;
        const int rb = grid.idx(jx, jy);
        const bool b_unknown = grid.unknown[rb] >= 0;
        const bool b_dir = grid.dirichlet[rb] >= 0;
        if (!b_unknown && !b_dir) continue;
        if (!a_unknown && !b_unknown) continue;
        const cplx hop(-inv_h2, 0.0);
        if (a_unknown && b_unknown) {
          tm.emplace_back(grid.unknown[ra], grid.unknown[rb], hop);
          tm.emplace_back(grid.unknown[rb], grid.unknown[ra], hop);
        } else if (a_unknown) {
          tb.emplace_back(grid.unknown[ra], grid.dirichlet[rb], hop);
        } else {
          tb.emplace_back(grid.unknown[rb], grid.dirichlet[ra], hop);
        }
      }
    }
  }

  SparseOperator op;
  op.sym = Symmetry::Hermitian;
  op.is_complex = true;
  op.h = grid.h;
  op.main_c.resize(n, n);
  op.main_c.setFromTriplets(tm.begin(), tm.end());
  op.main_c.makeCompressed();
  op.bdry_c.resize(n, nd);
  op.bdry_c.setFromTriplets(tb.begin(), tb.end());
  op.bdry_c.makeCompressed();
  return op;
}

namespace {

// integral of (k/2) x^{p-1} * hat over one cell, p = k/2; antiderivative of
// the data is x^p.  "rising" hat is (x-a)/(b-a), "falling" is (b-x)/(b-a).
double slit_cell_integral(double p, double a, double b, bool rising) {
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (b <= a) return 0.0;
  const double ap = std::pow(a, p), bp = std::pow(b, p);
  const double ap1 = std::pow(a, p + 1.0), bp1 = std::pow(b, p + 1.0);
  const double moment = p * (bp1 - ap1) / (p + 1.0);  // int (k/2) x^p
  const double mass = bp - ap;                        // int (k/2) x^{p-1}
  const double w = rising ? (moment - a * mass) : (b * mass - moment);
  return w / (b - a);
}

}  // namespace

std::pair<SparseOperator, Eigen::VectorXd> assemble_mixed_laplacian(
    const Grid& grid, const SlitNeumannData& data) {
  if (grid.spec.shape != DomainSpec::Shape::HalfDisk)
    throw InvalidArgument("assemble_mixed_laplacian: needs a half-disk grid");
  if (data.k < 1 || data.k % 2 == 0)
    throw InvalidArgument("assemble_mixed_laplacian: k must be odd");

  const int n = grid.n_unknown();
  const int nd = grid.n_dirichlet();
  const double inv_h2 = 1.0 / (grid.h * grid.h);

  std::vector<Eigen::Triplet<double>> tm, tb;
  tm.reserve(static_cast<std::size_t>(n) * 5);
  std::vector<double> diag(n, 0.0);

  const int dx[2] = {1, 0};
  const int dy[2] = {0, 1};
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      const int ra = grid.idx(ix, iy);
      const bool a_unknown = grid.unknown[ra] >= 0;
      const bool a_dir = grid.dirichlet[ra] >= 0;
      if (!a_unknown && !a_dir) continue;
      for (int d = 0; d < 2; ++d) {
        const int jx = ix + dx[d], jy = iy + dy[d];
        if (jx >= grid.nx || jy >= grid.ny) continue;
        const int rb = grid.idx(jx, jy);
        const bool b_unknown = grid.unknown[rb] >= 0;
        const bool b_dir = grid.dirichlet[rb] >= 0;
        if (!b_unknown && !b_dir) continue;
        if (!a_unknown && !b_unknown) continue;
        // horizontal edges on the Neumann line own half a transverse cell
        const double w =
            (d == 0 && grid.on_neumann_line(iy)) ? 0.5 : 1.0;
        const double hop = -w * inv_h2;
        if (a_unknown && b_unknown) {
          tm.emplace_back(grid.unknown[ra], grid.unknown[rb], hop);
          tm.emplace_back(grid.unknown[rb], grid.unknown[ra], hop);
          diag[grid.unknown[ra]] += w * inv_h2;
          diag[grid.unknown[rb]] += w * inv_h2;
        } else if (a_unknown) {
          tb.emplace_back(grid.unknown[ra], grid.dirichlet[rb], hop);
          diag[grid.unknown[ra]] += w * inv_h2;
        } else {
          tb.emplace_back(grid.unknown[rb], grid.dirichlet[ra], hop);
          diag[grid.unknown[rb]] += w * inv_h2;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) tm.emplace_back(i, i, diag[i]);

  // Boundary load: hat-function weights of the data on (0,1).
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  const double p = 0.5 * data.k;
  for (int iy = 0; iy < grid.ny; ++iy) {
    if (!grid.on_neumann_line(iy)) continue;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const int r = grid.idx(ix, iy);
      if (grid.unknown[r] < 0) continue;
      const double x = grid.coord(ix, iy).x1;
      if (x + grid.h <= 0.0 || x - grid.h >= 1.0) continue;
      const double w = slit_cell_integral(p, x - grid.h, x, true) +
                       slit_cell_integral(p, x, x + grid.h, false);
      load[grid.unknown[r]] = data.scale * w * inv_h2;
    }
  }

  SparseOperator op;
  op.sym = Symmetry::Symmetric;
  op.is_complex = false;
  op.h = grid.h;
  op.main_r.resize(n, n);
  op.main_r.setFromTriplets(tm.begin(), tm.end());
  op.main_r.makeCompressed();
  op.bdry_r.resize(n, nd);
  op.bdry_r.setFromTriplets(tb.begin(), tb.end());
  op.bdry_r.makeCompressed();
  return {std::move(op), std::move(load)};
}

Eigen::VectorXcd dirichlet_lift(const Grid& grid, const SparseOperator& op,
                                const std::function<cplx(const Point&)>& g) {
  if (!op.is_complex)
    throw InvalidArgument("dirichlet_lift: operator is real");
  Eigen::VectorXcd gv(grid.n_dirichlet());
  for (int d = 0; d < grid.n_dirichlet(); ++d)
    gv[d] = g(grid.coord(grid.dirichlet_raster[d]));
  return -(op.bdry_c * gv);
}

Eigen::VectorXd dirichlet_lift_real(
    const Grid& grid, const SparseOperator& op,
    const std::function<double(const Point&)>& g) {
  if (op.is_complex)
    throw InvalidArgument("dirichlet_lift_real: operator is complex");
  Eigen::VectorXd gv(grid.n_dirichlet());
  for (int d = 0; d < grid.n_dirichlet(); ++d)
    gv[d] = g(grid.coord(grid.dirichlet_raster[d]));
  return -(op.bdry_r * gv);
}

SparseOperator rephase_with_cut(const SparseOperator& op, const Grid& grid,
                                const Point& pole, double cut_angle_a,
                                double cut_angle_b) {
  if (!op.is_complex)
    throw InvalidArgument("rephase_with_cut: operator is real");
  const int n = grid.n_unknown();
  Eigen::VectorXcd d(n);
  for (int i = 0; i < n; ++i) {
    const Point x = grid.coord(grid.unknown_raster[i]);
    const Point rel = x - pole;
    const double raw = std::atan2(rel.x2, rel.x1);
    auto branch = [&](double base) {
      double v = raw + 2.0 * M_PI * std::ceil((base - raw) / (2.0 * M_PI));
      if (v < base) v += 2.0 * M_PI;
      if (v >= base + 2.0 * M_PI) v -= 2.0 * M_PI;
      return v;
    };
    const double chi = 0.5 * (branch(cut_angle_a) - branch(cut_angle_b));
    d[i] = std::polar(1.0, chi);  // +-1 up to rounding
  }
  SparseOperator out = op;
  out.main_c = d.asDiagonal() * op.main_c * d.conjugate().asDiagonal();
  out.bdry_c = d.asDiagonal() * op.bdry_c;
  return out;
}

cplx plaquette_holonomy(const Grid& grid, const Point& pole, int ix, int iy) {
  const Point a = grid.coord(ix, iy);
  const Point b = grid.coord(ix + 1, iy);
  const Point c = grid.coord(ix + 1, iy + 1);
  const Point d = grid.coord(ix, iy + 1);
  return peierls_phase(a, b, pole) * peierls_phase(b, c, pole) *
         peierls_phase(c, d, pole) * peierls_phase(d, a, pole);
}

}  // namespace abpole
