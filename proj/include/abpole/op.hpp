#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>

#include "abpole/grid.hpp"

namespace abpole {

enum class Symmetry { Hermitian, Symmetric };

using SpMatC = Eigen::SparseMatrix<cplx>;
using SpMatR = Eigen::SparseMatrix<double>;

/// Lattice operator with eliminated Dirichlet nodes.  `main` couples
/// unknowns to unknowns; `bdry` holds the would-be entries from unknown
/// rows to Dirichlet columns, which dirichlet_lift turns into a load.
/// Real operators keep the imaginary storage empty (is_complex = false).
struct SparseOperator {
  Symmetry sym = Symmetry::Hermitian;
  bool is_complex = true;
  double h = 0.0;
  SpMatC main_c, bdry_c;
  SpMatR main_r, bdry_r;

  int n() const {
    return is_complex ? static_cast<int>(main_c.rows())
                      : static_cast<int>(main_r.rows());
  }
  /// Coordinate text dump of the main block: "row col real imag" lines.
  void dump_coordinate(std::ostream& os) const;
};

/// 5-point Peierls discretization of (i*grad + A_pole)^2 with Dirichlet
/// elimination: diagonal 4/h^2, hopping -U_e/h^2 with exact AB link
/// phases.  The pole must sit strictly inside a lattice plaquette; a pole
/// outside the domain needs allow_outside_pole (the operator is then
/// gauge-equivalent to the free Laplacian).
SparseOperator assemble_ab_laplacian(const Grid& grid, const Point& pole,
                                     bool allow_outside_pole = false);

/// Pole-absent case: the standard 5-point Dirichlet Laplacian (complex
/// storage, unit hopping phases).
SparseOperator assemble_free_laplacian(const Grid& grid);

/// Variational 5-point Laplacian for the mixed problem on half-disk grids:
/// Dirichlet rows eliminated, edges along the Neumann line get half
/// weight.  Returns the operator and the load implementing the boundary
/// integral of u against (k/2) x1^{k/2-1} on (0,1) (zero data elsewhere on
/// the line); the x1^{k/2-1} singularity is integrated per cell in closed
/// form against the piecewise-linear trace.
struct SlitNeumannData {
  int k = 1;
  double scale = 1.0;
};
std::pair<SparseOperator, Eigen::VectorXd> assemble_mixed_laplacian(
    const Grid& grid, const SlitNeumannData& data);

/// Load vector implementing inhomogeneous Dirichlet data by elimination:
/// solving main*u = load reproduces the boundary values.
Eigen::VectorXcd dirichlet_lift(const Grid& grid, const SparseOperator& op,
                                const std::function<cplx(const Point&)>& g);
Eigen::VectorXd dirichlet_lift_real(
    const Grid& grid, const SparseOperator& op,
    const std::function<double(const Point&)>& g);

/// Gauge-equivalent operator obtained from a different admissible branch
/// cut at the same pole: nodes in the wedge swept between the two cut rays
/// are rephased by -1 (a half-integer 2*pi branch jump).
SparseOperator rephase_with_cut(const SparseOperator& op, const Grid& grid,
                                const Point& pole, double cut_angle_a,
                                double cut_angle_b);

/// Product of the four hopping phases around the plaquette whose lower-left
/// node is (ix,iy); -1 on the plaquette containing the pole, +1 elsewhere.
cplx plaquette_holonomy(const Grid& grid, const Point& pole, int ix, int iy);

}  // namespace abpole
