#pragma once

#include <Eigen/Dense>
#include <functional>

#include "abpole/grid.hpp"

namespace abpole {

/// Node-indexed complex field over a grid (unknown values plus Dirichlet
/// data), with bilinear evaluation between nodes.
class GridField {
 public:
  GridField() = default;
  GridField(const Grid& grid, const Eigen::VectorXcd& unknowns,
            const std::function<cplx(const Point&)>& dirichlet_values = {});

  const Grid& grid() const { return *grid_; }
  bool defined_at(int ix, int iy) const;
  cplx node(int ix, int iy) const { return values_[grid_->idx(ix, iy)]; }
  Eigen::VectorXcd& raw() { return values_; }
  const Eigen::VectorXcd& raw() const { return values_; }

  /// Bilinear interpolation; throws InvalidArgument if the cell touches
  /// nodes without values (point outside the covered region).
  cplx bilinear(const Point& x) const;
  bool can_eval(const Point& x) const;

 private:
  const Grid* grid_ = nullptr;
  Eigen::VectorXcd values_;
};

}  // namespace abpole
