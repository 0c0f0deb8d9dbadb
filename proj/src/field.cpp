#include "abpole/field.hpp"

#include <cmath>
#include <limits>

namespace abpole {

namespace {
const cplx kUndefined{std::numeric_limits<double>::quiet_NaN(), 0.0};
}

GridField::GridField(const Grid& grid, const Eigen::VectorXcd& unknowns,
                     const std::function<cplx(const Point&)>& dirichlet_values)
    : grid_(&grid) {
  if (unknowns.size() != grid.n_unknown())
    throw InvalidArgument("GridField: unknown vector size mismatch");
  values_.setConstant(static_cast<Eigen::Index>(grid.cls.size()), kUndefined);
  for (int i = 0; i < grid.n_unknown(); ++i)
    values_[grid.unknown_raster[i]] = unknowns[i];
  for (int d = 0; d < grid.n_dirichlet(); ++d) {
    const int r = grid.dirichlet_raster[d];
    values_[r] = dirichlet_values ? dirichlet_values(grid.coord(r)) : cplx(0);
  }
}

bool GridField::defined_at(int ix, int iy) const {
  if (ix < 0 || iy < 0 || ix >= grid_->nx || iy >= grid_->ny) return false;
  return !std::isnan(values_[grid_->idx(ix, iy)].real());
}

cplx GridField::bilinear(const Point& x) const {
  const double fx = (x.x1 - grid_->x0) / grid_->h;
  const double fy = (x.x2 - grid_->y0) / grid_->h;
  const int ix = static_cast<int>(std::floor(fx));
  const int iy = static_cast<int>(std::floor(fy));
  if (!defined_at(ix, iy) || !defined_at(ix + 1, iy) ||
      !defined_at(ix, iy + 1) || !defined_at(ix + 1, iy + 1))
    throw InvalidArgument("GridField: evaluation outside the covered region");
  const double sx = fx - ix, sy = fy - iy;
  return (1 - sx) * (1 - sy) * node(ix, iy) + sx * (1 - sy) * node(ix + 1, iy) +
         (1 - sx) * sy * node(ix, iy + 1) + sx * sy * node(ix + 1, iy + 1);
}

bool GridField::can_eval(const Point& x) const {
  const double fx = (x.x1 - grid_->x0) / grid_->h;
  const double fy = (x.x2 - grid_->y0) / grid_->h;
  const int ix = static_cast<int>(std::floor(fx));
  const int iy = static_cast<int>(std::floor(fy));
  return defined_at(ix, iy) && defined_at(ix + 1, iy) &&
         defined_at(ix, iy + 1) && defined_at(ix + 1, iy + 1);
}

}  // namespace abpole
