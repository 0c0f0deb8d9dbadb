#include "abpole/grid.hpp"

#include <algorithm>
#include <cmath>

namespace abpole {

DomainSpec DomainSpec::disk(const Point& center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("disk: radius must be positive");
  DomainSpec s;
  s.shape = Shape::Disk;
  s.center = center;
  s.radius = radius;
  return s;
}

DomainSpec DomainSpec::rectangle(const Point& lo, const Point& hi) {
  if (!(hi.x1 > lo.x1) || !(hi.x2 > lo.x2))
    throw InvalidArgument("rectangle: empty box");
  DomainSpec s;
  s.shape = Shape::Rectangle;
  s.lo = lo;
  s.hi = hi;
  return s;
}

DomainSpec DomainSpec::half_disk(double radius) {
  if (!(radius > 0.0))
    throw InvalidArgument("half_disk: radius must be positive");
  DomainSpec s;
  s.shape = Shape::HalfDisk;
  s.radius = radius;
  return s;
}

bool DomainSpec::strictly_inside(const Point& x) const {
  switch (shape) {
    case Shape::Disk:
      return (x - center).norm() < radius;
    case Shape::Rectangle:
      return x.x1 > lo.x1 && x.x1 < hi.x1 && x.x2 > lo.x2 && x.x2 < hi.x2;
    case Shape::HalfDisk:
      return x.x2 > 0.0 && x.norm() < radius;
  }
  return false;
}

double DomainSpec::min_feature() const {
  switch (shape) {
    case Shape::Disk:
      return radius;
    case Shape::Rectangle:
      return std::min(hi.x1 - lo.x1, hi.x2 - lo.x2);
    case Shape::HalfDisk:
      return radius;
  }
  return 0.0;
}

namespace {

// Distance from x to the segment [a, b].
double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point d = b - a;
  const double len2 = d.x1 * d.x1 + d.x2 * d.x2;
  double t = 0.0;
  if (len2 > 0.0)
    t = ((x.x1 - a.x1) * d.x1 + (x.x2 - a.x2) * d.x2) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const Point p = {a.x1 + t * d.x1, a.x2 + t * d.x2};
  return (x - p).norm();
}

}  // namespace

bool Grid::on_neumann_line(int iy) const {
  if (spec.shape != DomainSpec::Shape::HalfDisk) return false;
  return std::abs(y0 + iy * h) < 1e-9 * h;
}

Point snap_to_plaquette_center(const Grid& g, const Point& x) {
  const double fx = std::floor((x.x1 - g.x0) / g.h);
  const double fy = std::floor((x.x2 - g.y0) / g.h);
  return {g.x0 + (fx + 0.5) * g.h, g.y0 + (fy + 0.5) * g.h};
}

Grid build_grid(const DomainSpec& spec, double h,
                std::optional<Point> plaquette_anchor) {
  if (!(h > 0.0)) throw InvalidArgument("build_grid: h must be positive");

  Grid g;
  g.spec = spec;
  g.h = h;

  // Anchor the lattice: disks get a half-spacing offset from the center so
  // that the center is a plaquette center; rectangles align with corners;
  // half-disks put nodes on the y=0 line with x=0 a node.
  double ax = 0.0, ay = 0.0, frac = 0.0;
  double lox = 0, loy = 0, hix = 0, hiy = 0;
  switch (spec.shape) {
    case DomainSpec::Shape::Disk:
      ax = spec.center.x1;
      ay = spec.center.x2;
      frac = 0.5;
      lox = spec.center.x1 - spec.radius;
      hix = spec.center.x1 + spec.radius;
      loy = spec.center.x2 - spec.radius;
      hiy = spec.center.x2 + spec.radius;
      break;
    case DomainSpec::Shape::Rectangle:
      ax = spec.lo.x1;
      ay = spec.lo.x2;
      frac = 0.0;
      lox = spec.lo.x1;
      hix = spec.hi.x1;
      loy = spec.lo.x2;
      hiy = spec.hi.x2;
      break;
    case DomainSpec::Shape::HalfDisk:
      ax = 0.0;
      ay = 0.0;
      frac = 0.0;
      lox = -spec.radius;
      hix = spec.radius;
      loy = 0.0;
      hiy = spec.radius;
      break;
  }

  if (plaquette_anchor) {
    ax = plaquette_anchor->x1;
    ay = plaquette_anchor->x2;
    frac = 0.5;
  }
  const int i_lo = static_cast<int>(std::floor((lox - ax) / h - frac)) - 2;
  const int i_hi = static_cast<int>(std::ceil((hix - ax) / h - frac)) + 2;
  const int j_lo = static_cast<int>(std::floor((loy - ay) / h - frac)) - 2;
  const int j_hi = static_cast<int>(std::ceil((hiy - ay) / h - frac)) + 2;
  g.x0 = ax + (i_lo + frac) * h;
  g.y0 = ay + (j_lo + frac) * h;
  g.nx = i_hi - i_lo + 1;
  g.ny = j_hi - j_lo + 1;

  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny;
  g.cls.assign(n, NodeClass::Exterior);
  g.unknown.assign(n, -1);
  g.dirichlet.assign(n, -1);

  const double tol = 1e-9 * h;

  // First pass: interior / straight-edge Neumann classification.
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const Point x = g.coord(ix, iy);
      NodeClass c = NodeClass::Exterior;
      if (spec.shape == DomainSpec::Shape::HalfDisk &&
          std::abs(x.x2) < tol) {
        if (x.norm() < spec.radius) c = NodeClass::Neumann;
      } else if (spec.strictly_inside(x)) {
        c = NodeClass::Interior;
      }
      g.cls[g.idx(ix, iy)] = c;
    }
  }

  // Cuts override: nodes on a tagged segment.
  for (const auto& cut : spec.extra_cuts) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const Point x = g.coord(ix, iy);
        if (segment_distance(x, cut.a, cut.b) < tol) {
          g.cls[g.idx(ix, iy)] = cut.tag == BoundaryTag::Dirichlet
                                     ? NodeClass::Dirichlet
                                     : NodeClass::Neumann;
        }
      }
    }
  }

  // Dirichlet ring: outside nodes 4-adjacent to an unknown.  Nodes below
  // the straight Neumann edge of a half-disk are NOT ringed: the edge
  // leaving the domain through the Neumann boundary carries no coupling.
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (g.cls[g.idx(ix, iy)] != NodeClass::Exterior) continue;
      if (spec.shape == DomainSpec::Shape::HalfDisk &&
          g.coord(ix, iy).x2 < -tol)
        continue;
      for (int d = 0; d < 4; ++d) {
        if (g.is_unknown(ix + dx[d], iy + dy[d])) {
          g.cls[g.idx(ix, iy)] = NodeClass::Dirichlet;
          break;
        }
      }
    }
  }

  // Deterministic index maps (raster order).
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const int r = g.idx(ix, iy);
      if (g.cls[r] == NodeClass::Interior || g.cls[r] == NodeClass::Neumann) {
        g.unknown[r] = static_cast<std::int32_t>(g.unknown_raster.size());
        g.unknown_raster.push_back(r);
      } else if (g.cls[r] == NodeClass::Dirichlet) {
        g.dirichlet[r] = static_cast<std::int32_t>(g.dirichlet_raster.size());
        g.dirichlet_raster.push_back(r);
      }
    }
  }

  const bool has_interior =
      std::any_of(g.cls.begin(), g.cls.end(),
                  [](NodeClass c) { return c == NodeClass::Interior; });
  if (g.unknown_raster.empty() || !has_interior)
    throw InvalidArgument("build_grid: spacing too coarse, no interior nodes");
  g.coarse_warning = spec.min_feature() / h < 8.0;
  return g;
}

}  // namespace abpole
