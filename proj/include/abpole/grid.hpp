#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "abpole/geom.hpp"

namespace abpole {

enum class BoundaryTag { Dirichlet, Neumann };

struct CutSegment {
  Point a;
  Point b;
  BoundaryTag tag = BoundaryTag::Dirichlet;
};

/// Shape of the computational domain.  half_disk is the upper half of the
/// disk of given radius centered at the origin; its straight edge carries
/// Neumann conditions unless overridden by a cut.
struct DomainSpec {
  enum class Shape { Disk, Rectangle, HalfDisk };
  Shape shape = Shape::Disk;
  Point center;                     // disk
  double radius = 1.0;              // disk, half-disk
  Point lo, hi;                     // rectangle corners
  std::vector<CutSegment> extra_cuts;

  static DomainSpec disk(const Point& center, double radius);
  static DomainSpec rectangle(const Point& lo, const Point& hi);
  static DomainSpec half_disk(double radius);

  bool strictly_inside(const Point& x) const;
  double min_feature() const;
};

enum class NodeClass : std::uint8_t { Exterior, Interior, Neumann, Dirichlet };

/// Uniform staircase lattice over a DomainSpec.  Unknowns are Interior and
/// Neumann nodes; Dirichlet nodes are the eliminated layer (cut nodes plus
/// the ring of outside nodes 4-adjacent to an unknown).
///
/// Node (ix,iy) sits at (x0 + ix*h, y0 + iy*h).  Disk grids are offset by
/// h/2 so the center is a plaquette center; rectangle and half-disk grids
/// align nodes with the corners / the y=0 line.
class Grid {
 public:
  DomainSpec spec;
  double h = 0.0;
  double x0 = 0.0, y0 = 0.0;
  int nx = 0, ny = 0;
  std::vector<NodeClass> cls;          // raster, size nx*ny
  std::vector<std::int32_t> unknown;   // raster -> unknown index or -1
  std::vector<std::int32_t> unknown_raster;    // unknown index -> raster
  std::vector<std::int32_t> dirichlet_raster;  // dirichlet index -> raster
  std::vector<std::int32_t> dirichlet;         // raster -> dirichlet index or -1
  bool coarse_warning = false;

  int idx(int ix, int iy) const { return iy * nx + ix; }
  int ix_of(int raster) const { return raster % nx; }
  int iy_of(int raster) const { return raster / nx; }
  Point coord(int ix, int iy) const { return {x0 + ix * h, y0 + iy * h}; }
  Point coord(int raster) const {
    return coord(ix_of(raster), iy_of(raster));
  }
  NodeClass node_class(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return NodeClass::Exterior;
    return cls[idx(ix, iy)];
  }
  bool is_unknown(int ix, int iy) const {
    NodeClass c = node_class(ix, iy);
    return c == NodeClass::Interior || c == NodeClass::Neumann;
  }
  int n_unknown() const { return static_cast<int>(unknown_raster.size()); }
  int n_dirichlet() const {
    return static_cast<int>(dirichlet_raster.size());
  }
  /// True when y is on the Neumann line y=0 of a half-disk grid.
  bool on_neumann_line(int iy) const;
};

/// Build the lattice.  When `plaquette_anchor` is given, the node lattice
/// is placed so the anchor point is exactly a plaquette center (and so are
/// all points anchor + (i,j)*h); pole sweeps anchor at the base pole so
/// the effective pole positions are commensurate across dyadic spacings.
Grid build_grid(const DomainSpec& spec, double h,
                std::optional<Point> plaquette_anchor = std::nullopt);

/// Center of the plaquette containing x (the gauge class of a pole: poles
/// inside one plaquette give unitarily equivalent operators).
Point snap_to_plaquette_center(const Grid& g, const Point& x);

}  // namespace abpole
