#pragma once

#include "rperi/grid.hpp"

#include <limits>

// Exact Euclidean distance transforms (separable lower-envelope construction)
// and the derived morphological operations: dilation/erosion by B_r, the
// oscillation field and the cube hull.

namespace rperi {

struct EmptySetError : std::runtime_error {
  EmptySetError() : std::runtime_error("distance transform of empty set") {}
};
struct CubeTooSmallError : std::runtime_error {
  CubeTooSmallError() : std::runtime_error("cube side rounds below one cell") {}
};

constexpr long long kDistInf = (long long)1 << 52;

// Squared Euclidean distance (in length^2) from each cell center to the
// nearest set cell center, extension-aware up to `horizon` cells beyond the
// window per non-periodic axis; periodic axes wrap exactly.
struct DistanceField {
  GridGeometry geom;
  std::vector<long long> sq_cells;  // squared distance in cell units, kDistInf if none

  double at(const Idx& k) const {
    long long c = sq_cells[(size_t)geom.flatten(k)];
    return c >= kDistInf ? std::numeric_limits<double>::infinity()
                         : (double)c * geom.h * geom.h;
  }
};

// horizon < 0 selects a full-window horizon (exact for any finite distance
// reachable through the extension).
DistanceField distance_transform(const BinaryMask& mask, int horizon = -1);

// Same transform on the complement (extension rule complemented as well).
DistanceField distance_transform_complement(const BinaryMask& mask, int horizon = -1);

BinaryMask dilate(const BinaryMask& mask, double r);
BinaryMask erode(const BinaryMask& mask, double r);

// Cells whose r-ball contains both a set and an unset cell: the discrete
// carrier of (boundary E) + B_r. Equals dilate(E,r) intersect dilate(E^c,r).
BinaryMask oscillation_field(const BinaryMask& mask, double r);

struct CubeHull {
  BinaryMask hull;
  int cells_per_side = 0;
  double face_perimeter = 0.0;     // classical face-count perimeter of the hull
  double symm_diff_volume = 0.0;   // |hull symmetric-difference input|
};

// Union of all axis-aligned cubes of side r/(4 sqrt(n)) (rounded up to whole
// cells) that meet the set.
CubeHull cube_hull(const BinaryMask& mask, double r);

}  // namespace rperi
