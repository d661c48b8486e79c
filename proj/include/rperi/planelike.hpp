#pragma once

#include "rperi/solver.hpp"

#include <limits>

// Planelike minimizers in periodic media for rational directions: strip
// domains on the quotient lattice, constrained minimal minimizers, Birkhoff
// and color-census diagnostics, transition-layer width.
//
// Geometry conventions: omega is a nonzero integer vector; lattice shifts are
// measured in length units (multiples of 1), so one unit step is s = 1/h
// cells, and 1/h must be an integer. The signed height of a cell is
// t(k) = omega_unit . center(k).

namespace rperi {

struct RationalDirection {
  int dim = 2;
  Idx omega_int{0, 1, 0};                  // primitive integer direction
  std::array<double, 3> omega_unit{0, 1, 0};
  std::vector<Idx> period_basis;           // integer, orthogonal to omega
};

// Primitive direction plus an integer basis of its orthogonal lattice.
RationalDirection rational_basis(Idx omega_int, int dim = 2);

// Signed height of a cell center along the direction.
double strip_height(const RationalDirection& dir, const GridGeometry& geom, const Idx& k);

// Lattice-periodic forcing given on one unit period cell [0,1)^dim.
struct StripSpec {
  RationalDirection direction;
  double M = 4.0;    // strip half-width, length units
  double r = 0.5;
  double eta = 0.05;
  double h = 0.1;
  ScalarField g_cell;  // shape (1/h)^dim, zero average, sup <= eta
  long long capacity_scale = 1 << 20;

  void validate() const;  // throws SpecError
};

// +eta on even unit cells, -eta on odd, sampled at spacing h.
ScalarField checkerboard_forcing(double h, double eta, int dim = 2);

// Fundamental strip for the omega-periodic Dirichlet problem: cells identified
// along the period basis, data forced inside for t <= -M and outside for
// t >= M, energy window |t| < 2M.
DirichletSpec build_strip(const StripSpec& spec);

struct ClassStat {
  long long count = 0;
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = -std::numeric_limits<double>::infinity();
};

struct ColorCensus {
  ClassStat black, white, grey;
  ClassStat foggy_black, foggy_white;
  ClassStat multicolored, almost_black, almost_white;
};

// Overlapping cubes j + [0, dim]^dim (length units), one representative per
// period class, classified by volume(E ∩ Q) against {0, r^dim, full}.
ColorCensus classify_cubes(const BinaryMask& mask, const RationalDirection& dir,
                           double r, double t_lo, double t_hi);

// volume(E ∩ (Q + k)) <= volume(E ∩ Q) for the generating upward shifts.
bool color_monotone(const BinaryMask& mask, const RationalDirection& dir,
                    double t_lo, double t_hi);

// Extent intervals of the nonempty classes are ordered along omega:
// Black <= almostBlack <= Multicolored <= almostWhite <= White.
bool layers_ordered(const ColorCensus& census);

// Translate inclusions over the generating shifts (period basis and signed
// unit lattice vectors): shifts with omega.k <= 0 shrink the set, >= 0 grow it.
bool check_birkhoff(const BinaryMask& mask, const RationalDirection& dir);

struct PlanelikeResult {
  DirichletSpec problem;
  BinaryMask mask;          // phase-normalized minimal minimizer
  long long scaled_energy = 0;
  EnergyBreakdown energy;
  double t_lo = 0.0, t_hi = 0.0;  // transition layer bounds along omega
  double width = 0.0;
  long long shift_steps = 0;      // applied phase normalization, in t-steps of 1/|omega|
  ColorCensus census;
  bool birkhoff_ok = false;
};

// Solve the strip problem with the minimal canonical cut, normalize the phase
// along the primitive omega period (zero-average g makes those translates
// energy-equal), measure the transition layer and run the diagnostics.
PlanelikeResult construct_planelike(const StripSpec& spec);

}  // namespace rperi
