#pragma once

#include "rperi/energy.hpp"
#include "rperi/grid.hpp"
#include "rperi/window.hpp"

#include <json.hpp>

#include <stdexcept>

// Exact global minimization of F_{r,g} with Dirichlet data via an s-t min-cut
// encoding of the oscillation energy, plus a brute-force oracle and canonical
// minimal/maximal minimizer extraction.
//
// All energies are scaled integers in units of h^n / (2 r capacity_scale); a
// labeling's true energy is scaled * unit. The forcing g is quantized to
// multiples of 1 / (2 r capacity_scale) so the scaled energies are exact, and
// every reported energy refers to the quantized problem actually solved.
//
// Labeling convention (fixed here, used everywhere): source side = outside E,
// sink side = inside E; "E grows toward the sink".

namespace rperi {

struct CapacityOverflow : std::runtime_error {
  CapacityOverflow() : std::runtime_error("scaled capacities exceed the integer range") {}
};
struct TooLarge : std::runtime_error {
  TooLarge() : std::runtime_error("free-cell count exceeds the brute-force cap") {}
};
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// Dirichlet problem data. window and free_cells are cell subsets of the
// stored grid (bit = member); boundary carries the fixed values, the
// extension rule and any lattice identification periods. free_cells must be
// a subset of window, with every stencil read from a free cell landing in
// window (the discrete erode-by-r constraint).
struct DirichletSpec {
  GridGeometry geom;
  BinaryMask window;
  BinaryMask free_cells;
  BinaryMask boundary;
  ScalarField g;
  double r = 1.0;
  long long capacity_scale = 1 << 20;

  double scaled_unit() const {
    return geom.cell_measure() / (2.0 * r * (double)capacity_scale);
  }
  void validate() const;  // throws SpecError
};

enum class Canonical { minimal, maximal, arbitrary };

// Explicit cut-problem representation. cap < 0 marks a forcing arc that must
// never be cut; it is materialized as `infinity` (sum of finite caps + 1).
struct CutGraph {
  struct Arc {
    int32_t from, to;
    long long cap;
  };
  int node_count = 0;  // source = 0, sink = 1
  std::vector<Arc> arcs;
  long long offset = 0;    // min cut value + offset = scaled minimum energy
  long long infinity = 0;
  std::vector<long long> free_node;  // graph node per free-cell id
  std::vector<long long> free_flat;  // flat cell index per free-cell id
};

struct MinimizerResult {
  BinaryMask mask;
  EnergyBreakdown energy;
  long long flow_value = 0;
  long long scaled_energy = 0;
  Canonical canonical = Canonical::arbitrary;
};

CutGraph build_graph(const DirichletSpec& spec);
MinimizerResult solve(const DirichletSpec& spec, Canonical canonical = Canonical::minimal);

// Scaled-integer energy of an admissible mask, computed by the morphology
// route (oscillation field from distance transforms), independent of the cut
// encoding.
long long evaluate_scaled(const DirichletSpec& spec, const BinaryMask& mask);
EnergyBreakdown evaluate(const DirichletSpec& spec, const BinaryMask& mask);

// Combine boundary values with a free-cell labeling into a full mask.
BinaryMask materialize(const DirichletSpec& spec, uint32_t labeling);

struct BruteForceResult {
  long long min_scaled = 0;
  std::vector<uint32_t> argmin;       // all optimal labelings, bit i = free cell i
  std::vector<long long> free_flat;   // flat cell index per free id
};
// Exhaustive enumeration over all 2^k labelings; k <= 20.
BruteForceResult brute_force(const DirichletSpec& spec);

nlohmann::json spec_to_json(const DirichletSpec& spec);
DirichletSpec spec_from_json(const nlohmann::json& j);

}  // namespace rperi
