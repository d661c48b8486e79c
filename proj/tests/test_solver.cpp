#include <doctest.h>

#include "rperi/raster.hpp"
#include "rperi/solver.hpp"

#include <random>
#include <set>

using namespace rperi;

namespace {

BinaryMask full_mask(const GridGeometry& g) {
  BinaryMask m(g);
  for (auto& b : m.raw()) b = 1;
  return m;
}

DirichletSpec base_spec(const GridGeometry& g, double r) {
  DirichletSpec spec;
  spec.geom = g;
  spec.window = full_mask(g);
  spec.free_cells = BinaryMask(g);
  spec.boundary = BinaryMask(g);
  spec.g = ScalarField(g);
  spec.r = r;
  return spec;
}

uint32_t labeling_of(const DirichletSpec& spec, const BinaryMask& mask) {
  uint32_t lab = 0;
  int bit = 0;
  for (size_t i = 0; i < spec.free_cells.raw().size(); ++i)
    if (spec.free_cells.raw()[i]) {
      if (mask.raw()[i]) lab |= 1u << bit;
      ++bit;
    }
  return lab;
}

}  // namespace

TEST_CASE("zero free cells: constant problem") {
  GridGeometry g(2, {8, 8, 1}, 1.0);
  auto spec = base_spec(g, 1.5);
  spec.boundary = rasterize(Shape::half_space({0, 1, 0}, 4.0), g,
                            ExtensionRule::half_space({0, 1, 0}, 4.0));
  spec.validate();
  auto res = solve(spec, Canonical::minimal);
  CHECK(res.flow_value == 0);
  CHECK(res.scaled_energy == evaluate_scaled(spec, spec.boundary));
  CHECK(mask_xor_count(res.mask, spec.boundary) == 0);
}

TEST_CASE("one free cell surrounded by fixed-in cells joins E") {
  GridGeometry g(2, {7, 7, 1}, 1.0);
  auto spec = base_spec(g, 1.5);
  spec.boundary = full_mask(g);
  spec.boundary.extension = ExtensionRule::constant_inside();
  spec.free_cells.set_bit({3, 3, 0}, true);
  spec.validate();
  for (auto canon : {Canonical::minimal, Canonical::maximal}) {
    auto res = solve(spec, canon);
    CHECK(res.mask.bit({3, 3, 0}));
    CHECK(res.scaled_energy == 0);  // no oscillation anywhere
  }
  auto bf = brute_force(spec);
  CHECK(bf.min_scaled == 0);
  REQUIRE(bf.argmin.size() == 1);
  CHECK(bf.argmin[0] == 1u);
}

TEST_CASE("solver equals brute force on random small instances") {
  std::mt19937_64 rng(101);
  for (int it = 0; it < 50; ++it) {
    GridGeometry g(2, {8, 8, 1}, 1.0);
    double r = (double)(it % 3) * 0.5 + 1.0;  // 1, 1.5, 2
    auto spec = base_spec(g, r);
    spec.boundary.extension =
        (rng() & 1) ? ExtensionRule::constant_inside() : ExtensionRule::constant_outside();
    for (auto& b : spec.boundary.raw()) b = (uint8_t)(rng() & 1);
    std::uniform_real_distribution<double> gd(-3.0, 3.0);
    for (auto& v : spec.g.values()) v = gd(rng);
    // up to 16 free cells well inside the erode-by-r margin
    int placed = 0;
    while (placed < 16) {
      Idx k{(int)(2 + rng() % 4), (int)(2 + rng() % 4), 0};
      if (!spec.free_cells.bit(k)) {
        spec.free_cells.set_bit(k, true);
        ++placed;
      }
      if ((rng() & 7) == 0) break;  // vary the count
    }
    spec.validate();

    auto bf = brute_force(spec);
    auto lo = solve(spec, Canonical::minimal);
    auto hi = solve(spec, Canonical::maximal);
    CHECK(lo.scaled_energy == bf.min_scaled);
    CHECK(hi.scaled_energy == bf.min_scaled);

    uint32_t meet = ~0u, join = 0;
    std::set<uint32_t> argmin(bf.argmin.begin(), bf.argmin.end());
    for (uint32_t lab : bf.argmin) {
      meet &= lab;
      join |= lab;
    }
    CHECK(labeling_of(spec, lo.mask) == meet);
    CHECK(labeling_of(spec, hi.mask) == join);
    // argmin set is a lattice: closed under meet and join pairwise
    for (uint32_t a : bf.argmin)
      for (uint32_t b : bf.argmin) {
        CHECK(argmin.count(a & b) == 1);
        CHECK(argmin.count(a | b) == 1);
      }
    // route-independent energies
    CHECK(evaluate_scaled(spec, materialize(spec, bf.argmin[0])) == bf.min_scaled);
  }
}

TEST_CASE("flat half-space data keeps the flat energy") {
  GridGeometry g(2, {12, 12, 1}, 0.25, {false, false, false}, {-1.5, -1.5, 0});
  auto spec = base_spec(g, 0.5);
  spec.boundary = rasterize(Shape::half_space({0, 1, 0}, 0.0), g,
                            ExtensionRule::half_space({0, 1, 0}, 0.0));
  for (int y = 4; y <= 7; ++y)
    for (int x = 4; x <= 7; ++x) spec.free_cells.set_bit({x, y, 0}, true);
  spec.validate();
  auto res = solve(spec, Canonical::minimal);
  CHECK(res.scaled_energy == evaluate_scaled(spec, spec.boundary));
}

TEST_CASE("locality: boundary changes beyond reach are invisible") {
  GridGeometry g(2, {12, 12, 1}, 1.0);
  auto make = [&](bool corner) {
    auto spec = base_spec(g, 1.0);
    spec.window = BinaryMask(g);
    for (int y = 3; y <= 8; ++y)
      for (int x = 3; x <= 8; ++x) spec.window.set_bit({x, y, 0}, true);
    spec.free_cells.set_bit({5, 5, 0}, true);
    spec.free_cells.set_bit({6, 5, 0}, true);
    spec.free_cells.set_bit({5, 6, 0}, true);
    spec.boundary.set_bit({4, 4, 0}, true);
    spec.boundary.set_bit({7, 7, 0}, true);
    if (corner) {
      spec.boundary.set_bit({0, 0, 0}, true);
      spec.boundary.set_bit({11, 11, 0}, true);
      spec.boundary.set_bit({11, 0, 0}, true);
    }
    for (size_t i = 0; i < spec.g.values().size(); ++i)
      spec.g.values()[i] = ((i * 2654435761u) % 7) - 3.0;
    spec.validate();
    return solve(spec, Canonical::minimal);
  };
  auto a = make(false), b = make(true);
  CHECK(mask_xor_count(a.mask, b.mask) <= 3);  // only the flipped far bits differ
  CHECK(a.scaled_energy == b.scaled_energy);
  Idx k{0, 0, 0};
  for (k[1] = 3; k[1] <= 8; ++k[1])
    for (k[0] = 3; k[0] <= 8; ++k[0]) CHECK(a.mask.bit(k) == b.mask.bit(k));
}

TEST_CASE("determinism") {
  GridGeometry g(2, {8, 8, 1}, 1.0);
  auto spec = base_spec(g, 1.0);
  for (size_t i = 0; i < spec.boundary.raw().size(); ++i)
    spec.boundary.raw()[i] = (uint8_t)((i * 7) % 3 == 0);
  for (int y = 3; y <= 4; ++y)
    for (int x = 3; x <= 4; ++x) spec.free_cells.set_bit({x, y, 0}, true);
  auto a = solve(spec, Canonical::minimal);
  auto b = solve(spec, Canonical::minimal);
  CHECK(a.mask.raw() == b.mask.raw());
  CHECK(a.scaled_energy == b.scaled_energy);
}

TEST_CASE("capacity overflow is detected") {
  GridGeometry g(2, {10, 10, 1}, 1.0);
  auto spec = base_spec(g, 1.0);
  spec.free_cells.set_bit({5, 5, 0}, true);
  spec.capacity_scale = 1LL << 61;
  CHECK_THROWS_AS(build_graph(spec), CapacityOverflow);

  auto spec2 = base_spec(g, 1.0);
  spec2.free_cells.set_bit({5, 5, 0}, true);
  for (auto& v : spec2.g.values()) v = 1e19;
  CHECK_THROWS_AS(build_graph(spec2), CapacityOverflow);
}

TEST_CASE("spec validation rejects bad free regions") {
  GridGeometry g(2, {8, 8, 1}, 1.0);
  auto spec = base_spec(g, 2.0);
  spec.free_cells.set_bit({0, 0, 0}, true);  // touches the window edge
  CHECK_THROWS_AS(spec.validate(), SpecError);

  auto spec2 = base_spec(g, 1.0);
  spec2.window = BinaryMask(g);  // empty window, free cell outside it
  spec2.free_cells.set_bit({4, 4, 0}, true);
  CHECK_THROWS_AS(spec2.validate(), SpecError);
}

TEST_CASE("json round trip preserves the problem") {
  GridGeometry g(2, {8, 8, 1}, 1.0);
  auto spec = base_spec(g, 1.5);
  spec.boundary.set_bit({1, 1, 0}, true);
  spec.free_cells.set_bit({3, 3, 0}, true);
  spec.free_cells.set_bit({4, 4, 0}, true);
  for (size_t i = 0; i < spec.g.values().size(); ++i)
    spec.g.values()[i] = (double)(i % 5) - 2.0;
  spec.validate();
  auto spec2 = spec_from_json(spec_to_json(spec));
  auto a = solve(spec, Canonical::minimal);
  auto b = solve(spec2, Canonical::minimal);
  CHECK(a.mask.raw() == b.mask.raw());
  CHECK(a.scaled_energy == b.scaled_energy);
}

TEST_CASE("interval-lifted graph agrees with the oracle on large stencils") {
  // r/h = 26 gives a stencil with > 2000 offsets, which switches the builder
  // to the per-row interval nodes; brute force stays on the direct gather
  std::mt19937_64 rng(55);
  GridGeometry g(2, {60, 60, 1}, 1.0);
  for (int it = 0; it < 4; ++it) {
    auto spec = base_spec(g, 26.0);
    std::uniform_real_distribution<double> gd(-2.0, 2.0);
    for (auto& v : spec.g.values()) v = gd(rng);
    for (int y = 28; y <= 30; ++y)
      for (int x = 28; x <= 30; ++x) spec.free_cells.set_bit({x, y, 0}, true);
    spec.validate();
    auto bf = brute_force(spec);
    auto lo = solve(spec, Canonical::minimal);
    CHECK(lo.scaled_energy == bf.min_scaled);
    uint32_t meet = ~0u;
    for (uint32_t lab : bf.argmin) meet &= lab;
    CHECK(labeling_of(spec, lo.mask) == meet);
  }
}

TEST_CASE("1D half-line data: minimizers are half-lines") {
  GridGeometry g(1, {16, 1, 1}, 1.0);
  auto spec = base_spec(g, 2.0);
  spec.boundary.extension = ExtensionRule::half_space({1, 0, 0}, 0.0);
  for (int x = 0; x < 4; ++x) spec.boundary.set_bit({x, 0, 0}, true);  // continue the half-line
  for (int x = 4; x <= 11; ++x) spec.free_cells.set_bit({x, 0, 0}, true);
  spec.validate();
  auto bf = brute_force(spec);
  CHECK(bf.argmin.size() == 9);  // every cut position ties
  for (uint32_t lab : bf.argmin) {
    // prefix labelings only: bit i set implies all lower bits set
    uint32_t suffix_zeros = lab + 1;
    CHECK((suffix_zeros & (suffix_zeros - 1)) == 0);
  }
  auto lo = solve(spec, Canonical::minimal);
  CHECK(lo.scaled_energy == bf.min_scaled);
}
