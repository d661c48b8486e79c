#include <doctest.h>

#include "rperi/energy.hpp"
#include "rperi/morphology.hpp"
#include "rperi/raster.hpp"

#include <random>

using namespace rperi;

namespace {
BinaryMask random_mask(const GridGeometry& g, std::mt19937_64& rng, double p = 0.3) {
  BinaryMask m(g);
  std::bernoulli_distribution coin(p);
  for (auto& b : m.raw()) b = coin(rng) ? 1 : 0;
  return m;
}
}  // namespace

TEST_CASE("disk perimeter equals 2 pi R") {
  double h = 0.01, R = 2.0, r = 0.5;
  int n = (int)std::lround(6.0 / h);
  GridGeometry g(2, {n, n, 1}, h, {false, false, false}, {-3, -3, 0});
  auto disk = rasterize(Shape::ball({0, 0, 0}, R), g);
  double per = perimeter_r(disk, Window::all(), r);
  double exact = 2 * M_PI * R;
  CHECK(std::abs(per - exact) / exact < 0.01);

  BinaryMask empty(g);
  CHECK(perimeter_r(empty, Window::all(), r) == 0.0);
}

TEST_CASE("half-plane perimeter is r-independent") {
  double h = 0.005;
  // window is the unit square centered at the interface
  int n = (int)std::lround(2.2 / h);
  GridGeometry g(2, {n, n, 1}, h, {false, false, false}, {-1.1, -1.1, 0});
  auto hp = rasterize(Shape::half_space({0, 1, 0}, 0.0), g,
                      ExtensionRule::half_space({0, 1, 0}, 0.0));
  Window w = Window::rect({(int)std::lround(0.6 / h), (int)std::lround(0.6 / h), 0},
                          {(int)std::lround(1.6 / h) - 1, (int)std::lround(1.6 / h) - 1, 0});
  for (double r : {0.1, 0.3, 0.5}) {
    double per = perimeter_r(hp, w, r);
    CHECK(std::abs(per - 1.0) < 0.01);
  }
}

TEST_CASE("complement symmetry and translation invariance") {
  std::mt19937_64 rng(11);
  GridGeometry g(2, {16, 16, 1}, 1.0, {true, true, false});
  for (int it = 0; it < 20; ++it) {
    BinaryMask e = random_mask(g, rng);
    e.extension = ExtensionRule::periodic();
    double r = 2.0;
    long long pe = perimeter_count(e, Window::all(), r);
    CHECK(perimeter_count(e.complement(), Window::all(), r) == pe);
    // shift by a lattice vector
    BinaryMask s(g, ExtensionRule::periodic());
    Idx k{(int)(rng() % 16), (int)(rng() % 16), 0};
    Idx at{0, 0, 0};
    for (at[1] = 0; at[1] < 16; ++at[1])
      for (at[0] = 0; at[0] < 16; ++at[0]) s.set_bit(at, e.contains(add(at, k)));
    CHECK(perimeter_count(s, Window::all(), r) == pe);
  }
}

TEST_CASE("energy breakdown: annulus with negative forcing") {
  double h = 0.02, r = 1.0, K = 20.0;
  int n = (int)std::lround(4.4 / h);
  GridGeometry g(2, {n, n, 1}, h, {false, false, false}, {-2.2, -2.2, 0});
  auto ann = rasterize(Shape::annulus({0, 0, 0}, 0.5, 1.0), g);
  ScalarField fg(g);
  Idx k{0, 0, 0};
  for (k[1] = 0; k[1] < n; ++k[1])
    for (k[0] = 0; k[0] < n; ++k[0])
      if (ann.bit(k)) fg.set(k, -K);
  auto e = energy(ann, fg, Window::all(), r);
  CHECK(e.total == e.perimeter_term + e.bulk_term);
  double exact = -13.0 * M_PI;
  CHECK(std::abs(e.total - exact) / std::abs(exact) < 0.02);

  ScalarField zero(g);
  auto e0 = energy(ann, zero, Window::all(), r);
  CHECK(e0.total == e0.perimeter_term);
  CHECK(e0.bulk_term == 0.0);
}

TEST_CASE("coarea identity exact on random multi-level fields") {
  std::mt19937_64 rng(23);
  GridGeometry g(2, {32, 32, 1}, 1.0, {true, true, false});
  for (int it = 0; it < 100; ++it) {
    ScalarField u(g, ScalarField::Ext::periodic);
    std::uniform_int_distribution<int> lev(0, 2);
    double vals[3] = {-1.0, 0.5, 2.0};
    for (auto& v : u.values()) v = vals[lev(rng)];
    double r = (double)(1 << (it % 3));  // h, 2h, 4h
    auto res = coarea_check(u, Window::all(), r);
    CHECK(res.lhs_scaled == res.rhs_scaled);
    CHECK(res.lhs == res.rhs);
  }
  // constant field
  ScalarField c(g, ScalarField::Ext::periodic);
  for (auto& v : c.values()) v = 3.25;
  auto rc = coarea_check(c, Window::all(), 2.0);
  CHECK(rc.lhs == 0.0);
  CHECK(rc.rhs == 0.0);
  // binary indicator collapses to the definition
  std::mt19937_64 rng2(9);
  BinaryMask e = random_mask(g, rng2);
  ScalarField chi(g, ScalarField::Ext::periodic);
  for (size_t i = 0; i < chi.values().size(); ++i) chi.values()[i] = e.raw()[i];
  e.extension = ExtensionRule::periodic();
  auto rb = coarea_check(chi, Window::all(), 2.0);
  CHECK(rb.lhs_scaled ==
        (long long)(1 << 20) * perimeter_count(e, Window::all(), 2.0));
}

TEST_CASE("submodularity slack nonnegative") {
  std::mt19937_64 rng(31);
  GridGeometry g(2, {24, 24, 1}, 1.0);
  for (int it = 0; it < 300; ++it) {
    BinaryMask a = random_mask(g, rng), b = random_mask(g, rng);
    double r = (double)(1 << (it % 3));
    long long slack = submodularity_slack_count(a, b, Window::all(), r);
    CHECK(slack >= 0);
    CHECK(submodularity_slack_count(a, a, Window::all(), r) == 0);
  }
  // far-apart disks: zero slack
  GridGeometry gd(2, {60, 60, 1}, 1.0);
  auto d1 = rasterize(Shape::ball({10, 10, 0}, 5.0), gd);
  auto d2 = rasterize(Shape::ball({45, 45, 0}, 5.0), gd);
  CHECK(submodularity_slack_count(d1, d2, Window::all(), 3.0) == 0);
}

TEST_CASE("global isoperimetry on random blobs (small)") {
  // small smoke version; the acceptance suite runs the full sweep
  std::mt19937_64 rng(77);
  double h = 0.05, R = 1.0, r = 0.25;
  int n = (int)std::lround(3.0 / h);
  GridGeometry g(2, {n, n, 1}, h, {false, false, false}, {-1.5, -1.5, 0});
  auto ball = rasterize(Shape::ball({0, 0, 0}, R), g);
  long long target = ball.count_set();
  double per_ball = perimeter_r(ball, Window::all(), r);
  for (int it = 0; it < 10; ++it) {
    // blob: random half-plane cut of a bigger disk, volume-matched by rows
    auto blob = rasterize(Shape::ball({0.1, -0.05, 0}, R * 1.3), g);
    long long excess = blob.count_set() - target;
    for (size_t i = 0; i < blob.raw().size() && excess > 0; ++i)
      if (blob.raw()[i]) {
        blob.raw()[i] = 0;
        --excess;
      }
    if (std::llabs(blob.count_set() - target) > 1) continue;
    CHECK(perimeter_r(blob, Window::all(), r) >= per_ball * 0.99);
  }
}
