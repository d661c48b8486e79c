#include <doctest.h>

#include "rperi/planelike.hpp"
#include "rperi/raster.hpp"

#include <random>

using namespace rperi;

namespace {
Idx origin_cell(const GridGeometry& g) {
  return {(int)std::llround(g.origin[0] / g.h), (int)std::llround(g.origin[1] / g.h), 0};
}
}  // namespace

TEST_CASE("rational basis") {
  auto a = rational_basis({0, 1, 0});
  CHECK(a.period_basis.at(0) == Idx{1, 0, 0});
  auto b = rational_basis({1, 1, 0});
  CHECK(b.period_basis.at(0) == Idx{1, -1, 0});
  auto c = rational_basis({1, 2, 0});
  CHECK(c.period_basis.at(0) == Idx{2, -1, 0});
  auto d = rational_basis({2, 4, 0});  // reduced to (1,2)
  CHECK(d.omega_int == Idx{1, 2, 0});
  CHECK_THROWS_AS(rational_basis({0, 0, 0}), SpecError);

  // K is a shortest nonzero integer vector orthogonal to omega
  for (Idx w : {Idx{1, 2, 0}, Idx{3, 1, 0}, Idx{2, -5, 0}}) {
    auto rd = rational_basis(w);
    long long best = INT64_MAX;
    for (int x = -10; x <= 10; ++x)
      for (int y = -10; y <= 10; ++y)
        if ((x || y) && (long long)x * w[0] + (long long)y * w[1] == 0)
          best = std::min(best, (long long)x * x + (long long)y * y);
    CHECK(sqnorm(rd.period_basis[0]) == best);
    CHECK(dot(rd.period_basis[0], rd.omega_int) == 0);
  }
}

TEST_CASE("strip construction forces the right zones") {
  StripSpec s;
  s.direction = rational_basis({0, 1, 0});
  s.M = 4;
  s.r = 0.5;
  s.h = 0.25;
  s.g_cell = checkerboard_forcing(s.h, 0.0);
  auto d = build_strip(s);
  d.validate();
  long long fixed_in = 0, fixed_out = 0;
  Idx k{0, 0, 0};
  for (k[1] = 0; k[1] < d.geom.shape[1]; ++k[1])
    for (k[0] = 0; k[0] < d.geom.shape[0]; ++k[0]) {
      if (!d.window.bit(k)) continue;
      double t = strip_height(s.direction, d.geom, k);
      if (t <= -s.M) {
        CHECK(!d.free_cells.bit(k));
        CHECK(d.boundary.bit(k));
        ++fixed_in;
      } else if (t >= s.M) {
        CHECK(!d.free_cells.bit(k));
        CHECK(!d.boundary.bit(k));
        ++fixed_out;
      }
    }
  CHECK(fixed_in == fixed_out);  // symmetric strip
  CHECK(fixed_in > 0);
}

TEST_CASE("checkerboard forcing tiles the strip periodically") {
  StripSpec s;
  s.direction = rational_basis({1, 2, 0});
  s.M = 4;
  s.r = 0.5;
  s.eta = 0.05;
  s.h = 0.1;
  s.g_cell = checkerboard_forcing(s.h, s.eta);
  auto d = build_strip(s);
  int sc = (int)std::llround(1.0 / s.h);
  Idx P = {s.direction.period_basis[0][0] * sc, s.direction.period_basis[0][1] * sc, 0};
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int it = 0; it < 5000 && checked < 1000; ++it) {
    Idx k{(int)(rng() % (uint64_t)d.geom.shape[0]), (int)(rng() % (uint64_t)d.geom.shape[1]), 0};
    for (Idx shift : {P, Idx{sc, 0, 0}, Idx{0, sc, 0}}) {
      Idx k2 = add(k, shift);
      if (!d.geom.in_window(k2)) continue;
      CHECK(d.g.at(k) == d.g.at(k2));
      ++checked;
    }
  }
  CHECK(checked >= 1000);
  // zero average and sup bound by construction
  double sum = 0;
  for (double v : s.g_cell.values()) sum += v;
  CHECK(std::abs(sum) < 1e-9);
}

TEST_CASE("strip spec validation") {
  StripSpec s;
  s.direction = rational_basis({0, 1, 0});
  s.M = 1.0;  // too narrow
  s.r = 0.5;
  s.h = 0.25;
  s.g_cell = checkerboard_forcing(s.h, 0.0);
  CHECK_THROWS_AS(build_strip(s), SpecError);
  s.M = 4;
  s.h = 0.3;  // 1/h not integer
  CHECK_THROWS_AS(build_strip(s), SpecError);
  s.h = 0.25;
  s.g_cell = checkerboard_forcing(s.h, 0.0);
  for (auto& v : s.g_cell.values()) v += 0.2;  // breaks the zero average
  s.eta = 0.25;
  CHECK_THROWS_AS(build_strip(s), SpecError);
  s.g_cell = checkerboard_forcing(s.h, 0.2);
  s.eta = 0.05;  // sup above eta
  CHECK_THROWS_AS(build_strip(s), SpecError);
}

TEST_CASE("flat medium: transition is a single jump") {
  StripSpec s;
  s.direction = rational_basis({0, 1, 0});
  s.M = 4;
  s.r = 0.5;
  s.eta = 0.0;
  s.h = 0.25;
  s.g_cell = checkerboard_forcing(s.h, 0.0);
  auto res = construct_planelike(s);
  CHECK(res.width <= s.h + 2.0 * s.r);
  CHECK(res.birkhoff_ok);
  CHECK(res.census.grey.count > 0);
  CHECK(res.census.grey.t_max - res.census.grey.t_min <= 2.5);  // one cube layer
  CHECK(layers_ordered(res.census));
}

TEST_CASE("checkerboard medium: sandwich, periodicity, birkhoff, stability") {
  StripSpec s;
  s.direction = rational_basis({1, 1, 0});
  s.M = 4;
  s.r = 0.5;
  s.eta = 0.05;
  s.h = 0.1;
  s.g_cell = checkerboard_forcing(s.h, s.eta);
  auto res = construct_planelike(s);
  const auto& geom = res.problem.geom;
  int sc = (int)std::llround(1.0 / s.h);

  // constraint sandwich, exact
  Idx k{0, 0, 0};
  for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
    for (k[0] = 0; k[0] < geom.shape[0]; ++k[0]) {
      double t = strip_height(s.direction, geom, k);
      if (t <= -s.M) CHECK(res.mask.contains(k));
      if (t >= s.M) CHECK(!res.mask.contains(k));
    }

  // omega-periodicity: the period shift fixes the mask exactly
  Idx P = {sc, -sc, 0};
  std::mt19937_64 rng(9);
  for (int it = 0; it < 500; ++it) {
    Idx x{(int)(rng() % 400) - 200, (int)(rng() % 400) - 200, 0};
    CHECK(res.mask.contains(x) == res.mask.contains(add(x, P)));
  }

  CHECK(res.birkhoff_ok);
  CHECK(res.width <= s.M);
  CHECK(layers_ordered(res.census));
  CHECK(color_monotone(res.mask, s.direction, -2 * s.M - 2, 2 * s.M + 2));

  // census set identities
  const auto& c = res.census;
  CHECK(c.grey.count == c.foggy_black.count + c.foggy_white.count - c.multicolored.count);
  CHECK(c.almost_black.count == c.foggy_black.count - c.multicolored.count);
  CHECK(c.almost_white.count == c.foggy_white.count - c.multicolored.count);

  // doubling M leaves the mask unchanged on the common strip
  StripSpec s2 = s;
  s2.M = 8;
  auto res2 = construct_planelike(s2);
  Idx kmin1 = origin_cell(geom);
  Idx kmin2 = origin_cell(res2.problem.geom);
  long long compared = 0;
  for (k[1] = 0; k[1] < geom.shape[1]; ++k[1])
    for (k[0] = 0; k[0] < geom.shape[0]; ++k[0]) {
      double t = strip_height(s.direction, geom, k);
      if (std::abs(t) >= s.M) continue;
      Idx kg = add(k, kmin1);
      CHECK(res.mask.contains(k) == res2.mask.contains(sub(kg, kmin2)));
      ++compared;
    }
  CHECK(compared > 1000);
}

TEST_CASE("birkhoff property detects violations") {
  GridGeometry g(2, {20, 20, 1}, 1.0, {false, false, false}, {-10, -10, 0});
  auto dir = rational_basis({0, 1, 0});
  auto hs = rasterize(Shape::half_space({0, 1, 0}, 0.0), g,
                      ExtensionRule::half_space({0, 1, 0}, 0.0));
  CHECK(check_birkhoff(hs, dir));

  auto bad = hs;
  bad.set_bit({5, 15, 0}, true);   // island above the interface
  bad.set_bit({5, 3, 0}, false);   // hole below
  CHECK(!check_birkhoff(bad, dir));
}

TEST_CASE("cube census trivial cases") {
  GridGeometry g(2, {24, 24, 1}, 0.5, {false, false, false}, {-6, -6, 0});
  auto dir = rational_basis({0, 1, 0});

  BinaryMask empty(g);  // extension keeps it empty everywhere
  auto ce = classify_cubes(empty, dir, 0.5, -4, 4);
  CHECK(ce.white.count > 0);
  CHECK(ce.black.count == 0);
  CHECK(ce.grey.count == 0);

  auto hs = rasterize(Shape::half_space({0, 1, 0}, 0.0), g,
                      ExtensionRule::half_space({0, 1, 0}, 0.0));
  auto ch = classify_cubes(hs, dir, 0.5, -4, 4);
  CHECK(ch.grey.count == 1);  // the face-aligned interface straddles one cube layer
  CHECK(ch.black.count > 0);
  CHECK(ch.white.count > 0);
  CHECK(layers_ordered(ch));
}
