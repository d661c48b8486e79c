#include <doctest.h>

#include "rperi/experiments.hpp"
#include "rperi/raster.hpp"

#include <numbers>
#include <queue>

using namespace rperi;

TEST_CASE("random blobs are deterministic, exact and connected") {
  GridGeometry g(2, {60, 60, 1}, 0.1, {false, false, false}, {-3, -3, 0});
  auto a = random_blob(g, 500, 77);
  auto b = random_blob(g, 500, 77);
  CHECK(a.raw() == b.raw());
  CHECK(a.count_set() == 500);
  auto c = random_blob(g, 500, 78);
  CHECK(c.raw() != a.raw());

  // connectivity: BFS from any set cell reaches all of them
  Idx start{-1, -1, -1};
  Idx k{0, 0, 0};
  for (k[1] = 0; k[1] < 60 && start[0] < 0; ++k[1])
    for (k[0] = 0; k[0] < 60; ++k[0])
      if (a.bit(k)) {
        start = k;
        break;
      }
  std::vector<uint8_t> seen(a.raw().size(), 0);
  std::queue<Idx> q;
  q.push(start);
  seen[(size_t)g.flatten(start)] = 1;
  long long reached = 0;
  while (!q.empty()) {
    Idx x = q.front();
    q.pop();
    ++reached;
    for (int i = 0; i < 2; ++i)
      for (int s = -1; s <= 1; s += 2) {
        Idx y = x;
        y[i] += s;
        if (!g.in_window(y) || !a.bit(y)) continue;
        auto f = (size_t)g.flatten(y);
        if (seen[f]) continue;
        seen[f] = 1;
        q.push(y);
      }
  }
  CHECK(reached == 500);

  // confinement is respected
  Window win = Window::ball({0, 0, 0}, 1.5);
  auto d = random_blob(g, 200, 5, win);
  for (k[1] = 0; k[1] < 60; ++k[1])
    for (k[0] = 0; k[0] < 60; ++k[0])
      if (d.bit(k)) CHECK(win.contains(k, g));
  CHECK_THROWS_AS(random_blob(g, 4000, 5, Window::ball({0, 0, 0}, 0.5)), SpecError);
}

TEST_CASE("ellipse quadrature hits closed forms") {
  CHECK(ellipse_perimeter(1.0, 1.0) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  CHECK(ellipse_perimeter(3.0, 3.0) == doctest::Approx(6 * std::numbers::pi).epsilon(1e-12));
  // degenerate ellipse collapses to four half-axes
  CHECK(ellipse_perimeter(1.0, 1e-9) == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("density profile of a ball grows and then saturates") {
  GridGeometry g(2, {120, 120, 1}, 0.05, {false, false, false}, {-3, -3, 0});
  auto ball = rasterize(Shape::ball({0, 0, 0}, 2.0), g);
  auto p = density_profile(ball, {0, 0, 0}, 0.25, 0.25, 6);
  REQUIRE(p.f.size() == 7);
  for (size_t i = 0; i + 1 < p.f.size(); ++i) CHECK(p.f[i + 1] >= p.f[i]);
  CHECK(p.f.back() == doctest::Approx(4 * std::numbers::pi).epsilon(0.02));
  // the growth constant is only meaningful while B_R has not swallowed E
  auto p3 = density_profile(ball, {0, 0, 0}, 0.25, 0.25, 3);
  CHECK(p3.c_emp > 0.0);

  BinaryMask empty(g);
  CHECK_THROWS_AS(density_profile(empty, {0, 0, 0}, 0.25, 0.25, 3), SpecError);
}

TEST_CASE("one dimensional classification passes on small windows") {
  auto rep = oned_classification(18, 2.0, 1);
  for (const auto& v : rep.verdicts) {
    INFO(v.name, " value=", v.value, " bound=", v.bound);
    CHECK(v.pass);
  }
  auto j = rep.to_json();
  CHECK(j.contains("verdicts"));
  CHECK(j["name"] == "oned_classification");
}

TEST_CASE("poincare sweep is bounded on a small battery") {
  auto rep = pw_sweep(1.0, 0.25, 0.1, 5, 11);
  for (const auto& v : rep.verdicts) {
    INFO(v.name, " value=", v.value, " bound=", v.bound);
    CHECK(v.pass);
  }
  // the sign probe is exact: C = r/2R, so each doubling gains exactly 2
  auto ratios = rep.summary["probe_doubling_ratios"];
  CHECK((double)ratios[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK((double)ratios[1] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("reports reproduce byte for byte from the seed") {
  auto a = pw_sweep(1.0, 0.25, 0.1, 3, 42).to_json().dump();
  auto b = pw_sweep(1.0, 0.25, 0.1, 3, 42).to_json().dump();
  CHECK(a == b);
}
