#pragma once

#include "rperi/solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

// Experiment harness: each run produces a machine-readable report with the
// full config echo, per-sample records, summary statistics and named
// pass/fail verdicts. Reports are byte-reproducible from (config, seed).

namespace rperi {

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
  std::string note;  // tolerance and the statement being probed
};

struct Report {
  std::string name;
  nlohmann::json config = nlohmann::json::object();
  uint64_t seed = 0;
  nlohmann::json samples = nlohmann::json::array();
  nlohmann::json summary = nlohmann::json::object();
  std::vector<Verdict> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

// Seed-deterministic connected blob of a prescribed cell count: greedy region
// growth along the level sets of smoothed lattice noise with a radial bias,
// optionally confined to a window. Exactly target_cells cells, connected.
BinaryMask random_blob(const GridGeometry& g, long long target_cells, uint64_t seed,
                       const Window& confine = Window::all());

// Balls minimize Per_r at fixed volume: random equal-volume blobs never dip
// below the ball by more than the tolerance.
Report isoperimetric_sweep(double R, double r, double h, int samples, uint64_t seed);

// Relative isoperimetric constant in B_R: bounded for r <= R, and the
// small-ball probe at r = 5R blows up linearly in r.
Report relative_isoperimetric_sweep(double R, double r, double h, int samples,
                                    uint64_t seed);

// Nonlocal Poincare-Wirtinger constant: bounded for r <= R on random
// piecewise-constant fields; the 1D sign-function probe needs a constant
// growing linearly in r.
Report pw_sweep(double R, double r, double h, int samples, uint64_t seed);

struct DensityProfile {
  std::array<double, 3> center{0, 0, 0};
  double R0 = 0.0, r = 0.0;
  std::vector<double> radii;
  std::vector<double> f;        // f(R) = volume(E intersect B_R)
  double c_emp = 0.0;           // min (f(R+2r)-f(R)) / f(R)^{(n-1)/n}
  std::vector<double> ratios;   // consecutive growth ratios in the sub-r^n regime
};

DensityProfile density_profile(const BinaryMask& mask, std::array<double, 3> center,
                               double R0, double r, int depth);

// The annulus pathology: energy below the closed form, exact equality for
// hole fillers, and the dyadic stripe family as a non-compactness witness.
Report failcom_experiment(double r, double K, double h);

// Per_r against the classical perimeter as r -> 0 with h = r/20.
Report gamma_sweep();

// Exhaustive 1D classification: half-line data gives half-line minimizers;
// the full-window triviality probe returns the empty or the full window.
Report oned_classification(int window_len, double r, uint64_t seed);

// Arc length of the axis-aligned ellipse with semi-axes a, b by adaptive
// Simpson quadrature (the [gamma_sweep] oracle).
double ellipse_perimeter(double a, double b);

}  // namespace rperi
