#pragma once

#include "rperi/grid.hpp"
#include "rperi/window.hpp"

#include <json.hpp>

// Evaluation of Per_r(E, window), the full energy Per_r + bulk term, the
// generalized coarea identity and the submodularity slack. All perimeter
// quantities are integer oscillation-cell counts internally; the h^n / 2r
// scaling is applied only at the API boundary.

namespace rperi {

struct EnergyBreakdown {
  double perimeter_term = 0.0;  // length^{n-1} units
  double bulk_term = 0.0;
  double total = 0.0;           // perimeter_term + bulk_term, same arithmetic
  double r = 0.0;
  double h = 0.0;
  long long oscillation_cells = 0;
};

inline nlohmann::json to_json(const EnergyBreakdown& e) {
  return {{"perimeter_term", e.perimeter_term}, {"bulk_term", e.bulk_term},
          {"total", e.total},                   {"r", e.r},
          {"h", e.h},                           {"oscillation_cells", e.oscillation_cells}};
}

// Number of oscillation-field cells inside the window (exact integer).
long long perimeter_count(const BinaryMask& mask, const Window& window, double r);

// Per_r(E, window) = (h^n / 2r) * perimeter_count.
double perimeter_r(const BinaryMask& mask, const Window& window, double r);

EnergyBreakdown energy(const BinaryMask& mask, const ScalarField& g,
                       const Window& window, double r);

struct CoareaResult {
  double lhs = 0.0;  // integral of the stencil oscillation of u
  double rhs = 0.0;  // 2r * sum over levels of Per_r of superlevel sets
  long long lhs_scaled = 0;  // both in units of h^n / 2^20; equal exactly
  long long rhs_scaled = 0;
};

// u must be piecewise constant with at most 64 distinct values (after
// quantization to multiples of 2^-20). The two sides are computed by
// independent routes: direct stencil oscillation vs per-level perimeters.
CoareaResult coarea_check(const ScalarField& u, const Window& window, double r);

// Per_r(A) + Per_r(B) - Per_r(A intersect B) - Per_r(A union B); >= 0.
long long submodularity_slack_count(const BinaryMask& A, const BinaryMask& B,
                                    const Window& window, double r);
double submodularity_slack(const BinaryMask& A, const BinaryMask& B,
                           const Window& window, double r);

}  // namespace rperi
