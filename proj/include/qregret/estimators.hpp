#pragma once

#include <span>

#include "qregret/regret.hpp"

namespace qregret {

// Expected value of the grid under its prior (the lambda -> 0 limit of the
// quantal-regret estimate).
double prior_mean(const ValueGrid& grid);

// Grid point with minimal regret; ties go to the smallest value.
double min_regret(const RegretCurve& curve);

// Argmin of regret divided by the optimal fixed-action utility at each grid
// point (floored at 1e-9); ties go to the smallest value.
double min_relative_regret(const RegretCurve& curve,
                           std::span<const double> optimal_fixed_utilities);

// Prior-weighted average of the grid with weights exp(-lambda * total regret),
// total regret being the pointwise sum over the given curves. Regrets are
// shifted by their minimum before exponentiation (the estimate is invariant to
// the shift, and it keeps lambda sweeps inside the exponent range). If every
// weight still underflows to zero (possible only with zero prior mass at the
// minimum), falls back to min_regret and sets *fallback.
double quantal_regret(std::span<const RegretCurve> curves, double lambda,
                      bool* fallback = nullptr);

double quantal_regret(const RegretCurve& curve, double lambda, bool* fallback = nullptr);

}  // namespace qregret
