#include "qregret/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace qregret {

namespace {

// Shared weighted-mean kernel so prior_mean and quantal_regret(lambda=0)
// agree bit for bit.
double weighted_mean(std::span<const double> points, std::span<const double> weights,
                     bool* underflow) {
  double z = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    z += weights[j];
    acc += weights[j] * points[j];
  }
  if (z <= 0.0) {
    if (underflow) *underflow = true;
    return 0.0;
  }
  if (underflow) *underflow = false;
  return acc / z;
}

std::size_t argmin_index(std::span<const double> xs) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < xs.size(); ++j) {
    if (xs[j] < xs[best]) best = j;  // ties keep the smaller grid value
  }
  return best;
}

}  // namespace

double prior_mean(const ValueGrid& grid) {
  grid.validate();
  bool underflow = false;
  return weighted_mean(grid.points, grid.prior, &underflow);
}

double min_regret(const RegretCurve& curve) {
  curve.validate();
  return curve.grid.points[argmin_index(curve.regrets)];
}

double min_relative_regret(const RegretCurve& curve,
                           std::span<const double> optimal_fixed_utilities) {
  curve.validate();
  if (optimal_fixed_utilities.size() != curve.grid.size())
    throw validation_error("min_relative_regret: utilities length does not match grid");
  std::vector<double> relative(curve.regrets.size());
  for (std::size_t j = 0; j < relative.size(); ++j)
    relative[j] = curve.regrets[j] / std::max(optimal_fixed_utilities[j], 1e-9);
  return curve.grid.points[argmin_index(relative)];
}

double quantal_regret(std::span<const RegretCurve> curves, double lambda, bool* fallback) {
  if (curves.empty()) throw validation_error("quantal_regret: no curves");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw validation_error("quantal_regret: lambda must be finite and nonnegative");
  for (const RegretCurve& c : curves) c.validate();

  const ValueGrid& grid = curves.front().grid;
  std::vector<double> total(grid.size(), 0.0);
  for (const RegretCurve& c : curves) {
    if (!c.grid.same_points(grid) || c.grid.prior != grid.prior)
      throw validation_error("quantal_regret: curves use different grids");
    for (std::size_t j = 0; j < total.size(); ++j) total[j] += c.regrets[j];
  }

  const double shift = *std::min_element(total.begin(), total.end());
  std::vector<double> weights(total.size());
  for (std::size_t j = 0; j < weights.size(); ++j)
    weights[j] = grid.prior[j] * std::exp(-lambda * (total[j] - shift));

  bool underflow = false;
  const double estimate = weighted_mean(grid.points, weights, &underflow);
  if (fallback) *fallback = underflow;
  if (underflow) return grid.points[argmin_index(total)];
  return estimate;
}

double quantal_regret(const RegretCurve& curve, double lambda, bool* fallback) {
  return quantal_regret(std::span<const RegretCurve>(&curve, 1), lambda, fallback);
}

}  // namespace qregret
