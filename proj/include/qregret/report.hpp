#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qregret/estimators.hpp"
#include "qregret/regret.hpp"

namespace qregret {

struct EstimatePair {
  std::string id;
  double estimate = 0.0;
  double true_value = 0.0;
};

struct ErrorEntry {
  std::string id;
  double estimate = 0.0;
  double true_value = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

// Aggregate error metrics over a set of estimates. Hit counting is
// boundary-inclusive: |estimate - truth| <= hit_delta is a hit.
struct ErrorReport {
  std::vector<ErrorEntry> entries;
  double hit_delta = 0.0;
  bool relative = false;  // metrics over rel_error instead of abs_error
  double rmse = 0.0;
  double avg_error = 0.0;
  double hit_rate = 0.0;
};

ErrorReport compute_report(std::span<const EstimatePair> pairs, double hit_delta,
                           bool relative);

// One estimation instance a sweep re-solves: the (lambda-independent) regret
// curves, the truth, and the lambda multiplier of its aggregation level.
struct CurveCase {
  std::string id;
  std::vector<RegretCurve> curves;
  double lambda_factor = 1.0;
  double true_value = 0.0;
};

struct LambdaSweepPoint {
  double lambda = 0.0;
  double rmse = 0.0;
};

struct LambdaSweepResult {
  std::vector<LambdaSweepPoint> points;
  double best_lambda = 0.0;
  double best_rmse = 0.0;
};

// RMSE of the quantal-regret estimates at each lambda; curves are computed
// once by the caller, only the weighting changes per point.
LambdaSweepResult sweep_lambda(std::span<const CurveCase> cases,
                               std::span<const double> lambdas);

struct RangeSweepRow {
  double upper = 0.0;
  double best_lambda = 0.0;
  double rmse = 0.0;
};

// Rebuilds the estimation task per upper bound (the grid changes, so regret
// must be recomputed) and reports the best lambda and its RMSE for each.
using CurveCaseBuilder = std::function<std::vector<CurveCase>(const ValueGrid&)>;

std::vector<RangeSweepRow> sweep_range(const CurveCaseBuilder& build, double lower,
                                       double step, std::span<const double> uppers,
                                       std::span<const double> lambdas);

}  // namespace qregret
