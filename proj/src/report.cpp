#include "qregret/report.hpp"

#include <algorithm>
#include <cmath>

namespace qregret {

ErrorReport compute_report(std::span<const EstimatePair> pairs, double hit_delta,
                           bool relative) {
  if (pairs.empty()) throw validation_error("report: no estimates");
  if (!(hit_delta >= 0.0)) throw validation_error("report: hit_delta must be nonnegative");

  ErrorReport report;
  report.hit_delta = hit_delta;
  report.relative = relative;

  std::vector<double> errors, squared;
  double hits = 0.0;
  for (const EstimatePair& p : pairs) {
    ErrorEntry e;
    e.id = p.id;
    e.estimate = p.estimate;
    e.true_value = p.true_value;
    e.abs_error = std::abs(p.estimate - p.true_value);
    if (relative) {
      if (!(p.true_value > 0.0))
        throw validation_error("report: relative error needs true value > 0 (id '" + p.id + "')");
      e.rel_error = e.abs_error / p.true_value;
    } else {
      e.rel_error = p.true_value > 0.0 ? e.abs_error / p.true_value : 0.0;
    }
    const double err = relative ? e.rel_error : e.abs_error;
    errors.push_back(err);
    squared.push_back(err * err);
    if (err <= hit_delta) hits += 1.0;
    report.entries.push_back(std::move(e));
  }

  const double n = static_cast<double>(errors.size());
  report.avg_error = pairwise_sum(errors) / n;
  report.rmse = std::sqrt(pairwise_sum(squared) / n);
  report.hit_rate = hits / n;
  return report;
}

LambdaSweepResult sweep_lambda(std::span<const CurveCase> cases,
                               std::span<const double> lambdas) {
  if (cases.empty()) throw validation_error("sweep: no estimation cases");
  if (lambdas.empty()) throw validation_error("sweep: empty lambda list");

  LambdaSweepResult result;
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      throw validation_error("sweep: lambda values must be finite and nonnegative");
    std::vector<double> squared;
    squared.reserve(cases.size());
    for (const CurveCase& c : cases) {
      const double est = quantal_regret(c.curves, lambda * c.lambda_factor);
      const double err = est - c.true_value;
      squared.push_back(err * err);
    }
    const double rmse = std::sqrt(pairwise_sum(squared) / static_cast<double>(squared.size()));
    result.points.push_back({lambda, rmse});
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    if (result.points[i].rmse < result.points[best].rmse) best = i;
  }
  result.best_lambda = result.points[best].lambda;
  result.best_rmse = result.points[best].rmse;
  return result;
}

std::vector<RangeSweepRow> sweep_range(const CurveCaseBuilder& build, double lower,
                                       double step, std::span<const double> uppers,
                                       std::span<const double> lambdas) {
  if (uppers.empty()) throw validation_error("sweep: empty upper-bound list");
  std::vector<RangeSweepRow> rows;
  for (double upper : uppers) {
    const ValueGrid grid = make_uniform_grid(lower, upper, step);
    const std::vector<CurveCase> cases = build(grid);
    const LambdaSweepResult sweep = sweep_lambda(cases, lambdas);
    rows.push_back({upper, sweep.best_lambda, sweep.best_rmse});
  }
  return rows;
}

}  // namespace qregret
