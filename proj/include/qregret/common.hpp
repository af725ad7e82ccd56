#pragma once

#include <charconv>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qregret {

// Bad input data or configuration (file contents, field values, flags).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structurally valid input that the requested estimation task cannot use
// (e.g. estimating one slot while the same player has other hidden slots).
class task_error : public std::runtime_error {
 public:
  explicit task_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computed quantity violated an internal invariant.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Order-stable pairwise summation; used wherever means feed reported numbers
// so results do not depend on chunking of the accumulation.
double pairwise_sum(std::span<const double> xs);

inline double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : pairwise_sum(xs) / static_cast<double>(xs.size());
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

double parse_double(std::string_view text, const std::string& what);
long long parse_int(std::string_view text, const std::string& what);

}  // namespace qregret
