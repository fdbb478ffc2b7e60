#include "relaylab/mc.hpp"

#include <limits>

namespace relaylab::detail {

MomentEstimate reduce_moment(const std::vector<double>& values) {
  const auto n = static_cast<std::int64_t>(values.size());
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);

  double sq = 0.0;
  for (const double v : values) {
    const double d = v - mean;
    sq += d * d;
  }
  const double variance_of_mean =
      n > 1 ? sq / (static_cast<double>(n - 1) * static_cast<double>(n)) : 0.0;

  MomentEstimate out;
  out.mean = mean;
  out.variance_of_mean = variance_of_mean;
  out.trials = n;
  out.ci95_half_width = 1.96 * std::sqrt(variance_of_mean);
  return out;
}

RatioEstimate reduce_ratio(const std::vector<std::pair<double, double>>& values) {
  const auto n = static_cast<std::int64_t>(values.size());
  double sum_num = 0.0;
  double sum_den = 0.0;
  for (const auto& [x, y] : values) {
    sum_num += x;
    sum_den += y;
  }
  const double mean_num = sum_num / static_cast<double>(n);
  const double mean_den = sum_den / static_cast<double>(n);

  RatioEstimate out;
  out.numerator_mean = mean_num;
  out.denominator_mean = mean_den;
  out.trials = n;
  if (mean_den == 0.0) {
    out.ratio = std::numeric_limits<double>::infinity();
    out.ci95_half_width = 0.0;
    return out;
  }

  const double ratio = mean_num / mean_den;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : values) {
    const double dx = x - mean_num;
    const double dy = y - mean_den;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  double var_ratio = 0.0;
  if (n > 1) {
    const double denom = static_cast<double>(n - 1) * static_cast<double>(n);
    // First-order delta method for mean_num / mean_den.
    var_ratio = (sxx - 2.0 * ratio * sxy + ratio * ratio * syy) / denom / (mean_den * mean_den);
    var_ratio = std::max(var_ratio, 0.0);
  }

  out.ratio = ratio;
  out.ci95_half_width = 1.96 * std::sqrt(var_ratio);
  return out;
}

}  // namespace relaylab::detail
