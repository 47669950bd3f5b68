#pragma once

// Conventional bootstrap intervals, kept as comparison baselines: the
// percentile interval and the modified bias-corrected (Efron) interval used
// in the published MVPF estimates. Neither is uniformly valid for the RPV
// or the MVPF; the coverage study quantifies how far they fall short.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rpv/errors.hpp"
#include "rpv/inference.hpp"
#include "rpv/measures.hpp"
#include "rpv/point.hpp"
#include "rpv/projection.hpp"
#include "rpv/stats.hpp"

namespace welfare {

// Interval over the extended reals: endpoints may be +infinity (MVPF draws
// in the second quadrant). dropped_undefined counts resamples whose MVPF
// had no value and were removed before taking quantiles.
struct ExtendedInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t dropped_undefined = 0;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

namespace detail {

// Percentile endpoints with the ceil(q*N) order-statistic convention.
inline std::pair<double, double> percentile_endpoints(std::vector<double>& values,
                                                      double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
  std::sort(values.begin(), values.end());
  return {empirical_quantile(values, alpha / 2.0),
          empirical_quantile(values, 1.0 - alpha / 2.0)};
}

// Bias-corrected percentile endpoints. gamma is the (already adjusted)
// level; values must be sorted. When the median-bias term is exactly zero
// the quantile levels are used untouched, so the interval coincides with
// the percentile interval rather than drifting by a roundtrip ulp.
inline std::pair<double, double> bias_corrected_endpoints(const std::vector<double>& sorted,
                                                          double point_value, double gamma) {
  const double n = static_cast<double>(sorted.size());
  std::size_t below = 0;
  for (double v : sorted) {
    if (v < point_value) ++below;
  }
  double f = static_cast<double>(below) / n;
  f = std::clamp(f, 1.0 / (n + 1.0), n / (n + 1.0));
  const double g = normal_quantile(f);
  const auto level = [&](double d) {
    if (g == 0.0) return d;
    return normal_cdf(2.0 * g + normal_quantile(d));
  };
  return {empirical_quantile(sorted, level(gamma / 2.0)),
          empirical_quantile(sorted, level(1.0 - gamma / 2.0))};
}

}  // namespace detail

// Percentile bootstrap interval for the RPV (total, so no draws are dropped).
inline Interval percentile_ci_rpv(const ResampleSet& rs, double alpha) {
  std::vector<double> values;
  values.reserve(rs.draws.size());
  for (const auto& d : rs.draws) values.push_back(rpv(d));
  const auto [lo, hi] = detail::percentile_endpoints(values, alpha);
  return Interval::of(lo, hi);
}

// Percentile bootstrap interval for the MVPF. Undefined draws are dropped
// and counted; infinite draws participate as +infinity.
inline ExtendedInterval percentile_ci_mvpf(const ResampleSet& rs, double alpha) {
  std::vector<double> values;
  values.reserve(rs.draws.size());
  std::size_t dropped = 0;
  for (const auto& d : rs.draws) {
    const ExtendedWelfare m = mvpf(d);
    if (m.is_undefined()) {
      ++dropped;
      continue;
    }
    values.push_back(m.is_infinite() ? std::numeric_limits<double>::infinity() : m.value());
  }
  if (values.empty()) throw numeric_error("all resampled MVPF values are undefined");
  const auto [lo, hi] = detail::percentile_endpoints(values, alpha);
  return ExtendedInterval{lo, hi, dropped};
}

// Bias-corrected percentile interval for the RPV. The RPV is defined for
// every draw, so the retained set is the full draw set and the level is
// alpha itself.
inline Interval bc_percentile_ci_rpv(const ResampleSet& rs, const PolicyEstimate& est,
                                     double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
  std::vector<double> values;
  values.reserve(rs.draws.size());
  for (const auto& d : rs.draws) values.push_back(rpv(d));
  std::sort(values.begin(), values.end());
  const auto [lo, hi] = detail::bias_corrected_endpoints(values, rpv(est.point), alpha);
  return Interval::of(lo, hi);
}

// Union (interval hull) of the percentile and bias-corrected intervals for
// the RPV; the adjusted baseline of the coverage study.
inline Interval adjusted_bootstrap_ci_rpv(const ResampleSet& rs, const PolicyEstimate& est,
                                          double alpha) {
  return percentile_ci_rpv(rs, alpha).hull(bc_percentile_ci_rpv(rs, est, alpha));
}

// Modified bias-corrected bootstrap interval for the MVPF:
//   * keep only draws with a defined MVPF (B~ of B);
//   * median-bias correct the quantile levels through the normal CDF;
//   * widen the level to gamma = max{0, alpha - (1 - |B~|/|B|)}.
// Endpoints may be +infinity; with every retained draw infinite the
// interval is degenerate at infinity.
inline ExtendedInterval efron_bc_ci(const ResampleSet& rs, const PolicyEstimate& est,
                                    double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
  const ExtendedWelfare point = mvpf(est.point);
  if (point.is_undefined()) {
    throw numeric_error("MVPF is undefined at the point estimate for " + rs.policy_id);
  }
  const double point_value =
      point.is_infinite() ? std::numeric_limits<double>::infinity() : point.value();

  std::vector<double> values;
  values.reserve(rs.draws.size());
  std::size_t dropped = 0;
  for (const auto& d : rs.draws) {
    const ExtendedWelfare m = mvpf(d);
    if (m.is_undefined()) {
      ++dropped;
      continue;
    }
    values.push_back(m.is_infinite() ? std::numeric_limits<double>::infinity() : m.value());
  }
  if (values.size() < 2) {
    throw numeric_error("fewer than 2 resamples with a defined MVPF for " + rs.policy_id);
  }
  std::sort(values.begin(), values.end());

  const double retained_fraction =
      static_cast<double>(values.size()) / static_cast<double>(rs.draws.size());
  const double gamma = std::max(0.0, alpha - (1.0 - retained_fraction));
  const auto [lo, hi] = detail::bias_corrected_endpoints(values, point_value, gamma);
  return ExtendedInterval{lo, hi, dropped};
}

}  // namespace welfare
