#pragma once

// Joint confidence regions for (c, p) and the machinery behind them.
//
// A region is calibrated by the (1 - alpha) quantile of a simulated root:
// the max studentized coordinate deviation for rectangles, the studentized
// quadratic form for ellipses. Three input modes simulate the root:
//
//   * raw samples        — nonparametric bootstrap, each resample
//                          studentized by its own standard deviations;
//   * resampled estimates — published bootstrap draws studentized by the
//                          standard deviations of the draws themselves,
//                          which stand in for the standard errors;
//   * estimate only      — parametric Gaussian simulation from (se, rho);
//                          flagged in output metadata since nothing in the
//                          data calibrates it.
//
// With several policies the root is the supremum over policies, giving one
// shared critical value for a product region.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpv/errors.hpp"
#include "rpv/measures.hpp"
#include "rpv/parallel.hpp"
#include "rpv/point.hpp"
#include "rpv/rng.hpp"
#include "rpv/stats.hpp"

namespace welfare {

inline constexpr double rho_cap = 1.0 - 1e-8;

// ---------------------------------------------------------------------------
// Data carriers

struct Sample {
  std::string policy_id;
  std::vector<PolicyPoint> rows;

  static Sample of(std::string policy_id, std::vector<PolicyPoint> rows) {
    if (rows.size() < 3) throw input_error("sample needs at least 3 rows");
    Sample s{std::move(policy_id), std::move(rows)};
    moments2d(s.rows);  // rejects zero-variance coordinates
    return s;
  }
};

struct PolicyEstimate {
  PolicyPoint point;
  double se_c = 1.0;
  double se_p = 1.0;
  double rho = 0.0;
  std::optional<long> n;

  static PolicyEstimate of(PolicyPoint point, double se_c, double se_p, double rho,
                           std::optional<long> n = std::nullopt) {
    if (!(se_c > 0.0) || !(se_p > 0.0) || !std::isfinite(se_c) || !std::isfinite(se_p)) {
      throw input_error("standard errors must be strictly positive");
    }
    if (!std::isfinite(rho) || std::abs(rho) > rho_cap) {
      throw input_error("|rho| must be at most 1 - 1e-8");
    }
    if (n && *n <= 0) throw input_error("sample size must be positive");
    return PolicyEstimate{point, se_c, se_p, rho, n};
  }

  // Estimator covariance implied by (se_c, se_p, rho).
  Sym2 covariance() const {
    return Sym2{se_c * se_c, rho * se_c * se_p, se_p * se_p};
  }
};

struct ResampleSet {
  std::string policy_id;
  std::vector<PolicyPoint> draws;

  static ResampleSet of(std::string policy_id, std::vector<PolicyPoint> draws,
                        std::size_t min_draws = 100) {
    if (draws.size() < min_draws) {
      throw input_error("resample set needs at least " + std::to_string(min_draws) +
                        " draws");
    }
    return ResampleSet{std::move(policy_id), std::move(draws)};
  }
};

// ---------------------------------------------------------------------------
// Regions

struct RectRegion {
  PolicyPoint center;
  double half_width_c = 0.0;
  double half_width_p = 0.0;

  bool contains(const PolicyPoint& x) const {
    return std::abs(x.c - center.c) <= half_width_c &&
           std::abs(x.p - center.p) <= half_width_p;
  }
  bool degenerate() const { return half_width_c == 0.0 && half_width_p == 0.0; }
};

struct EllipseRegion {
  PolicyPoint center;
  Sym2 shape;            // estimator covariance
  double radius_sq = 0.0;  // critical value t

  bool contains(const PolicyPoint& x) const {
    const Sym2 inv = sym2_inverse(shape);
    return quad_form(inv, x.c - center.c, x.p - center.p) <= radius_sq;
  }
  bool degenerate() const { return radius_sq == 0.0; }
};

inline RectRegion rect_region(const PolicyEstimate& est, double d) {
  if (!(d >= 0.0)) throw input_error("critical value must be nonnegative");
  return RectRegion{est.point, d * est.se_c, d * est.se_p};
}

inline EllipseRegion ellipse_region(const PolicyEstimate& est, double t) {
  if (!(t >= 0.0)) throw input_error("critical value must be nonnegative");
  return EllipseRegion{est.point, est.covariance(), t};
}

// Product of per-policy regions sharing one critical value. All entries have
// the same geometry kind.
struct ProductRegion {
  std::vector<std::string> ids;
  std::vector<RectRegion> rects;
  std::vector<EllipseRegion> ellipses;

  static ProductRegion of_rects(std::vector<std::string> ids, std::vector<RectRegion> rects) {
    if (ids.empty() || ids.size() != rects.size()) {
      throw input_error("product region needs one id per rectangle");
    }
    return ProductRegion{std::move(ids), std::move(rects), {}};
  }
  static ProductRegion of_ellipses(std::vector<std::string> ids,
                                   std::vector<EllipseRegion> ellipses) {
    if (ids.empty() || ids.size() != ellipses.size()) {
      throw input_error("product region needs one id per ellipse");
    }
    return ProductRegion{std::move(ids), {}, std::move(ellipses)};
  }

  bool is_rect() const { return !rects.empty(); }
  std::size_t size() const { return ids.size(); }
};

// ---------------------------------------------------------------------------
// Estimation and resampling

inline PolicyEstimate estimate_from_sample(const Sample& s) {
  const Moments2d m = moments2d(s.rows);
  if (m.n < 3) throw input_error("sample needs at least 3 rows");
  if (std::abs(m.rho) > rho_cap) {
    throw numeric_error("sample correlation is numerically degenerate (|rho| ~ 1)");
  }
  const double root_n = std::sqrt(static_cast<double>(m.n));
  return PolicyEstimate::of(PolicyPoint(m.mean_c, m.mean_p), m.sd_c / root_n,
                            m.sd_p / root_n, m.rho, static_cast<long>(m.n));
}

// Nonparametric bootstrap of the coordinate means: B draws, each the mean of
// n rows sampled with replacement. Draw b depends only on (seed, b).
inline ResampleSet bootstrap_resample(const Sample& s, int B, std::uint64_t seed) {
  if (B < 100) throw input_error("bootstrap_resample requires B >= 100");
  const std::size_t n = s.rows.size();
  std::vector<PolicyPoint> draws(static_cast<std::size_t>(B));
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
    SplitMix64 rng(derive_seed(seed, rng_tag::bootstrap, b));
    double sum_c = 0.0, sum_p = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const PolicyPoint& row = s.rows[rng.index(n)];
      sum_c += row.c;
      sum_p += row.p;
    }
    draws[b] = PolicyPoint(sum_c / static_cast<double>(n), sum_p / static_cast<double>(n));
  });
  return ResampleSet{s.policy_id, std::move(draws)};
}

// ---------------------------------------------------------------------------
// Root simulation

namespace detail {

inline double root_quantile(std::vector<double> draws, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
  std::sort(draws.begin(), draws.end());
  const double d = empirical_quantile(draws, 1.0 - alpha);
  if (!std::isfinite(d)) {
    throw numeric_error("root quantile is not finite; resamples too degenerate to calibrate");
  }
  return d;
}

// One bootstrap-t root draw for one policy: resample the rows, studentize
// the resampled means by the resampled standard deviations. Degenerate
// resamples yield an infinite root, which is harmless unless it reaches the
// quantile itself (rejected in root_quantile).
inline double sample_root_draw(const Sample& s, const Moments2d& orig, bool quadratic,
                               SplitMix64& rng) {
  const std::size_t n = s.rows.size();
  double dc_sum = 0.0, dp_sum = 0.0, dcc = 0.0, dpp = 0.0, dcp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PolicyPoint& row = s.rows[rng.index(n)];
    const double dc = row.c - orig.mean_c;
    const double dp = row.p - orig.mean_p;
    dc_sum += dc;
    dp_sum += dp;
    dcc += dc * dc;
    dpp += dp * dp;
    dcp += dc * dp;
  }
  const double nn = static_cast<double>(n);
  const double var_c = (dcc - dc_sum * dc_sum / nn) / (nn - 1.0);
  const double var_p = (dpp - dp_sum * dp_sum / nn) / (nn - 1.0);
  if (!(var_c > 0.0) || !(var_p > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  const double zc = (dc_sum / nn) / std::sqrt(var_c / nn);
  const double zp = (dp_sum / nn) / std::sqrt(var_p / nn);
  if (!quadratic) return std::max(std::abs(zc), std::abs(zp));
  const double cov = (dcp - dc_sum * dp_sum / nn) / (nn - 1.0);
  const double rho = cov / std::sqrt(var_c * var_p);
  if (std::abs(rho) > rho_cap) return std::numeric_limits<double>::infinity();
  return (zc * zc - 2.0 * rho * zc * zp + zp * zp) / (1.0 - rho * rho);
}

inline std::vector<double> sample_mode_roots(const std::vector<Sample>& samples,
                                             int B, std::uint64_t seed, bool quadratic) {
  if (samples.empty()) throw input_error("no samples given");
  if (B < 100) throw input_error("root simulation requires B >= 100");
  std::vector<Moments2d> moments;
  moments.reserve(samples.size());
  for (const auto& s : samples) moments.push_back(moments2d(s.rows));
  std::vector<double> roots(static_cast<std::size_t>(B));
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
    double sup = 0.0;
    for (std::size_t l = 0; l < samples.size(); ++l) {
      SplitMix64 rng(derive_seed(seed, rng_tag::root, b, l));
      sup = std::max(sup, sample_root_draw(samples[l], moments[l], quadratic, rng));
    }
    roots[b] = sup;
  });
  return roots;
}

struct ResampleScatter {
  double sd_c, sd_p, rho;
};

inline ResampleScatter resample_scatter(const ResampleSet& rs, bool quadratic) {
  const Moments2d m = moments2d(rs.draws);
  if (quadratic && std::abs(m.rho) > rho_cap) {
    throw numeric_error("resample correlation is numerically degenerate (|rho| ~ 1) for " +
                        rs.policy_id);
  }
  return ResampleScatter{m.sd_c, m.sd_p, m.rho};
}

inline std::vector<double> resample_mode_roots(
    const std::vector<std::pair<PolicyEstimate, ResampleSet>>& data, bool quadratic) {
  if (data.empty()) throw input_error("no resample sets given");
  std::size_t B = data.front().second.draws.size();
  for (const auto& [est, rs] : data) B = std::min(B, rs.draws.size());
  if (B < 100) throw input_error("resample sets need at least 100 draws");

  std::vector<ResampleScatter> scatter;
  scatter.reserve(data.size());
  for (const auto& [est, rs] : data) scatter.push_back(resample_scatter(rs, quadratic));

  std::vector<double> roots(B, 0.0);
  for (std::size_t l = 0; l < data.size(); ++l) {
    const auto& est = data[l].first;
    const auto& rs = data[l].second;
    const auto& sc = scatter[l];
    for (std::size_t b = 0; b < B; ++b) {
      const double zc = (rs.draws[b].c - est.point.c) / sc.sd_c;
      const double zp = (rs.draws[b].p - est.point.p) / sc.sd_p;
      double r;
      if (quadratic) {
        r = (zc * zc - 2.0 * sc.rho * zc * zp + zp * zp) / (1.0 - sc.rho * sc.rho);
      } else {
        r = std::max(std::abs(zc), std::abs(zp));
      }
      roots[b] = std::max(roots[b], r);
    }
  }
  return roots;
}

inline std::vector<double> gaussian_mode_roots(const std::vector<PolicyEstimate>& ests,
                                               int B, std::uint64_t seed, bool quadratic) {
  if (ests.empty()) throw input_error("no estimates given");
  if (B < 100) throw input_error("root simulation requires B >= 100");
  std::vector<double> roots(static_cast<std::size_t>(B));
  parallel_for(static_cast<std::size_t>(B), [&](std::size_t b) {
    double sup = 0.0;
    for (std::size_t l = 0; l < ests.size(); ++l) {
      SplitMix64 rng(derive_seed(seed, rng_tag::gaussian_root, b, l));
      const double rho = ests[l].rho;
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double zc = z1;
      const double zp = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
      double r;
      if (quadratic) {
        r = (zc * zc - 2.0 * rho * zc * zp + zp * zp) / (1.0 - rho * rho);
      } else {
        r = std::max(std::abs(zc), std::abs(zp));
      }
      sup = std::max(sup, r);
    }
    roots[b] = sup;
  });
  return roots;
}

}  // namespace detail

// --- raw-sample mode (nonparametric bootstrap-t roots) ---

inline double critical_value_rect(const std::vector<Sample>& samples, double alpha, int B,
                                  std::uint64_t seed) {
  return detail::root_quantile(detail::sample_mode_roots(samples, B, seed, false), alpha);
}
inline double critical_value_ellipse(const std::vector<Sample>& samples, double alpha, int B,
                                     std::uint64_t seed) {
  return detail::root_quantile(detail::sample_mode_roots(samples, B, seed, true), alpha);
}
inline double critical_value_rect(const Sample& s, double alpha, int B, std::uint64_t seed) {
  return critical_value_rect(std::vector<Sample>{s}, alpha, B, seed);
}
inline double critical_value_ellipse(const Sample& s, double alpha, int B, std::uint64_t seed) {
  return critical_value_ellipse(std::vector<Sample>{s}, alpha, B, seed);
}

// --- precomputed-resample mode ---

inline double critical_value_rect(const std::vector<std::pair<PolicyEstimate, ResampleSet>>& data,
                                  double alpha) {
  return detail::root_quantile(detail::resample_mode_roots(data, false), alpha);
}
inline double critical_value_ellipse(
    const std::vector<std::pair<PolicyEstimate, ResampleSet>>& data, double alpha) {
  return detail::root_quantile(detail::resample_mode_roots(data, true), alpha);
}
inline double critical_value_rect(const PolicyEstimate& est, const ResampleSet& rs,
                                  double alpha) {
  return critical_value_rect({{est, rs}}, alpha);
}
inline double critical_value_ellipse(const PolicyEstimate& est, const ResampleSet& rs,
                                     double alpha) {
  return critical_value_ellipse({{est, rs}}, alpha);
}

// --- estimates-only mode (parametric Gaussian roots; flag in metadata) ---

inline double critical_value_rect_gaussian(const std::vector<PolicyEstimate>& ests, double alpha,
                                           int B, std::uint64_t seed) {
  return detail::root_quantile(detail::gaussian_mode_roots(ests, B, seed, false), alpha);
}
inline double critical_value_ellipse_gaussian(const std::vector<PolicyEstimate>& ests,
                                              double alpha, int B, std::uint64_t seed) {
  return detail::root_quantile(detail::gaussian_mode_roots(ests, B, seed, true), alpha);
}

}  // namespace welfare
