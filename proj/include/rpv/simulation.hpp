#pragma once

// Monte Carlo coverage and width study for the six confidence-interval
// constructions. Each replication draws a truth uniformly from [-1,1]^2,
// samples Gaussian data around it, bootstraps the estimator, builds all six
// intervals at the same level, and records whether each interval covers the
// true RPV and how wide it is. Results aggregate into bins by the truth's
// maximum norm and by |RPV|.
//
// Replications are independent with counter-derived substreams, and the
// reduction replays stored per-replication records in replication order, so
// the report is byte-identical for any worker count.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rpv/aggregation.hpp"
#include "rpv/bootstrap_ci.hpp"
#include "rpv/errors.hpp"
#include "rpv/inference.hpp"
#include "rpv/measures.hpp"
#include "rpv/parallel.hpp"
#include "rpv/point.hpp"
#include "rpv/projection.hpp"
#include "rpv/rng.hpp"
#include "rpv/stats.hpp"

namespace welfare {

enum class CiMethod {
  Percentile = 0,
  AdjustedBootstrap,
  MinimalistRect,
  MinimalistEllipse,
  UniformRect,
  UniformEllipse,
};

inline constexpr std::array<CiMethod, 6> all_ci_methods = {
    CiMethod::Percentile,        CiMethod::AdjustedBootstrap, CiMethod::MinimalistRect,
    CiMethod::MinimalistEllipse, CiMethod::UniformRect,       CiMethod::UniformEllipse,
};

inline std::string to_string(CiMethod m) {
  switch (m) {
    case CiMethod::Percentile: return "percentile";
    case CiMethod::AdjustedBootstrap: return "adjusted";
    case CiMethod::MinimalistRect: return "minimalist-rect";
    case CiMethod::MinimalistEllipse: return "minimalist-ellipse";
    case CiMethod::UniformRect: return "uniform-rect";
    case CiMethod::UniformEllipse: return "uniform-ellipse";
  }
  return "?";
}

enum class StudyAxis { MaxNorm, AbsRpv };

inline std::string to_string(StudyAxis a) {
  return a == StudyAxis::MaxNorm ? "maxnorm" : "absrpv";
}

struct StudyConfig {
  long reps = 2000;
  std::vector<int> n_values = {100};
  double alpha = 0.05;
  Sym2 true_cov{20.0, -10.0, 20.0};
  int bootstrap_draws = 1000;  // B
  int boundary_draws = 10000;  // K
  std::vector<double> bin_edges_maxnorm = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                           0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> bin_edges_absrpv = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0,
                                          1.2, 1.4, 1.6, 1.8, 2.0};
  std::uint64_t seed = 0;

  void validate() const {
    if (reps < 100) throw input_error("coverage study requires reps >= 100");
    if (n_values.empty()) throw input_error("coverage study requires at least one n");
    for (int n : n_values) {
      if (n < 3) throw input_error("sample sizes must be at least 3");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw input_error("alpha must lie in (0, 1)");
    if (!true_cov.positive_definite()) throw input_error("true covariance must be SPD");
    if (bootstrap_draws < 100) throw input_error("bootstrap draw count must be >= 100");
    if (boundary_draws < 1000) throw input_error("boundary draw count must be >= 1000");
    for (const auto* edges : {&bin_edges_maxnorm, &bin_edges_absrpv}) {
      if (edges->size() < 2) throw input_error("bin edges need at least two entries");
      for (std::size_t i = 1; i < edges->size(); ++i) {
        if (!((*edges)[i] > (*edges)[i - 1])) {
          throw input_error("bin edges must be strictly increasing");
        }
      }
    }
  }
};

struct CoverageCell {
  long rep_count = 0;
  long covered = 0;
  double width_sum = 0.0;
};

struct CoverageReport {
  StudyConfig config;
  // cells[axis][method][n_index][bin], flattened.
  std::vector<CoverageCell> cells;
  long redraws = 0;   // truth draws rejected near the origin
  long rejected = 0;  // replications dropped after an inference error

  std::size_t bins(StudyAxis axis) const {
    return (axis == StudyAxis::MaxNorm ? config.bin_edges_maxnorm.size()
                                       : config.bin_edges_absrpv.size()) -
           1;
  }

  std::size_t cell_index(StudyAxis axis, CiMethod method, std::size_t n_index,
                         std::size_t bin) const {
    const std::size_t bins_max = config.bin_edges_maxnorm.size() - 1;
    const std::size_t bins_abs = config.bin_edges_absrpv.size() - 1;
    const std::size_t per_axis_stride =
        all_ci_methods.size() * config.n_values.size();
    std::size_t idx = 0;
    if (axis == StudyAxis::AbsRpv) idx += per_axis_stride * bins_max;
    const std::size_t axis_bins = axis == StudyAxis::MaxNorm ? bins_max : bins_abs;
    idx += (static_cast<std::size_t>(method) * config.n_values.size() + n_index) * axis_bins +
           bin;
    return idx;
  }

  const CoverageCell& cell(StudyAxis axis, CiMethod method, std::size_t n_index,
                           std::size_t bin) const {
    return cells[cell_index(axis, method, n_index, bin)];
  }
  CoverageCell& cell(StudyAxis axis, CiMethod method, std::size_t n_index, std::size_t bin) {
    return cells[cell_index(axis, method, n_index, bin)];
  }

  // Coverage over all bins of one axis (identical across axes by
  // construction; the maxnorm axis is used).
  double aggregate_coverage(CiMethod method, std::size_t n_index) const {
    long count = 0, covered = 0;
    for (std::size_t b = 0; b < bins(StudyAxis::MaxNorm); ++b) {
      const CoverageCell& c = cell(StudyAxis::MaxNorm, method, n_index, b);
      count += c.rep_count;
      covered += c.covered;
    }
    return count == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(count);
  }
};

namespace detail {

inline std::size_t bin_of(const std::vector<double>& edges, double v) {
  // Half-open bins [e_i, e_{i+1}) with the top edge folded into the last
  // bin; out-of-range values clamp into the end bins.
  if (v < edges.front()) return 0;
  for (std::size_t i = 0; i + 2 < edges.size(); ++i) {
    if (v < edges[i + 1]) return i;
  }
  return edges.size() - 2;
}

struct RepRecord {
  bool ok = false;
  long redraws = 0;
  std::size_t bin_maxnorm = 0;
  std::size_t bin_absrpv = 0;
  std::array<bool, 6> covered{};
  std::array<double, 6> width{};
};

inline RepRecord run_replication(const StudyConfig& cfg, std::size_t n_index, long rep) {
  RepRecord rec;
  const int n = cfg.n_values[n_index];

  // Truth from Unif([-1,1]^2); redraw within the 1e-3 ball around the
  // origin, where the |RPV| bin attribution is unstable.
  SplitMix64 truth_rng(derive_seed(cfg.seed, rng_tag::truth, n_index, rep));
  double tc = 0.0, tp = 0.0;
  for (;;) {
    tc = truth_rng.uniform(-1.0, 1.0);
    tp = truth_rng.uniform(-1.0, 1.0);
    if (std::hypot(tc, tp) >= 1e-3) break;
    ++rec.redraws;
  }
  const PolicyPoint truth(tc, tp);
  const double phi_true = rpv(truth);
  rec.bin_maxnorm = bin_of(cfg.bin_edges_maxnorm, max_norm(truth));
  rec.bin_absrpv = bin_of(cfg.bin_edges_absrpv, std::abs(phi_true));

  // Gaussian sample around the truth.
  const Lower2 chol = sym2_cholesky(cfg.true_cov);
  SplitMix64 sample_rng(derive_seed(cfg.seed, rng_tag::sample, n_index, rep));
  std::vector<PolicyPoint> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z1 = sample_rng.normal();
    const double z2 = sample_rng.normal();
    rows.emplace_back(truth.c + chol.l11 * z1, truth.p + chol.l21 * z1 + chol.l22 * z2);
  }

  try {
    const Sample sample{"sim", std::move(rows)};
    const PolicyEstimate est = estimate_from_sample(sample);
    const ResampleSet resamples = bootstrap_resample(
        sample, cfg.bootstrap_draws, derive_seed(cfg.seed, rng_tag::replication, n_index, rep));

    const double d_hat = critical_value_rect(est, resamples, cfg.alpha);
    const double t_hat = critical_value_ellipse(est, resamples, cfg.alpha);
    const RectRegion rect = rect_region(est, d_hat);
    const EllipseRegion ellipse = ellipse_region(est, t_hat);

    const Interval percentile = percentile_ci_rpv(resamples, cfg.alpha);
    const Interval adjusted = adjusted_bootstrap_ci_rpv(resamples, est, cfg.alpha);
    const UniformWithMinimalist rect_pair = project_rpv_with_minimalist(
        rect, resamples, cfg.boundary_draws,
        derive_seed(cfg.seed, rng_tag::rect_boundary, n_index, rep));
    const UniformWithMinimalist ellipse_pair = project_rpv_with_minimalist(
        ellipse, resamples, cfg.boundary_draws,
        derive_seed(cfg.seed, rng_tag::ellipse_boundary, n_index, rep));

    const std::array<Interval, 6> intervals = {
        percentile,           adjusted,          rect_pair.minimalist,
        ellipse_pair.minimalist, rect_pair.uniform, ellipse_pair.uniform,
    };
    for (std::size_t m = 0; m < intervals.size(); ++m) {
      rec.covered[m] = intervals[m].contains(phi_true);
      rec.width[m] = intervals[m].width();
    }
    rec.ok = true;
  } catch (const numeric_error&) {
    rec.ok = false;
  }
  return rec;
}

}  // namespace detail

inline CoverageReport run_coverage_study(const StudyConfig& cfg) {
  cfg.validate();
  CoverageReport report;
  report.config = cfg;
  const std::size_t bins_max = cfg.bin_edges_maxnorm.size() - 1;
  const std::size_t bins_abs = cfg.bin_edges_absrpv.size() - 1;
  report.cells.assign(
      all_ci_methods.size() * cfg.n_values.size() * (bins_max + bins_abs), CoverageCell{});

  for (std::size_t n_index = 0; n_index < cfg.n_values.size(); ++n_index) {
    std::vector<detail::RepRecord> records(static_cast<std::size_t>(cfg.reps));
    parallel_for(records.size(), [&](std::size_t r) {
      records[r] = detail::run_replication(cfg, n_index, static_cast<long>(r));
    });
    // Sequential reduction in replication order.
    for (const auto& rec : records) {
      report.redraws += rec.redraws;
      if (!rec.ok) {
        ++report.rejected;
        continue;
      }
      for (std::size_t m = 0; m < all_ci_methods.size(); ++m) {
        const CiMethod method = all_ci_methods[m];
        auto& cmax = report.cell(StudyAxis::MaxNorm, method, n_index, rec.bin_maxnorm);
        cmax.rep_count += 1;
        cmax.covered += rec.covered[m] ? 1 : 0;
        cmax.width_sum += rec.width[m];
        auto& cabs = report.cell(StudyAxis::AbsRpv, method, n_index, rec.bin_absrpv);
        cabs.rep_count += 1;
        cabs.covered += rec.covered[m] ? 1 : 0;
        cabs.width_sum += rec.width[m];
      }
    }
  }
  return report;
}

struct SummaryRow {
  CiMethod method;
  int n = 0;
  double bin_lo = 0.0;
  double bin_hi = 0.0;
  double bin_center = 0.0;
  long rep_count = 0;
  double coverage = 0.0;
  double mean_width = 0.0;
};

// Plot-ready rows for one axis. Bins with no replications are omitted; the
// report itself still records their zero counts.
inline std::vector<SummaryRow> summarize(const CoverageReport& report, StudyAxis axis) {
  const auto& edges = axis == StudyAxis::MaxNorm ? report.config.bin_edges_maxnorm
                                                 : report.config.bin_edges_absrpv;
  std::vector<SummaryRow> rows;
  for (std::size_t m = 0; m < all_ci_methods.size(); ++m) {
    for (std::size_t ni = 0; ni < report.config.n_values.size(); ++ni) {
      for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        const CoverageCell& cell = report.cell(axis, all_ci_methods[m], ni, b);
        if (cell.rep_count == 0) continue;
        SummaryRow row;
        row.method = all_ci_methods[m];
        row.n = report.config.n_values[ni];
        row.bin_lo = edges[b];
        row.bin_hi = edges[b + 1];
        row.bin_center = 0.5 * (edges[b] + edges[b + 1]);
        row.rep_count = cell.rep_count;
        row.coverage =
            static_cast<double>(cell.covered) / static_cast<double>(cell.rep_count);
        row.mean_width = cell.width_sum / static_cast<double>(cell.rep_count);
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace welfare
