#pragma once

// Welfare aggregation over policy collections.
//
// Two aggregates are supported. The Joint Policy Value (JPV) applies the RPV
// to a scaling-factor-weighted sum of the policy points: the welfare of one
// hypothetical combined policy. The Total Policy Value (TPV) is the
// importance-weighted sum of per-policy RPVs: the policymaker's total
// utility over the policies as implemented. Weight schemes cover the common
// published choices; arbitrary user-defined weight functions are not an
// extension point, which keeps confidence-interval projection tractable.

#include <cmath>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rpv/errors.hpp"
#include "rpv/measures.hpp"
#include "rpv/point.hpp"

namespace welfare {

struct PolicyEntry {
  std::string policy_id;
  PolicyPoint point;
};

struct PolicyCollection {
  std::vector<PolicyEntry> entries;

  static PolicyCollection of(std::vector<PolicyEntry> entries) {
    if (entries.empty()) throw input_error("policy collection must be non-empty");
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
      if (!seen.insert(e.policy_id).second) {
        throw input_error("duplicate policy_id in collection: " + e.policy_id);
      }
    }
    return PolicyCollection{std::move(entries)};
  }

  std::size_t size() const { return entries.size(); }
};

enum class WeightKind {
  Scaling,     // lambda: scales the points themselves (JPV)
  Importance,  // w: scales the per-policy welfare values (TPV)
};

struct WeightVector {
  std::vector<double> values;
  WeightKind kind = WeightKind::Importance;

  static WeightVector of(std::vector<double> values, WeightKind kind) {
    for (double v : values) {
      if (!std::isfinite(v) || v < 0.0) {
        throw input_error("weights must be finite and nonnegative");
      }
    }
    return WeightVector{std::move(values), kind};
  }

  static WeightVector equal(std::size_t n, WeightKind kind, double value) {
    return WeightVector{std::vector<double>(n, value), kind};
  }
};

inline void check_lengths(const PolicyCollection& coll, const WeightVector& w) {
  if (coll.size() != w.values.size()) {
    throw input_error("weight vector length does not match collection size");
  }
}

struct JpvResult {
  double value = 0.0;        // RPV of the aggregate point
  PolicyPoint aggregate;     // sum of lambda_l * (c_l, p_l)
  double aggregate_max_norm = 0.0;
};

// Joint Policy Value: RPV of the lambda-weighted sum of policy points.
inline JpvResult jpv(const PolicyCollection& coll, const WeightVector& lambda) {
  check_lengths(coll, lambda);
  double c = 0.0, p = 0.0;
  for (std::size_t i = 0; i < coll.size(); ++i) {
    c += lambda.values[i] * coll.entries[i].point.c;
    p += lambda.values[i] * coll.entries[i].point.p;
  }
  const PolicyPoint agg(c, p);
  return JpvResult{rpv(agg), agg, max_norm(agg)};
}

// Total Policy Value: importance-weighted sum of per-policy RPVs.
inline double tpv(const PolicyCollection& coll, const WeightVector& w) {
  check_lengths(coll, w);
  double total = 0.0;
  for (std::size_t i = 0; i < coll.size(); ++i) {
    total += w.values[i] * rpv(coll.entries[i].point);
  }
  return total;
}

enum class WeightScheme {
  MssScaled,            // base_l * max{|p_l|,|c_l|}: TPV becomes a weighted MSS sum
  Simplex,              // base normalized to sum 1: TPV is a weighted RPV average
  LqAdjust,             // 2^{1/q} base_l max/||.||_q: TPV averages the L^q indices
  SurplusProportional,  // |p_l - c_l| / sum_k |p_k - c_k|
  CostProportional,     // |c_l| / sum_k |c_k|
};

// Builds the importance weights for one of the named schemes. `base` holds
// the scheme's free constants (defaults to all ones); `q` is used only by
// LqAdjust.
inline WeightVector make_weights(const PolicyCollection& coll, WeightScheme scheme,
                                 std::optional<std::vector<double>> base = std::nullopt,
                                 double q = 2.0) {
  const std::size_t n = coll.size();
  std::vector<double> b = base.value_or(std::vector<double>(n, 1.0));
  if (b.size() != n) throw input_error("base weight length does not match collection");
  for (double v : b) {
    if (!std::isfinite(v) || v < 0.0) throw input_error("base weights must be finite and >= 0");
  }

  std::vector<double> w(n, 0.0);
  switch (scheme) {
    case WeightScheme::MssScaled:
      for (std::size_t i = 0; i < n; ++i) w[i] = b[i] * max_norm(coll.entries[i].point);
      break;
    case WeightScheme::Simplex: {
      double total = 0.0;
      for (double v : b) total += v;
      if (total <= 0.0) throw numeric_error("simplex weights need a positive base sum");
      for (std::size_t i = 0; i < n; ++i) w[i] = b[i] / total;
      break;
    }
    case WeightScheme::LqAdjust: {
      if (!(q >= 1.0)) throw input_error("LqAdjust requires q >= 1");
      double total = 0.0;
      for (double v : b) total += v;
      if (total <= 0.0) throw numeric_error("LqAdjust weights need a positive base sum");
      for (std::size_t i = 0; i < n; ++i) {
        const PolicyPoint& x = coll.entries[i].point;
        const double m = max_norm(x);
        if (m == 0.0) {
          w[i] = 0.0;  // origin entry contributes zero welfare either way
          continue;
        }
        const double nc = std::abs(x.c) / m;
        const double np = std::abs(x.p) / m;
        const double lq_norm = m * std::pow(std::pow(nc, q) + std::pow(np, q), 1.0 / q);
        w[i] = std::exp2(1.0 / q) * (b[i] / total) * m / lq_norm;
      }
      break;
    }
    case WeightScheme::SurplusProportional: {
      double total = 0.0;
      for (const auto& e : coll.entries) total += std::abs(mss(e.point));
      if (total == 0.0) {
        throw numeric_error("surplus-proportional weights are degenerate: all surpluses are zero");
      }
      for (std::size_t i = 0; i < n; ++i) w[i] = std::abs(mss(coll.entries[i].point)) / total;
      break;
    }
    case WeightScheme::CostProportional: {
      double total = 0.0;
      for (const auto& e : coll.entries) total += std::abs(e.point.c);
      if (total == 0.0) {
        throw numeric_error("cost-proportional weights are degenerate: all costs are zero");
      }
      for (std::size_t i = 0; i < n; ++i) w[i] = std::abs(coll.entries[i].point.c) / total;
      break;
    }
  }
  return WeightVector::of(std::move(w), WeightKind::Importance);
}

// TPV of a two-policy collection along the weight path (w, 1 - w) for w on
// an evenly spaced grid over [0, 1]. The output is affine in w.
inline std::vector<std::pair<double, double>> tpv_linear_path(const PolicyCollection& pair,
                                                              int grid) {
  if (pair.size() != 2) throw input_error("tpv_linear_path requires exactly two policies");
  if (grid < 2) throw input_error("tpv_linear_path requires grid >= 2");
  const double phi0 = rpv(pair.entries[0].point);
  const double phi1 = rpv(pair.entries[1].point);
  std::vector<std::pair<double, double>> path;
  path.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(grid - 1);
    path.emplace_back(w, w * phi0 + (1.0 - w) * phi1);
  }
  return path;
}

}  // namespace welfare
