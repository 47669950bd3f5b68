#pragma once

// Projection of joint (c, p) confidence regions into RPV intervals.
//
// For a convex region the RPV's degree-zero homogeneity makes the image of
// the full region equal the image of its boundary, so an interval is
// obtained by scanning boundary points: random draws (the primary method) or
// a deterministic even parameterization (the oracle variant). The minimalist
// interval instead projects only the resampled estimates that fall inside
// the region; it is a subset of the boundary-projection interval.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "rpv/errors.hpp"
#include "rpv/inference.hpp"
#include "rpv/measures.hpp"
#include "rpv/parallel.hpp"
#include "rpv/point.hpp"
#include "rpv/rng.hpp"
#include "rpv/stats.hpp"

namespace welfare {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval of(double lo, double hi) {
    if (!(lo <= hi)) throw numeric_error("interval endpoints out of order");
    return Interval{lo, hi};
  }
  static Interval point(double v) { return Interval{v, v}; }

  bool contains(double v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  double width() const { return hi - lo; }

  Interval hull(const Interval& other) const {
    return Interval{std::min(lo, other.lo), std::max(hi, other.hi)};
  }
};

namespace detail {

// Parallel min/max of fn(k) over k in [0, K). Min/max combining is exact and
// order-independent, so any partition yields the same interval.
template <class Fn>
Interval minmax_over(std::size_t K, Fn&& fn) {
  const std::size_t stripes = std::min<std::size_t>(worker_count(), K);
  std::vector<double> lo(stripes, std::numeric_limits<double>::infinity());
  std::vector<double> hi(stripes, -std::numeric_limits<double>::infinity());
  const std::size_t chunk = (K + stripes - 1) / stripes;
  parallel_for(stripes, [&](std::size_t s) {
    const std::size_t begin = s * chunk;
    const std::size_t end = std::min(K, begin + chunk);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = begin; k < end; ++k) {
      const double v = fn(k);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    lo[s] = mn;
    hi[s] = mx;
  });
  return Interval{*std::min_element(lo.begin(), lo.end()),
                  *std::max_element(hi.begin(), hi.end())};
}

inline PolicyPoint rect_boundary_point(const RectRegion& r, bool vertical_edge, bool far_side,
                                       double u) {
  const double sign = far_side ? -1.0 : 1.0;
  if (vertical_edge) {
    return PolicyPoint(r.center.c + sign * r.half_width_c, r.center.p + u * r.half_width_p);
  }
  return PolicyPoint(r.center.c + u * r.half_width_c, r.center.p + sign * r.half_width_p);
}

}  // namespace detail

// Monte Carlo boundary projection of a rectangle: draw an edge pair, a side,
// and a position, evaluate the RPV, and keep the running extremes. Draw k is
// a pure function of (seed, k), so a larger K extends the draws of a smaller
// one and the interval can only grow.
inline Interval project_rpv_rect(const RectRegion& r, int K, std::uint64_t seed) {
  if (K < 1000) throw input_error("project_rpv_rect requires K >= 1000");
  if (r.degenerate()) return Interval::point(rpv(r.center));
  return detail::minmax_over(static_cast<std::size_t>(K), [&](std::size_t k) {
    SplitMix64 rng(derive_seed(seed, rng_tag::rect_boundary, k));
    const bool vertical = (rng() & 1) != 0;
    const bool far_side = (rng() & 1) != 0;
    const double u = rng.uniform(-1.0, 1.0);
    return rpv(detail::rect_boundary_point(r, vertical, far_side, u));
  });
}

// Monte Carlo boundary projection of an ellipse: map uniform angles through
// the symmetric PSD square root of the shape matrix scaled by sqrt(t).
inline Interval project_rpv_ellipse(const EllipseRegion& r, int K, std::uint64_t seed) {
  if (K < 1000) throw input_error("project_rpv_ellipse requires K >= 1000");
  if (r.degenerate()) return Interval::point(rpv(r.center));
  const Sym2 root = sym2_sqrt_psd(r.shape);
  const double scale = std::sqrt(r.radius_sq);
  return detail::minmax_over(static_cast<std::size_t>(K), [&](std::size_t k) {
    SplitMix64 rng(derive_seed(seed, rng_tag::ellipse_boundary, k));
    const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    const double vc = scale * std::cos(theta);
    const double vp = scale * std::sin(theta);
    return rpv(r.center.c + root.cc * vc + root.cp * vp,
               r.center.p + root.cp * vc + root.pp * vp);
  });
}

// Deterministic oracle: even arc-length walk of the rectangle perimeter.
inline Interval project_rpv_grid(const RectRegion& r, long points) {
  if (points < 10000) throw input_error("project_rpv_grid requires at least 10^4 points");
  if (r.degenerate()) return Interval::point(rpv(r.center));
  const double wc = 2.0 * r.half_width_c;
  const double wp = 2.0 * r.half_width_p;
  const double perimeter = 2.0 * (wc + wp);
  return detail::minmax_over(static_cast<std::size_t>(points), [&](std::size_t j) {
    double t = perimeter * static_cast<double>(j) / static_cast<double>(points);
    double c = r.center.c - r.half_width_c;
    double p = r.center.p - r.half_width_p;
    if (t < wc) {
      c += t;
    } else if (t < wc + wp) {
      c += wc;
      p += t - wc;
    } else if (t < 2.0 * wc + wp) {
      c += wc - (t - wc - wp);
      p += wp;
    } else {
      p += wp - (t - 2.0 * wc - wp);
    }
    return rpv(c, p);
  });
}

// Deterministic oracle: even angular sweep of the ellipse boundary.
inline Interval project_rpv_grid(const EllipseRegion& r, long points) {
  if (points < 10000) throw input_error("project_rpv_grid requires at least 10^4 points");
  if (r.degenerate()) return Interval::point(rpv(r.center));
  const Sym2 root = sym2_sqrt_psd(r.shape);
  const double scale = std::sqrt(r.radius_sq);
  return detail::minmax_over(static_cast<std::size_t>(points), [&](std::size_t j) {
    const double theta =
        2.0 * 3.14159265358979323846 * static_cast<double>(j) / static_cast<double>(points);
    const double vc = scale * std::cos(theta);
    const double vp = scale * std::sin(theta);
    return rpv(r.center.c + root.cc * vc + root.cp * vp,
               r.center.p + root.cp * vc + root.pp * vp);
  });
}

// Hull of the RPV values of resampled estimates lying inside the region.
template <class Region>
Interval minimalist_ci(const ResampleSet& rs, const Region& region) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t inside = 0;
  for (const PolicyPoint& d : rs.draws) {
    if (!region.contains(d)) continue;
    const double v = rpv(d);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++inside;
  }
  if (inside == 0) {
    throw numeric_error("no resampled estimates fall inside the confidence region for " +
                        rs.policy_id);
  }
  return Interval{lo, hi};
}

struct UniformWithMinimalist {
  Interval uniform;
  Interval minimalist;
};

// Uniform and minimalist intervals computed coherently from one region and
// one resample set. The RPV values of in-region resamples belong to the
// image of the region, which equals the image of its boundary, so extending
// the finite-K boundary scan by them moves it toward its almost-sure limit
// and makes the containment of the minimalist interval structural.
template <class Region>
UniformWithMinimalist project_rpv_with_minimalist(const Region& region, const ResampleSet& rs,
                                                  int K, std::uint64_t seed) {
  Interval uniform;
  if constexpr (std::is_same_v<Region, RectRegion>) {
    uniform = project_rpv_rect(region, K, seed);
  } else {
    uniform = project_rpv_ellipse(region, K, seed);
  }
  const Interval minimalist = minimalist_ci(rs, region);
  return UniformWithMinimalist{uniform.hull(minimalist), minimalist};
}

// ---------------------------------------------------------------------------
// Aggregate projection (constant weight vectors only)

namespace detail {

inline void check_weights(const ProductRegion& pr, const std::vector<double>& w) {
  if (w.size() != pr.size()) throw input_error("weight length does not match product region");
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0) throw input_error("weights must be finite and >= 0");
  }
}

inline RectRegion bounding_rect(const EllipseRegion& e) {
  const double scale = std::sqrt(e.radius_sq);
  return RectRegion{e.center, scale * std::sqrt(e.shape.cc), scale * std::sqrt(e.shape.pp)};
}

}  // namespace detail

// TPV interval: the sum separates across policies, so the exact endpoints
// are the weighted sums of the per-policy projection endpoints.
inline Interval project_aggregate_tpv(const ProductRegion& pr, const std::vector<double>& w,
                                      int K, std::uint64_t seed) {
  detail::check_weights(pr, w);
  double lo = 0.0, hi = 0.0;
  for (std::size_t l = 0; l < pr.size(); ++l) {
    const Interval iv = pr.is_rect()
                            ? project_rpv_rect(pr.rects[l], K, derive_seed(seed, l))
                            : project_rpv_ellipse(pr.ellipses[l], K, derive_seed(seed, l));
    lo += w[l] * iv.lo;
    hi += w[l] * iv.hi;
  }
  return Interval::of(lo, hi);
}

// JPV interval: the set of scaled sums over a product of rectangles is their
// Minkowski-sum rectangle, which is then boundary-projected. Ellipses are
// first replaced by their bounding boxes, a valid outer approximation, so
// the result stays a superset of the exact projection (wider, still valid).
inline Interval project_aggregate_jpv(const ProductRegion& pr, const std::vector<double>& lambda,
                                      int K, std::uint64_t seed) {
  detail::check_weights(pr, lambda);
  double c = 0.0, p = 0.0, hw_c = 0.0, hw_p = 0.0;
  for (std::size_t l = 0; l < pr.size(); ++l) {
    const RectRegion r = pr.is_rect() ? pr.rects[l] : detail::bounding_rect(pr.ellipses[l]);
    c += lambda[l] * r.center.c;
    p += lambda[l] * r.center.p;
    hw_c += lambda[l] * r.half_width_c;
    hw_p += lambda[l] * r.half_width_p;
  }
  const RectRegion combined{PolicyPoint(c, p), hw_c, hw_p};
  if (combined.degenerate()) return Interval::point(rpv(combined.center));
  return project_rpv_rect(combined, K, derive_seed(seed, pr.size()));
}

}  // namespace welfare
