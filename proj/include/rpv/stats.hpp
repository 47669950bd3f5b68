#pragma once

// Small statistical and 2x2 linear-algebra helpers shared by the inference
// and simulation code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rpv/errors.hpp"

namespace welfare {

// Standard normal CDF.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// Standard normal quantile. Acklam's rational approximation polished with
// one Halley step; accurate to ~1e-15 over (0, 1). Returns -inf/+inf at the
// endpoints so that downstream Phi(2g + Phi^-1(d)) degrades gracefully.
inline double normal_quantile(double prob) {
  if (prob <= 0.0) return -std::numeric_limits<double>::infinity();
  if (prob >= 1.0) return std::numeric_limits<double>::infinity();

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (prob < p_low) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - p_low) {
    const double q = prob - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement against erfc.
  const double e = normal_cdf(x) - prob;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

// Right-continuous empirical quantile: the order statistic with 1-based
// index ceil(q * n), clamped to [1, n]. Conservative for coverage. The
// product q * n is snapped to the nearest integer when within a relative
// 1e-9 of it, so representation noise in q (e.g. 1 - 0.999) cannot push the
// index past the intended order statistic.
inline double empirical_quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw numeric_error("empirical quantile of empty set");
  const double n = static_cast<double>(sorted.size());
  const double x = q * n;
  const double nearest = std::round(x);
  const bool snap = std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x));
  auto idx = static_cast<std::ptrdiff_t>(snap ? nearest : std::ceil(x));
  idx = std::clamp<std::ptrdiff_t>(idx, 1, static_cast<std::ptrdiff_t>(sorted.size()));
  return sorted[static_cast<std::size_t>(idx - 1)];
}

struct Moments2d {
  double mean_c = 0.0, mean_p = 0.0;
  double sd_c = 0.0, sd_p = 0.0;  // n-1 denominators
  double rho = 0.0;
  std::size_t n = 0;
};

// Two-pass means / standard deviations / Pearson correlation.
template <class Range>
Moments2d moments2d(const Range& rows) {
  Moments2d m;
  for (const auto& r : rows) {
    m.mean_c += r.c;
    m.mean_p += r.p;
    ++m.n;
  }
  if (m.n < 2) throw input_error("need at least 2 rows for moments");
  m.mean_c /= static_cast<double>(m.n);
  m.mean_p /= static_cast<double>(m.n);
  double scc = 0.0, spp = 0.0, scp = 0.0;
  for (const auto& r : rows) {
    const double dc = r.c - m.mean_c;
    const double dp = r.p - m.mean_p;
    scc += dc * dc;
    spp += dp * dp;
    scp += dc * dp;
  }
  const double denom = static_cast<double>(m.n - 1);
  m.sd_c = std::sqrt(scc / denom);
  m.sd_p = std::sqrt(spp / denom);
  if (m.sd_c == 0.0 || m.sd_p == 0.0) {
    throw numeric_error("degenerate sample: a coordinate has zero variance");
  }
  m.rho = (scp / denom) / (m.sd_c * m.sd_p);
  m.rho = std::clamp(m.rho, -1.0, 1.0);
  return m;
}

// Symmetric 2x2 matrix [[cc, cp], [cp, pp]].
struct Sym2 {
  double cc = 1.0, cp = 0.0, pp = 1.0;

  double det() const { return cc * pp - cp * cp; }
  bool positive_definite() const { return cc > 0.0 && det() > 0.0; }
};

inline Sym2 sym2_inverse(const Sym2& s) {
  const double d = s.det();
  if (!(d > 0.0) || !(s.cc > 0.0)) {
    throw numeric_error("2x2 matrix is not positive definite");
  }
  return Sym2{s.pp / d, -s.cp / d, s.cc / d};
}

inline double quad_form(const Sym2& inv, double dc, double dp) {
  return inv.cc * dc * dc + 2.0 * inv.cp * dc * dp + inv.pp * dp * dp;
}

// Symmetric PSD square root via the closed-form eigendecomposition.
// Eigenvalues in [-1e-10, 0] are clamped to zero; anything lower is an
// error rather than a silent repair.
inline Sym2 sym2_sqrt_psd(const Sym2& s) {
  const double half_diff = 0.5 * (s.cc - s.pp);
  const double disc = std::hypot(half_diff, s.cp);
  const double mid = 0.5 * (s.cc + s.pp);
  double lam1 = mid + disc;
  double lam2 = mid - disc;
  for (double* lam : {&lam1, &lam2}) {
    if (*lam < 0.0) {
      if (*lam < -1e-10) throw numeric_error("matrix is not positive semidefinite");
      *lam = 0.0;
    }
  }
  // Eigenvector for lam1.
  double v1c, v1p;
  if (s.cp == 0.0) {
    if (s.cc >= s.pp) {
      v1c = 1.0;
      v1p = 0.0;
    } else {
      v1c = 0.0;
      v1p = 1.0;
    }
  } else {
    v1c = lam1 - s.pp;
    v1p = s.cp;
    const double norm = std::hypot(v1c, v1p);
    v1c /= norm;
    v1p /= norm;
  }
  // The second eigenvector is the rotation of the first by 90 degrees.
  const double v2c = -v1p, v2p = v1c;
  const double r1 = std::sqrt(lam1), r2 = std::sqrt(lam2);
  return Sym2{r1 * v1c * v1c + r2 * v2c * v2c,
              r1 * v1c * v1p + r2 * v2c * v2p,
              r1 * v1p * v1p + r2 * v2p * v2p};
}

// Lower-triangular Cholesky factor (for sampling from a known covariance).
struct Lower2 {
  double l11 = 1.0, l21 = 0.0, l22 = 1.0;
};

inline Lower2 sym2_cholesky(const Sym2& s) {
  if (!s.positive_definite()) throw numeric_error("covariance is not positive definite");
  Lower2 l;
  l.l11 = std::sqrt(s.cc);
  l.l21 = s.cp / l.l11;
  l.l22 = std::sqrt(s.pp - l.l21 * l.l21);
  return l;
}

}  // namespace welfare
