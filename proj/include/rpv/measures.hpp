#pragma once

// Welfare measures on the (c, p) plane.
//
// The central measure is the Relative Policy Value (RPV): the social surplus
// p - c normalized by the maximum norm max{|p|, |c|}, zero at the origin.
// It is the unique index that is unit-free, equals p/c - 1 on the cone
// c > 0, p in [-c, c], and satisfies the two additive symmetries
//     rpv(c, p) + rpv(p, c) = 0   and   rpv(c, p) + rpv(-c, -p) = 0.
// The other measures here (MSS, MVPF and its variants, the L^q family, the
// rotation index zeta) exist for comparison and for conversions to and from
// the RPV.

#include <algorithm>
#include <cmath>

#include "rpv/errors.hpp"
#include "rpv/point.hpp"

namespace welfare {

inline double max_norm(double c, double p) {
  return std::max(std::abs(c), std::abs(p));
}
inline double max_norm(const PolicyPoint& x) { return max_norm(x.c, x.p); }

// Marginal social surplus p - c.
inline double mss(double c, double p) { return p - c; }
inline double mss(const PolicyPoint& x) { return mss(x.c, x.p); }

// Relative Policy Value. Exactly zero at the exact origin (no epsilon ball);
// the result is clamped to [-2, 2] to absorb at most one ulp of rounding.
inline double rpv(double c, double p) {
  const double m = max_norm(c, p);
  if (m == 0.0) return 0.0;
  return std::clamp((p - c) / m, -2.0, 2.0);
}
inline double rpv(const PolicyPoint& x) { return rpv(x.c, x.p); }

// MVPF: p/c for c > 0, +infinity for c <= 0 and p >= 0, undefined on the
// strictly negative quadrant. The definition leaves c = 0, p < 0 uncovered;
// we return Undefined there, continuing the adjacent undefined quadrant.
inline ExtendedWelfare mvpf(const PolicyPoint& x) {
  if (x.c > 0.0) return ExtendedWelfare::finite(x.p / x.c);
  if (x.p >= 0.0) return ExtendedWelfare::infinity();
  return ExtendedWelfare::undefined();
}

// Marginal cost of funds, defined for revenue-raising policies only (c < 0).
inline double mcf(const PolicyPoint& x) {
  if (!(x.c < 0.0)) throw std::domain_error("mcf requires c < 0");
  return x.p / x.c;
}

// Marginal benefit of public projects, defined for c > 0 only.
inline double mbp(const PolicyPoint& x) {
  if (!(x.c > 0.0)) throw std::domain_error("mbp requires c > 0");
  return x.p / x.c;
}

// Fixed MVPF: the multiplicatively symmetric totalization of the MVPF,
// valued in [0, +inf]. Satisfies fixed_mvpf(c,p) * fixed_mvpf(-c,-p) = 1
// under the convention 0 * inf = 1.
inline ExtendedNonneg fixed_mvpf(const PolicyPoint& x) {
  if (x.c == 0.0 && x.p == 0.0) return ExtendedNonneg::finite(1.0);
  if (x.c > 0.0 && x.p > 0.0) return ExtendedNonneg::finite(x.p / x.c);
  if (x.c < 0.0 && x.p < 0.0) return ExtendedNonneg::finite(x.c / x.p);
  if (x.c <= 0.0 && x.p >= 0.0) return ExtendedNonneg::infinity();
  return ExtendedNonneg::finite(0.0);  // c >= 0, p <= 0, not the origin
}

// L^q-normalized welfare index 2^{1/q} (p - c) / ||(c,p)||_q for q >= 1,
// zero at the origin. Coordinates are scaled by the maximum norm before
// powering so that large q neither overflows nor underflows.
inline double lq_index(const PolicyPoint& x, double q) {
  if (!(q >= 1.0)) throw input_error("lq_index requires q >= 1");
  const double m = max_norm(x);
  if (m == 0.0) return 0.0;
  const double nc = std::abs(x.c) / m;
  const double np = std::abs(x.p) / m;
  const double norm = m * std::pow(std::pow(nc, q) + std::pow(np, q), 1.0 / q);
  return std::clamp(std::exp2(1.0 / q) * (x.p - x.c) / norm, -2.0, 2.0);
}

// Rotation index: rotate (c, p) clockwise by 45 degrees, take the principal
// angle of the rotated vector, and rescale by 4/pi. sgn(c + p) = 0 pins the
// value to zero on the whole antidiagonal, where the rotated first
// coordinate vanishes. The index shares the two additive symmetries of the
// RPV but fails the shortfall normalization, so the two measures differ; it
// is kept as a counterexample device, not a recommended measure.
inline double zeta(const PolicyPoint& x) {
  const double sum = x.c + x.p;
  if (sum == 0.0) return 0.0;  // covers the origin and the antidiagonal
  const double inv_sqrt2 = 0.70710678118654752440;
  const double c_rot = sum * inv_sqrt2;
  const double p_rot = (x.p - x.c) * inv_sqrt2;
  // Principal-branch arctan of p_rot / c_rot: the sign of c_rot cancels
  // against sgn(c + p), leaving atan2 against |c_rot|.
  const double angle = std::atan2(p_rot, std::abs(c_rot));
  return std::clamp((4.0 / 3.14159265358979323846) * angle, -2.0, 2.0);
}

// Converts an RPV value into the fixed MVPF of any point attaining it.
inline ExtendedNonneg rpv_to_fixed_mvpf(double phi) {
  if (!(phi >= -2.0 && phi <= 2.0)) {
    throw input_error("rpv_to_fixed_mvpf requires phi in [-2, 2]");
  }
  if (phi <= -1.0) return ExtendedNonneg::finite(0.0);
  if (phi >= 1.0) return ExtendedNonneg::infinity();
  if (phi < 0.0) return ExtendedNonneg::finite(phi + 1.0);
  return ExtendedNonneg::finite(1.0 / (1.0 - phi));
}

// Converts an RPV value into the L^q index of any point attaining it, by
// evaluating the index at a canonical point on the RPV level set:
// (1, phi + 1) below break-even, (1 - phi, 1) at or above it.
inline double rpv_to_lq(double phi, double q) {
  if (!(phi >= -2.0 && phi <= 2.0)) {
    throw input_error("rpv_to_lq requires phi in [-2, 2]");
  }
  if (!(q >= 1.0)) throw input_error("rpv_to_lq requires q >= 1");
  const PolicyPoint canonical =
      phi < 0.0 ? PolicyPoint(1.0, phi + 1.0) : PolicyPoint(1.0 - phi, 1.0);
  return lq_index(canonical, q);
}

inline Band band_of(double phi) {
  if (phi >= 1.0) return Band::ParetoSuperior;
  if (phi >= 0.0) return Band::AboveBreakEven;
  if (phi > -1.0) return Band::BelowBreakEven;
  return Band::ParetoInferior;
}

// Sub-quadrant plus RPV band. Axes and diagonals get explicit degenerate
// labels rather than a tie-broken neighbour.
inline QuadrantClass classify(const PolicyPoint& x) {
  const Band band = band_of(rpv(x));
  const double c = x.c, p = x.p;
  Subquadrant s;
  if (c == 0.0 && p == 0.0) {
    s = Subquadrant::Origin;
  } else if (p == 0.0) {
    s = c > 0.0 ? Subquadrant::AxisCostPositive : Subquadrant::AxisCostNegative;
  } else if (c == 0.0) {
    s = p > 0.0 ? Subquadrant::AxisWtpPositive : Subquadrant::AxisWtpNegative;
  } else if (p == c) {
    s = c > 0.0 ? Subquadrant::DiagonalPositive : Subquadrant::DiagonalNegative;
  } else if (p == -c) {
    s = c < 0.0 ? Subquadrant::AntidiagonalII : Subquadrant::AntidiagonalIV;
  } else if (c > 0.0 && p > 0.0) {
    s = p < c ? Subquadrant::IA : Subquadrant::IB;
  } else if (c < 0.0 && p > 0.0) {
    s = p > -c ? Subquadrant::IIA : Subquadrant::IIB;
  } else if (c < 0.0 && p < 0.0) {
    s = p > c ? Subquadrant::IIIA : Subquadrant::IIIB;
  } else {
    s = p < -c ? Subquadrant::IVA : Subquadrant::IVB;
  }
  return QuadrantClass{s, band};
}

// Weighting schemes that turn the RPV into the other published measures.
enum class RpvWeighting {
  Unit,              // weight 1: the RPV itself
  L2Adjust,          // weight sqrt(2) max / ||.||_2: the L^2 index
  L1Adjust,          // weight 2 max / ||.||_1: the L^1 index
  TanhHybrid,        // weight tanh|p - c|: bounded hybrid measure
  AbsSurplusHybrid,  // weight |p - c|: unbounded hybrid measure
  MaxNormAbsolute,   // weight max{|p|,|c|}: recovers the MSS exactly
};

inline double weighted_rpv(const PolicyPoint& x, RpvWeighting scheme) {
  switch (scheme) {
    case RpvWeighting::Unit: return rpv(x);
    case RpvWeighting::L2Adjust: return lq_index(x, 2.0);
    case RpvWeighting::L1Adjust: return lq_index(x, 1.0);
    case RpvWeighting::TanhHybrid: return rpv(x) * std::tanh(std::abs(mss(x)));
    case RpvWeighting::AbsSurplusHybrid: return rpv(x) * std::abs(mss(x));
    case RpvWeighting::MaxNormAbsolute: return mss(x);
  }
  throw input_error("unknown RPV weighting scheme");
}

}  // namespace welfare
