#pragma once

#include <cmath>
#include <string>

#include "rpv/errors.hpp"

namespace welfare {

// A policy in normalized units: c is the net fiscal cost (so -c is the net
// fiscal revenue) and p is the impacted population's willingness-to-pay.
// Any subjective scaling that makes policies comparable is assumed to have
// been applied by the caller before construction.
struct PolicyPoint {
  double c = 0.0;
  double p = 0.0;

  PolicyPoint() = default;
  PolicyPoint(double cost, double wtp) : c(cost), p(wtp) {
    if (!std::isfinite(c) || !std::isfinite(p)) {
      throw input_error("PolicyPoint requires finite coordinates");
    }
  }
};

inline bool operator==(const PolicyPoint& a, const PolicyPoint& b) {
  return a.c == b.c && a.p == b.p;
}

// Value of the MVPF: a finite ratio, positive infinity, or undefined where
// the measure has no value (the strictly negative quadrant and the point
// c = 0, p < 0).
class ExtendedWelfare {
 public:
  enum class Tag { Finite, PositiveInfinity, Undefined };

  static ExtendedWelfare finite(double v) {
    if (!std::isfinite(v)) throw numeric_error("finite welfare payload is not finite");
    return ExtendedWelfare(Tag::Finite, v);
  }
  static ExtendedWelfare infinity() { return ExtendedWelfare(Tag::PositiveInfinity, 0.0); }
  static ExtendedWelfare undefined() { return ExtendedWelfare(Tag::Undefined, 0.0); }

  Tag tag() const { return tag_; }
  bool is_finite() const { return tag_ == Tag::Finite; }
  bool is_infinite() const { return tag_ == Tag::PositiveInfinity; }
  bool is_undefined() const { return tag_ == Tag::Undefined; }

  // Valid only when is_finite().
  double value() const {
    if (!is_finite()) throw numeric_error("welfare value is not finite");
    return value_;
  }

 private:
  ExtendedWelfare(Tag t, double v) : tag_(t), value_(v) {}
  Tag tag_;
  double value_;
};

// Value of the fixed MVPF: nonnegative and total, so there is no undefined
// state; only a finite value >= 0 or positive infinity.
class ExtendedNonneg {
 public:
  enum class Tag { Finite, PositiveInfinity };

  static ExtendedNonneg finite(double v) {
    if (!std::isfinite(v) || v < 0.0) {
      throw numeric_error("fixed-MVPF payload must be finite and nonnegative");
    }
    return ExtendedNonneg(Tag::Finite, v);
  }
  static ExtendedNonneg infinity() { return ExtendedNonneg(Tag::PositiveInfinity, 0.0); }

  Tag tag() const { return tag_; }
  bool is_finite() const { return tag_ == Tag::Finite; }
  bool is_infinite() const { return tag_ == Tag::PositiveInfinity; }
  double value() const {
    if (!is_finite()) throw numeric_error("fixed-MVPF value is not finite");
    return value_;
  }

 private:
  ExtendedNonneg(Tag t, double v) : tag_(t), value_(v) {}
  Tag tag_;
  double value_;
};

// Sub-quadrant of the (c, p) plane. Points on the axes, the break-even
// diagonal p = c, or the antidiagonal p = -c get their own labels instead of
// being silently assigned to a neighbouring open sub-quadrant.
enum class Subquadrant {
  IA,    // c > 0, 0 < p < c
  IB,    // c > 0, p > c > 0
  IIA,   // c < 0, p > -c
  IIB,   // c < 0, 0 < p < -c
  IIIA,  // p < 0, c < p
  IIIB,  // c < 0, p < c
  IVA,   // c > 0, p < -c
  IVB,   // c > 0, -c < p < 0
  Origin,
  AxisCostPositive,   // p = 0, c > 0
  AxisCostNegative,   // p = 0, c < 0
  AxisWtpPositive,    // c = 0, p > 0
  AxisWtpNegative,    // c = 0, p < 0
  DiagonalPositive,   // p = c > 0
  DiagonalNegative,   // p = c < 0
  AntidiagonalII,     // p = -c, c < 0
  AntidiagonalIV,     // p = -c, c > 0
};

// Interpretation band of the RPV, with the half-open boundaries of the
// published legend: [-2,-1], (-1,0), [0,1), [1,2].
enum class Band {
  ParetoInferior,  // [-2, -1]
  BelowBreakEven,  // (-1, 0)
  AboveBreakEven,  // [0, 1)
  ParetoSuperior,  // [1, 2]
};

struct QuadrantClass {
  Subquadrant subquadrant;
  Band band;
};

inline std::string to_string(Subquadrant s) {
  switch (s) {
    case Subquadrant::IA: return "I-A";
    case Subquadrant::IB: return "I-B";
    case Subquadrant::IIA: return "II-A";
    case Subquadrant::IIB: return "II-B";
    case Subquadrant::IIIA: return "III-A";
    case Subquadrant::IIIB: return "III-B";
    case Subquadrant::IVA: return "IV-A";
    case Subquadrant::IVB: return "IV-B";
    case Subquadrant::Origin: return "origin";
    case Subquadrant::AxisCostPositive: return "axis-c-pos";
    case Subquadrant::AxisCostNegative: return "axis-c-neg";
    case Subquadrant::AxisWtpPositive: return "axis-p-pos";
    case Subquadrant::AxisWtpNegative: return "axis-p-neg";
    case Subquadrant::DiagonalPositive: return "diagonal-pos";
    case Subquadrant::DiagonalNegative: return "diagonal-neg";
    case Subquadrant::AntidiagonalII: return "antidiagonal-II";
    case Subquadrant::AntidiagonalIV: return "antidiagonal-IV";
  }
  return "?";
}

// Range notation with '..' so the label stays a single CSV field.
inline std::string to_string(Band b) {
  switch (b) {
    case Band::ParetoInferior: return "[-2..-1]";
    case Band::BelowBreakEven: return "(-1..0)";
    case Band::AboveBreakEven: return "[0..1)";
    case Band::ParetoSuperior: return "[1..2]";
  }
  return "?";
}

}  // namespace welfare
