#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rpv/measures.hpp"
#include "rpv/rng.hpp"

using namespace welfare;

namespace {

bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

PolicyPoint random_point(SplitMix64& rng, double lo = -10.0, double hi = 10.0) {
  return PolicyPoint(rng.uniform(lo, hi), rng.uniform(lo, hi));
}

}  // namespace

TEST_CASE("rpv point values") {
  CHECK(rpv(0.0, 0.0) == 0.0);
  CHECK_THAT(rpv(4.86, -42.82), Catch::Matchers::WithinAbs(-1.11, 0.005));
  CHECK_THAT(rpv(-3.15, 18.41), Catch::Matchers::WithinAbs(1.17, 0.005));
  CHECK(rpv(1.5, 6.0) == 0.75);
  CHECK(rpv(1.0, 0.0) == -1.0);
  CHECK(rpv(-1.0, 1.0) == 2.0);
  CHECK(rpv(1.0, -1.0) == -2.0);
}

TEST_CASE("mss point values") {
  CHECK(mss(1.0, 2.0) == 1.0);
  CHECK(mss(2.0, 1.0) == -1.0);
  CHECK_THAT(mss(-3.15, 18.41), Catch::Matchers::WithinAbs(21.56, 1e-12));
}

TEST_CASE("mvpf quadrant behaviour") {
  const ExtendedWelfare q4 = mvpf(PolicyPoint(0.48, -2.68));
  REQUIRE(q4.is_finite());
  CHECK_THAT(q4.value(), Catch::Matchers::WithinAbs(-2.68 / 0.48, 1e-12));
  CHECK_THAT(q4.value(), Catch::Matchers::WithinAbs(-5.5833, 5e-4));

  CHECK(mvpf(PolicyPoint(-5.10, 5.38)).is_infinite());
  CHECK(mvpf(PolicyPoint(-1.0, -1.0)).is_undefined());
  CHECK(mvpf(PolicyPoint(0.0, 0.0)).is_infinite());
  CHECK(mvpf(PolicyPoint(0.0, 2.0)).is_infinite());
  // c = 0, p < 0 is uncovered by the piecewise definition; it continues the
  // undefined quadrant.
  CHECK(mvpf(PolicyPoint(0.0, -1.0)).is_undefined());
}

TEST_CASE("mcf and mbp domains") {
  CHECK_THAT(mcf(PolicyPoint(-1.09, -1.00)), Catch::Matchers::WithinAbs(0.917, 1e-3));
  CHECK(mbp(PolicyPoint(2.0, 1.0)) == 0.5);
  CHECK_THROWS_AS(mcf(PolicyPoint(1.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(mcf(PolicyPoint(0.0, 1.0)), std::domain_error);
  CHECK_THROWS_AS(mbp(PolicyPoint(-2.0, 1.0)), std::domain_error);
}

TEST_CASE("fixed mvpf clauses") {
  REQUIRE(fixed_mvpf(PolicyPoint(0.0, 0.0)).is_finite());
  CHECK(fixed_mvpf(PolicyPoint(0.0, 0.0)).value() == 1.0);
  CHECK(fixed_mvpf(PolicyPoint(-2.0, -1.0)).value() == 2.0);
  CHECK(fixed_mvpf(PolicyPoint(3.0, -1.0)).value() == 0.0);
  CHECK(fixed_mvpf(PolicyPoint(1.0, 2.0)).value() == 2.0);
  CHECK(fixed_mvpf(PolicyPoint(-1.0, 2.0)).is_infinite());
  CHECK(fixed_mvpf(PolicyPoint(0.0, 2.0)).is_infinite());
  CHECK(fixed_mvpf(PolicyPoint(2.0, 0.0)).value() == 0.0);
}

TEST_CASE("lq index values and domain") {
  CHECK(lq_index(PolicyPoint(-1.0, 2.0), 1.0) == 2.0);
  CHECK_THAT(lq_index(PolicyPoint(1.0, 2.0), 2.0),
             Catch::Matchers::WithinAbs(0.632456, 1e-4));
  CHECK(lq_index(PolicyPoint(0.0, 0.0), 1.0) == 0.0);
  CHECK_THROWS_AS(lq_index(PolicyPoint(1.0, 1.0), 0.5), input_error);
}

TEST_CASE("zeta values") {
  CHECK_THAT(zeta(PolicyPoint(1.0, 0.0)), Catch::Matchers::WithinAbs(-1.0, 1e-12));
  CHECK(zeta(PolicyPoint(1.0, 1.0)) == 0.0);
  CHECK_THAT(zeta(PolicyPoint(2.0, 1.0)), Catch::Matchers::WithinAbs(-0.4097, 1e-3));
  // Pinned to zero on the whole antidiagonal by the sgn factor.
  CHECK(zeta(PolicyPoint(-1.0, 1.0)) == 0.0);
  CHECK(zeta(PolicyPoint(3.0, -3.0)) == 0.0);
  CHECK_THAT(std::abs(zeta(PolicyPoint(2.0, 1.0)) - rpv(2.0, 1.0)),
             Catch::Matchers::WithinAbs(0.0903, 1e-3));
}

TEST_CASE("rpv to fixed mvpf conversion") {
  CHECK(rpv_to_fixed_mvpf(0.5).value() == 2.0);
  CHECK(rpv_to_fixed_mvpf(-1.0).value() == 0.0);
  CHECK(rpv_to_fixed_mvpf(0.0).value() == 1.0);
  CHECK(rpv_to_fixed_mvpf(1.0).is_infinite());
  CHECK(rpv_to_fixed_mvpf(-0.5).value() == 0.5);
  CHECK_THROWS_AS(rpv_to_fixed_mvpf(2.5), input_error);
}

TEST_CASE("rpv to lq conversion") {
  for (double q : {1.0, 2.0, 5.0}) {
    CHECK(rpv_to_lq(0.0, q) == 0.0);
  }
  const double phi = rpv(2.0, 10.0);
  CHECK(phi == 0.8);
  CHECK(rel_close(rpv_to_lq(phi, 2.0), lq_index(PolicyPoint(2.0, 10.0), 2.0), 1e-12));
  CHECK(rpv_to_lq(-2.0, 1.0) == -2.0);
  CHECK_THROWS_AS(rpv_to_lq(3.0, 1.0), input_error);
  CHECK_THROWS_AS(rpv_to_lq(0.5, 0.25), input_error);
}

TEST_CASE("max norm") {
  CHECK(max_norm(PolicyPoint(0.0, 0.0)) == 0.0);
  CHECK(max_norm(PolicyPoint(-3.15, 18.41)) == 18.41);
  CHECK(max_norm(PolicyPoint(2.0, -1.0)) == 2.0);
}

TEST_CASE("classification of sub-quadrants and degenerate loci") {
  // The band always follows the RPV value; rpv(1.31, 1.17) < 0, so this
  // I-A policy sits below break-even.
  const QuadrantClass ny = classify(PolicyPoint(1.31, 1.17));
  CHECK(ny.subquadrant == Subquadrant::IA);
  CHECK(ny.band == Band::BelowBreakEven);

  const QuadrantClass jtpa = classify(PolicyPoint(0.91, -0.21));
  CHECK(jtpa.subquadrant == Subquadrant::IVB);
  CHECK(jtpa.band == Band::ParetoInferior);

  CHECK(classify(PolicyPoint(1.0, 1.0)).subquadrant == Subquadrant::DiagonalPositive);
  CHECK(classify(PolicyPoint(1.0, 1.0)).band == Band::AboveBreakEven);

  CHECK(classify(PolicyPoint(1.5, 0.75)).subquadrant == Subquadrant::IA);
  CHECK(classify(PolicyPoint(0.75, 1.5)).subquadrant == Subquadrant::IB);
  CHECK(classify(PolicyPoint(-0.75, 1.5)).subquadrant == Subquadrant::IIA);
  CHECK(classify(PolicyPoint(-1.5, 0.75)).subquadrant == Subquadrant::IIB);
  CHECK(classify(PolicyPoint(-1.5, -1.0)).subquadrant == Subquadrant::IIIA);
  CHECK(classify(PolicyPoint(-0.75, -1.75)).subquadrant == Subquadrant::IIIB);
  CHECK(classify(PolicyPoint(0.75, -1.75)).subquadrant == Subquadrant::IVA);
  CHECK(classify(PolicyPoint(1.5, -1.0)).subquadrant == Subquadrant::IVB);

  CHECK(classify(PolicyPoint(0.0, 0.0)).subquadrant == Subquadrant::Origin);
  CHECK(classify(PolicyPoint(0.0, 0.0)).band == Band::AboveBreakEven);
  CHECK(classify(PolicyPoint(2.0, 0.0)).subquadrant == Subquadrant::AxisCostPositive);
  CHECK(classify(PolicyPoint(2.0, 0.0)).band == Band::ParetoInferior);
  CHECK(classify(PolicyPoint(-2.0, 0.0)).subquadrant == Subquadrant::AxisCostNegative);
  CHECK(classify(PolicyPoint(0.0, 2.0)).subquadrant == Subquadrant::AxisWtpPositive);
  CHECK(classify(PolicyPoint(0.0, 2.0)).band == Band::ParetoSuperior);
  CHECK(classify(PolicyPoint(0.0, -2.0)).subquadrant == Subquadrant::AxisWtpNegative);
  CHECK(classify(PolicyPoint(-1.0, -1.0)).subquadrant == Subquadrant::DiagonalNegative);
  CHECK(classify(PolicyPoint(-1.0, 1.0)).subquadrant == Subquadrant::AntidiagonalII);
  CHECK(classify(PolicyPoint(-1.0, 1.0)).band == Band::ParetoSuperior);
  CHECK(classify(PolicyPoint(1.0, -1.0)).subquadrant == Subquadrant::AntidiagonalIV);
  CHECK(classify(PolicyPoint(1.0, -1.0)).band == Band::ParetoInferior);
}

TEST_CASE("band boundaries") {
  CHECK(band_of(-2.0) == Band::ParetoInferior);
  CHECK(band_of(-1.0) == Band::ParetoInferior);
  CHECK(band_of(-0.999) == Band::BelowBreakEven);
  CHECK(band_of(0.0) == Band::AboveBreakEven);
  CHECK(band_of(0.999) == Band::AboveBreakEven);
  CHECK(band_of(1.0) == Band::ParetoSuperior);
  CHECK(band_of(2.0) == Band::ParetoSuperior);
}

TEST_CASE("weighted rpv schemes") {
  CHECK(weighted_rpv(PolicyPoint(2.0, 1.0), RpvWeighting::MaxNormAbsolute) == -1.0);
  CHECK(weighted_rpv(PolicyPoint(1.0, 2.0), RpvWeighting::Unit) == 0.5);
  CHECK(weighted_rpv(PolicyPoint(1.0, 1.0), RpvWeighting::TanhHybrid) == 0.0);
  CHECK(weighted_rpv(PolicyPoint(1.0, 2.0), RpvWeighting::L2Adjust) ==
        lq_index(PolicyPoint(1.0, 2.0), 2.0));
  CHECK(weighted_rpv(PolicyPoint(1.0, 2.0), RpvWeighting::L1Adjust) ==
        lq_index(PolicyPoint(1.0, 2.0), 1.0));
  CHECK_THAT(weighted_rpv(PolicyPoint(2.0, 10.0), RpvWeighting::AbsSurplusHybrid),
             Catch::Matchers::WithinAbs(6.4, 1e-12));
  // Every scheme vanishes at the origin.
  for (RpvWeighting s : {RpvWeighting::Unit, RpvWeighting::L2Adjust, RpvWeighting::L1Adjust,
                         RpvWeighting::TanhHybrid, RpvWeighting::AbsSurplusHybrid,
                         RpvWeighting::MaxNormAbsolute}) {
    CHECK(weighted_rpv(PolicyPoint(0.0, 0.0), s) == 0.0);
  }
}

TEST_CASE("symmetry and range properties on random points") {
  SplitMix64 rng(20240517u);
  constexpr int kPoints = 100000;
  for (int i = 0; i < kPoints; ++i) {
    const PolicyPoint x = random_point(rng);
    const double phi = rpv(x);
    CHECK(phi >= -2.0);
    CHECK(phi <= 2.0);
    CHECK(std::abs(lq_index(x, 1.5)) <= 2.0);
    CHECK(std::abs(zeta(x)) <= 2.0);

    // Swap antisymmetry and sign antisymmetry, and their composition.
    CHECK(std::abs(phi + rpv(x.p, x.c)) <= 1e-12);
    CHECK(std::abs(phi + rpv(-x.c, -x.p)) <= 1e-12);
    CHECK(std::abs(phi - rpv(-x.p, -x.c)) <= 1e-12);

    // zeta shares both antisymmetries.
    const PolicyPoint swapped(x.p, x.c);
    const PolicyPoint negated(-x.c, -x.p);
    CHECK(std::abs(zeta(x) + zeta(swapped)) <= 1e-12);
    CHECK(std::abs(zeta(x) + zeta(negated)) <= 1e-12);

    // Signed homogeneity.
    const double lambda = rng.uniform(-3.0, 3.0);
    const double sign = lambda > 0.0 ? 1.0 : (lambda < 0.0 ? -1.0 : 0.0);
    CHECK(std::abs(rpv(lambda * x.c, lambda * x.p) - sign * phi) <= 1e-12);

    // RPV and the max norm recover the surplus.
    CHECK(rel_close(phi * max_norm(x), mss(x), 1e-9));
  }
}

TEST_CASE("shortfall normalization on the right cone") {
  SplitMix64 rng(7301u);
  for (int i = 0; i < 100000; ++i) {
    const double c = rng.uniform(1e-6, 10.0);
    const double p = rng.uniform(-c, c);
    CHECK(std::abs(rpv(c, p) - (p / c - 1.0)) <= 1e-12);
  }
}

TEST_CASE("conversions agree with direct evaluation on random points") {
  SplitMix64 rng(991u);
  const double qs[] = {1.0, 1.5, 2.0, 5.0};
  for (int i = 0; i < 100000; ++i) {
    const PolicyPoint x = random_point(rng);
    const double phi = rpv(x);

    const ExtendedNonneg direct = fixed_mvpf(x);
    const ExtendedNonneg via_phi = rpv_to_fixed_mvpf(phi);
    REQUIRE(direct.tag() == via_phi.tag());
    if (direct.is_finite()) {
      CHECK(rel_close(direct.value(), via_phi.value(), 1e-9));
    }

    for (double q : qs) {
      CHECK(rel_close(rpv_to_lq(phi, q), lq_index(x, q), 1e-9));
    }
  }
}

TEST_CASE("fixed mvpf multiplicative inverse pairing") {
  SplitMix64 rng(40902u);
  for (int i = 0; i < 100000; ++i) {
    const PolicyPoint x = random_point(rng);
    const ExtendedNonneg a = fixed_mvpf(x);
    const ExtendedNonneg b = fixed_mvpf(PolicyPoint(-x.c, -x.p));
    if (a.is_infinite() || b.is_infinite()) {
      // 0 * inf = 1 by convention; inf * positive = inf would break the
      // pairing, so the partner must be zero (or the point is on an axis
      // where both members are infinite never happens).
      const ExtendedNonneg& fin = a.is_infinite() ? b : a;
      REQUIRE(fin.is_finite());
      CHECK(fin.value() == 0.0);
    } else {
      CHECK(rel_close(a.value() * b.value(), 1.0, 1e-9));
    }
  }
}

TEST_CASE("large-q index approaches the rpv") {
  for (double c = -1.0; c <= 1.0001; c += 0.05) {
    for (double p = -1.0; p <= 1.0001; p += 0.05) {
      if (std::hypot(c, p) < 1e-3) continue;
      CHECK(std::abs(lq_index(PolicyPoint(c, p), 200.0) - rpv(c, p)) <= 0.05);
    }
  }
}

TEST_CASE("zeta and rpv are distinct functions") {
  double max_gap = 0.0;
  for (double c = -1.0; c <= 1.0001; c += 0.05) {
    for (double p = -1.0; p <= 1.0001; p += 0.05) {
      max_gap = std::max(max_gap, std::abs(zeta(PolicyPoint(c, p)) - rpv(c, p)));
    }
  }
  CHECK(max_gap > 0.08);
}

TEST_CASE("neither mvpf nor rpv is convex") {
  const double m_mid = mvpf(PolicyPoint(1.5, 6.0)).value();
  const double m_avg =
      0.5 * mvpf(PolicyPoint(1.0, 2.0)).value() + 0.5 * mvpf(PolicyPoint(2.0, 10.0)).value();
  CHECK(m_mid == 4.0);
  CHECK(m_avg == 3.5);
  CHECK(m_mid > m_avg);

  const double r_mid = rpv(1.5, 6.0);
  const double r_avg = 0.5 * rpv(1.0, 2.0) + 0.5 * rpv(2.0, 10.0);
  CHECK(r_mid == 0.75);
  CHECK_THAT(r_avg, Catch::Matchers::WithinAbs(0.65, 1e-12));
  CHECK(r_mid > r_avg);
}

TEST_CASE("policy point rejects non-finite coordinates") {
  CHECK_THROWS_AS(PolicyPoint(std::nan(""), 0.0), input_error);
  CHECK_THROWS_AS(PolicyPoint(0.0, std::numeric_limits<double>::infinity()), input_error);
}
