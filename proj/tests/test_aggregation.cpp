#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>

#include "rpv/aggregation.hpp"
#include "rpv/io.hpp"
#include "rpv/measures.hpp"
#include "rpv/rng.hpp"

using namespace welfare;

namespace {

PolicyCollection load_fixture(const std::string& name) {
  std::ifstream in(std::string(RPV_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::vector<PolicyEntry> entries;
  for (const auto& row : read_estimates_csv(in)) {
    entries.push_back({row.policy_id, row.estimate.point});
  }
  return PolicyCollection::of(std::move(entries));
}

WeightVector equal_scaling(std::size_t n) {
  return WeightVector::equal(n, WeightKind::Scaling, 1.0 / static_cast<double>(n));
}
WeightVector equal_importance(std::size_t n) {
  return WeightVector::equal(n, WeightKind::Importance, 1.0 / static_cast<double>(n));
}

}  // namespace

TEST_CASE("college adult collections reproduce the published aggregates") {
  const PolicyCollection l1 = load_fixture("college_adult_l1.csv");
  const PolicyCollection l2 = load_fixture("college_adult_l2.csv");
  REQUIRE(l1.size() == 8);
  REQUIRE(l2.size() == 8);

  const JpvResult j1 = jpv(l1, equal_scaling(8));
  CHECK_THAT(j1.value, Catch::Matchers::WithinAbs(-1.18, 0.01));
  CHECK_THAT(j1.aggregate.c, Catch::Matchers::WithinAbs(0.48, 0.01));
  CHECK_THAT(j1.aggregate.p, Catch::Matchers::WithinAbs(-2.68, 0.01));
  CHECK_THAT(mvpf(j1.aggregate).value(), Catch::Matchers::WithinAbs(-5.59, 0.01));

  // Rescaling one member leaves the TPV alone but flips the JPV sign: the
  // aggregate point migrates into the second quadrant.
  const JpvResult j2 = jpv(l2, equal_scaling(8));
  CHECK_THAT(j2.value, Catch::Matchers::WithinAbs(1.03, 0.01));
  CHECK_THAT(j2.aggregate.c, Catch::Matchers::WithinAbs(-0.07, 0.01));
  CHECK_THAT(j2.aggregate.p, Catch::Matchers::WithinAbs(2.14, 0.01));
  CHECK(mvpf(j2.aggregate).is_infinite());

  CHECK_THAT(tpv(l1, equal_importance(8)), Catch::Matchers::WithinAbs(0.48, 0.01));
  CHECK_THAT(tpv(l2, equal_importance(8)), Catch::Matchers::WithinAbs(0.48, 0.01));
}

TEST_CASE("per-policy fixture rows reproduce the published measures") {
  const PolicyCollection l1 = load_fixture("college_adult_l1.csv");
  struct Expected {
    const char* id;
    double mss_plus_one, mvpf_value, rpv_value;
    bool infinite;
  };
  const Expected expected[] = {
      {"aotc_si", 5.83, 10.05, 0.90, false},
      {"hope_credit", 5.85, 12.58, 0.92, false},
      {"hope_llc", -46.68, -8.81, -1.11, false},
      {"adult_pell", 2.85, 2.18, 0.54, false},
      {"tuition_deduction_je", 0.71, 0.77, -0.23, false},
      {"tuition_deduction_js", -0.41, -0.02, -1.02, false},
      {"tuition_deduction_se", 3.13, 0.0, 1.89, true},
      {"tuition_deduction_ss", 11.47, 0.0, 1.95, true},
  };
  for (std::size_t i = 0; i < l1.size(); ++i) {
    const auto& entry = l1.entries[i];
    const Expected& e = expected[i];
    INFO(entry.policy_id);
    REQUIRE(entry.policy_id == e.id);
    CHECK_THAT(mss(entry.point) + 1.0, Catch::Matchers::WithinAbs(e.mss_plus_one, 0.01));
    CHECK_THAT(rpv(entry.point), Catch::Matchers::WithinAbs(e.rpv_value, 0.01));
    const ExtendedWelfare m = mvpf(entry.point);
    if (e.infinite) {
      CHECK(m.is_infinite());
    } else {
      CHECK_THAT(m.value(), Catch::Matchers::WithinAbs(e.mvpf_value, 0.01));
    }
  }
}

TEST_CASE("tax-credit pair aggregation endpoints") {
  const PolicyCollection pair = load_fixture("htc_pair.csv");
  REQUIRE(pair.size() == 2);

  // Importance weight w on the single filers, 1 - w on the joint filers.
  CHECK_THAT(tpv(pair, WeightVector::of({0.0, 1.0}, WeightKind::Importance)),
             Catch::Matchers::WithinAbs(1.17, 0.01));
  CHECK_THAT(tpv(pair, WeightVector::of({1.0, 0.0}, WeightKind::Importance)),
             Catch::Matchers::WithinAbs(-1.61, 0.01));

  // Surplus-scaled weights turn the TPV into a weighted MSS sum.
  const WeightVector w0 = make_weights(pair, WeightScheme::MssScaled,
                                       std::vector<double>{0.0, 1.0});
  CHECK_THAT(tpv(pair, w0), Catch::Matchers::WithinAbs(21.56, 0.01));
  const WeightVector w1 = make_weights(pair, WeightScheme::MssScaled,
                                       std::vector<double>{1.0, 0.0});
  CHECK_THAT(tpv(pair, w1), Catch::Matchers::WithinAbs(-3.07, 0.01));
}

TEST_CASE("jpv collapses to rpv for a single policy") {
  const auto coll = PolicyCollection::of({{"solo", PolicyPoint(1.3, -0.4)}});
  const JpvResult r = jpv(coll, WeightVector::of({1.0}, WeightKind::Scaling));
  CHECK(r.value == rpv(1.3, -0.4));
  CHECK(r.aggregate == PolicyPoint(1.3, -0.4));
  CHECK(tpv(coll, WeightVector::of({1.0}, WeightKind::Importance)) == rpv(1.3, -0.4));
}

TEST_CASE("welfare-balanced pairs aggregate to zero both ways") {
  SplitMix64 rng(5150u);
  for (int i = 0; i < 2000; ++i) {
    const double c = rng.uniform(-5.0, 5.0);
    const double p = rng.uniform(-5.0, 5.0);
    const auto unit = WeightVector::of({1.0, 1.0}, WeightKind::Importance);
    const auto unit_scaling = WeightVector::of({1.0, 1.0}, WeightKind::Scaling);

    const auto swapped =
        PolicyCollection::of({{"a", PolicyPoint(c, p)}, {"b", PolicyPoint(p, c)}});
    CHECK(std::abs(tpv(swapped, unit)) <= 1e-12);
    CHECK(std::abs(jpv(swapped, unit_scaling).value) <= 1e-12);

    const auto negated =
        PolicyCollection::of({{"a", PolicyPoint(c, p)}, {"b", PolicyPoint(-c, -p)}});
    CHECK(std::abs(tpv(negated, unit)) <= 1e-12);
    CHECK(std::abs(jpv(negated, unit_scaling).value) <= 1e-12);
  }
}

TEST_CASE("tpv with zero weights is zero") {
  const auto coll =
      PolicyCollection::of({{"a", PolicyPoint(1.0, 2.0)}, {"b", PolicyPoint(-3.0, 0.5)}});
  CHECK(tpv(coll, WeightVector::of({0.0, 0.0}, WeightKind::Importance)) == 0.0);
}

TEST_CASE("weight schemes") {
  const auto coll =
      PolicyCollection::of({{"a", PolicyPoint(1.0, 2.0)}, {"b", PolicyPoint(0.0, 0.0)}});

  const WeightVector simplex = make_weights(coll, WeightScheme::Simplex);
  CHECK(simplex.values == std::vector<double>{0.5, 0.5});

  const WeightVector surplus = make_weights(coll, WeightScheme::SurplusProportional);
  CHECK(surplus.values == std::vector<double>{1.0, 0.0});

  const WeightVector cost = make_weights(coll, WeightScheme::CostProportional);
  CHECK(cost.values == std::vector<double>{1.0, 0.0});

  const auto degenerate =
      PolicyCollection::of({{"a", PolicyPoint(1.0, 1.0)}, {"b", PolicyPoint(-2.0, -2.0)}});
  CHECK_THROWS_AS(make_weights(degenerate, WeightScheme::SurplusProportional), numeric_error);
  const auto zero_cost =
      PolicyCollection::of({{"a", PolicyPoint(0.0, 1.0)}, {"b", PolicyPoint(0.0, -2.0)}});
  CHECK_THROWS_AS(make_weights(zero_cost, WeightScheme::CostProportional), numeric_error);
}

TEST_CASE("simplex tpv stays in range and mss-scaled tpv matches surplus sums") {
  SplitMix64 rng(777u);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<PolicyEntry> entries;
    const int n = 2 + static_cast<int>(rng.index(6));
    std::vector<double> base;
    for (int i = 0; i < n; ++i) {
      entries.push_back({"p" + std::to_string(i),
                         PolicyPoint(rng.uniform(-4.0, 4.0), rng.uniform(-4.0, 4.0))});
      base.push_back(rng.uniform(0.0, 2.0));
    }
    const auto coll = PolicyCollection::of(std::move(entries));

    const double simplex_tpv = tpv(coll, make_weights(coll, WeightScheme::Simplex, base));
    CHECK(simplex_tpv >= -2.0 - 1e-12);
    CHECK(simplex_tpv <= 2.0 + 1e-12);

    const double scaled = tpv(coll, make_weights(coll, WeightScheme::MssScaled, base));
    double expected = 0.0;
    for (std::size_t i = 0; i < coll.size(); ++i) expected += base[i] * mss(coll.entries[i].point);
    const double tol = 1e-9 * std::max({std::abs(scaled), std::abs(expected), 1.0});
    CHECK(std::abs(scaled - expected) <= tol);
  }
}

TEST_CASE("lq-adjusted weights average the lq indices") {
  const auto coll = PolicyCollection::of(
      {{"a", PolicyPoint(1.0, 2.0)}, {"b", PolicyPoint(-0.5, 1.25)}, {"c", PolicyPoint(2.0, -0.3)}});
  const double q = 2.0;
  const WeightVector w = make_weights(coll, WeightScheme::LqAdjust, std::nullopt, q);
  double expected = 0.0;
  for (const auto& e : coll.entries) expected += lq_index(e.point, q) / 3.0;
  CHECK_THAT(tpv(coll, w), Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("jpv is invariant to rescaling the whole weight vector") {
  const auto coll =
      PolicyCollection::of({{"a", PolicyPoint(1.0, 2.0)}, {"b", PolicyPoint(3.0, -1.0)}});
  const JpvResult a = jpv(coll, WeightVector::of({0.25, 0.75}, WeightKind::Scaling));
  const JpvResult b = jpv(coll, WeightVector::of({1.0, 3.0}, WeightKind::Scaling));
  CHECK_THAT(a.value, Catch::Matchers::WithinAbs(b.value, 1e-12));
}

TEST_CASE("tpv linear path") {
  const PolicyCollection pair = load_fixture("htc_pair.csv");
  const auto path = tpv_linear_path(pair, 3);
  REQUIRE(path.size() == 3);
  CHECK(path[0].first == 0.0);
  CHECK_THAT(path[0].second, Catch::Matchers::WithinAbs(1.17, 0.01));
  CHECK(path[2].first == 1.0);
  CHECK_THAT(path[2].second, Catch::Matchers::WithinAbs(-1.61, 0.01));
  // Affine in w: the midpoint is the average of the endpoints.
  CHECK_THAT(path[1].second,
             Catch::Matchers::WithinAbs(0.5 * (path[0].second + path[2].second), 1e-12));

  const auto identical =
      PolicyCollection::of({{"a", PolicyPoint(1.0, 2.0)}, {"b", PolicyPoint(1.0, 2.0)}});
  for (const auto& [w, value] : tpv_linear_path(identical, 5)) {
    CHECK_THAT(value, Catch::Matchers::WithinAbs(rpv(1.0, 2.0), 1e-12));
  }

  const auto two = tpv_linear_path(identical, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].first == 0.0);
  CHECK(two[1].first == 1.0);

  const auto triple = PolicyCollection::of(
      {{"a", PolicyPoint(1.0, 2.0)}, {"b", PolicyPoint(1.0, 2.0)}, {"c", PolicyPoint(0.0, 1.0)}});
  CHECK_THROWS_AS(tpv_linear_path(triple, 3), input_error);
}

TEST_CASE("collection and weight validation") {
  CHECK_THROWS_AS(PolicyCollection::of({}), input_error);
  CHECK_THROWS_AS(
      PolicyCollection::of({{"a", PolicyPoint(1, 1)}, {"a", PolicyPoint(2, 2)}}), input_error);
  CHECK_THROWS_AS(WeightVector::of({-0.5}, WeightKind::Importance), input_error);
  const auto coll = PolicyCollection::of({{"a", PolicyPoint(1, 1)}});
  CHECK_THROWS_AS(tpv(coll, WeightVector::of({0.5, 0.5}, WeightKind::Importance)), input_error);
}
