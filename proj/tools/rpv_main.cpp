// Command-line surface: measure, aggregate, ci, simulate.
//
// Exit codes: 0 success, 2 input error (bad files or flags), 3 numeric or
// degeneracy error. All stochastic commands require an explicit --seed and
// embed (seed, B, K, method, version) in their output so any row can be
// reproduced byte for byte, independent of the worker count.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpv/aggregation.hpp"
#include "rpv/bootstrap_ci.hpp"
#include "rpv/errors.hpp"
#include "rpv/inference.hpp"
#include "rpv/io.hpp"
#include "rpv/measures.hpp"
#include "rpv/point.hpp"
#include "rpv/projection.hpp"
#include "rpv/simulation.hpp"
#include "rpv/version.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(welfare::detail::parse_double(item, 0, flag));
  }
  if (values.empty()) throw welfare::input_error(std::string(flag) + " needs at least one value");
  return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> values;
  for (double v : parse_double_list(text, flag)) values.push_back(static_cast<int>(v));
  return values;
}

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty()) return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw welfare::input_error("cannot open output file: " + path);
    stream = file.get();
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw welfare::input_error("cannot open input file: " + path);
  return in;
}

json welfare_json(const welfare::ExtendedWelfare& w) {
  switch (w.tag()) {
    case welfare::ExtendedWelfare::Tag::Finite: return {{"kind", "finite"}, {"value", w.value()}};
    case welfare::ExtendedWelfare::Tag::PositiveInfinity: return {{"kind", "infinity"}};
    case welfare::ExtendedWelfare::Tag::Undefined: return {{"kind", "undefined"}};
  }
  return {{"kind", "undefined"}};
}

json endpoint_json(double v) {
  if (v == std::numeric_limits<double>::infinity()) return {{"kind", "infinity"}};
  if (v == -std::numeric_limits<double>::infinity()) return {{"kind", "negative-infinity"}};
  return {{"kind", "finite"}, {"value", v}};
}

// RPV intervals must land in [-2, 2]; anything further out than 1e-9 is a
// hard error, smaller excursions are rounding and get clamped.
welfare::Interval check_rpv_interval(welfare::Interval iv) {
  if (iv.lo < -2.0 - 1e-9 || iv.hi > 2.0 + 1e-9) {
    throw welfare::numeric_error("RPV interval exceeds [-2, 2] beyond tolerance");
  }
  iv.lo = std::max(iv.lo, -2.0);
  iv.hi = std::min(iv.hi, 2.0);
  return iv;
}

// ---------------------------------------------------------------------------
// measure

int cmd_measure(const std::string& input, const std::string& format, const std::string& out) {
  auto in = open_input(input);
  const auto rows = welfare::read_estimates_csv(in, &std::cerr);
  OutputTarget target(out);
  if (format == "json") {
    json doc;
    doc["metadata"] = {{"command", "measure"}, {"version", welfare::version_string}};
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      const welfare::QuadrantClass qc = welfare::classify(r.estimate.point);
      doc["rows"].push_back({{"policy_id", r.policy_id},
                             {"rpv", welfare::rpv(r.estimate.point)},
                             {"mvpf", welfare_json(welfare::mvpf(r.estimate.point))},
                             {"mss_plus_one", welfare::mss(r.estimate.point) + 1.0},
                             {"quadrant", welfare::to_string(qc.subquadrant)},
                             {"band", welfare::to_string(qc.band)}});
    }
    *target.stream << doc.dump(2) << '\n';
    return 0;
  }
  *target.stream << "policy_id,rpv,mvpf,mss_plus_one,quadrant,band\n";
  for (const auto& r : rows) {
    const welfare::QuadrantClass qc = welfare::classify(r.estimate.point);
    *target.stream << r.policy_id << ',' << welfare::format_g17(welfare::rpv(r.estimate.point)) << ','
                   << welfare::render_welfare(welfare::mvpf(r.estimate.point)) << ','
                   << welfare::format_g17(welfare::mss(r.estimate.point) + 1.0) << ','
                   << welfare::to_string(qc.subquadrant) << ',' << welfare::to_string(qc.band) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// aggregate

int cmd_aggregate(const std::string& input, const std::string& mode, const std::string& scheme,
                  const std::string& weights_text, double q, const std::string& format,
                  const std::string& out) {
  auto in = open_input(input);
  const auto est_rows = welfare::read_estimates_csv(in, &std::cerr);
  std::vector<welfare::PolicyEntry> entries;
  entries.reserve(est_rows.size());
  for (const auto& r : est_rows) entries.push_back({r.policy_id, r.estimate.point});
  const auto coll = welfare::PolicyCollection::of(std::move(entries));

  std::optional<std::vector<double>> base;
  if (!weights_text.empty()) {
    base = parse_double_list(weights_text, "--weights");
    if (base->size() != coll.size()) {
      throw welfare::input_error("--weights length does not match the number of policies");
    }
  }

  double value = 0.0;
  std::optional<welfare::JpvResult> jpv_result;
  std::vector<double> weights_used;
  if (mode == "jpv") {
    const auto lambda =
        base ? welfare::WeightVector::of(*base, welfare::WeightKind::Scaling)
             : welfare::WeightVector::equal(coll.size(), welfare::WeightKind::Scaling,
                                        1.0 / static_cast<double>(coll.size()));
    jpv_result = welfare::jpv(coll, lambda);
    value = jpv_result->value;
    weights_used = lambda.values;
  } else if (mode == "tpv") {
    welfare::WeightVector w = welfare::WeightVector::equal(coll.size(), welfare::WeightKind::Importance,
                                                   1.0 / static_cast<double>(coll.size()));
    if (scheme == "equal") {
      if (base) throw welfare::input_error("--scheme equal does not take --weights");
    } else if (scheme == "raw") {
      if (!base) throw welfare::input_error("--scheme raw requires --weights");
      w = welfare::WeightVector::of(*base, welfare::WeightKind::Importance);
    } else if (scheme == "simplex") {
      w = welfare::make_weights(coll, welfare::WeightScheme::Simplex, base);
    } else if (scheme == "mss-scaled") {
      w = welfare::make_weights(coll, welfare::WeightScheme::MssScaled, base);
    } else if (scheme == "lq") {
      w = welfare::make_weights(coll, welfare::WeightScheme::LqAdjust, base, q);
    } else if (scheme == "surplus-prop") {
      w = welfare::make_weights(coll, welfare::WeightScheme::SurplusProportional, base);
    } else if (scheme == "cost-prop") {
      w = welfare::make_weights(coll, welfare::WeightScheme::CostProportional, base);
    } else {
      throw welfare::input_error("unknown --scheme: " + scheme);
    }
    value = welfare::tpv(coll, w);
    weights_used = w.values;
  } else {
    throw welfare::input_error("--mode must be jpv or tpv");
  }

  OutputTarget target(out);
  if (format == "json") {
    json doc;
    doc["metadata"] = {{"command", "aggregate"},
                       {"mode", mode},
                       {"scheme", mode == "jpv" ? "scaling" : scheme},
                       {"version", welfare::version_string}};
    doc["weights"] = weights_used;
    doc["value"] = value;
    if (jpv_result) {
      doc["aggregate"] = {{"c", jpv_result->aggregate.c},
                          {"p", jpv_result->aggregate.p},
                          {"max_norm", jpv_result->aggregate_max_norm}};
    }
    *target.stream << doc.dump(2) << '\n';
    return 0;
  }
  *target.stream << "mode,scheme,value,aggregate_c,aggregate_p,aggregate_max_norm,weights\n";
  *target.stream << mode << ',' << (mode == "jpv" ? "scaling" : scheme) << ','
                 << welfare::format_g17(value) << ',';
  if (jpv_result) {
    *target.stream << welfare::format_g17(jpv_result->aggregate.c) << ','
                   << welfare::format_g17(jpv_result->aggregate.p) << ','
                   << welfare::format_g17(jpv_result->aggregate_max_norm);
  } else {
    *target.stream << ",,";
  }
  *target.stream << ',';
  for (std::size_t i = 0; i < weights_used.size(); ++i) {
    if (i) *target.stream << ';';
    *target.stream << welfare::format_g17(weights_used[i]);
  }
  *target.stream << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// ci

struct CiRow {
  std::string policy_id;
  std::string point_text;  // RPV value, or MVPF rendering for efron
  json point_json;
  std::string lo, hi;
  json lo_json, hi_json;
  std::string uniform_lo, uniform_hi;  // populated for minimalist methods
  std::string critical_value;          // d or t where applicable
  std::string dropped;                 // undefined MVPF draws removed (efron)
  std::string root_source;
};

struct CiInputs {
  welfare::PolicyEstimate estimate;
  std::optional<welfare::ResampleSet> resamples;
  std::optional<welfare::Sample> sample;
  std::string root_source;
};

CiRow run_ci_method(const std::string& policy_id, const CiInputs& inputs,
                    const std::string& method, double alpha, int boot, int proj_draws,
                    std::uint64_t policy_seed) {
  CiRow row;
  row.policy_id = policy_id;
  row.root_source = inputs.root_source;
  const auto& est = inputs.estimate;

  const auto set_rpv_interval = [&row](const welfare::Interval& iv) {
    const welfare::Interval checked = check_rpv_interval(iv);
    row.lo = welfare::format_g17(checked.lo);
    row.hi = welfare::format_g17(checked.hi);
    row.lo_json = checked.lo;
    row.hi_json = checked.hi;
  };

  const auto need_resamples = [&]() -> const welfare::ResampleSet& {
    if (!inputs.resamples) {
      throw welfare::input_error("method '" + method + "' needs resamples (or raw samples)");
    }
    return *inputs.resamples;
  };

  if (method != "efron") {
    row.point_text = welfare::format_g17(welfare::rpv(est.point));
    row.point_json = welfare::rpv(est.point);
  }

  if (method == "percentile") {
    set_rpv_interval(welfare::percentile_ci_rpv(need_resamples(), alpha));
    return row;
  }
  if (method == "efron") {
    const welfare::ExtendedWelfare point = welfare::mvpf(est.point);
    row.point_text = welfare::render_welfare(point);
    row.point_json = welfare_json(point);
    const welfare::ExtendedInterval iv = welfare::efron_bc_ci(need_resamples(), est, alpha);
    row.lo = welfare::render_extended_endpoint(iv.lo);
    row.hi = welfare::render_extended_endpoint(iv.hi);
    row.lo_json = endpoint_json(iv.lo);
    row.hi_json = endpoint_json(iv.hi);
    row.dropped = std::to_string(iv.dropped_undefined);
    return row;
  }

  // Region-based methods need a critical value.
  const bool rect = method == "uniform-rect" || method == "minimalist-rect";
  const bool minimalist = method == "minimalist-rect" || method == "minimalist-ellipse";
  if (!rect && method != "uniform-ellipse" && method != "minimalist-ellipse") {
    throw welfare::input_error("unknown --method: " + method);
  }

  double crit = 0.0;
  if (inputs.sample) {
    crit = rect ? welfare::critical_value_rect(*inputs.sample, alpha, boot,
                                           welfare::derive_seed(policy_seed, 1))
                : welfare::critical_value_ellipse(*inputs.sample, alpha, boot,
                                              welfare::derive_seed(policy_seed, 1));
  } else if (inputs.resamples) {
    crit = rect ? welfare::critical_value_rect(est, *inputs.resamples, alpha)
                : welfare::critical_value_ellipse(est, *inputs.resamples, alpha);
  } else {
    crit = rect ? welfare::critical_value_rect_gaussian({est}, alpha, boot,
                                                    welfare::derive_seed(policy_seed, 1))
                : welfare::critical_value_ellipse_gaussian({est}, alpha, boot,
                                                       welfare::derive_seed(policy_seed, 1));
  }
  row.critical_value = welfare::format_g17(crit);

  const std::uint64_t proj_seed = welfare::derive_seed(policy_seed, 2);
  if (minimalist) {
    const auto& rs = need_resamples();
    const auto pair =
        rect ? welfare::project_rpv_with_minimalist(welfare::rect_region(est, crit), rs, proj_draws,
                                                proj_seed)
             : welfare::project_rpv_with_minimalist(welfare::ellipse_region(est, crit), rs, proj_draws,
                                                proj_seed);
    set_rpv_interval(pair.minimalist);
    const welfare::Interval uni = check_rpv_interval(pair.uniform);
    row.uniform_lo = welfare::format_g17(uni.lo);
    row.uniform_hi = welfare::format_g17(uni.hi);
    return row;
  }
  const welfare::Interval uni =
      rect ? welfare::project_rpv_rect(welfare::rect_region(est, crit), proj_draws, proj_seed)
           : welfare::project_rpv_ellipse(welfare::ellipse_region(est, crit), proj_draws, proj_seed);
  set_rpv_interval(uni);
  return row;
}

int cmd_ci(const std::string& samples_path, const std::string& estimates_path,
           const std::string& resamples_path, const std::string& method, double alpha, int boot,
           int proj_draws, std::uint64_t seed, const std::string& format,
           const std::string& out) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw welfare::input_error("--alpha must lie in (0, 1)");
  if (samples_path.empty() == estimates_path.empty()) {
    throw welfare::input_error("provide exactly one of --samples or --estimates");
  }
  if (!resamples_path.empty() && estimates_path.empty()) {
    throw welfare::input_error("--resamples requires --estimates");
  }

  std::vector<std::pair<std::string, CiInputs>> policies;
  if (!samples_path.empty()) {
    auto in = open_input(samples_path);
    for (auto& sample : welfare::read_samples_csv(in)) {
      const std::string id = sample.policy_id;
      CiInputs ci;
      ci.estimate = welfare::estimate_from_sample(sample);
      ci.resamples = welfare::bootstrap_resample(
          sample, boot, welfare::derive_seed(seed, policies.size(), 101));
      ci.sample = std::move(sample);
      ci.root_source = "bootstrap";
      policies.emplace_back(id, std::move(ci));
    }
  } else {
    auto in = open_input(estimates_path);
    const auto rows = welfare::read_estimates_csv(in, &std::cerr);
    std::vector<welfare::ResampleSet> sets;
    if (!resamples_path.empty()) {
      auto rin = open_input(resamples_path);
      sets = welfare::read_resamples_csv(rin);
    }
    for (const auto& r : rows) {
      CiInputs ci;
      ci.estimate = r.estimate;
      ci.root_source = "gaussian";
      for (auto& s : sets) {
        if (s.policy_id == r.policy_id) {
          ci.resamples = s;
          ci.root_source = "resamples";
          break;
        }
      }
      if (!resamples_path.empty() && !ci.resamples) {
        throw welfare::input_error("no resamples found for policy '" + r.policy_id + "'");
      }
      policies.emplace_back(r.policy_id, std::move(ci));
    }
  }

  std::vector<CiRow> rows;
  rows.reserve(policies.size());
  for (std::size_t i = 0; i < policies.size(); ++i) {
    rows.push_back(run_ci_method(policies[i].first, policies[i].second, method, alpha, boot,
                                 proj_draws, welfare::derive_seed(seed, i)));
  }

  OutputTarget target(out);
  if (format == "json") {
    json doc;
    doc["metadata"] = {{"command", "ci"},       {"method", method},
                       {"alpha", alpha},        {"boot", boot},
                       {"proj_draws", proj_draws}, {"seed", seed},
                       {"version", welfare::version_string}};
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      json jr = {{"policy_id", r.policy_id}, {"point", r.point_json},
                 {"lo", r.lo_json},          {"hi", r.hi_json},
                 {"root_source", r.root_source}};
      if (!r.critical_value.empty()) jr["critical_value"] = std::stod(r.critical_value);
      if (!r.uniform_lo.empty()) {
        jr["uniform_lo"] = std::stod(r.uniform_lo);
        jr["uniform_hi"] = std::stod(r.uniform_hi);
      }
      if (!r.dropped.empty()) jr["dropped_undefined"] = std::stol(r.dropped);
      doc["rows"].push_back(jr);
    }
    *target.stream << doc.dump(2) << '\n';
    return 0;
  }
  *target.stream << "policy_id,method,point,lo,hi,uniform_lo,uniform_hi,critical_value,"
                    "dropped_undefined,alpha,boot,proj_draws,seed,root_source,version\n";
  for (const auto& r : rows) {
    *target.stream << r.policy_id << ',' << method << ',' << r.point_text << ',' << r.lo << ','
                   << r.hi << ',' << r.uniform_lo << ',' << r.uniform_hi << ','
                   << r.critical_value << ',' << r.dropped << ',' << welfare::format_g17(alpha)
                   << ',' << boot << ',' << proj_draws << ',' << seed << ',' << r.root_source
                   << ',' << welfare::version_string << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(long reps, const std::string& n_text, double alpha, std::uint64_t seed,
                 int boot, int proj_draws, const std::string& cov_text, int bins,
                 const std::string& bins_maxnorm_text, const std::string& bins_absrpv_text,
                 const std::string& format, const std::string& out) {
  welfare::StudyConfig cfg;
  cfg.reps = reps;
  cfg.n_values = parse_int_list(n_text, "--n");
  cfg.alpha = alpha;
  cfg.seed = seed;
  cfg.bootstrap_draws = boot;
  cfg.boundary_draws = proj_draws;
  if (!cov_text.empty()) {
    const auto v = parse_double_list(cov_text, "--cov");
    if (v.size() != 3) throw welfare::input_error("--cov needs cc,cp,pp");
    cfg.true_cov = welfare::Sym2{v[0], v[1], v[2]};
  }
  const auto equal_edges = [](int k, double hi) {
    std::vector<double> edges;
    for (int i = 0; i <= k; ++i) edges.push_back(hi * static_cast<double>(i) / k);
    return edges;
  };
  if (bins > 0) {
    cfg.bin_edges_maxnorm = equal_edges(bins, 1.0);
    cfg.bin_edges_absrpv = equal_edges(bins, 2.0);
  }
  if (!bins_maxnorm_text.empty()) {
    cfg.bin_edges_maxnorm = parse_double_list(bins_maxnorm_text, "--bins-maxnorm");
  }
  if (!bins_absrpv_text.empty()) {
    cfg.bin_edges_absrpv = parse_double_list(bins_absrpv_text, "--bins-absrpv");
  }

  const welfare::CoverageReport report = welfare::run_coverage_study(cfg);

  OutputTarget target(out);
  if (format == "json") {
    json doc;
    doc["metadata"] = {{"command", "simulate"},
                       {"reps", cfg.reps},
                       {"alpha", cfg.alpha},
                       {"boot", cfg.bootstrap_draws},
                       {"proj_draws", cfg.boundary_draws},
                       {"seed", cfg.seed},
                       {"redrawn_truths", report.redraws},
                       {"rejected_reps", report.rejected},
                       {"version", welfare::version_string}};
    doc["rows"] = json::array();
    for (welfare::StudyAxis axis : {welfare::StudyAxis::MaxNorm, welfare::StudyAxis::AbsRpv}) {
      for (const auto& r : welfare::summarize(report, axis)) {
        doc["rows"].push_back({{"axis", welfare::to_string(axis)},
                               {"method", welfare::to_string(r.method)},
                               {"n", r.n},
                               {"bin_lo", r.bin_lo},
                               {"bin_hi", r.bin_hi},
                               {"bin_center", r.bin_center},
                               {"rep_count", r.rep_count},
                               {"coverage", r.coverage},
                               {"mean_width", r.mean_width}});
      }
    }
    *target.stream << doc.dump(2) << '\n';
    return 0;
  }
  *target.stream << "axis,method,n,bin_lo,bin_hi,bin_center,rep_count,coverage,mean_width,"
                    "reps,alpha,boot,proj_draws,seed,redrawn_truths,rejected_reps,version\n";
  for (welfare::StudyAxis axis : {welfare::StudyAxis::MaxNorm, welfare::StudyAxis::AbsRpv}) {
    for (const auto& r : welfare::summarize(report, axis)) {
      *target.stream << welfare::to_string(axis) << ',' << welfare::to_string(r.method) << ',' << r.n
                     << ',' << welfare::format_g17(r.bin_lo) << ',' << welfare::format_g17(r.bin_hi)
                     << ',' << welfare::format_g17(r.bin_center) << ',' << r.rep_count << ','
                     << welfare::format_g17(r.coverage) << ',' << welfare::format_g17(r.mean_width)
                     << ',' << cfg.reps << ',' << welfare::format_g17(cfg.alpha) << ','
                     << cfg.bootstrap_draws << ',' << cfg.boundary_draws << ',' << cfg.seed
                     << ',' << report.redraws << ',' << report.rejected << ','
                     << welfare::version_string << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Welfare measures, aggregation, and uniformly valid inference for (c, p) policy estimates"};
  app.require_subcommand(1);

  std::string input, out, format = "csv";
  std::string samples_path, estimates_path, resamples_path;
  std::string mode, scheme = "equal", weights_text, method;
  std::string n_text = "100", cov_text, bins_maxnorm_text, bins_absrpv_text;
  double alpha = 0.05, q = 2.0;
  long reps = 2000;
  int boot = 1000, proj_draws = 100000, sim_proj_draws = 10000, bins = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* measure = app.add_subcommand("measure", "Per-policy welfare measures from an estimates file");
  measure->add_option("--input", input, "estimates CSV")->required();
  measure->add_option("--format", format, "csv or json");
  measure->add_option("--out", out, "output path (default stdout)");

  auto* aggregate = app.add_subcommand("aggregate", "Joint or total policy value of a collection");
  aggregate->add_option("--input", input, "estimates CSV")->required();
  aggregate->add_option("--mode", mode, "jpv or tpv")->required();
  aggregate->add_option("--scheme", scheme,
                        "tpv weights: equal, raw, simplex, mss-scaled, lq, surplus-prop, cost-prop");
  aggregate->add_option("--weights", weights_text, "comma-separated weights / base weights");
  aggregate->add_option("--q", q, "norm order for --scheme lq");
  aggregate->add_option("--format", format, "csv or json");
  aggregate->add_option("--out", out, "output path (default stdout)");

  auto* ci = app.add_subcommand("ci", "Confidence intervals for per-policy RPV (or MVPF)");
  ci->add_option("--samples", samples_path, "raw samples CSV (policy_id,c,p)");
  ci->add_option("--estimates", estimates_path, "estimates CSV");
  ci->add_option("--resamples", resamples_path, "resampled estimates CSV");
  ci->add_option("--method", method,
                 "uniform-rect, uniform-ellipse, minimalist-rect, minimalist-ellipse, "
                 "percentile, efron")
      ->required();
  ci->add_option("--alpha", alpha, "significance level (default 0.05)");
  ci->add_option("--boot", boot, "bootstrap draws B (default 1000)");
  ci->add_option("--proj-draws", proj_draws, "boundary draws K (default 100000)");
  auto* ci_seed = ci->add_option("--seed", seed, "RNG seed (required)");
  ci->add_option("--format", format, "csv or json");
  ci->add_option("--out", out, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Coverage/width study of the six CI methods");
  simulate->add_option("--reps", reps, "replications per sample size (default 2000)");
  simulate->add_option("--n", n_text, "comma-separated sample sizes (default 100)");
  simulate->add_option("--alpha", alpha, "significance level (default 0.05)");
  auto* sim_seed = simulate->add_option("--seed", seed, "RNG seed (required)");
  simulate->add_option("--boot", boot, "bootstrap draws B (default 1000)");
  simulate->add_option("--proj-draws", sim_proj_draws,
                       "boundary draws K per projection (default 10000)");
  simulate->add_option("--cov", cov_text, "true covariance cc,cp,pp (default 20,-10,20)");
  simulate->add_option("--bins", bins, "equal bins per axis");
  simulate->add_option("--bins-maxnorm", bins_maxnorm_text, "explicit max-norm bin edges");
  simulate->add_option("--bins-absrpv", bins_absrpv_text, "explicit |rpv| bin edges");
  simulate->add_option("--format", format, "csv or json");
  simulate->add_option("--out", out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
    seed_set = (ci_seed->count() > 0) || (sim_seed->count() > 0);
    if (format != "csv" && format != "json") {
      throw welfare::input_error("--format must be csv or json");
    }
    if (measure->parsed()) return cmd_measure(input, format, out);
    if (aggregate->parsed()) {
      return cmd_aggregate(input, mode, scheme, weights_text, q, format, out);
    }
    if (ci->parsed()) {
      if (!seed_set) throw welfare::input_error("--seed is required for ci");
      if (proj_draws < 1000) throw welfare::input_error("--proj-draws must be at least 1000");
      return cmd_ci(samples_path, estimates_path, resamples_path, method, alpha, boot,
                    proj_draws, seed, format, out);
    }
    if (simulate->parsed()) {
      if (!seed_set) throw welfare::input_error("--seed is required for simulate");
      return cmd_simulate(reps, n_text, alpha, seed, boot, sim_proj_draws, cov_text, bins,
                          bins_maxnorm_text, bins_absrpv_text, format, out);
    }
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const welfare::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
