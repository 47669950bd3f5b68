#pragma once

// File formats. All files are UTF-8 CSV with a required header, '.' decimal
// points, and strict numeric parsing. Doubles are written with 17
// significant digits so that emitting and re-ingesting a file reproduces
// the exact bit patterns.

#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rpv/errors.hpp"
#include "rpv/inference.hpp"
#include "rpv/point.hpp"

namespace welfare {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field.push_back(ch);
    }
  }
  fields.push_back(field);
  return fields;
}

inline double parse_double(std::string_view s, std::size_t line_no, const char* column) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw input_error("line " + std::to_string(line_no) + ": cannot parse " + column +
                      " value '" + std::string(s) + "'");
  }
  return v;
}

inline long parse_long(std::string_view s, std::size_t line_no, const char* column) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw input_error("line " + std::to_string(line_no) + ": cannot parse " + column +
                      " value '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

struct EstimateRow {
  std::string policy_id;
  PolicyEstimate estimate;
  bool rho_defaulted = false;
};

// Reads `policy_id,c_hat,p_hat,se_c,se_p,rho[,n]`. A missing rho column or
// an empty rho field defaults to 0 with a warning on `warnings`.
inline std::vector<EstimateRow> read_estimates_csv(std::istream& in,
                                                   std::ostream* warnings = nullptr) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("estimates file is empty");
  const auto header = detail::split_csv_line(line);
  const std::vector<std::string> required = {"policy_id", "c_hat", "p_hat", "se_c", "se_p"};
  if (header.size() < required.size()) throw input_error("estimates header is incomplete");
  for (std::size_t i = 0; i < required.size(); ++i) {
    if (header[i] != required[i]) {
      throw input_error("estimates header column " + std::to_string(i + 1) + " must be '" +
                        required[i] + "', got '" + header[i] + "'");
    }
  }
  bool has_rho = header.size() > 5 && header[5] == "rho";
  bool has_n = false;
  if (has_rho) {
    has_n = header.size() > 6 && header[6] == "n";
    if (header.size() > (has_n ? 7u : 6u)) throw input_error("estimates header has extra columns");
  } else if (header.size() > 5) {
    throw input_error("estimates header column 6 must be 'rho', got '" + header[5] + "'");
  }

  std::vector<EstimateRow> rows;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    const std::size_t expected = 5 + (has_rho ? 1 : 0) + (has_n ? 1 : 0);
    if (fields.size() != expected) {
      throw input_error("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expected) + " fields, got " +
                        std::to_string(fields.size()));
    }
    EstimateRow row;
    row.policy_id = fields[0];
    if (row.policy_id.empty()) {
      throw input_error("line " + std::to_string(line_no) + ": empty policy_id");
    }
    if (auto [it, inserted] = seen.emplace(row.policy_id, line_no); !inserted) {
      throw input_error("line " + std::to_string(line_no) + ": duplicate policy_id '" +
                        row.policy_id + "' (first seen on line " + std::to_string(it->second) +
                        ")");
    }
    const double c = detail::parse_double(fields[1], line_no, "c_hat");
    const double p = detail::parse_double(fields[2], line_no, "p_hat");
    const double se_c = detail::parse_double(fields[3], line_no, "se_c");
    const double se_p = detail::parse_double(fields[4], line_no, "se_p");
    double rho = 0.0;
    if (has_rho && !fields[5].empty()) {
      rho = detail::parse_double(fields[5], line_no, "rho");
    } else {
      row.rho_defaulted = true;
      if (warnings) {
        *warnings << "warning: line " << line_no << ": rho missing for '" << row.policy_id
                  << "', defaulting to 0\n";
      }
    }
    std::optional<long> n;
    if (has_n && !fields[6].empty()) n = detail::parse_long(fields[6], line_no, "n");
    try {
      row.estimate = PolicyEstimate::of(PolicyPoint(c, p), se_c, se_p, rho, n);
    } catch (const input_error& e) {
      throw input_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error("estimates file has no data rows");
  return rows;
}

inline void write_estimates_csv(std::ostream& out, const std::vector<EstimateRow>& rows) {
  out << "policy_id,c_hat,p_hat,se_c,se_p,rho,n\n";
  for (const auto& r : rows) {
    out << r.policy_id << ',' << format_g17(r.estimate.point.c) << ','
        << format_g17(r.estimate.point.p) << ',' << format_g17(r.estimate.se_c) << ','
        << format_g17(r.estimate.se_p) << ',' << format_g17(r.estimate.rho) << ',';
    if (r.estimate.n) out << *r.estimate.n;
    out << '\n';
  }
}

// Reads `policy_id,c,p` rows of raw draws, grouped by policy in first-seen
// order.
inline std::vector<Sample> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("samples file is empty");
  const auto header = detail::split_csv_line(line);
  if (header.size() != 3 || header[0] != "policy_id" || header[1] != "c" || header[2] != "p") {
    throw input_error("samples header must be 'policy_id,c,p'");
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<PolicyPoint>> grouped;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 3) {
      throw input_error("line " + std::to_string(line_no) + ": expected 3 fields");
    }
    if (fields[0].empty()) {
      throw input_error("line " + std::to_string(line_no) + ": empty policy_id");
    }
    auto [it, inserted] = grouped.try_emplace(fields[0]);
    if (inserted) order.push_back(fields[0]);
    it->second.emplace_back(detail::parse_double(fields[1], line_no, "c"),
                            detail::parse_double(fields[2], line_no, "p"));
  }
  std::vector<Sample> samples;
  samples.reserve(order.size());
  for (const auto& id : order) {
    try {
      samples.push_back(Sample::of(id, std::move(grouped[id])));
    } catch (const std::exception& e) {
      throw input_error("policy '" + id + "': " + e.what());
    }
  }
  if (samples.empty()) throw input_error("samples file has no data rows");
  return samples;
}

// Reads `policy_id,draw,c_star,p_star`; draw indices must be contiguous
// from 1 within each policy.
inline std::vector<ResampleSet> read_resamples_csv(std::istream& in,
                                                   std::size_t min_draws = 100) {
  std::string line;
  if (!std::getline(in, line)) throw input_error("resamples file is empty");
  const auto header = detail::split_csv_line(line);
  if (header.size() != 4 || header[0] != "policy_id" || header[1] != "draw" ||
      header[2] != "c_star" || header[3] != "p_star") {
    throw input_error("resamples header must be 'policy_id,draw,c_star,p_star'");
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<PolicyPoint>> grouped;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 4) {
      throw input_error("line " + std::to_string(line_no) + ": expected 4 fields");
    }
    auto [it, inserted] = grouped.try_emplace(fields[0]);
    if (inserted) order.push_back(fields[0]);
    const long draw = detail::parse_long(fields[1], line_no, "draw");
    if (draw != static_cast<long>(it->second.size()) + 1) {
      throw input_error("line " + std::to_string(line_no) + ": draw index " +
                        std::to_string(draw) + " breaks the contiguous 1..B order for '" +
                        fields[0] + "'");
    }
    it->second.emplace_back(detail::parse_double(fields[2], line_no, "c_star"),
                            detail::parse_double(fields[3], line_no, "p_star"));
  }
  std::vector<ResampleSet> sets;
  sets.reserve(order.size());
  for (const auto& id : order) {
    try {
      sets.push_back(ResampleSet::of(id, std::move(grouped[id]), min_draws));
    } catch (const std::exception& e) {
      throw input_error("policy '" + id + "': " + e.what());
    }
  }
  if (sets.empty()) throw input_error("resamples file has no data rows");
  return sets;
}

inline void write_resamples_csv(std::ostream& out, const std::vector<ResampleSet>& sets) {
  out << "policy_id,draw,c_star,p_star\n";
  for (const auto& s : sets) {
    for (std::size_t b = 0; b < s.draws.size(); ++b) {
      out << s.policy_id << ',' << (b + 1) << ',' << format_g17(s.draws[b].c) << ','
          << format_g17(s.draws[b].p) << '\n';
    }
  }
}

// CSV rendering of the MVPF: 'Inf' for positive infinity, 'NA' where the
// measure is undefined.
inline std::string render_welfare(const ExtendedWelfare& w) {
  switch (w.tag()) {
    case ExtendedWelfare::Tag::Finite: return format_g17(w.value());
    case ExtendedWelfare::Tag::PositiveInfinity: return "Inf";
    case ExtendedWelfare::Tag::Undefined: return "NA";
  }
  return "NA";
}

inline std::string render_extended_endpoint(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "Inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-Inf";
  return format_g17(v);
}

}  // namespace welfare
