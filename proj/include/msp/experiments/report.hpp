#ifndef MSP_EXPERIMENTS_REPORT_HPP
#define MSP_EXPERIMENTS_REPORT_HPP

#include "msp/core/errors.hpp"
#include "msp/core/intervals.hpp"
#include "msp/core/types.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace msp {

/// Outcome of one experiment run: theoretical bounds against computed
/// spectrum edges, plus solver statistics.
struct ExperimentReport
{
  std::string label;
  std::uint64_t seed = 0;
  std::vector<Index> system_dims;
  BoundsInterval bounds;
  /// Comparison endpoints (neg_hi, pos_lo) of the earlier three-block analysis.
  std::optional<std::pair<double, double>> bradley;
  SpectrumEdges computed;
  int minres_iterations = -1;
  bool minres_converged = false;
  double timing_seconds = 0.0;
  std::vector<std::string> violations;
  /// Named scalars such as indicators, in insertion order.
  std::vector<std::pair<std::string, double>> extras;

  Index dimension() const
  {
    Index s = 0;
    for (Index d : system_dims)
      s += d;
    return s;
  }

  double extra(const std::string& key) const
  {
    for (const auto& [k, v] : extras)
      if (k == key)
        return v;
    throw InvalidArgument("ExperimentReport: no extra named '" + key + "'");
  }
};

/// Violations of computed edges against bounds, with slack tol * spectral
/// radius plus `abs_slack` (the error bound of iteratively computed edges).
inline std::vector<std::string> containment_violations(const BoundsInterval& b, const SpectrumEdges& e,
                                                       double rel_tol = default_tolerances.containment,
                                                       double abs_slack = 0.0)
{
  const double slack = rel_tol * std::max(e.spectral_radius(), 1.0) + abs_slack;
  std::vector<std::string> out;
  auto check = [&](const char* name, double v) {
    if (!std::isnan(v) && !b.contains(v, slack)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s = %.12g outside [%.12g, %.12g] U [%.12g, %.12g]", name, v, b.neg_lo,
                    b.neg_hi, b.pos_lo, b.pos_hi);
      out.emplace_back(buf);
    }
  };
  check("neg_lo", e.neg_lo);
  check("neg_hi", e.neg_hi);
  check("pos_lo", e.pos_lo);
  check("pos_hi", e.pos_hi);
  return out;
}

inline constexpr int report_schema_version = 1;

namespace detail {

inline nlohmann::ordered_json num(double v)
{
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline double num(const nlohmann::ordered_json& j)
{
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

} // namespace detail

inline nlohmann::ordered_json to_json(const ExperimentReport& r)
{
  using detail::num;
  nlohmann::ordered_json j;
  j["label"] = r.label;
  j["seed"] = r.seed;
  j["system_dims"] = r.system_dims;
  j["theoretical_bounds"] = {num(r.bounds.neg_lo), num(r.bounds.neg_hi), num(r.bounds.pos_lo),
                             num(r.bounds.pos_hi)};
  if (r.bradley)
    j["bradley"] = {num(r.bradley->first), num(r.bradley->second)};
  j["computed_extremes"] = {num(r.computed.neg_lo), num(r.computed.neg_hi), num(r.computed.pos_lo),
                            num(r.computed.pos_hi)};
  j["minres_iterations"] = r.minres_iterations;
  j["minres_converged"] = r.minres_converged;
  j["timing_seconds"] = r.timing_seconds;
  j["violations"] = r.violations;
  nlohmann::ordered_json ex = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.extras)
    ex[k] = num(v);
  j["extras"] = ex;
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::ordered_json& j)
{
  using detail::num;
  try {
    ExperimentReport r;
    r.label = j.at("label").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.system_dims = j.at("system_dims").get<std::vector<Index>>();
    const auto& b = j.at("theoretical_bounds");
    r.bounds = {num(b.at(0)), num(b.at(1)), num(b.at(2)), num(b.at(3))};
    if (j.contains("bradley"))
      r.bradley = std::make_pair(num(j["bradley"].at(0)), num(j["bradley"].at(1)));
    const auto& c = j.at("computed_extremes");
    r.computed = {num(c.at(0)), num(c.at(1)), num(c.at(2)), num(c.at(3))};
    r.minres_iterations = j.at("minres_iterations").get<int>();
    r.minres_converged = j.at("minres_converged").get<bool>();
    r.timing_seconds = j.at("timing_seconds").get<double>();
    r.violations = j.at("violations").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("extras").items())
      r.extras.emplace_back(k, num(v));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("report JSON: ") + e.what());
  }
}

/// {"schema_version": 1, "reports": [...]}
inline nlohmann::ordered_json reports_to_json(const std::vector<ExperimentReport>& reports)
{
  nlohmann::ordered_json j;
  j["schema_version"] = report_schema_version;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports)
    j["reports"].push_back(to_json(r));
  return j;
}

inline std::vector<ExperimentReport> reports_from_json(const nlohmann::ordered_json& j)
{
  if (!j.contains("schema_version") || j["schema_version"] != report_schema_version)
    throw IoError("report JSON: unsupported or missing schema_version");
  std::vector<ExperimentReport> out;
  for (const auto& r : j.at("reports"))
    out.push_back(report_from_json(r));
  return out;
}

inline const char* report_csv_header =
    "label,seed,dims,bound_neg_lo,bound_neg_hi,bound_pos_lo,bound_pos_hi,"
    "computed_neg_lo,computed_neg_hi,computed_pos_lo,computed_pos_hi,minres_iterations,violations";

/// One header line plus one line per report. Timing is left out so that the
/// output is byte-identical across runs.
inline void write_reports_csv(std::ostream& out, const std::vector<ExperimentReport>& reports)
{
  out << report_csv_header << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.10g", v);
    out << buf;
  };
  for (const auto& r : reports) {
    out << r.label << ',' << r.seed << ',';
    for (std::size_t i = 0; i < r.system_dims.size(); ++i)
      out << (i ? ";" : "") << r.system_dims[i];
    for (double v : {r.bounds.neg_lo, r.bounds.neg_hi, r.bounds.pos_lo, r.bounds.pos_hi, r.computed.neg_lo,
                     r.computed.neg_hi, r.computed.pos_lo, r.computed.pos_hi})
      put(v);
    out << ',' << r.minres_iterations << ',' << r.violations.size() << '\n';
  }
}

enum class ReportFormat { csv, json };

inline ReportFormat parse_report_format(const std::string& s)
{
  if (s == "csv")
    return ReportFormat::csv;
  if (s == "json")
    return ReportFormat::json;
  throw InvalidArgument("unknown report format '" + s + "' (expected csv or json)");
}

inline void emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format, std::ostream& out)
{
  if (reports.empty())
    throw InvalidArgument("emit_report: no reports");
  if (format == ReportFormat::csv)
    write_reports_csv(out, reports);
  else
    out << reports_to_json(reports).dump(2) << '\n';
}

inline void emit_report(const std::vector<ExperimentReport>& reports, ReportFormat format, const std::string& path)
{
  std::ofstream f(path);
  if (!f)
    throw IoError("cannot open '" + path + "' for writing");
  emit_report(reports, format, f);
  if (!f)
    throw IoError("write to '" + path + "' failed");
}

inline std::vector<ExperimentReport> read_reports_json(const std::string& path)
{
  std::ifstream f(path);
  if (!f)
    throw IoError("cannot open '" + path + "'");
  try {
    return reports_from_json(nlohmann::ordered_json::parse(f));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("'" + path + "': " + e.what());
  } catch (const IoError& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

} // namespace msp

#endif
