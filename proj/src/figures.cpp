#include "streamrate/figures.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

#include "streamrate/errors.hpp"
#include "streamrate/parallel.hpp"
#include "streamrate/sliding_gaussian.hpp"

namespace streamrate {
namespace {

std::vector<double> linspace(double first, double last, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(count == 1 ? first : first + (last - first) * i / (count - 1));
  return out;
}

std::vector<double> logspace(double first, double last, int count) {
  auto out = linspace(std::log10(first), std::log10(last), count);
  for (auto& x : out) x = std::pow(10.0, x);
  return out;
}

/// Evaluates rows in parallel, keeping input order.
template <class Cfg, class Fn>
std::vector<std::vector<double>> evaluate(const std::vector<Cfg>& cfgs, Fn fn) {
  std::vector<std::vector<double>> rows(cfgs.size());
  parallel_for(cfgs.size(), [&](std::size_t i) { rows[i] = fn(cfgs[i]); });
  return rows;
}

CsvTable single_burst_table(const std::vector<GmConfig>& cfgs) {
  CsvTable t{{"rho", "B", "D", "lower", "upper"}, {}};
  t.rows = evaluate(cfgs, [](const GmConfig& c) {
    return std::vector<double>{c.rho, double(c.B), c.D, lower_bound_single(c), rate_upper_single(c)};
  });
  return t;
}

CsvTable fig2() {
  std::vector<GmConfig> cfgs;
  for (double D : {0.2, 0.3})
    for (int B : {1, 2})
      for (double rho : linspace(0.05, 0.95, 91)) cfgs.push_back({rho, B, 1, D});
  return single_burst_table(cfgs);
}

CsvTable fig3() {
  std::vector<GmConfig> cfgs;
  for (double rho : {0.9, 0.7})
    for (int B : {1, 2})
      for (double D : linspace(0.02, 0.98, 49)) cfgs.push_back({rho, B, 1, D});
  return single_burst_table(cfgs);
}

CsvTable fig4() {
  std::vector<GmConfig> cfgs;
  for (double D : {0.8, 0.5})
    for (int L : {1, 2, 3, 4})
      for (double rho : linspace(0.05, 0.95, 91)) cfgs.push_back({rho, 1, L, D});
  CsvTable t{{"rho", "B", "L", "D", "upper_multi", "upper_single", "lower"}, {}};
  t.rows = evaluate(cfgs, [](const GmConfig& c) {
    return std::vector<double>{c.rho, double(c.B), double(c.L), c.D, rate_upper_multi(c).rate,
                               rate_upper_single(c), lower_bound_single(c)};
  });
  return t;
}

CsvTable fig5() {
  GmSweep sweep;
  sweep.rho = {0.9, 0.7, 0.5};
  sweep.B = 1;
  sweep.L = 1;
  sweep.D = logspace(1e-3, 0.9, 40);
  return gm_sweep_table(sweep);
}

CsvTable fig9() {
  const auto d = DistortionVector::make({0.1, 0.25, 0.4, 0.55, 0.7, 0.85});
  const int B = 2;
  CsvTable t{{"W", "optimal", "still_image", "wyner_ziv", "predictive_fec", "gop"}, {}};
  for (int W = 0; W <= 5; ++W) {
    const auto base = baseline_rates(d, B, W);
    t.rows.push_back({double(W), rate_recovery(d, B, W), base.still_image, base.wyner_ziv, base.predictive_fec, base.gop});
  }
  return t;
}

std::vector<double> numbers(const nlohmann::json& v, const char* key) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array() || v.empty()) throw ValidationError(std::string("\"") + key + "\" must be a number or non-empty array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(std::string("\"") + key + "\" entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw InternalError("number formatting failed");
  return std::string(buf, end);
}

std::string CsvTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += '\n';
  }
  return out;
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig2", "fig3", "fig4", "fig5", "fig9"};
  return ids;
}

CsvTable figure_table(std::string_view id) {
  if (id == "fig2") return fig2();
  if (id == "fig3") return fig3();
  if (id == "fig4") return fig4();
  if (id == "fig5") return fig5();
  if (id == "fig9") return fig9();
  throw ValidationError("unknown figure id '" + std::string(id) + "'");
}

GmSweep GmSweep::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("sweep file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("sweep file must be a JSON object");
  for (const char* key : {"rho", "D"})
    if (!doc.contains(key)) throw ValidationError(std::string("sweep file is missing \"") + key + "\"");
  GmSweep sweep;
  sweep.rho = numbers(doc["rho"], "rho");
  sweep.D = numbers(doc["D"], "D");
  if (doc.contains("B")) {
    if (!doc["B"].is_number_integer()) throw ValidationError("\"B\" must be an integer");
    sweep.B = doc["B"].get<int>();
  }
  if (doc.contains("L")) {
    if (!doc["L"].is_number_integer()) throw ValidationError("\"L\" must be an integer");
    sweep.L = doc["L"].get<int>();
  }
  return sweep;
}

std::vector<double> gm_row(const GmConfig& cfg) {
  const GmBounds b = compute_gm_bounds(cfg, true);
  return {cfg.rho, double(cfg.B), double(cfg.L), cfg.D, b.lower, b.upper_single, b.upper_multi.value_or(NAN),
          b.high_res, b.naive_wz};
}

CsvTable gm_sweep_table(const GmSweep& sweep) {
  std::vector<GmConfig> cfgs;
  for (double rho : sweep.rho)
    for (double D : sweep.D) {
      GmConfig c{rho, sweep.B, sweep.L, D};
      c.validate();
      cfgs.push_back(c);
    }
  CsvTable t{{"rho", "B", "L", "D", "lower", "upper_single", "upper_multi", "high_res", "nwz"}, {}};
  t.rows = evaluate(cfgs, gm_row);
  return t;
}

}  // namespace streamrate
