#include "streamrate/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamrate/erasure_oracle.hpp"
#include "streamrate/errors.hpp"
#include "streamrate/figures.hpp"
#include "streamrate/gm_analysis.hpp"
#include "streamrate/markov_entropy.hpp"
#include "streamrate/sliding_gaussian.hpp"
#include "streamrate/stream_sim.hpp"

namespace streamrate::cli {
namespace {

const std::set<std::string> kRateColumns{"lower",   "upper",       "upper_single", "upper_multi",    "high_res",
                                         "nwz",     "optimal",     "still_image",  "wyner_ziv",      "predictive_fec",
                                         "gop",     "rate",        "predictive_rate"};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Options {
  std::vector<double> rho{0.9};
  int B = 1;
  int L = 1;
  int W = 0;
  std::vector<double> D{0.2};
  std::vector<double> d;
  int K = -1;
  std::string chain;
  double q = -1.0;
  std::uint64_t seed = 1;
  long trials = 10000;
  std::string out;
  bool nats = false;
  double sigma_z2 = 0.1;
  int tmax = 12;
  std::string check = "single";
  std::string id;
  std::string sweep;
  int samples = 500;
  std::string mode = "gm";
  int horizon = 200;
  int burst_start = -1;
  int n = 8;
  double rate = 0.8;
  bool solve_channel = false;
  int verify_horizon = 0;
};

class Emitter {
 public:
  Emitter(const Options& opt, std::ostream& fallback) : opt_(opt), fallback_(fallback) {}

  void table(CsvTable t) const {
    if (opt_.nats)
      for (std::size_t c = 0; c < t.header.size(); ++c)
        if (kRateColumns.count(t.header[c]))
          for (auto& row : t.rows) row[c] *= std::numbers::ln2;
    text(t.to_csv());
  }

  void text(const std::string& body) const {
    if (opt_.out.empty()) {
      fallback_ << body;
      return;
    }
    std::ofstream file(opt_.out);
    if (!file) throw ValidationError("cannot write '" + opt_.out + "'");
    file << body;
  }

 private:
  const Options& opt_;
  std::ostream& fallback_;
};

double scalar(const std::vector<double>& v, const char* name) {
  if (v.size() != 1) throw ValidationError(std::string("--") + name + " takes a single value for this subcommand");
  return v.front();
}

int cmd_lossless(const Options& opt, const Emitter& emit) {
  if (opt.chain.empty() == (opt.q < 0.0)) throw ValidationError("give exactly one of --chain or --q");
  const MarkovChain chain =
      opt.chain.empty() ? MarkovChain::binary_symmetric(opt.q) : MarkovChain::from_json_file(opt.chain);
  const LosslessBounds b = lossless_bounds(chain, opt.B, opt.W);
  emit.table(CsvTable{{"B", "W", "upper", "lower", "predictive_rate"},
                      {{double(b.B), double(b.W), b.upper, b.lower, b.predictive_rate}}});
  return ok;
}

int cmd_gm(const Options& opt, const Emitter& emit) {
  GmSweep sweep;
  if (!opt.sweep.empty()) {
    sweep = GmSweep::from_json(read_file(opt.sweep));
  } else {
    sweep.rho = opt.rho;
    sweep.B = opt.B;
    sweep.L = opt.L;
    sweep.D = opt.D;
  }
  emit.table(gm_sweep_table(sweep));
  return ok;
}

int cmd_gm_multi(const Options& opt, const Emitter& emit) {
  CsvTable t{{"rho", "B", "L", "D", "upper_multi", "sigma_z2"}, {}};
  for (double rho : opt.rho)
    for (double D : opt.D) {
      const GmConfig cfg{rho, opt.B, opt.L, D};
      const MultiBurstRate r = rate_upper_multi(cfg);
      t.rows.push_back({rho, double(opt.B), double(opt.L), D, r.rate, r.channel.sigma_z2});
    }
  emit.table(t);
  return ok;
}

int cmd_sliding(const Options& opt, const Emitter& emit) {
  if (opt.d.empty()) throw ValidationError("--d is required");
  if (opt.K >= 0 && opt.K + 1 != static_cast<int>(opt.d.size()))
    throw ValidationError("--K must equal the number of --d entries minus one");
  const auto d = DistortionVector::make(opt.d);

  if (opt.verify_horizon > 0) {
    nlohmann::json report{{"B", opt.B}, {"W", opt.W}, {"K", d.K()}, {"horizon", opt.verify_horizon}};
    long cases = 0;
    bool passed = true;
    for (int len = 0; len <= opt.B; ++len)
      for (int start = 0; start + len + opt.W + d.K() <= opt.verify_horizon; ++start) {
        const auto r = decodability_check(opt.B, opt.W, d.K(), opt.verify_horizon, start, len);
        ++cases;
        if (!r.decodable && passed) {
          passed = false;
          report["first_failure"] = {{"burst_start", start}, {"burst_len", len}, {"time", r.first_failure},
                                     {"reason", r.failure}};
        }
      }
    report["cases"] = cases;
    report["passed"] = passed;
    emit.text(report.dump(2) + "\n");
    return passed ? ok : lemma_failure;
  }

  const auto base = baseline_rates(d, opt.B, opt.W);
  emit.table(CsvTable{{"B", "W", "K", "optimal", "still_image", "wyner_ziv", "predictive_fec", "gop"},
                      {{double(opt.B), double(opt.W), double(d.K()), rate_recovery(d, opt.B, opt.W), base.still_image,
                        base.wyner_ziv, base.predictive_fec, base.gop}}});
  return ok;
}

int cmd_oracle(const Options& opt, const Emitter& emit) {
  const double rho = scalar(opt.rho, "rho");
  LemmaReport report;
  if (opt.check == "single")
    report = verify_single_burst_lemma(rho, opt.sigma_z2, opt.B, opt.tmax);
  else if (opt.check == "multi")
    report = verify_multi_burst_lemma(rho, opt.sigma_z2, opt.B, opt.L, opt.tmax);
  else if (opt.check == "exchange")
    report = verify_exchange_inequalities(rho, opt.sigma_z2, opt.samples, opt.seed);
  else
    throw ValidationError("--check must be single, multi or exchange");
  emit.text(report.to_json() + "\n");
  return report.passed ? ok : lemma_failure;
}

int cmd_simulate(const Options& opt, const Emitter& emit) {
  if (opt.mode == "binning") {
    const BinningResult r = simulate_binning({opt.n, opt.q, opt.rate, opt.trials, opt.seed});
    const nlohmann::json doc{{"n", opt.n},           {"q", opt.q},           {"rate", opt.rate},
                             {"bins", r.bins},       {"trials", r.trials},   {"errors", r.errors},
                             {"error_rate", r.error_rate}, {"ci_low", r.ci_low}, {"ci_high", r.ci_high}};
    emit.text(doc.dump(2) + "\n");
    return ok;
  }
  if (opt.mode != "gm") throw ValidationError("--mode must be gm or binning");

  SimConfig cfg;
  cfg.rho = scalar(opt.rho, "rho");
  cfg.sigma_z2 = opt.sigma_z2;
  if (opt.solve_channel) cfg.sigma_z2 = solve_test_channel_single({cfg.rho, opt.B, 1, scalar(opt.D, "D")}).sigma_z2;
  cfg.horizon = opt.horizon;
  cfg.trials = opt.trials;
  cfg.seed = opt.seed;
  if (opt.burst_start >= 0) cfg.erased = single_burst_schedule(cfg.horizon, opt.burst_start, opt.B);
  const MseTrace trace = simulate_gm_stream(cfg);
  CsvTable t{{"time", "mse", "stderr", "expected"}, {}};
  for (std::size_t i = 0; i < trace.mean.size(); ++i)
    t.rows.push_back({double(i), trace.mean[i], trace.std_error[i], trace.expected[i]});
  emit.table(t);
  return ok;
}

int cmd_figure(const Options& opt, const Emitter& emit) {
  if (opt.id.empty()) throw ValidationError("--id is required");
  emit.table(figure_table(opt.id));
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate-recovery bounds, lemma checks and simulations for streaming Markov sources"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output file (default: stdout)");
    sub->add_flag("--nats", opt.nats, "Report rates in nats");
  };
  auto gm_flags = [&](CLI::App* sub) {
    sub->add_option("--rho", opt.rho, "Correlation coefficient(s)")->delimiter(',');
    sub->add_option("--B", opt.B, "Burst length");
    sub->add_option("--L", opt.L, "Guard length between bursts");
    sub->add_option("--D", opt.D, "Distortion(s)")->delimiter(',');
  };

  auto* lossless = app.add_subcommand("lossless", "Lossless bounds for a Markov chain");
  common(lossless);
  lossless->add_option("--chain", opt.chain, "Chain JSON file {alphabet_size, transition}");
  lossless->add_option("--q", opt.q, "Flip probability of a binary symmetric chain");
  lossless->add_option("--B", opt.B, "Burst length")->check(CLI::NonNegativeNumber);
  lossless->add_option("--W", opt.W, "Recovery window")->check(CLI::NonNegativeNumber);

  auto* gm = app.add_subcommand("gm", "Gauss-Markov bounds over a (rho, D) grid");
  common(gm);
  gm_flags(gm);
  gm->add_option("--sweep", opt.sweep, "Sweep JSON file {rho, B, L, D}");

  auto* gm_multi = app.add_subcommand("gm-multi", "Multi-burst achievable rate and test channel");
  common(gm_multi);
  gm_flags(gm_multi);

  auto* sliding = app.add_subcommand("sliding", "Sliding-window rate-recovery and baselines");
  common(sliding);
  sliding->add_option("--d", opt.d, "Distortion vector d_0,...,d_K")->delimiter(',');
  sliding->add_option("--K", opt.K, "Window size (must match --d)");
  sliding->add_option("--B", opt.B, "Burst length")->check(CLI::NonNegativeNumber);
  sliding->add_option("--W", opt.W, "Recovery window")->check(CLI::NonNegativeNumber);
  sliding->add_option("--verify-horizon", opt.verify_horizon,
                      "Check layer decodability for every burst placement over this horizon");

  auto* oracle = app.add_subcommand("oracle", "Brute-force worst-case erasure verification");
  common(oracle);
  oracle->add_option("--check", opt.check, "single, multi or exchange");
  oracle->add_option("--rho", opt.rho, "Correlation coefficient");
  oracle->add_option("--sigma-z2", opt.sigma_z2, "Test channel noise variance");
  oracle->add_option("--B", opt.B, "Burst length");
  oracle->add_option("--L", opt.L, "Guard length");
  oracle->add_option("--tmax", opt.tmax, "Largest decode time");
  oracle->add_option("--samples", opt.samples, "Random index-dominating pairs");
  oracle->add_option("--seed", opt.seed, "Random seed");

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo simulation");
  common(simulate);
  simulate->add_option("--mode", opt.mode, "gm or binning");
  simulate->add_option("--rho", opt.rho, "Correlation coefficient");
  simulate->add_option("--sigma-z2", opt.sigma_z2, "Test channel noise variance");
  simulate->add_flag("--solve-channel", opt.solve_channel, "Pick sigma_z2 meeting --D after a burst of --B");
  simulate->add_option("--D", opt.D, "Target distortion for --solve-channel");
  simulate->add_option("--B", opt.B, "Burst length");
  simulate->add_option("--burst-start", opt.burst_start, "First erased time (default: no erasure)");
  simulate->add_option("--T", opt.horizon, "Horizon");
  simulate->add_option("--trials", opt.trials, "Trials");
  simulate->add_option("--seed", opt.seed, "Random seed");
  simulate->add_option("--n", opt.n, "Binning block length");
  simulate->add_option("--q", opt.q, "Binning flip probability");
  simulate->add_option("--R", opt.rate, "Binning rate in bits per symbol");

  auto* figure = app.add_subcommand("figure", "Data table for a rate plot");
  common(figure);
  figure->add_option("--id", opt.id, "fig2, fig3, fig4, fig5 or fig9");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return validation_error;
  }

  const Emitter emit(opt, out);
  try {
    if (lossless->parsed()) return cmd_lossless(opt, emit);
    if (gm->parsed()) return cmd_gm(opt, emit);
    if (gm_multi->parsed()) return cmd_gm_multi(opt, emit);
    if (sliding->parsed()) return cmd_sliding(opt, emit);
    if (oracle->parsed()) return cmd_oracle(opt, emit);
    if (simulate->parsed()) return cmd_simulate(opt, emit);
    if (figure->parsed()) return cmd_figure(opt, emit);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return validation_error;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << "\n";
    return numerical_error;
  }
  return validation_error;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace streamrate::cli
