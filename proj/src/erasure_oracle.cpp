#include "streamrate/erasure_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "streamrate/errors.hpp"
#include "streamrate/parallel.hpp"
#include "streamrate/rng.hpp"

namespace streamrate {
namespace {

constexpr double kRidge = 1e-12;
constexpr int kSingleBurstMaxT = 30;
constexpr int kMultiBurstMaxT = 22;
constexpr int kExchangeMaxT = 20;

std::string join(std::span<const int> xs) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << xs[i];
  out << '}';
  return out.str();
}

std::vector<int> range(int first, int last) {  // [first, last], empty when last < first
  std::vector<int> out;
  for (int i = first; i <= last; ++i) out.push_back(i);
  return out;
}

std::vector<int> complement(int t, std::span<const int> erased) {
  std::vector<bool> gone(static_cast<std::size_t>(t), false);
  for (int e : erased) gone[static_cast<std::size_t>(e)] = true;
  std::vector<int> out;
  for (int i = 0; i < t; ++i)
    if (!gone[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

LemmaCheck make_check(std::string property, bool asserted = true) {
  LemmaCheck c;
  c.property = std::move(property);
  c.asserted = asserted;
  return c;
}

/// Tolerance for "lhs <= rhs" comparisons of variances and rates.
double slack_tol(double rhs) { return 1e-12 * std::max(1.0, std::abs(rhs)); }

void record(LemmaCheck& check, double lhs, double rhs, const std::function<std::string()>& describe) {
  ++check.instances;
  const double slack = rhs - lhs;
  if (slack < check.min_slack) {
    check.min_slack = slack;
    check.worst_instance = describe();
  }
  if (slack < -slack_tol(rhs)) ++check.violations;
}

/// u-indices of a received set, with s_{-1} and optional extras.
std::vector<int> conditioning(const GaussianSystem& sys, std::span<const int> received, bool include_u_t, int t) {
  std::vector<int> given;
  given.reserve(received.size() + 2);
  given.push_back(sys.s(-1));
  for (int i : received) given.push_back(sys.u(i));
  if (include_u_t) given.push_back(sys.u(t));
  return given;
}

double lambda_of(const GaussianSystem& sys, int t, std::span<const int> received) {
  const auto given = conditioning(sys, received, false, t);
  return 0.5 * std::log2(conditional_variance(sys, sys.u(t), given) / sys.sigma_z2());
}

double gamma_of(const GaussianSystem& sys, int t, std::span<const int> received) {
  const auto given = conditioning(sys, received, true, t);
  return conditional_variance(sys, sys.s(t), given);
}

void finalize(LemmaReport& report) {
  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const LemmaCheck& c) { return !c.asserted || c.violations == 0; });
}

void enumerate(int pos, int next_allowed, int t, int B, int L, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (pos >= t) {
    out.push_back(current);
    return;
  }
  enumerate(pos + 1, next_allowed, t, B, L, current, out);
  if (pos < next_allowed) return;
  for (int len = 1; len <= B && pos + len <= t; ++len) {
    for (int i = 0; i < len; ++i) current.push_back(pos + i);
    enumerate(pos + len, pos + len + L, t, B, L, current, out);
    current.resize(current.size() - static_cast<std::size_t>(len));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Patterns

ErasurePattern::ErasurePattern(int t, std::vector<int> received, PatternKind kind)
    : t_(t), received_(std::move(received)), kind_(kind) {
  if (t_ < 0) throw ValidationError("pattern time must be >= 0");
  std::sort(received_.begin(), received_.end());
  if (std::adjacent_find(received_.begin(), received_.end()) != received_.end())
    throw ValidationError("received set has duplicate indices");
  if (!received_.empty() && (received_.front() < 0 || received_.back() >= t_))
    throw ValidationError("received indices must lie in [0, t-1]");
}

ErasurePattern ErasurePattern::single_burst(int t, int burst_len, int offset) {
  if (burst_len < 0 || offset < 0 || offset > t - burst_len)
    throw ValidationError("single burst needs 0 <= burst_len and 0 <= offset <= t - burst_len");
  const std::vector<int> erased = range(t - burst_len - offset, t - offset - 1);
  return ErasurePattern(t, complement(t, erased), PatternKind::single_burst);
}

ErasurePattern ErasurePattern::multi_burst(int t, std::vector<int> received, int B, int L) {
  ErasurePattern pattern(t, std::move(received), PatternKind::multi_burst);
  const auto erased = pattern.erased();
  if (!is_feasible_multi_burst(t, erased, B, L))
    throw ValidationError("erasures " + join(erased) + " violate burst length / guard constraints");
  return pattern;
}

ErasurePattern ErasurePattern::arbitrary(int t, std::vector<int> received) {
  return ErasurePattern(t, std::move(received), PatternKind::arbitrary);
}

std::vector<int> ErasurePattern::erased() const { return complement(t_, received_); }

std::string ErasurePattern::describe() const {
  return "t=" + std::to_string(t_) + " received=" + join(received_);
}

bool is_feasible_multi_burst(int t, std::span<const int> erased, int B, int L) {
  std::vector<int> e(erased.begin(), erased.end());
  std::sort(e.begin(), e.end());
  if (std::adjacent_find(e.begin(), e.end()) != e.end()) return false;
  if (!e.empty() && (e.front() < 0 || e.back() >= t)) return false;
  int run_start = -1;
  int previous_end = -1;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i == 0 || e[i] != e[i - 1] + 1) {
      if (i != 0) previous_end = e[i - 1];
      run_start = e[i];
      if (previous_end >= 0 && run_start - previous_end - 1 < L) return false;
    }
    if (e[i] - run_start + 1 > B) return false;
  }
  return true;
}

std::vector<std::vector<int>> enumerate_multi_burst_erasures(int t, int B, int L) {
  if (t < 0 || B < 0 || L < 1) throw ValidationError("enumeration needs t >= 0, B >= 0, L >= 1");
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate(0, 0, t, B, L, current, out);
  return out;
}

std::vector<int> packed_multi_burst_received(int t, int B, int L, int erasures) {
  std::vector<int> erased;
  int pos = t - 1;
  int remaining = erasures;
  while (remaining > 0) {
    const int len = std::min(B, remaining);
    if (len <= 0 || pos - len + 1 < 0) return {};
    for (int i = pos - len + 1; i <= pos; ++i) erased.push_back(i);
    remaining -= len;
    pos -= len + L;
  }
  return complement(t, erased);
}

int max_multi_burst_erasures(int t, int B, int L) {
  int total = 0;
  for (int pos = t - 1; pos >= 0 && B > 0; pos -= B + L) total += std::min(B, pos + 1);
  return total;
}

// ---------------------------------------------------------------------------
// Gaussian system

GaussianSystem::GaussianSystem(double rho, double sigma_z2, int horizon)
    : rho_(rho), sigma_z2_(sigma_z2), horizon_(horizon) {
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("rho must lie in (0,1)");
  if (!(sigma_z2 > 0.0) || !std::isfinite(sigma_z2)) throw ValidationError("sigma_z2 must be positive and finite");
  if (horizon < 0) throw ValidationError("horizon must be >= 0");

  const int states = horizon + 2;  // s_{-1} .. s_t
  const int n = states + horizon + 1;
  cov_.resize(n, n);
  auto time_of = [&](int idx) { return idx < states ? idx - 1 : idx - states; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) cov_(a, b) = std::pow(rho, std::abs(time_of(a) - time_of(b)));
  for (int i = 0; i <= horizon; ++i) cov_(u(i), u(i)) += sigma_z2;
}

int GaussianSystem::s(int i) const {
  if (i < -1 || i > horizon_) throw ValidationError("state index out of range");
  return i + 1;
}

int GaussianSystem::u(int i) const {
  if (i < 0 || i > horizon_) throw ValidationError("observation index out of range");
  return horizon_ + 2 + i;
}

double conditional_variance(const Eigen::MatrixXd& covariance, int target, std::span<const int> given) {
  const auto n = static_cast<int>(covariance.rows());
  if (target < 0 || target >= n) throw ValidationError("target variable out of range");
  for (int g : given) {
    if (g < 0 || g >= n) throw ValidationError("conditioning variable out of range");
    if (g == target) throw ValidationError("conditioning set contains the target");
  }
  const double prior = covariance(target, target);
  if (given.empty()) return prior;

  const auto k = static_cast<Eigen::Index>(given.size());
  Eigen::MatrixXd block(k, k);
  Eigen::VectorXd cross(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    cross(i) = covariance(given[i], target);
    for (Eigen::Index j = 0; j < k; ++j) block(i, j) = covariance(given[i], given[j]);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(block);
  if (llt.info() != Eigen::Success) {
    llt.compute(block + kRidge * Eigen::MatrixXd::Identity(k, k));
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
      const auto& ev = eig.eigenvalues();
      std::ostringstream msg;
      msg << "conditioning block is singular beyond ridge " << kRidge << " (eigenvalues in [" << ev.minCoeff() << ", "
          << ev.maxCoeff() << "], condition ~" << ev.maxCoeff() / std::max(std::abs(ev.minCoeff()), 1e-300) << ")";
      throw NumericalError(msg.str());
    }
  }
  return prior - cross.dot(llt.solve(cross));
}

double conditional_variance(const GaussianSystem& sys, int target, std::span<const int> given) {
  return conditional_variance(sys.covariance(), target, given);
}

double lambda(const GaussianSystem& sys, const ErasurePattern& pattern) {
  if (pattern.t() > sys.horizon()) throw ValidationError("pattern time exceeds system horizon");
  return lambda_of(sys, pattern.t(), pattern.received());
}

double gamma(const GaussianSystem& sys, const ErasurePattern& pattern) {
  if (pattern.t() > sys.horizon()) throw ValidationError("pattern time exceeds system horizon");
  return gamma_of(sys, pattern.t(), pattern.received());
}

// ---------------------------------------------------------------------------
// Reports

long LemmaReport::instances() const {
  long total = 0;
  for (const auto& c : checks) total += c.instances;
  return total;
}

double LemmaReport::min_slack() const {
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& c : checks)
    if (c.asserted) slack = std::min(slack, c.min_slack);
  return slack;
}

std::string LemmaReport::to_json() const {
  nlohmann::json doc;
  doc["lemma"] = lemma;
  doc["passed"] = passed;
  doc["instances"] = instances();
  const double slack = min_slack();
  doc["min_slack"] = std::isfinite(slack) ? nlohmann::json(slack) : nlohmann::json(nullptr);
  doc["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    doc["checks"].push_back({{"property", c.property},
                             {"asserted", c.asserted},
                             {"instances", c.instances},
                             {"violations", c.violations},
                             {"min_slack", std::isfinite(c.min_slack) ? nlohmann::json(c.min_slack) : nullptr},
                             {"worst_instance", c.worst_instance}});
  }
  if (!worst_patterns.empty()) {
    doc["worst_patterns"] = nlohmann::json::array();
    for (const auto& w : worst_patterns)
      doc["worst_patterns"].push_back({{"t", w.t},
                                       {"omega_star", w.omega_star},
                                       {"argmax_lambda", w.argmax_lambda},
                                       {"argmax_gamma", w.argmax_gamma},
                                       {"patterns", w.patterns}});
  }
  doc["notes"] = notes;
  return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Single burst

LemmaReport verify_single_burst_lemma(double rho, double sigma_z2, int B, int t_max) {
  if (t_max < 0 || t_max > kSingleBurstMaxT) throw ValidationError("single-burst verification needs 0 <= t_max <= 30");
  if (B < 1) throw ValidationError("single-burst verification needs B >= 1");
  const int horizon = std::max(t_max + 1, B);
  const GaussianSystem sys(rho, sigma_z2, horizon);

  // value[t][b][k] for b <= min(B, t), k <= t - b
  struct Values {
    std::vector<std::vector<std::vector<double>>> lam, gam;
  } v;
  v.lam.resize(static_cast<std::size_t>(horizon + 1));
  v.gam.resize(static_cast<std::size_t>(horizon + 1));
  parallel_for(static_cast<std::size_t>(horizon + 1), [&](std::size_t ts) {
    const int t = static_cast<int>(ts);
    const int bmax = std::min(B, t);
    v.lam[ts].resize(static_cast<std::size_t>(bmax + 1));
    v.gam[ts].resize(static_cast<std::size_t>(bmax + 1));
    for (int b = 0; b <= bmax; ++b)
      for (int k = 0; k <= t - b; ++k) {
        const auto p = ErasurePattern::single_burst(t, b, k);
        v.lam[ts][static_cast<std::size_t>(b)].push_back(lambda(sys, p));
        v.gam[ts][static_cast<std::size_t>(b)].push_back(gamma(sys, p));
      }
  });
  auto at = [](const auto& table, int t, int b, int k) {
    return table[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
  };
  auto label = [](int t, int b, int k) {
    return "t=" + std::to_string(t) + " burst=" + std::to_string(b) + " offset=" + std::to_string(k);
  };

  LemmaReport report;
  report.lemma = "single_burst";
  const char* names[] = {"lambda", "gamma"};
  for (int which = 0; which < 2; ++which) {
    const auto& table = which == 0 ? v.lam : v.gam;
    const std::string name = names[which];
    LemmaCheck offset = make_check(name + ": most recent burst dominates any offset");
    LemmaCheck length = make_check(name + ": longest burst dominates");
    LemmaCheck growth = make_check(name + ": worst case non-decreasing in t (t >= B)");
    LemmaCheck early = make_check(name + ": bursts before t = B dominated by burst [0, B-1]");
    LemmaCheck growth_below = make_check(name + ": growth in t below t = B (informational)", false);
    long early_bursts = 0;

    for (int t = 0; t <= t_max; ++t) {
      const int bmax = std::min(B, t);
      if (t >= B) {
        for (int b = 0; b <= bmax; ++b)
          for (int k = 1; k <= t - b; ++k)
            record(offset, at(table, t, b, k), at(table, t, b, 0), [&] { return label(t, b, k); });
        for (int b = 0; b < B; ++b)
          record(length, at(table, t, b, 0), at(table, t, B, 0), [&] { return label(t, b, 0); });
        record(growth, at(table, t, B, 0), at(table, t + 1, B, 0), [&] { return label(t, B, 0) + " vs t+1"; });
      } else {
        for (int b = 0; b <= bmax; ++b)
          for (int k = 0; k <= t - b; ++k) {
            if (b > 0) ++early_bursts;
            record(early, at(table, t, b, k), at(table, B, B, 0), [&] { return label(t, b, k); });
          }
        const int tb = std::min(B, t + 1);
        if (t + 1 < B) record(growth_below, at(table, t, t, 0), at(table, t + 1, tb, 0), [&] { return label(t, t, 0); });
      }
    }
    if (which == 0) {
      if (early_bursts == 0)
        report.notes.push_back("early-burst property is vacuous: no burst of length >= 1 ends before t = B");
      report.notes.push_back("time monotonicity below t = B is reported but not asserted");
    }
    for (auto* c : {&offset, &length, &growth, &early, &growth_below}) report.checks.push_back(*c);
  }
  finalize(report);
  return report;
}

// ---------------------------------------------------------------------------
// Multiple bursts

LemmaReport verify_multi_burst_lemma(double rho, double sigma_z2, int B, int L, int t_max) {
  if (t_max < 1 || t_max > kMultiBurstMaxT) throw ValidationError("multi-burst verification needs 1 <= t_max <= 22");
  if (B < 1 || L < 1) throw ValidationError("multi-burst verification needs B >= 1 and L >= 1");
  const GaussianSystem sys(rho, sigma_z2, t_max);

  struct PerTime {
    WorstPattern worst;
    LemmaCheck packed[2];
    LemmaCheck maximal[2];
    double star[2] = {0.0, 0.0};
  };
  const char* names[] = {"lambda", "gamma"};
  std::vector<PerTime> per_time(static_cast<std::size_t>(t_max + 1));

  parallel_for(static_cast<std::size_t>(t_max), [&](std::size_t idx) {
    const int t = static_cast<int>(idx) + 1;
    PerTime& out = per_time[static_cast<std::size_t>(t)];
    const auto patterns = enumerate_multi_burst_erasures(t, B, L);
    out.worst.t = t;
    out.worst.patterns = static_cast<long>(patterns.size());

    // Values of the packed pattern for each erasure count.
    const int max_erasures = max_multi_burst_erasures(t, B, L);
    std::map<int, std::pair<double, double>> packed;
    for (int e = 0; e <= max_erasures; ++e) {
      const auto received = packed_multi_burst_received(t, B, L, e);
      packed[e] = {lambda_of(sys, t, received), gamma_of(sys, t, received)};
    }
    out.worst.omega_star = packed_multi_burst_received(t, B, L, max_erasures);

    double best[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (int w = 0; w < 2; ++w) {
      out.packed[w].property = std::string(names[w]) + ": packed placement maximizes for a fixed erasure count";
      out.maximal[w].property = std::string(names[w]) + ": maximal erasure count maximizes";
    }
    for (const auto& erased : patterns) {
      const auto received = complement(t, erased);
      const int e = static_cast<int>(erased.size());
      const double value[2] = {lambda_of(sys, t, received), gamma_of(sys, t, received)};
      const double reference[2] = {packed[e].first, packed[e].second};
      for (int w = 0; w < 2; ++w) {
        record(out.packed[w], value[w], reference[w],
               [&] { return "t=" + std::to_string(t) + " received=" + join(received); });
        if (value[w] > best[w]) {
          best[w] = value[w];
          (w == 0 ? out.worst.argmax_lambda : out.worst.argmax_gamma) = received;
        }
      }
    }
    for (int e = 0; e <= max_erasures; ++e) {
      const double value[2] = {packed[e].first, packed[e].second};
      const double top[2] = {packed[max_erasures].first, packed[max_erasures].second};
      for (int w = 0; w < 2; ++w)
        record(out.maximal[w], value[w], top[w],
               [&] { return "t=" + std::to_string(t) + " erasures=" + std::to_string(e); });
    }
    out.star[0] = packed[max_erasures].first;
    out.star[1] = packed[max_erasures].second;
  });

  LemmaReport report;
  report.lemma = "multi_burst";
  for (int w = 0; w < 2; ++w) {
    LemmaCheck packed = make_check(per_time[1].packed[w].property);
    LemmaCheck maximal = make_check(per_time[1].maximal[w].property);
    LemmaCheck growth = make_check(std::string(names[w]) + ": worst case non-decreasing in t");
    LemmaCheck argmax = make_check(std::string(names[w]) + ": exhaustive argmax equals the packed maximal pattern");
    for (int t = 1; t <= t_max; ++t) {
      const auto& pt = per_time[static_cast<std::size_t>(t)];
      for (auto [dst, src] : {std::pair{&packed, &pt.packed[w]}, std::pair{&maximal, &pt.maximal[w]}}) {
        dst->instances += src->instances;
        dst->violations += src->violations;
        if (src->min_slack < dst->min_slack) {
          dst->min_slack = src->min_slack;
          dst->worst_instance = src->worst_instance;
        }
      }
      if (t < t_max)
        record(growth, pt.star[w], per_time[static_cast<std::size_t>(t + 1)].star[w],
               [&] { return "t=" + std::to_string(t) + " vs t+1"; });
      const auto& found = w == 0 ? pt.worst.argmax_lambda : pt.worst.argmax_gamma;
      ++argmax.instances;
      if (found != pt.worst.omega_star) {
        ++argmax.violations;
        argmax.min_slack = -1.0;
        argmax.worst_instance = "t=" + std::to_string(t) + " argmax=" + join(found) + " packed=" + join(pt.worst.omega_star);
      } else if (!std::isfinite(argmax.min_slack)) {
        argmax.min_slack = 0.0;
      }
    }
    for (auto* c : {&packed, &maximal, &growth, &argmax}) report.checks.push_back(*c);
  }
  for (int t = 1; t <= t_max; ++t) report.worst_patterns.push_back(per_time[static_cast<std::size_t>(t)].worst);
  if (L >= t_max) report.notes.push_back("L >= t_max: at most one burst fits, reducing to the single-burst case");
  finalize(report);
  return report;
}

// ---------------------------------------------------------------------------
// Exchange inequalities

LemmaReport verify_exchange_inequalities(double rho, double sigma_z2, int samples, std::uint64_t seed) {
  if (samples < 0) throw ValidationError("sample count must be >= 0");
  const GaussianSystem sys(rho, sigma_z2, kExchangeMaxT);
  LemmaReport report;
  report.lemma = "exchange";

  LemmaCheck swap_u = make_check("replacing the oldest received index by a recent one lowers Var(u_t | .)");
  LemmaCheck swap_s = make_check("replacing the oldest received index by a recent one lowers Var(s_t | ., u_t)");
  for (int t = 1; t <= kExchangeMaxT; ++t)
    for (int b = 1; b <= 3; ++b)
      for (int k = 1; k <= t - b; ++k) {
        // recent: erased [t-b-k, t-k-1]; stale: erased [t-b-k+1, t-k]
        auto recent = range(0, t - b - k - 1);
        for (int i : range(t - k, t - 1)) recent.push_back(i);
        auto stale = range(0, t - b - k);
        for (int i : range(t - k + 1, t - 1)) stale.push_back(i);
        auto label = [&] {
          return "t=" + std::to_string(t) + " burst=" + std::to_string(b) + " offset=" + std::to_string(k);
        };
        const auto gr = conditioning(sys, recent, false, t), gs = conditioning(sys, stale, false, t);
        record(swap_u, conditional_variance(sys, sys.u(t), gr), conditional_variance(sys, sys.u(t), gs), label);
        const auto hr = conditioning(sys, recent, true, t), hs = conditioning(sys, stale, true, t);
        record(swap_s, conditional_variance(sys, sys.s(t), hr), conditional_variance(sys, sys.s(t), hs), label);
      }

  LemmaCheck dominate_s = make_check("index-dominating set B gives Var(s_t | u_B) <= Var(s_t | u_A), t >= b_r");
  LemmaCheck dominate_u = make_check("index-dominating set B gives Var(u_t | u_B) <= Var(u_t | u_A), t > b_r");
  PhiloxStream rng(seed, 0);
  auto draw = [&](int lo, int hi) {  // uniform integer in [lo, hi]
    return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (int n = 0; n < samples; ++n) {
    const int size = draw(1, 6);
    // b: distinct sorted indices in [1, kExchangeMaxT - 1]
    std::vector<int> pool = range(1, kExchangeMaxT - 1);
    for (int i = 0; i < size; ++i) std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(draw(i, static_cast<int>(pool.size()) - 1))]);
    std::vector<int> b_set(pool.begin(), pool.begin() + size);
    std::sort(b_set.begin(), b_set.end());
    std::vector<int> a_set;
    int floor = 0;
    for (int bi : b_set) {
      const int ai = draw(floor + 1, bi);
      a_set.push_back(ai);
      floor = ai;
    }
    const int t_s = draw(b_set.back(), kExchangeMaxT);
    const int t_u = draw(b_set.back() + 1, kExchangeMaxT);
    auto label = [&](int t) { return "A=" + join(a_set) + " B=" + join(b_set) + " t=" + std::to_string(t); };

    const auto ga = conditioning(sys, a_set, false, 0), gb = conditioning(sys, b_set, false, 0);
    record(dominate_s, conditional_variance(sys, sys.s(t_s), gb), conditional_variance(sys, sys.s(t_s), ga),
           [&] { return label(t_s); });
    record(dominate_u, conditional_variance(sys, sys.u(t_u), gb), conditional_variance(sys, sys.u(t_u), ga),
           [&] { return label(t_u); });
  }
  for (auto* c : {&swap_u, &swap_s, &dominate_s, &dominate_u}) report.checks.push_back(*c);
  finalize(report);
  return report;
}

}  // namespace streamrate
