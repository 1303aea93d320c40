#pragma once

// Reference computations that share no code with the library: brute-force
// joint pmfs of Markov paths, scalar Riccati iteration, and plain quadratic
// roots.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using Table = std::vector<std::vector<double>>;

/// Stationary law by iterating pi <- pi P from uniform.
inline std::vector<double> stationary(const Table& P) {
  const std::size_t n = P.size();
  std::vector<double> pi(n, 1.0 / n);
  for (int it = 0; it < 200000; ++it) {
    std::vector<double> next(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) next[b] += pi[a] * P[a][b];
    double diff = 0.0;
    for (std::size_t a = 0; a < n; ++a) diff += std::abs(next[a] - pi[a]);
    pi = next;
    if (diff < 1e-15) break;
  }
  return pi;
}

/// Joint pmf of (s_0, ..., s_len) for the stationary chain, as a map from the
/// full path to probability.
class PathLaw {
 public:
  PathLaw(const Table& P, int len) : P_(P), len_(len) {
    const auto pi = stationary(P);
    std::vector<int> path(static_cast<std::size_t>(len + 1), 0);
    walk(path, 0, 1.0, pi);
  }

  /// H(s_idx) in bits for an index set (duplicates ignored).
  double entropy(std::vector<int> idx) const {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    const std::size_t n = P_.size();
    std::size_t cells = 1;
    for (std::size_t k = 0; k < idx.size(); ++k) cells *= n;
    std::vector<double> marginal(cells, 0.0);
    for (const auto& [path, p] : paths_) {
      std::size_t key = 0;
      for (int i : idx) key = key * n + static_cast<std::size_t>(path[static_cast<std::size_t>(i)]);
      marginal[key] += p;
    }
    double h = 0.0;
    for (double p : marginal)
      if (p > 0.0) h -= p * std::log2(p);
    return h;
  }

  double conditional_entropy(std::vector<int> target, const std::vector<int>& given) const {
    std::vector<int> joint = target;
    joint.insert(joint.end(), given.begin(), given.end());
    return entropy(joint) - entropy(given);
  }

  /// I(A; C | Z).
  double mutual_information(std::vector<int> a, std::vector<int> c, const std::vector<int>& z) const {
    auto cat = [](std::vector<int> x, const std::vector<int>& y) {
      x.insert(x.end(), y.begin(), y.end());
      return x;
    };
    return entropy(cat(a, z)) + entropy(cat(c, z)) - entropy(cat(cat(a, c), z)) - entropy(z);
  }

 private:
  void walk(std::vector<int>& path, int pos, double p, const std::vector<double>& pi) {
    const int n = static_cast<int>(P_.size());
    for (int a = 0; a < n; ++a) {
      const double q = pos == 0 ? pi[static_cast<std::size_t>(a)]
                                : p * P_[static_cast<std::size_t>(path[static_cast<std::size_t>(pos - 1)])][static_cast<std::size_t>(a)];
      if (q == 0.0) continue;
      path[static_cast<std::size_t>(pos)] = a;
      if (pos == len_)
        paths_.emplace_back(path, q);
      else
        walk(path, pos + 1, q, pi);
    }
  }

  Table P_;
  int len_;
  std::vector<std::pair<std::vector<int>, double>> paths_;
};

/// Steady-state one-step prediction error by iterating the Riccati map.
inline double riccati_prediction(double rho, double sigma_z2) {
  double p = 1.0;
  for (int it = 0; it < 1000000; ++it) {
    const double filtered = p * sigma_z2 / (p + sigma_z2);
    const double next = rho * rho * filtered + 1.0 - rho * rho;
    if (std::abs(next - p) < 1e-16) return next;
    p = next;
  }
  return p;
}

/// Larger root of a y^2 + b y + c = 0 by Newton's method from far right.
inline double larger_root(double a, double b, double c) {
  double y = std::max(1.0, (std::abs(b) + std::abs(c)) / std::abs(a) + 1.0);
  for (int it = 0; it < 200; ++it) {
    const double f = (a * y + b) * y + c;
    const double df = 2.0 * a * y + b;
    const double step = f / df;
    y -= step;
    if (std::abs(step) < 1e-16 * std::abs(y)) break;
  }
  return y;
}

/// Conditional variance of a jointly Gaussian vector by sequential scalar
/// conditioning (Gram-Schmidt), no matrix factorization.
inline double conditional_variance(Table cov, int target, const std::vector<int>& given) {
  for (int g : given) {
    const double vg = cov[static_cast<std::size_t>(g)][static_cast<std::size_t>(g)];
    if (vg <= 1e-300) continue;
    const std::size_t n = cov.size();
    Table next = cov;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        next[i][j] = cov[i][j] - cov[i][static_cast<std::size_t>(g)] * cov[static_cast<std::size_t>(g)][j] / vg;
    cov = next;
  }
  return cov[static_cast<std::size_t>(target)][static_cast<std::size_t>(target)];
}

inline double hb(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1 - q) * std::log2(1 - q);
}

}  // namespace oracle
