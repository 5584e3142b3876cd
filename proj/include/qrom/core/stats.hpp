#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace qrom {

/// Standard deviation of a binomial proportion estimate.
inline double binomial_sigma(double p, std::size_t n) {
  if (n == 0) return 0.0;
  p = std::clamp(p, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

/// Running proportion with a confidence radius.
struct Proportion {
  std::size_t hits = 0;
  std::size_t trials = 0;

  void add(bool hit) {
    ++trials;
    if (hit) ++hits;
  }
  double rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
  }
  /// Radius of a k-sigma interval around the observed rate.
  double radius(double k) const { return k * binomial_sigma(rate(), trials); }
};

/// |observed - expected| within k binomial standard deviations of `expected`
/// at sample size n. A floor of 1e-9 keeps exact-probability cases (p = 0 or
/// 1) from demanding bit-exact agreement of a double.
inline bool within_sigmas(double observed, double expected, std::size_t n,
                          double k) {
  return std::abs(observed - expected) <=
         std::max(k * binomial_sigma(expected, n), 1e-9);
}

/// Mean and standard error accumulator.
struct MeanAccumulator {
  std::size_t n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sum_sq += x * x;
  }
  double mean() const { return n == 0 ? 0.0 : sum / static_cast<double>(n); }
  double standard_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

}  // namespace qrom
