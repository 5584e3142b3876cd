#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace qrom::qsim {

inline constexpr double kDistributionTolerance = 1e-9;

inline void require_distribution(std::span<const double> d, const char* what) {
  double s = 0.0;
  for (double p : d) {
    if (p < -kDistributionTolerance)
      throw std::invalid_argument(std::string(what) + ": negative probability");
    s += p;
  }
  if (std::abs(s - 1.0) > kDistributionTolerance)
    throw std::invalid_argument(std::string(what) + ": distribution does not sum to 1");
}

/// Sum over the domain of |d1(x) - d2(x)|. This is twice the usual
/// half-L1 distance, so disjoint point masses are at distance 2.
inline double total_variation(std::span<const double> d1, std::span<const double> d2) {
  if (d1.size() != d2.size()) throw std::invalid_argument("total_variation: domain mismatch");
  require_distribution(d1, "total_variation");
  require_distribution(d2, "total_variation");
  double s = 0.0;
  for (std::size_t i = 0; i < d1.size(); ++i) s += std::abs(d1[i] - d2[i]);
  return s;
}

/// Distance of `d` from the uniform distribution on its domain.
inline double distance_from_uniform(std::span<const double> d) {
  require_distribution(d, "distance_from_uniform");
  const double u = 1.0 / static_cast<double>(d.size());
  double s = 0.0;
  for (double p : d) s += std::abs(p - u);
  return s;
}

}  // namespace qrom::qsim
