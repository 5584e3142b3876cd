#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "qrom/core/stats.hpp"

namespace qrom::experiments {

/// Observed proportion compared with a target value at k binomial sigmas
/// (sigma taken at the target).
struct RateCheck {
  std::string name;
  std::string quantity;
  double expected = 0.0;
  Proportion observed;
  double sigmas = 4.0;

  double sigma() const { return binomial_sigma(expected, observed.trials); }
  double z() const {
    const double s = sigma();
    return s > 0.0 ? (observed.rate() - expected) / s : 0.0;
  }
  bool pass() const { return within_sigmas(observed.rate(), expected, observed.trials, sigmas); }
};

inline RateCheck rate_check(std::string name, std::string quantity, double expected, Proportion observed,
                            double sigmas) {
  return {std::move(name), std::move(quantity), expected, observed, sigmas};
}

}  // namespace qrom::experiments
