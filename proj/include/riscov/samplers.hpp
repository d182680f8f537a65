#pragma once

#include <cmath>
#include <cstdint>

#include "riscov/errors.hpp"
#include "riscov/rng.hpp"

namespace riscov {

/// Poisson draw by inversion. Means large enough to underflow exp(-mean)
/// are split using Poisson additivity.
inline std::uint64_t sample_poisson(double mean, RngStream& rng) {
  if (mean < 0.0 || !std::isfinite(mean))
    throw InvalidInput("sample_poisson: mean must be finite and non-negative");
  if (mean == 0.0) return 0;
  if (mean > 500.0) {
    const auto halves = static_cast<std::uint64_t>(mean / 400.0) + 1;
    const double part = mean / static_cast<double>(halves);
    std::uint64_t total = 0;
    for (std::uint64_t i = 0; i < halves; ++i) total += sample_poisson(part, rng);
    return total;
  }
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.uniform();
  } while (p > limit);
  return k - 1;
}

/// Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 boosted through
/// Gamma(shape + 1) * U^{1/shape}.
inline double sample_gamma(double shape, double rate, RngStream& rng) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw InvalidInput("sample_gamma: shape and rate must be positive");
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    return g * std::pow(u, 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v / rate;
  }
}

/// Nakagami-m envelope with E[x^2] = omega: sqrt of Gamma(m, scale omega/m).
inline double sample_nakagami(double m, double omega, RngStream& rng) {
  if (!(m > 0.0) || !(omega > 0.0))
    throw InvalidInput("sample_nakagami: m and omega must be positive");
  return std::sqrt(sample_gamma(m, m / omega, rng));
}

}  // namespace riscov
