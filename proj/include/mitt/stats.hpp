#pragma once

#include <cstdint>

namespace mitt {

/// Streaming mean / sample variance (Welford). Addition order matters at the
/// last ulp, so callers that promise bit-identical results must feed records
/// in a fixed order.
struct RunningMoments {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  /// Sample variance (n-1 denominator); requires n >= 2.
  double variance() const { return m2 / static_cast<double>(n - 1); }
};

/// Standard normal quantile, Phi^{-1}(p) for p in (0,1).
double normal_quantile(double p);

/// Standard normal upper tail, P(Z > x).
double normal_upper_tail(double x);

}  // namespace mitt
