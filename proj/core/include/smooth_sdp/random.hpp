#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "smooth_sdp/types.hpp"

namespace smooth_sdp {

/// Seeded Gaussian source. The engine (mt19937_64) is fully specified by the
/// standard; the uniform-to-normal map is done here so that draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    double u;
    do {
      u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance = 1.0) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  /// Entry drawn in the given field with E|x|^2 = 1.
  Complex field_normal(FieldTag field) {
    if (field == FieldTag::kReal) return {normal(), 0.0};
    return complex_normal(1.0);
  }

  Matrix field_matrix(Index rows, Index cols, FieldTag field) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) m(i, j) = field_normal(field);
    }
    return m;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace smooth_sdp
