#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "sqrac/qubit.hpp"

namespace sqrac {

/// mt19937_64 with hand-rolled conversions, so draws are identical across
/// standard library implementations (std::uniform_real_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
  }

  Vec3 unit_vector() {
    Vec3 v{normal(), normal(), normal()};
    double n = norm(v);
    while (n < 1e-12) {
      v = {normal(), normal(), normal()};
      n = norm(v);
    }
    return v * (1.0 / n);
  }

  /// Uniform in the unit ball.
  Vec3 ball_vector() { return unit_vector() * std::cbrt(uniform()); }

  /// Haar-random SU(2) element.
  Mat2 haar_unitary() {
    double q[4];
    double n = 0.0;
    do {
      n = 0.0;
      for (double& v : q) {
        v = normal();
        n += v * v;
      }
    } while (n < 1e-24);
    n = std::sqrt(n);
    const Complex i{0.0, 1.0};
    return Mat2::identity() * (q[0] / n) - i * Mat2::from_pauli(0.0, {q[1] / n, q[2] / n, q[3] / n});
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sqrac
