#pragma once

// Seeded samplers for states and channels. Uniform variates are built directly
// from mt19937_64 bits so sequences are identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "sio/channel.hpp"
#include "sio/linalg.hpp"
#include "sio/typical_form.hpp"

namespace sio {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool coin() { return (engine_() >> 63) != 0; }
  Complex unit_phase() { return std::polar(1.0, uniform(0.0, 2.0 * std::numbers::pi)); }

 private:
  std::mt19937_64 engine_;
};

/// Uniform in the closed unit ball (rejection from the cube).
inline BlochVector random_bloch(Rng& rng) {
  for (;;) {
    const BlochVector v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (v.norm() <= 1.0) return v;
  }
}

inline DensityMatrix random_state(Rng& rng) { return bloch_to_density(random_bloch(rng)); }

/// Bistochastic typical form: |b1|^2 = t uniform, (a1, a3) on the circle of
/// radius sqrt(t), (a2, a4) on the circle of radius sqrt(1 - t), random phases.
inline TypicalForm random_typical_form(Rng& rng) {
  const double t = rng.uniform();
  const double alpha = rng.uniform(0.0, std::numbers::pi / 2.0);
  const double beta = rng.uniform(0.0, std::numbers::pi / 2.0);
  const double s = std::sqrt(t), u = std::sqrt(1.0 - t);
  return {s * std::cos(alpha), u * std::cos(beta), s * std::sin(alpha), u * std::sin(beta), s * rng.unit_phase(),
          u * rng.unit_phase()};
}

/// As random_typical_form with b1, b2 real (random signs).
inline TypicalForm random_real_typical_form(Rng& rng) {
  const double t = rng.uniform();
  const double alpha = rng.uniform(0.0, std::numbers::pi / 2.0);
  const double beta = rng.uniform(0.0, std::numbers::pi / 2.0);
  const double s = std::sqrt(t), u = std::sqrt(1.0 - t);
  const double sign1 = rng.coin() ? 1.0 : -1.0;
  const double sign2 = rng.coin() ? 1.0 : -1.0;
  return {s * std::cos(alpha), u * std::cos(beta), s * std::sin(alpha), u * std::sin(beta), sign1 * s, sign2 * u};
}

/// Random strictly incoherent Kraus set, generally not bistochastic. Each
/// operator is diagonal, antidiagonal or single-entry; the set is then
/// normalized by C^{-1/2} on the right, C = sum K^dagger K, which is diagonal
/// and keeps every pattern intact.
inline KrausChannel random_sio_channel(Rng& rng, int count) {
  std::vector<ComplexMat2> ops;
  const auto entry = [&] { return rng.uniform(0.1, 1.0) * rng.unit_phase(); };
  for (int i = 0; i < count; ++i) {
    switch (rng.below(4)) {
      case 0: ops.push_back(ComplexMat2::diag(entry(), entry())); break;
      case 1: ops.push_back(ComplexMat2::antidiag(entry(), entry())); break;
      case 2: ops.push_back(ComplexMat2::diag(entry(), 0.0)); break;
      default: ops.push_back(ComplexMat2{0.0, 0.0, entry(), 0.0}); break;
    }
  }
  // Guarantee both columns are hit so C is invertible.
  ops.push_back(ComplexMat2::diag(entry(), entry()));
  ComplexMat2 c;
  for (const auto& k : ops) c += adjoint(k) * k;
  const ComplexMat2 inv_sqrt = ComplexMat2::diag(1.0 / std::sqrt(c(0, 0).real()), 1.0 / std::sqrt(c(1, 1).real()));
  for (auto& k : ops) k = k * inv_sqrt;
  return KrausChannel(ops);
}

}  // namespace sio
