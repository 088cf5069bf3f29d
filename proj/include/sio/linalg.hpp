#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "sio/errors.hpp"

namespace sio {

using Complex = std::complex<double>;

// Validity tolerance shared by every module.
inline constexpr double kEps = 1e-9;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline Complex require_finite(Complex z, const char* what = "complex value") {
  if (!is_finite(z)) throw NonFiniteError(std::string(what) + " is not finite");
  return z;
}

// Unit-modulus phase of z; 1 for z == 0.
inline Complex phase_of(Complex z) {
  const double r = std::abs(z);
  return r == 0.0 ? Complex{1.0, 0.0} : z / r;
}

/// Dense 2x2 complex matrix, row-major. Public constructors reject NaN/Inf.
class ComplexMat2 {
 public:
  ComplexMat2() = default;

  ComplexMat2(Complex m00, Complex m01, Complex m10, Complex m11)
      : e_{require_finite(m00, "matrix entry"), require_finite(m01, "matrix entry"),
           require_finite(m10, "matrix entry"), require_finite(m11, "matrix entry")} {}

  static ComplexMat2 identity() { return diag(1.0, 1.0); }
  static ComplexMat2 diag(Complex upper, Complex lower) { return {upper, 0.0, 0.0, lower}; }
  /// [[0, upper], [lower, 0]]
  static ComplexMat2 antidiag(Complex upper, Complex lower) { return {0.0, upper, lower, 0.0}; }

  Complex operator()(int row, int col) const { return e_[static_cast<std::size_t>(2 * row + col)]; }
  const std::array<Complex, 4>& entries() const { return e_; }

  friend ComplexMat2 operator+(const ComplexMat2& a, const ComplexMat2& b) {
    return raw(a.e_[0] + b.e_[0], a.e_[1] + b.e_[1], a.e_[2] + b.e_[2], a.e_[3] + b.e_[3]);
  }
  friend ComplexMat2 operator-(const ComplexMat2& a, const ComplexMat2& b) {
    return raw(a.e_[0] - b.e_[0], a.e_[1] - b.e_[1], a.e_[2] - b.e_[2], a.e_[3] - b.e_[3]);
  }
  friend ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b) {
    return raw(a.e_[0] * b.e_[0] + a.e_[1] * b.e_[2], a.e_[0] * b.e_[1] + a.e_[1] * b.e_[3],
               a.e_[2] * b.e_[0] + a.e_[3] * b.e_[2], a.e_[2] * b.e_[1] + a.e_[3] * b.e_[3]);
  }
  friend ComplexMat2 operator*(Complex s, const ComplexMat2& a) {
    return raw(s * a.e_[0], s * a.e_[1], s * a.e_[2], s * a.e_[3]);
  }
  friend ComplexMat2 operator*(const ComplexMat2& a, Complex s) { return s * a; }
  ComplexMat2& operator+=(const ComplexMat2& other) { return *this = *this + other; }

  friend bool operator==(const ComplexMat2&, const ComplexMat2&) = default;

 private:
  static ComplexMat2 raw(Complex m00, Complex m01, Complex m10, Complex m11) {
    ComplexMat2 m;
    m.e_ = {m00, m01, m10, m11};
    return m;
  }

  std::array<Complex, 4> e_{};
};

inline ComplexMat2 mul(const ComplexMat2& a, const ComplexMat2& b) { return a * b; }

inline ComplexMat2 adjoint(const ComplexMat2& a) {
  return {std::conj(a(0, 0)), std::conj(a(1, 0)), std::conj(a(0, 1)), std::conj(a(1, 1))};
}

inline Complex trace(const ComplexMat2& a) { return a(0, 0) + a(1, 1); }

inline double max_abs_diff(const ComplexMat2& a, const ComplexMat2& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
  return worst;
}

inline double max_abs_entry(const ComplexMat2& a) { return max_abs_diff(a, ComplexMat2{}); }

inline bool is_hermitian(const ComplexMat2& a, double tol = kEps) { return max_abs_diff(a, adjoint(a)) <= tol; }

// Pauli operators and the phase operator S = diag(1, i).
inline ComplexMat2 sigma_x() { return ComplexMat2::antidiag(1.0, 1.0); }
inline ComplexMat2 sigma_y() { return ComplexMat2::antidiag(Complex{0.0, -1.0}, Complex{0.0, 1.0}); }
inline ComplexMat2 sigma_z() { return ComplexMat2::diag(1.0, -1.0); }
inline ComplexMat2 phase_s() { return ComplexMat2::diag(1.0, Complex{0.0, 1.0}); }

inline const std::array<ComplexMat2, 3>& paulis() {
  static const std::array<ComplexMat2, 3> p{sigma_x(), sigma_y(), sigma_z()};
  return p;
}

/// Coefficient of `basis` (a Pauli or I) in the expansion of `m`: tr(basis * m) / 2.
inline Complex pauli_coefficient(const ComplexMat2& m, const ComplexMat2& basis) { return trace(basis * m) / 2.0; }

struct HermitianSpectrum {
  double low;
  double high;
};

// Closed form mean +- radius on the Hermitian part of `a`.
inline HermitianSpectrum hermitian_eigenvalues(const ComplexMat2& a) {
  const double p = a(0, 0).real();
  const double q = a(1, 1).real();
  const Complex off = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
  const double mean = 0.5 * (p + q);
  const double radius = std::hypot(0.5 * (p - q), std::abs(off));
  return {mean - radius, mean + radius};
}

struct BlochVector {
  double rx = 0.0;
  double ry = 0.0;
  double rz = 0.0;

  double norm() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline double max_abs_diff(const BlochVector& a, const BlochVector& b) {
  return std::max({std::abs(a.rx - b.rx), std::abs(a.ry - b.ry), std::abs(a.rz - b.rz)});
}

/// Qubit density matrix: Hermitian, unit trace and positive semidefinite, each
/// within kEps. An eigenvalue in [-kEps, 0) is clamped to zero; anything more
/// negative is rejected.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMat2& m) : m_(validated(m)) {}

  const ComplexMat2& matrix() const { return m_; }

 private:
  static ComplexMat2 validated(const ComplexMat2& m) {
    if (!is_hermitian(m)) throw InvalidStateError("density matrix is not Hermitian");
    const Complex tr = trace(m);
    if (std::abs(tr - 1.0) > kEps) throw InvalidStateError("density matrix trace differs from 1");
    const ComplexMat2 h = 0.5 * (m + adjoint(m));
    const auto spec = hermitian_eigenvalues(h);
    if (spec.low < -kEps) throw InvalidStateError("density matrix has a negative eigenvalue");
    if (spec.low >= 0.0) return h;
    // Drop the slightly negative eigenvalue: keep only the top eigenprojector.
    const double rx = pauli_coefficient(h, sigma_x()).real();
    const double ry = pauli_coefficient(h, sigma_y()).real();
    const double rz = pauli_coefficient(h, sigma_z()).real();
    const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
    return (0.5 * spec.high) *
           (ComplexMat2::identity() + (rx / r) * sigma_x() + (ry / r) * sigma_y() + (rz / r) * sigma_z());
  }

  ComplexMat2 m_;
};

/// rho = (I + r . sigma) / 2.
inline DensityMatrix bloch_to_density(const BlochVector& v) {
  if (!std::isfinite(v.rx) || !std::isfinite(v.ry) || !std::isfinite(v.rz))
    throw NonFiniteError("Bloch vector is not finite");
  if (v.norm() > 1.0 + kEps) throw InvalidStateError("Bloch vector norm exceeds 1");
  const ComplexMat2 m = 0.5 * (ComplexMat2::identity() + v.rx * sigma_x() + v.ry * sigma_y() + v.rz * sigma_z());
  return DensityMatrix(m);
}

inline BlochVector density_to_bloch(const DensityMatrix& rho) {
  const ComplexMat2& m = rho.matrix();
  return {trace(m * sigma_x()).real(), trace(m * sigma_y()).real(), trace(m * sigma_z()).real()};
}

/// Half the trace norm of rho - sigma.
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const auto spec = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
  return std::clamp(0.5 * (std::abs(spec.low) + std::abs(spec.high)), 0.0, 1.0);
}

inline DensityMatrix maximally_mixed() { return DensityMatrix(0.5 * ComplexMat2::identity()); }

}  // namespace sio
