#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "sio/channel.hpp"
#include "sio/errors.hpp"
#include "sio/format.hpp"
#include "sio/linalg.hpp"

namespace sio {

/// Four-operator Kraus parameterization of a single-qubit SIO:
///   diag(a1, b1), [[0, b2], [a2, 0]], [[a3, 0], [0, 0]], [[0, 0], [a4, 0]]
/// with sum a_i^2 = |b1|^2 + |b2|^2 = 1. Only the bistochastic subfamily is
/// admitted: a1^2 + a3^2 + |b2|^2 = 1 and a2^2 + a4^2 + |b1|^2 = 1.
///
/// The a_i are stored nonnegative. A negative a1 or a2 is absorbed into the
/// sign of b1 or b2 (a global phase of that Kraus operator); a negative a3 or
/// a4 is simply dropped as a global phase.
class TypicalForm {
 public:
  TypicalForm(double a1, double a2, double a3, double a4, Complex b1, Complex b2) {
    for (double v : {a1, a2, a3, a4})
      if (!std::isfinite(v)) throw InvalidParametersError("typical form parameter is not finite");
    if (!is_finite(b1) || !is_finite(b2)) throw InvalidParametersError("typical form parameter is not finite");

    const double nb1 = std::norm(b1);
    const double nb2 = std::norm(b2);
    if (std::abs(a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4 - 1.0) > kEps)
      throw InvalidParametersError("sum of a_i^2 differs from 1");
    if (std::abs(nb1 + nb2 - 1.0) > kEps) throw InvalidParametersError("|b1|^2 + |b2|^2 differs from 1");
    if (std::abs(a1 * a1 + a3 * a3 + nb2 - 1.0) > kEps)
      throw InvalidParametersError("not bistochastic: a1^2 + a3^2 + |b2|^2 differs from 1");
    if (std::abs(a2 * a2 + a4 * a4 + nb1 - 1.0) > kEps)
      throw InvalidParametersError("not bistochastic: a2^2 + a4^2 + |b1|^2 differs from 1");

    if (a1 < 0.0) b1 = -b1;
    if (a2 < 0.0) b2 = -b2;
    a_ = {std::abs(a1), std::abs(a2), std::abs(a3), std::abs(a4)};
    b1_ = b1;
    b2_ = b2;
  }

  static TypicalForm identity() { return {1.0, 0.0, 0.0, 0.0, 1.0, 0.0}; }

  static TypicalForm bit_flip(double q) {
    const double s = std::sqrt(1.0 - q / 2.0), t = std::sqrt(q / 2.0);
    return {s, t, 0.0, 0.0, s, t};
  }
  // Second operator is -i sqrt(q/2) sigma_y.
  static TypicalForm bit_phase_flip(double q) {
    const double s = std::sqrt(1.0 - q / 2.0), t = std::sqrt(q / 2.0);
    return {s, t, 0.0, 0.0, s, -t};
  }
  // {diag(1-q, 1), diag(sqrt(2q - q^2), 0)}
  static TypicalForm phase_flip(double q) { return {1.0 - q, 0.0, std::sqrt(2.0 * q - q * q), 0.0, 1.0, 0.0}; }
  static TypicalForm f1_theta(double q, double theta) {
    const double s = std::sqrt(1.0 - q / 2.0), t = std::sqrt(q / 2.0);
    const Complex e = std::polar(1.0, theta);
    return {s, t, 0.0, 0.0, s * e, t * e};
  }

  double a1() const { return a_[0]; }
  double a2() const { return a_[1]; }
  double a3() const { return a_[2]; }
  double a4() const { return a_[3]; }
  const std::array<double, 4>& a() const { return a_; }
  Complex b1() const { return b1_; }
  Complex b2() const { return b2_; }

  bool has_real_b(double tol = kEps) const { return std::abs(b1_.imag()) <= tol && std::abs(b2_.imag()) <= tol; }

 private:
  std::array<double, 4> a_{};
  Complex b1_;
  Complex b2_;
};

inline KrausChannel to_kraus(const TypicalForm& tf) {
  return KrausChannel({
      ComplexMat2::diag(tf.a1(), tf.b1()),
      ComplexMat2::antidiag(tf.b2(), tf.a2()),
      ComplexMat2::diag(tf.a3(), 0.0),
      ComplexMat2{0.0, 0.0, tf.a4(), 0.0},
  });
}

/// a + bi = a1 b1 + a2 conj(b2), c + di = i (a1 b1 - a2 conj(b2)), z = |b1|^2 - |b2|^2.
inline TransferParams abcd(const TypicalForm& tf) {
  const Complex p = tf.a1() * tf.b1();
  const Complex r = tf.a2() * std::conj(tf.b2());
  const Complex sum = p + r;
  const Complex rotated = Complex{0.0, 1.0} * (p - r);
  return {sum.real(), sum.imag(), rotated.real(), rotated.imag(), std::norm(tf.b1()) - std::norm(tf.b2())};
}

/// Coefficients of the operator-sum identity
///   Phi(rho) = c_I I + c_id rho + c_S S rho S* + c_Sstar S* rho S
///            + c_s1 X rho X + c_s2 Y rho Y + c_s3 Z rho Z
///            + c_Ss1 S X rho X S* + c_Sstars2 S* Y rho Y S
/// valid for unit-trace rho. Coefficients may be negative.
struct MixtureDecomposition {
  double c_I = 0.0;
  double c_id = 0.0;
  double c_S = 0.0;
  double c_Sstar = 0.0;
  double c_s1 = 0.0;
  double c_s2 = 0.0;
  double c_s3 = 0.0;
  double c_Ss1 = 0.0;
  double c_Sstars2 = 0.0;

  static MixtureDecomposition from_transfer(const TransferParams& tp) {
    MixtureDecomposition m;
    m.c_I = 0.5 * (1.0 - tp.a - tp.b - tp.c - tp.d - tp.z);
    m.c_id = 0.5 * (tp.a + tp.d + tp.z);
    m.c_S = 0.5 * tp.b;
    m.c_Sstar = 0.5 * tp.c;
    m.c_s1 = 0.5 * tp.a;
    m.c_s2 = 0.5 * tp.d;
    m.c_s3 = 0.5 * tp.z;
    m.c_Ss1 = 0.5 * tp.b;
    m.c_Sstars2 = 0.5 * tp.c;
    return m;
  }

  /// Serialization order.
  std::array<std::pair<std::string_view, double>, 9> named() const {
    return {{{"c_I", c_I},
             {"c_id", c_id},
             {"c_S", c_S},
             {"c_Sstar", c_Sstar},
             {"c_s1", c_s1},
             {"c_s2", c_s2},
             {"c_s3", c_s3},
             {"c_Ss1", c_Ss1},
             {"c_Sstars2", c_Sstars2}}};
  }

  /// 2 c_I + (sum of the rest); equals 1 for a trace-preserving mixture.
  double trace_weight() const {
    return 2.0 * c_I + c_id + c_S + c_Sstar + c_s1 + c_s2 + c_s3 + c_Ss1 + c_Sstars2;
  }
};

inline double max_abs_diff(const MixtureDecomposition& x, const MixtureDecomposition& y) {
  double worst = 0.0;
  const auto nx = x.named();
  const auto ny = y.named();
  for (std::size_t i = 0; i < nx.size(); ++i) worst = std::max(worst, std::abs(nx[i].second - ny[i].second));
  return worst;
}

/// Evaluates the nine-term sum on x.
inline ComplexMat2 apply_mixture(const MixtureDecomposition& m, const ComplexMat2& x) {
  const ComplexMat2 s = phase_s();
  const ComplexMat2 sd = adjoint(s);
  const ComplexMat2 sx = sigma_x();
  const ComplexMat2 sy = sigma_y();
  const ComplexMat2 sz = sigma_z();
  return m.c_I * ComplexMat2::identity() + m.c_id * x + m.c_S * (s * x * sd) + m.c_Sstar * (sd * x * s) +
         m.c_s1 * (sx * x * sx) + m.c_s2 * (sy * x * sy) + m.c_s3 * (sz * x * sz) +
         m.c_Ss1 * (s * sx * x * sx * sd) + m.c_Sstars2 * (sd * sy * x * sy * s);
}

/// Pauli plus phase-operator decomposition, valid for every bistochastic typical form.
inline MixtureDecomposition decompose_pauli_phase(const TypicalForm& tf) {
  return MixtureDecomposition::from_transfer(abcd(tf));
}

/// Pauli-only decomposition for real b1, b2: the S-terms vanish identically.
inline MixtureDecomposition decompose_pauli(const TypicalForm& tf) {
  if (!tf.has_real_b()) throw NotApplicableError("Pauli-only decomposition requires real b1 and b2");
  const double b1 = tf.b1().real();
  const double b2 = tf.b2().real();
  const double a = tf.a1() * b1 + tf.a2() * b2;
  const double d = tf.a1() * b1 - tf.a2() * b2;
  const double z = std::norm(tf.b1()) - std::norm(tf.b2());
  MixtureDecomposition m;
  m.c_I = 0.5 * (1.0 - a - d - z);
  m.c_id = 0.5 * (a + d + z);
  m.c_s1 = 0.5 * a;
  m.c_s2 = 0.5 * d;
  m.c_s3 = 0.5 * z;
  return m;
}

/// Builds a typical form whose transfer parameters are `tp`.
///
/// With p = a1 b1 = ((a + d) + (b - c) i) / 2 and r = a2 conj(b2) = ((a - d) + (b + c) i) / 2,
/// |b1|^2 = (1 + z) / 2 and |b2|^2 = (1 - z) / 2, a solution exists iff
/// |p| <= |b1|^2 and |r| <= |b2|^2. Bounds carry kEps slack and are clamped.
inline TypicalForm synthesize(const TransferParams& tp) {
  for (double v : {tp.a, tp.b, tp.c, tp.d, tp.z})
    if (!std::isfinite(v)) throw InfeasibleError("transfer parameters are not finite");
  if (std::abs(tp.z) > 1.0 + kEps)
    throw InfeasibleError("|z| exceeds 1 (z = " + format_g17(tp.z) + ")");

  const double z = std::clamp(tp.z, -1.0, 1.0);
  const double b1_sq = 0.5 * (1.0 + z);
  const double b2_sq = 0.5 * (1.0 - z);
  const Complex p{0.5 * (tp.a + tp.d), 0.5 * (tp.b - tp.c)};
  const Complex r{0.5 * (tp.a - tp.d), 0.5 * (tp.b + tp.c)};

  if (std::abs(p) > b1_sq + kEps)
    throw InfeasibleError("|p| exceeds |b1|^2 (|p| = " + format_g17(std::abs(p)) +
                          ", |b1|^2 = " + format_g17(b1_sq) + ")");
  if (std::abs(r) > b2_sq + kEps)
    throw InfeasibleError("|r| exceeds |b2|^2 (|r| = " + format_g17(std::abs(r)) +
                          ", |b2|^2 = " + format_g17(b2_sq) + ")");

  const double b1_mod = std::sqrt(b1_sq);
  const double b2_mod = std::sqrt(b2_sq);
  const double a1 = b1_mod > 0.0 ? std::min(std::abs(p) / b1_mod, b1_mod) : 0.0;
  const double a2 = b2_mod > 0.0 ? std::min(std::abs(r) / b2_mod, b2_mod) : 0.0;
  // Gaps at round-off level are boundary points where a3 or a4 vanishes.
  const auto leftover = [](double gap) { return gap > 4.0 * std::numeric_limits<double>::epsilon() ? std::sqrt(gap) : 0.0; };
  const double a3 = leftover(b1_sq - a1 * a1);
  const double a4 = leftover(b2_sq - a2 * a2);
  return {a1, a2, a3, a4, b1_mod * phase_of(p), b2_mod * std::conj(phase_of(r))};
}

}  // namespace sio
