#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sio/errors.hpp"
#include "sio/linalg.hpp"

namespace sio {

// Entries below this magnitude count as structural zeros in incoherence patterns.
inline constexpr double kZeroEntry = 1e-12;

inline bool is_zero_entry(Complex z) { return std::abs(z) < kZeroEntry; }

/// At most one nonzero entry per column: maps incoherent states to incoherent states.
inline bool is_incoherent_operator(const ComplexMat2& k) {
  for (int col = 0; col < 2; ++col)
    if (!is_zero_entry(k(0, col)) && !is_zero_entry(k(1, col))) return false;
  return true;
}

/// Both K and K^dagger incoherent, i.e. at most one nonzero entry per row and per column.
inline bool is_strictly_incoherent_operator(const ComplexMat2& k) {
  return is_incoherent_operator(k) && is_incoherent_operator(adjoint(k));
}

/// Kraus representation of a single-qubit channel. Construction drops zero
/// operators and enforces sum_j K_j^dagger K_j = I within kEps.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMat2> kraus) {
    for (auto& k : kraus)
      if (max_abs_entry(k) >= kZeroEntry) kraus_.push_back(k);
    if (kraus_.empty()) throw ValidationError("Kraus list is empty");
    if (max_abs_diff(completeness_sum(), ComplexMat2::identity()) > kEps)
      throw ValidationError("completeness violated: sum of K^dagger K differs from I");
  }

  std::span<const ComplexMat2> kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

  ComplexMat2 completeness_sum() const {
    ComplexMat2 acc;
    for (const auto& k : kraus_) acc += adjoint(k) * k;
    return acc;
  }

  ComplexMat2 unitality_sum() const {
    ComplexMat2 acc;
    for (const auto& k : kraus_) acc += k * adjoint(k);
    return acc;
  }

 private:
  std::vector<ComplexMat2> kraus_;
};

struct ChannelClass {
  bool trace_preserving = false;
  bool incoherent = false;
  bool strictly_incoherent = false;
  bool bistochastic = false;

  bool bistochastic_sio() const { return bistochastic && strictly_incoherent; }
  friend bool operator==(const ChannelClass&, const ChannelClass&) = default;
};

inline ChannelClass classify(const KrausChannel& ch) {
  ChannelClass cls;
  cls.trace_preserving = max_abs_diff(ch.completeness_sum(), ComplexMat2::identity()) <= kEps;
  cls.incoherent = true;
  cls.strictly_incoherent = true;
  for (const auto& k : ch.kraus()) {
    cls.incoherent = cls.incoherent && is_incoherent_operator(k);
    cls.strictly_incoherent = cls.strictly_incoherent && is_strictly_incoherent_operator(k);
  }
  cls.bistochastic = cls.trace_preserving && max_abs_diff(ch.unitality_sum(), ComplexMat2::identity()) <= kEps;
  return cls;
}

/// sum_j K_j X K_j^dagger, extended linearly to any 2x2 matrix.
inline ComplexMat2 apply(const KrausChannel& ch, const ComplexMat2& x) {
  ComplexMat2 acc;
  for (const auto& k : ch.kraus()) acc += k * x * adjoint(k);
  return acc;
}

inline DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply(ch, rho.matrix()));
}

/// Heisenberg-picture dual: sum_j K_j^dagger A K_j.
inline ComplexMat2 apply_dual(const KrausChannel& ch, const ComplexMat2& a) {
  ComplexMat2 acc;
  for (const auto& k : ch.kraus()) acc += adjoint(k) * a * k;
  return acc;
}

// Real Pauli transfer matrix in the basis (sigma_x, sigma_y, sigma_z, I):
// ptm[i][j] = Re tr(P_i Phi(P_j)) / 2.
using PauliTransferMatrix = std::array<std::array<double, 4>, 4>;

inline PauliTransferMatrix pauli_transfer_matrix(const KrausChannel& ch) {
  const std::array<ComplexMat2, 4> basis{sigma_x(), sigma_y(), sigma_z(), ComplexMat2::identity()};
  PauliTransferMatrix ptm{};
  for (std::size_t j = 0; j < 4; ++j) {
    const ComplexMat2 image = apply(ch, basis[j]);
    for (std::size_t i = 0; i < 4; ++i) ptm[i][j] = pauli_coefficient(image, basis[i]).real();
  }
  return ptm;
}

/// Action of a bistochastic SIO on the Bloch ball: sigma_x -> a sigma_x + b sigma_y,
/// sigma_y -> c sigma_x + d sigma_y, sigma_z -> z sigma_z. As a matrix on (rx, ry)
/// the block is [[a, c], [b, d]].
struct TransferParams {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;
  double z = 1.0;

  static TransferParams identity() { return {}; }
  friend bool operator==(const TransferParams&, const TransferParams&) = default;
};

inline double max_abs_diff(const TransferParams& x, const TransferParams& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c), std::abs(x.d - y.d),
                   std::abs(x.z - y.z)});
}

/// Reads (a, b, c, d, z) off a transfer matrix after checking it is
/// [[a, c], [b, d]] + diag(z, 1) with every other entry below kEps.
inline TransferParams transfer_params_from_ptm(const PauliTransferMatrix& ptm) {
  double residual = std::abs(ptm[3][3] - 1.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const bool in_xy_block = i < 2 && j < 2;
      const bool diagonal_tail = i == j && i >= 2;
      if (!in_xy_block && !diagonal_tail) residual = std::max(residual, std::abs(ptm[i][j]));
    }
  if (residual >= kEps)
    throw StructureError("transfer matrix is not block diagonal (residual " + std::to_string(residual) + ")");
  return {ptm[0][0], ptm[1][0], ptm[0][1], ptm[1][1], ptm[2][2]};
}

inline TransferParams transfer_params(const KrausChannel& ch) {
  if (!classify(ch).bistochastic_sio())
    throw ClassificationError("channel is not a bistochastic strictly incoherent operation");
  return transfer_params_from_ptm(pauli_transfer_matrix(ch));
}

enum class Builtin { BitFlip, BitPhaseFlip, PhaseFlip, Depolarizing, F1Theta };

inline std::optional<Builtin> builtin_from_name(std::string_view name) {
  if (name == "bit-flip") return Builtin::BitFlip;
  if (name == "bit-phase-flip") return Builtin::BitPhaseFlip;
  if (name == "phase-flip") return Builtin::PhaseFlip;
  if (name == "depolarizing") return Builtin::Depolarizing;
  if (name == "f1-theta") return Builtin::F1Theta;
  return std::nullopt;
}

inline std::string_view builtin_name(Builtin b) {
  switch (b) {
    case Builtin::BitFlip: return "bit-flip";
    case Builtin::BitPhaseFlip: return "bit-phase-flip";
    case Builtin::PhaseFlip: return "phase-flip";
    case Builtin::Depolarizing: return "depolarizing";
    case Builtin::F1Theta: return "f1-theta";
  }
  return "";
}

/// Named noise channels in their Pauli Kraus form:
///   bit/bit-phase/phase flip  {sqrt(1-q/2) I, sqrt(q/2) sigma_k}
///   depolarizing              {sqrt(1-3q/4) I, sqrt(q/4) sigma_{x,y,z}}
///   f1-theta                  {diag(s, s e^{i theta}), [[0, t e^{i theta}], [t, 0]]}, s = sqrt(1-q/2), t = sqrt(q/2)
inline KrausChannel builtin(Builtin kind, double q, std::optional<double> theta = std::nullopt) {
  if (!std::isfinite(q) || q < 0.0 || q > 1.0) throw InvalidParametersError("q must lie in [0, 1]");
  if ((kind == Builtin::F1Theta) != theta.has_value())
    throw InvalidParametersError("theta is required for f1-theta and only for f1-theta");
  if (theta && !std::isfinite(*theta)) throw InvalidParametersError("theta is not finite");

  const double keep = std::sqrt(1.0 - q / 2.0);
  const double flip = std::sqrt(q / 2.0);
  const ComplexMat2 id = ComplexMat2::identity();
  switch (kind) {
    case Builtin::BitFlip: return KrausChannel({keep * id, flip * sigma_x()});
    case Builtin::BitPhaseFlip: return KrausChannel({keep * id, flip * sigma_y()});
    case Builtin::PhaseFlip: return KrausChannel({keep * id, flip * sigma_z()});
    case Builtin::Depolarizing: {
      const double w = std::sqrt(q / 4.0);
      return KrausChannel({std::sqrt(1.0 - 0.75 * q) * id, w * sigma_x(), w * sigma_y(), w * sigma_z()});
    }
    case Builtin::F1Theta: {
      const Complex e = std::polar(1.0, *theta);
      return KrausChannel({ComplexMat2::diag(keep, keep * e), ComplexMat2::antidiag(flip * e, flip)});
    }
  }
  throw InvalidParametersError("unknown builtin channel");
}

inline KrausChannel builtin(std::string_view name, double q, std::optional<double> theta = std::nullopt) {
  const auto kind = builtin_from_name(name);
  if (!kind) throw InvalidParametersError("unknown builtin channel '" + std::string(name) + "'");
  return builtin(*kind, q, theta);
}

inline KrausChannel bit_flip(double q) { return builtin(Builtin::BitFlip, q); }
inline KrausChannel bit_phase_flip(double q) { return builtin(Builtin::BitPhaseFlip, q); }
inline KrausChannel phase_flip(double q) { return builtin(Builtin::PhaseFlip, q); }
inline KrausChannel depolarizing(double q) { return builtin(Builtin::Depolarizing, q); }
inline KrausChannel f1_theta(double q, double theta) { return builtin(Builtin::F1Theta, q, theta); }

}  // namespace sio
