#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sio/channel.hpp"
#include "sio/errors.hpp"
#include "sio/format.hpp"
#include "sio/linalg.hpp"

namespace sio {

// |discriminant| at or below this selects the repeated-eigenvalue formula.
inline constexpr double kDiscriminantTol = 1e-12;
// Margin used for the strict inequalities |lambda| < 1 and |z| < 1.
inline constexpr double kStrictTol = 1e-9;
inline constexpr std::uint64_t kMaxTrajectorySteps = 1'000'000;

enum class SpectrumCase { DistinctReal, Repeated, ComplexPair };

inline std::string_view to_string(SpectrumCase c) {
  switch (c) {
    case SpectrumCase::DistinctReal: return "DistinctReal";
    case SpectrumCase::Repeated: return "Repeated";
    case SpectrumCase::ComplexPair: return "ComplexPair";
  }
  return "";
}

/// (a - d)^2 + 4bc of the Bloch-plane block.
inline double discriminant(const TransferParams& tp) { return (tp.a - tp.d) * (tp.a - tp.d) + 4.0 * tp.b * tp.c; }

inline SpectrumCase spectrum_case(const TransferParams& tp) {
  const double delta = discriminant(tp);
  if (delta > kDiscriminantTol) return SpectrumCase::DistinctReal;
  if (delta < -kDiscriminantTol) return SpectrumCase::ComplexPair;
  return SpectrumCase::Repeated;
}

struct RelaxingReport {
  Complex lambda1;
  Complex lambda2;
  double mod1 = 0.0;
  double mod2 = 0.0;
  double z = 0.0;
  bool b1b2_nonzero = false;
  bool relaxing = false;
  SpectrumCase spectrum = SpectrumCase::Repeated;

  double spectral_margin() const { return std::max({mod1, mod2, std::abs(z)}); }
};

/// Relaxing criterion for a bistochastic SIO: Phi^n(rho) -> I/2 for every rho
/// iff both eigenvalues of the Bloch-plane block have modulus < 1 and
/// b1 b2 != 0, the latter being |z| < 1.
///
/// The block and its transpose share a spectrum, so orientation does not matter here.
inline RelaxingReport relaxing_report(const TransferParams& tp) {
  RelaxingReport rep;
  const double half_trace = 0.5 * (tp.a + tp.d);
  const Complex half_root = 0.5 * std::sqrt(Complex{discriminant(tp), 0.0});
  rep.lambda1 = half_trace + half_root;
  rep.lambda2 = half_trace - half_root;
  rep.mod1 = std::abs(rep.lambda1);
  rep.mod2 = std::abs(rep.lambda2);
  rep.z = tp.z;
  rep.b1b2_nonzero = std::abs(tp.z) < 1.0 - kStrictTol;
  rep.relaxing = rep.mod1 < 1.0 - kStrictTol && rep.mod2 < 1.0 - kStrictTol && rep.b1b2_nonzero;
  rep.spectrum = spectrum_case(tp);
  return rep;
}

/// Transfer parameters of Phi^n from the closed-form power of the 2x2 block
/// M = [[a, c], [b, d]]. With s_k = (l1^k - l2^k) / (l1 - l2):
///   (M^n)_11 = s_{n+1} - d s_n,  (M^n)_22 = s_{n+1} - a s_n,
///   (M^n)_12 = c s_n,            (M^n)_21 = b s_n,
/// where s_k = k l^{k-1} for a repeated eigenvalue and
/// s_k = m^{k-1} sin(k theta) / sin(theta) for l = m e^{+-i theta}.
/// n = 0 yields the identity.
inline TransferParams power_closed_form(const TransferParams& tp, std::uint64_t n) {
  if (n == 0) return TransferParams::identity();
  const auto nd = static_cast<double>(n);
  const double delta = discriminant(tp);
  double s_n = 0.0;
  double s_next = 0.0;

  switch (spectrum_case(tp)) {
    case SpectrumCase::DistinctReal: {
      const double root = std::sqrt(delta);
      const double l1 = 0.5 * (tp.a + tp.d + root);
      const double l2 = 0.5 * (tp.a + tp.d - root);
      s_n = (std::pow(l1, nd) - std::pow(l2, nd)) / (l1 - l2);
      s_next = (std::pow(l1, nd + 1.0) - std::pow(l2, nd + 1.0)) / (l1 - l2);
      break;
    }
    case SpectrumCase::Repeated: {
      const double l = 0.5 * (tp.a + tp.d);
      s_n = nd * std::pow(l, nd - 1.0);
      s_next = (nd + 1.0) * std::pow(l, nd);
      break;
    }
    case SpectrumCase::ComplexPair: {
      // ad - bc > 0 here, and theta is the argument of the eigenvalue with positive imaginary part.
      const double m = std::sqrt(tp.a * tp.d - tp.b * tp.c);
      const double theta = std::atan2(0.5 * std::sqrt(-delta), 0.5 * (tp.a + tp.d));
      const double sin_theta = std::sin(theta);
      s_n = std::pow(m, nd - 1.0) * std::sin(nd * theta) / sin_theta;
      s_next = std::pow(m, nd) * std::sin((nd + 1.0) * theta) / sin_theta;
      break;
    }
  }
  return {s_next - tp.d * s_n, tp.b * s_n, tp.c * s_n, s_next - tp.a * s_n, std::pow(tp.z, nd)};
}

/// Bloch vector after a channel with transfer parameters tp.
inline BlochVector apply_transfer(const TransferParams& tp, const BlochVector& r) {
  return {tp.a * r.rx + tp.c * r.ry, tp.b * r.rx + tp.d * r.ry, tp.z * r.rz};
}

/// n-fold Kraus application; n = 0 returns rho.
inline DensityMatrix iterate(const KrausChannel& ch, DensityMatrix rho, std::uint64_t n) {
  for (std::uint64_t k = 0; k < n; ++k) rho = apply(ch, rho);
  return rho;
}

struct Trajectory {
  std::vector<DensityMatrix> states;
  std::vector<double> distances;  // trace distance to I/2
};

inline Trajectory trajectory(const KrausChannel& ch, const DensityMatrix& rho0, std::uint64_t steps) {
  if (steps > kMaxTrajectorySteps)
    throw LimitError("trajectory length exceeds " + std::to_string(kMaxTrajectorySteps) + " steps");
  const DensityMatrix mixed = maximally_mixed();
  Trajectory t;
  t.states.reserve(steps + 1);
  t.distances.reserve(steps + 1);
  t.states.push_back(rho0);
  t.distances.push_back(trace_distance(rho0, mixed));
  for (std::uint64_t k = 1; k <= steps; ++k) {
    t.states.push_back(apply(ch, t.states.back()));
    t.distances.push_back(trace_distance(t.states.back(), mixed));
  }
  return t;
}

/// CSV with header step,distance,rx,ry,rz. When `closed_form` is given the rows
/// also carry the closed-form Bloch prediction and the max deviation from the
/// Kraus iteration.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& t, const TransferParams* closed_form = nullptr) {
  out << "step,distance,rx,ry,rz";
  if (closed_form) out << ",cf_rx,cf_ry,cf_rz,deviation";
  out << '\n';
  const BlochVector r0 = density_to_bloch(t.states.front());
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const BlochVector r = density_to_bloch(t.states[k]);
    out << k << ',' << format_g17(t.distances[k]) << ',' << format_g17(r.rx) << ',' << format_g17(r.ry) << ','
        << format_g17(r.rz);
    if (closed_form) {
      const BlochVector predicted = apply_transfer(power_closed_form(*closed_form, k), r0);
      out << ',' << format_g17(predicted.rx) << ',' << format_g17(predicted.ry) << ',' << format_g17(predicted.rz)
          << ',' << format_g17(max_abs_diff(r, predicted));
    }
    out << '\n';
  }
}

}  // namespace sio
