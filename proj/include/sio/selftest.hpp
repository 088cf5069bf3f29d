#pragma once

// Randomized consistency checks run by `sio selftest` and by the acceptance
// suite. Each check draws from its own seeded stream, so results do not depend
// on which other checks ran.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "sio/channel.hpp"
#include "sio/convertibility.hpp"
#include "sio/linalg.hpp"
#include "sio/random.hpp"
#include "sio/semigroup.hpp"
#include "sio/typical_form.hpp"

namespace sio::selftest {

struct CheckResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

struct Counts {
  std::size_t mixture_forms = 1000;
  std::size_t states_per_form = 10;
  std::size_t real_forms = 1000;
  std::size_t dynamics_channels = 200;
  std::size_t powers_per_case = 100;
  std::uint64_t max_power = 100;
  std::size_t synthesis_forms = 1000;
  std::size_t conversion_pairs = 1000;

  static Counts full() { return {}; }
  static Counts reduced() { return {100, 10, 100, 100, 100, 100, 100, 100}; }
};

// Thresholds.
inline constexpr double kMixtureTol = 1e-10;
inline constexpr double kPauliOnlyTol = 1e-12;
inline constexpr double kPowerTol = 1e-9;
inline constexpr double kRoundTripTol = 1e-10;
inline constexpr double kConvergedBelow = 1e-6;
inline constexpr double kStuckAbove = 1e-3;
inline constexpr std::uint64_t kDynamicsSteps = 200;
inline constexpr double kMarginBandLow = 0.95;
inline constexpr std::size_t kRandomProbeStates = 20;

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline Rng stream(std::uint64_t seed, int id) {
  return Rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(id)));
}

// --- 1 ----------------------------------------------------------------------
inline CheckResult check_mixture_identity(std::uint64_t seed, const Counts& n) {
  Rng rng = stream(seed, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < n.mixture_forms; ++i) {
    const TypicalForm tf = random_typical_form(rng);
    const KrausChannel ch = to_kraus(tf);
    const MixtureDecomposition mix = decompose_pauli_phase(tf);
    for (std::size_t k = 0; k < n.states_per_form; ++k) {
      const DensityMatrix rho = random_state(rng);
      worst = std::max(worst, max_abs_diff(apply_mixture(mix, rho.matrix()), apply(ch, rho).matrix()));
    }
  }
  return {1, "Pauli/phase mixture reproduces Kraus action", worst <= kMixtureTol,
          "forms=" + std::to_string(n.mixture_forms) + " states/form=" + std::to_string(n.states_per_form) +
              " max_dev=" + sci(worst) + " tol=" + sci(kMixtureTol)};
}

// --- 2 ----------------------------------------------------------------------
inline CheckResult check_pauli_only(std::uint64_t seed, const Counts& n) {
  Rng rng = stream(seed, 2);
  double worst = 0.0;
  bool s_terms_zero = true;
  for (std::size_t i = 0; i < n.real_forms; ++i) {
    const TypicalForm tf = random_real_typical_form(rng);
    const MixtureDecomposition pauli = decompose_pauli(tf);
    worst = std::max(worst, max_abs_diff(pauli, decompose_pauli_phase(tf)));
    s_terms_zero = s_terms_zero && pauli.c_S == 0.0 && pauli.c_Sstar == 0.0 && pauli.c_Ss1 == 0.0 &&
                   pauli.c_Sstars2 == 0.0;
  }
  return {2, "Pauli-only decomposition matches on real b", worst <= kPauliOnlyTol && s_terms_zero,
          "forms=" + std::to_string(n.real_forms) + " max_coeff_dev=" + sci(worst) +
              " s_terms_zero=" + (s_terms_zero ? "true" : "false")};
}

// --- 3 ----------------------------------------------------------------------
inline CheckResult check_named_verdicts() {
  struct Case {
    KrausChannel channel;
    bool expected;
  };
  std::vector<Case> cases;
  for (double q : {0.1, 0.5, 0.9}) {
    cases.push_back({bit_flip(q), false});
    cases.push_back({bit_phase_flip(q), false});
    cases.push_back({phase_flip(q), false});
    cases.push_back({depolarizing(q), true});
  }
  constexpr double pi = std::numbers::pi;
  // |cos theta| = 1 exactly at 0 and pi.
  const std::array<std::pair<double, bool>, 5> angles{
      {{0.0, false}, {pi / 6.0, true}, {pi / 2.0, true}, {5.0 * pi / 6.0, true}, {pi, false}}};
  for (double q : {0.25, 0.75})
    for (const auto& [theta, expected] : angles) cases.push_back({f1_theta(q, theta), expected});

  int mismatches = 0;
  for (const auto& c : cases)
    if (relaxing_report(transfer_params(c.channel)).relaxing != c.expected) ++mismatches;
  return {3, "relaxing verdicts of the named channels", mismatches == 0,
          "verdicts=" + std::to_string(cases.size()) + " mismatches=" + std::to_string(mismatches)};
}

// --- 4 ----------------------------------------------------------------------
/// Channels whose dynamics cannot relax: |z| = 1, a flip channel, or f1-theta at theta in {0, pi}.
inline KrausChannel random_non_relaxing_channel(Rng& rng) {
  const double q = rng.uniform(0.05, 0.95);
  switch (rng.below(4)) {
    case 0: {
      const bool b2_vanishes = rng.coin();
      const double alpha = rng.uniform(0.0, std::numbers::pi / 2.0);
      const Complex phase = rng.unit_phase();
      if (b2_vanishes)  // z = 1
        return to_kraus(TypicalForm(std::cos(alpha), 0.0, std::sin(alpha), 0.0, phase, 0.0));
      return to_kraus(TypicalForm(0.0, std::cos(alpha), 0.0, std::sin(alpha), 0.0, phase));  // z = -1
    }
    case 1: {
      const std::array<Builtin, 3> flips{Builtin::BitFlip, Builtin::BitPhaseFlip, Builtin::PhaseFlip};
      return builtin(flips[rng.below(3)], q);
    }
    case 2: return f1_theta(q, 0.0);
    default: return f1_theta(q, std::numbers::pi);
  }
}

struct DynamicsProbe {
  bool converged = true;  // every probe below kConvergedBelow after kDynamicsSteps
  bool stuck = false;     // some probe above kStuckAbove at every step
  double worst_final = 0.0;
};

inline DynamicsProbe probe_dynamics(const KrausChannel& ch, Rng& rng) {
  std::vector<BlochVector> starts{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (std::size_t i = 0; i < kRandomProbeStates; ++i) starts.push_back(random_bloch(rng));
  DynamicsProbe probe;
  for (const auto& r : starts) {
    const Trajectory t = trajectory(ch, bloch_to_density(r), kDynamicsSteps);
    double lowest = t.distances.front();
    for (double d : t.distances) lowest = std::min(lowest, d);
    probe.worst_final = std::max(probe.worst_final, t.distances.back());
    probe.converged = probe.converged && t.distances.back() < kConvergedBelow;
    probe.stuck = probe.stuck || lowest > kStuckAbove;
  }
  return probe;
}

inline CheckResult check_relaxing_dynamics(std::uint64_t seed, const Counts& n) {
  Rng rng = stream(seed, 4);
  std::size_t relaxing = 0, agree = 0, total = 0;
  double worst_relaxing_final = 0.0;
  double worst_margin = 0.0;
  while (total < n.dynamics_channels) {
    const KrausChannel ch = total % 2 == 0 ? to_kraus(random_typical_form(rng)) : random_non_relaxing_channel(rng);
    const RelaxingReport rep = relaxing_report(transfer_params(ch));
    const double margin = rep.spectral_margin();
    // Only channels with margin outside [0.95, 1) take part; margins within
    // kStrictTol of 1 count as 1.
    if (margin >= kMarginBandLow && margin < 1.0 - kStrictTol) continue;
    ++total;
    const DynamicsProbe probe = probe_dynamics(ch, rng);
    const bool ok = rep.relaxing ? probe.converged && !probe.stuck : probe.stuck;
    if (ok) ++agree;
    if (rep.relaxing) {
      ++relaxing;
      worst_relaxing_final = std::max(worst_relaxing_final, probe.worst_final);
      if (!ok) worst_margin = std::max(worst_margin, margin);
    }
  }
  std::string detail = "channels=" + std::to_string(total) + " relaxing=" + std::to_string(relaxing) +
                       " agree=" + std::to_string(agree) + " worst_relaxing_final_distance=" +
                       sci(worst_relaxing_final);
  if (agree != total) detail += " largest_disagreeing_margin=" + sci(worst_margin);
  return {4, "relaxing verdict agrees with 200-step dynamics", agree == total, detail};
}

// --- 5 ----------------------------------------------------------------------
/// Plain repeated multiplication of the Bloch-plane block and z.
inline TransferParams power_by_multiplication(const TransferParams& tp, std::uint64_t n) {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0, z = 1.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double n11 = m11 * tp.a + m12 * tp.b;
    const double n12 = m11 * tp.c + m12 * tp.d;
    const double n21 = m21 * tp.a + m22 * tp.b;
    const double n22 = m21 * tp.c + m22 * tp.d;
    m11 = n11, m12 = n12, m21 = n21, m22 = n22;
    z *= tp.z;
  }
  return {m11, m21, m12, m22, z};
}

/// f1-theta on the zero-discriminant curve cos^2(theta) = 4(1-q)/(2-q)^2.
inline TransferParams repeated_eigenvalue_params(Rng& rng) {
  const double q = rng.uniform(0.05, 0.95);
  const double c = 2.0 * std::sqrt(1.0 - q) / (2.0 - q);
  const double theta = std::acos(rng.coin() ? c : -c);
  return abcd(TypicalForm::f1_theta(q, theta));
}

inline CheckResult check_closed_form_powers(std::uint64_t seed, const Counts& n) {
  Rng rng = stream(seed, 5);
  std::array<std::vector<TransferParams>, 3> by_case;
  const auto slot = [](SpectrumCase c) { return static_cast<std::size_t>(c); };
  std::size_t draws = 0;
  while ((by_case[slot(SpectrumCase::DistinctReal)].size() < n.powers_per_case ||
          by_case[slot(SpectrumCase::ComplexPair)].size() < n.powers_per_case) &&
         draws < 1000 * n.powers_per_case) {
    ++draws;
    const TransferParams tp = abcd(random_typical_form(rng));
    auto& bucket = by_case[slot(spectrum_case(tp))];
    if (bucket.size() < n.powers_per_case) bucket.push_back(tp);
  }
  std::size_t off_curve = 0;
  auto& repeated = by_case[slot(SpectrumCase::Repeated)];
  repeated.clear();
  while (repeated.size() < n.powers_per_case) {
    const TransferParams tp = repeated_eigenvalue_params(rng);
    if (spectrum_case(tp) != SpectrumCase::Repeated) ++off_curve;
    repeated.push_back(tp);
  }

  std::array<double, 3> worst{};
  for (std::size_t c = 0; c < 3; ++c)
    for (const auto& tp : by_case[c])
      for (std::uint64_t k = 1; k <= n.max_power; ++k)
        worst[c] = std::max(worst[c], max_abs_diff(power_closed_form(tp, k), power_by_multiplication(tp, k)));

  bool ok = off_curve == 0;
  for (std::size_t c = 0; c < 3; ++c) ok = ok && by_case[c].size() >= n.powers_per_case && worst[c] <= kPowerTol;
  return {5, "closed-form powers match repeated multiplication", ok,
          "per_case=" + std::to_string(by_case[0].size()) + "/" + std::to_string(by_case[1].size()) + "/" +
              std::to_string(by_case[2].size()) + " n<=" + std::to_string(n.max_power) +
              " max_dev(distinct/repeated/complex)=" + sci(worst[0]) + "/" + sci(worst[1]) + "/" +
              sci(worst[2]) + (off_curve ? " off_curve=" + std::to_string(off_curve) : "")};
}

// --- 6 ----------------------------------------------------------------------
inline CheckResult check_synthesis(std::uint64_t seed, const Counts& n) {
  Rng rng = stream(seed, 6);
  double worst = 0.0;
  for (std::size_t i = 0; i < n.synthesis_forms; ++i) {
    const TransferParams tp = abcd(random_typical_form(rng));
    worst = std::max(worst, max_abs_diff(abcd(synthesize(tp)), tp));
  }
  std::string diagnosis = "none";
  bool rejected = false;
  try {
    synthesize({1.0, 0.0, 0.0, 1.0, 0.0});
  } catch (const InfeasibleError& e) {
    diagnosis = e.what();
    rejected = diagnosis.find("|p| exceeds |b1|^2") != std::string::npos;
  }
  return {6, "synthesis round-trip and infeasibility diagnosis", worst <= kRoundTripTol && rejected,
          "forms=" + std::to_string(n.synthesis_forms) + " max_dev=" + sci(worst) +
              " infeasible_rejected=" + (rejected ? "true" : "false")};
}

// --- 7 ----------------------------------------------------------------------
inline CheckResult check_convertibility(std::uint64_t seed, const Counts& n) {
  Rng rng = stream(seed, 7);
  std::size_t cylinder_violations = 0, cuboid_violations = 0;
  for (std::size_t i = 0; i < n.conversion_pairs; ++i) {
    const DensityMatrix rho = random_state(rng);
    const BlochVector r = density_to_bloch(rho);
    const KrausChannel general = to_kraus(random_typical_form(rng));
    if (!convertible_sio(r, density_to_bloch(apply(general, rho)))) ++cylinder_violations;
    const KrausChannel pauli = to_kraus(random_real_typical_form(rng));
    if (!convertible_pauli_sio(r, density_to_bloch(apply(pauli, rho)))) ++cuboid_violations;
  }
  const BlochVector from{0.6, 0.0, 0.0}, to{0.0, 0.6, 0.0};
  const bool witness = convertible_sio(from, to) && !convertible_pauli_sio(from, to);
  return {7, "SIO outputs stay in cylinder/cuboid; witness separates them",
          cylinder_violations == 0 && cuboid_violations == 0 && witness,
          "pairs=" + std::to_string(n.conversion_pairs) + " cylinder_violations=" +
              std::to_string(cylinder_violations) + " cuboid_violations=" + std::to_string(cuboid_violations) +
              " witness=" + (witness ? "separates" : "fails")};
}

inline CheckResult run_check(int id, std::uint64_t seed, const Counts& n) {
  switch (id) {
    case 1: return check_mixture_identity(seed, n);
    case 2: return check_pauli_only(seed, n);
    case 3: return check_named_verdicts();
    case 4: return check_relaxing_dynamics(seed, n);
    case 5: return check_closed_form_powers(seed, n);
    case 6: return check_synthesis(seed, n);
    case 7: return check_convertibility(seed, n);
    default: return {id, "unknown check", false, ""};
  }
}

inline std::vector<CheckResult> run_all(std::uint64_t seed, const Counts& n) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= 7; ++id) out.push_back(run_check(id, seed, n));
  return out;
}

inline std::string format_line(const CheckResult& r) {
  return "[" + std::string(r.passed ? "PASS" : "FAIL") + "] " + std::to_string(r.id) + " " + r.title + ": " +
         r.detail;
}

}  // namespace sio::selftest
