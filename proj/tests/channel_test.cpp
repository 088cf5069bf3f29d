#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "sio/channel.hpp"
#include "sio/random.hpp"
#include "sio/typical_form.hpp"

namespace {

using sio::Complex;
using sio::ComplexMat2;
using sio::KrausChannel;
using sio::TransferParams;

constexpr double kTol = 1e-12;

bool same_action(const KrausChannel& x, const KrausChannel& y) {
  for (const auto& p : {sio::sigma_x(), sio::sigma_y(), sio::sigma_z(), ComplexMat2::identity()})
    if (sio::max_abs_diff(sio::apply(x, p), sio::apply(y, p)) > kTol) return false;
  return true;
}

std::vector<KrausChannel> all_builtins() {
  std::vector<KrausChannel> out;
  for (double q : {0.0, 0.3, 1.0}) {
    out.push_back(sio::bit_flip(q));
    out.push_back(sio::bit_phase_flip(q));
    out.push_back(sio::phase_flip(q));
    out.push_back(sio::depolarizing(q));
    out.push_back(sio::f1_theta(q, 0.7));
  }
  return out;
}

TEST(KrausChannel, RejectsIncompleteSet) {
  try {
    KrausChannel({ComplexMat2::diag(1.0, 0.0), ComplexMat2{0.0, 0.0, 0.5, 0.0}});
    FAIL() << "expected a validation error";
  } catch (const sio::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("completeness violated"), std::string::npos);
  }
  EXPECT_THROW(KrausChannel(std::vector<ComplexMat2>{}), sio::ValidationError);
  EXPECT_THROW(KrausChannel({ComplexMat2{}}), sio::ValidationError);
}

TEST(Classify, Examples) {
  const sio::ChannelClass all{true, true, true, true};
  EXPECT_EQ(sio::classify(sio::bit_flip(0.5)), all);
  EXPECT_EQ(sio::classify(KrausChannel({ComplexMat2::identity()})), all);

  // Amplitude-damping-like reset: strictly incoherent, not unital.
  const auto reset = sio::classify(KrausChannel({ComplexMat2::diag(1.0, 0.0), ComplexMat2{0.0, 1.0, 0.0, 0.0}}));
  EXPECT_EQ(reset, (sio::ChannelClass{true, true, true, false}));

  // Measure in the |+>,|-> basis and prepare |0>: incoherent but not strictly.
  const double h = 1.0 / std::sqrt(2.0);
  const auto icoh = sio::classify(KrausChannel({ComplexMat2{h, h, 0.0, 0.0}, ComplexMat2{h, -h, 0.0, 0.0}}));
  EXPECT_TRUE(icoh.trace_preserving);
  EXPECT_TRUE(icoh.incoherent);
  EXPECT_FALSE(icoh.strictly_incoherent);
  EXPECT_FALSE(icoh.bistochastic);

  // Hadamard: neither.
  const auto had = sio::classify(KrausChannel({ComplexMat2{h, h, h, -h}}));
  EXPECT_FALSE(had.incoherent);
  EXPECT_FALSE(had.strictly_incoherent);
  EXPECT_TRUE(had.bistochastic);
}

// Strict incoherence is exactly "at most one nonzero entry per row and per
// column"; incoherence is "at most one per column".
TEST(Classify, ExhaustivePatterns) {
  for (int mask = 1; mask < 16; ++mask) {
    std::array<Complex, 4> e{};
    for (int i = 0; i < 4; ++i)
      if (mask & (1 << i)) e[static_cast<std::size_t>(i)] = Complex{0.3 + 0.1 * i, 0.2};
    const ComplexMat2 k{e[0], e[1], e[2], e[3]};
    const bool col0 = (mask & 1) && (mask & 4);
    const bool col1 = (mask & 2) && (mask & 8);
    const bool row0 = (mask & 1) && (mask & 2);
    const bool row1 = (mask & 4) && (mask & 8);
    EXPECT_EQ(sio::is_incoherent_operator(k), !col0 && !col1) << "mask " << mask;
    EXPECT_EQ(sio::is_strictly_incoherent_operator(k), !col0 && !col1 && !row0 && !row1) << "mask " << mask;
    const bool shaped = mask == 1 || mask == 2 || mask == 4 || mask == 8 || mask == 9 || mask == 6;
    EXPECT_EQ(sio::is_strictly_incoherent_operator(k), shaped) << "mask " << mask;
  }
  EXPECT_TRUE(sio::is_strictly_incoherent_operator(ComplexMat2{}));
  EXPECT_TRUE(sio::is_strictly_incoherent_operator(ComplexMat2{1.0, 1e-13, 0.0, 1.0}));
}

TEST(Apply, Examples) {
  const double q = 0.3;
  const ComplexMat2 out = sio::apply(sio::bit_flip(q), ComplexMat2::diag(1.0, 0.0));
  EXPECT_LE(sio::max_abs_diff(out, ComplexMat2::diag(1.0 - q / 2.0, q / 2.0)), kTol);

  const ComplexMat2 plus{0.5, 0.5, 0.5, 0.5};
  const ComplexMat2 dephased = sio::apply(sio::phase_flip(q), plus);
  EXPECT_LE(sio::max_abs_diff(dephased, ComplexMat2{0.5, 0.5 * (1 - q), 0.5 * (1 - q), 0.5}), kTol);

  for (const auto& ch : all_builtins())
    EXPECT_LE(sio::max_abs_diff(sio::apply(ch, sio::maximally_mixed()).matrix(), 0.5 * ComplexMat2::identity()), kTol);
}

TEST(Apply, PreservesTraceAndPositivity) {
  sio::Rng rng(21);
  std::vector<KrausChannel> channels = all_builtins();
  for (int i = 0; i < 200; ++i) channels.push_back(sio::random_sio_channel(rng, 1 + static_cast<int>(rng.below(5))));
  for (const auto& ch : channels) {
    EXPECT_TRUE(sio::classify(ch).strictly_incoherent);
    for (int i = 0; i < 5; ++i) {
      const sio::DensityMatrix rho = sio::random_state(rng);
      const ComplexMat2 out = sio::apply(ch, rho.matrix());
      EXPECT_LE(std::abs(sio::trace(out) - 1.0), 1e-10);
      EXPECT_NO_THROW(sio::DensityMatrix{out});
    }
  }
}

TEST(ApplyDual, Examples) {
  const double q = 0.3;
  for (const auto& ch : all_builtins())
    EXPECT_LE(sio::max_abs_diff(sio::apply_dual(ch, ComplexMat2::identity()), ComplexMat2::identity()), kTol);
  EXPECT_LE(sio::max_abs_diff(sio::apply_dual(sio::bit_flip(q), sio::sigma_z()), (1.0 - q) * sio::sigma_z()), kTol);
}

TEST(ApplyDual, DualityIdentity) {
  sio::Rng rng(22);
  const auto random_matrix = [&] {
    return ComplexMat2{Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)}, Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)},
                       Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)}, Complex{rng.uniform(-1, 1), rng.uniform(-1, 1)}};
  };
  for (int i = 0; i < 1000; ++i) {
    const KrausChannel ch = sio::random_sio_channel(rng, 3);
    const ComplexMat2 a = random_matrix(), b = random_matrix();
    const Complex lhs = sio::trace(sio::apply_dual(ch, a) * b);
    const Complex rhs = sio::trace(a * sio::apply(ch, b));
    EXPECT_LE(std::abs(lhs - rhs), kTol);
  }
}

TEST(PauliTransfer, BlockDiagonalForBistochasticSio) {
  sio::Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const KrausChannel ch = sio::to_kraus(sio::random_typical_form(rng));
    const auto ptm = sio::pauli_transfer_matrix(ch);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        if ((r < 2 && c < 2) || (r == c)) continue;
        EXPECT_LE(std::abs(ptm[r][c]), 1e-10);
      }
    EXPECT_NEAR(ptm[3][3], 1.0, 1e-10);
  }
}

// Unitality via the K K^dagger sum and via Phi(I) = I agree.
TEST(Classify, BistochasticFlagMatchesFixedIdentity) {
  sio::Rng rng(24);
  std::vector<KrausChannel> channels = all_builtins();
  for (int i = 0; i < 300; ++i) {
    channels.push_back(sio::random_sio_channel(rng, 1 + static_cast<int>(rng.below(4))));
    channels.push_back(sio::to_kraus(sio::random_typical_form(rng)));
  }
  std::size_t unital = 0;
  for (const auto& ch : channels) {
    const bool fixes_identity =
        sio::max_abs_diff(sio::apply(ch, ComplexMat2::identity()), ComplexMat2::identity()) <= sio::kEps;
    EXPECT_EQ(sio::classify(ch).bistochastic, fixes_identity);
    unital += fixes_identity ? 1 : 0;
  }
  EXPECT_GT(unital, 0u);
  EXPECT_LT(unital, channels.size());
}

TEST(TransferParams, Builtins) {
  for (double q : {0.0, 0.3, 0.8}) {
    EXPECT_LE(sio::max_abs_diff(sio::transfer_params(sio::bit_flip(q)), TransferParams{1, 0, 0, 1 - q, 1 - q}), kTol);
    EXPECT_LE(sio::max_abs_diff(sio::transfer_params(sio::depolarizing(q)), TransferParams{1 - q, 0, 0, 1 - q, 1 - q}),
              kTol);
    EXPECT_LE(sio::max_abs_diff(sio::transfer_params(sio::phase_flip(q)), TransferParams{1 - q, 0, 0, 1 - q, 1}), kTol);
    EXPECT_LE(sio::max_abs_diff(sio::transfer_params(sio::bit_phase_flip(q)), TransferParams{1 - q, 0, 0, 1, 1 - q}),
              kTol);
    for (double t : {0.0, 0.7, 2.5}) {
      const TransferParams want{std::cos(t), (1 - q) * std::sin(t), -std::sin(t), (1 - q) * std::cos(t), 1 - q};
      EXPECT_LE(sio::max_abs_diff(sio::transfer_params(sio::f1_theta(q, t)), want), kTol);
    }
  }
  // Brute-force values for f1-theta(0.4, 0.7), computed independently.
  const TransferParams frozen{0.7648421872844884, 0.38653061234261465, -0.644217687237691, 0.458905312370693, 0.6};
  EXPECT_LE(sio::max_abs_diff(sio::transfer_params(sio::f1_theta(0.4, 0.7)), frozen), kTol);
}

TEST(TransferParams, Errors) {
  EXPECT_THROW(sio::transfer_params(KrausChannel({ComplexMat2::diag(1.0, 0.0), ComplexMat2{0.0, 1.0, 0.0, 0.0}})),
               sio::ClassificationError);
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_THROW(sio::transfer_params(KrausChannel({ComplexMat2{h, h, h, -h}})), sio::ClassificationError);

  auto ptm = sio::pauli_transfer_matrix(sio::bit_flip(0.3));
  ptm[2][0] = 0.1;  // sigma_x leaking into sigma_z
  EXPECT_THROW(sio::transfer_params_from_ptm(ptm), sio::StructureError);
}

TEST(Builtin, NamesAndErrors) {
  for (auto kind : {sio::Builtin::BitFlip, sio::Builtin::BitPhaseFlip, sio::Builtin::PhaseFlip,
                    sio::Builtin::Depolarizing, sio::Builtin::F1Theta})
    EXPECT_EQ(sio::builtin_from_name(sio::builtin_name(kind)), kind);
  EXPECT_FALSE(sio::builtin_from_name("amplitude-damping").has_value());
  EXPECT_THROW(sio::builtin("amplitude-damping", 0.1), sio::InvalidParametersError);
  EXPECT_THROW(sio::builtin("bit-flip", 1.5), sio::InvalidParametersError);
  EXPECT_THROW(sio::builtin("bit-flip", -0.1), sio::InvalidParametersError);
  EXPECT_THROW(sio::builtin("f1-theta", 0.1), sio::InvalidParametersError);
  EXPECT_THROW(sio::builtin("bit-flip", 0.1, 0.3), sio::InvalidParametersError);
}

TEST(Builtin, Examples) {
  EXPECT_EQ(sio::depolarizing(0.0).size(), 1u);
  EXPECT_TRUE(same_action(sio::depolarizing(0.0), KrausChannel({ComplexMat2::identity()})));
  EXPECT_TRUE(same_action(sio::f1_theta(0.3, 0.0), sio::bit_flip(0.3)));
  for (double q : {0.0, 0.25, 0.6, 1.0})
    EXPECT_TRUE(same_action(sio::phase_flip(q), sio::to_kraus(sio::TypicalForm::phase_flip(q)))) << q;
}

}  // namespace
