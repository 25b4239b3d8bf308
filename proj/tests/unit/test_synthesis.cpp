#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlshare/sequential_engine.hpp"
#include "nlshare/synthesis.hpp"

using namespace nlshare;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> brute_force(const SynthesisResult& r) {
  ProtocolConfig c;
  c.k = static_cast<int>(r.sequence.size());
  c.delta = r.delta;
  c.theta = r.theta;
  for (double s : r.sequence) {
    c.schemes.push_back(r.theorem == Theorem::T1 ? MeasurementScheme::ppm3(s)
                                                 : MeasurementScheme::two_kraus(s, r.v));
  }
  return run_protocol(c).chsh_values;
}

}  // namespace

TEST(SynthT1, TwoBobsAtOptimalDelta) {
  const auto r = synthesize_t1(2, 0.2713, 0.01, 0.1);
  ASSERT_TRUE(r.feasible);
  ASSERT_EQ(r.sequence.size(), 2u);
  EXPECT_NEAR(r.sequence[1], 0.75387427692402220872, 1e-12);
  EXPECT_NEAR(r.theta, kPi / 4 - 0.2713 / 2, 1e-15);
  const auto bf = brute_force(r);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_GT(bf[l], 2.0);
    EXPECT_NEAR(bf[l], r.per_bob_chsh[l], 1e-9);
  }
}

TEST(SynthT1, AlphaAboveCapIsInfeasible) {
  const auto r = synthesize_t1(2, 0.2713, 0.01, 0.2);
  EXPECT_FALSE(r.feasible);
  ASSERT_TRUE(r.infeasible_at.has_value());
  EXPECT_EQ(*r.infeasible_at, 2);
  EXPECT_GT(r.sequence[1], 1.0);
  // only Bob 1 has a valid strength
  EXPECT_EQ(r.per_bob_chsh.size(), 1u);
}

TEST(SynthT1, DeltaOutsideWindow) {
  const auto r = synthesize_t1(2, 0.6, 0.01, 0.01);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.infeasible_at.value(), 2);
  EXPECT_EQ(r.sequence.size(), 1u);
  EXPECT_THROW(synthesize_t1(2, 0.0, 0.01, 0.1), DomainError);
  EXPECT_THROW(synthesize_t1(2, 0.1, 0.0, 0.1), DomainError);
  EXPECT_THROW(synthesize_t1(2, 0.1, 0.01, 0.0), DomainError);
  EXPECT_THROW(synthesize_t1(0, 0.1, 0.01, 0.1), DomainError);
}

TEST(SynthT1, PreviousTermAtOneBlocksNext) {
  // alpha1 = 1 is a valid strength but leaves nothing for Bob 2
  const auto r = synthesize_t1(3, 0.1, 0.01, 1.0);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.infeasible_at.value(), 2);
}

TEST(SynthT1, FiveBobsWithSmallAlpha1) {
  const auto r = synthesize_t1(5, 0.03, 0.01, 1e-9);
  ASSERT_TRUE(r.feasible);
  for (std::size_t l = 2; l < r.sequence.size(); ++l) {
    EXPECT_GT(r.sequence[l], 2 * r.sequence[l - 1]);
  }
  EXPECT_GT(r.sequence[1], 2 * 1.01 * (std::sqrt(3.0) + 2) * r.sequence[0]);
  for (double e : r.per_bob_excess) EXPECT_GT(e, 0.0);
}

TEST(SynthT1, ConcurrenceExceedsThresholdWhenFeasible) {
  // C = cos(delta) and delta < asin 2^(1-k) force C above the threshold
  for (int k = 2; k <= 6; ++k) {
    const double d = 0.5 * std::asin(std::ldexp(1.0, 1 - k));
    for (double a1 : {1e-3, 1e-6, 1e-9, 1e-12, 1e-15}) {
      const auto r = synthesize_t1(k, d, 0.01, a1);
      if (!r.feasible) continue;
      EXPECT_NEAR(r.concurrence, std::cos(d), 1e-15);
      EXPECT_GT(r.concurrence, concurrence_threshold(k));
    }
  }
}

TEST(SynthT1, VanishingInAlpha1) {
  // slope of log max s against log alpha1 in the deep linear regime
  const double d = 0.5 * std::asin(0.125);
  const auto r1 = synthesize_t1(4, d, 0.01, 1e-9);
  const auto r2 = synthesize_t1(4, d, 0.01, 1e-12);
  ASSERT_TRUE(r1.feasible && r2.feasible);
  const double slope = std::log10(r1.sequence.back() / r2.sequence.back()) / 3.0;
  EXPECT_NEAR(slope, 1.0, 0.01);
}

TEST(SynthT2, ExampleFirstTerm) {
  // eps = 0 is outside the synthesizer's domain; check the first term directly
  const auto r = synthesize_t2(1, 0.2, 1e-15, 0.3);
  EXPECT_NEAR(r.sequence[0], std::tan(0.1), 1e-12);
  EXPECT_NEAR(std::tan(0.1), 0.100334672085, 1e-12);
}

TEST(SynthT2, ThreeBobsFrozenSequence) {
  const auto r = synthesize_t2(3, 0.02, 0.01, 0.3);
  ASSERT_TRUE(r.feasible);
  EXPECT_NEAR(r.sequence[0], 0.0101003366801339, 1e-14);
  EXPECT_NEAR(r.sequence[1], 0.0232668409326984, 1e-14);
  EXPECT_NEAR(r.sequence[2], 0.0790735535377242, 1e-14);
  const auto bf = brute_force(r);
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_GT(bf[l], 2.0);
    EXPECT_NEAR(bf[l], r.per_bob_chsh[l], 1e-9);
    EXPECT_LE(r.per_bob_lower_bound[l], r.per_bob_chsh[l] + 1e-15);
  }
}

TEST(SynthT2, FourBobsAtDeltaHundredthExceedsCap) {
  // s4 = 0.45497 > alpha_cap(0.3) = 0.43243
  const auto r = synthesize_t2(4, 0.01, 0.01, 0.3);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.infeasible_at.value(), 4);
  EXPECT_NEAR(r.sequence[3], 0.454969258049717, 1e-12);
  EXPECT_TRUE(synthesize_t2(4, 1e-3, 0.01, 0.3).feasible);
}

TEST(SynthT2, FeasibleAcrossV) {
  for (double v : {0.1, 0.3, 0.45, 0.7, 0.9}) {
    const auto r = synthesize_t2(4, 1e-3, 0.01, v);
    ASSERT_TRUE(r.feasible) << v;
    const auto bf = brute_force(r);
    for (std::size_t l = 0; l < 4; ++l) {
      EXPECT_GT(bf[l], 2.0);
      EXPECT_GT(r.per_bob_excess[l], 0.0);
    }
    for (std::size_t l = 1; l < 4; ++l) EXPECT_GT(r.sequence[l], 2 * r.sequence[l - 1]);
  }
}

TEST(SynthT2, InadmissibleV) {
  for (double v : {0.05, 0.5, 0.95}) {
    EXPECT_THROW(synthesize_t2(4, 1e-3, 0.01, v), DomainError);
  }
  EXPECT_THROW(synthesize_t2(4, 0.9, 0.01, 0.3), DomainError);
}

TEST(SynthT2, NearZeroVFailsForLargeK) {
  // close to the admissibility edge the sequence escapes the cap quickly
  const auto r = synthesize_t2(12, 1e-3, 0.01, 0.06);
  EXPECT_FALSE(r.feasible);
}

TEST(SynthT2, VanishingInDelta) {
  const auto a = synthesize_t2(4, 1e-5, 0.01, 0.3);
  const auto b = synthesize_t2(4, 1e-7, 0.01, 0.3);
  ASSERT_TRUE(a.feasible && b.feasible);
  EXPECT_NEAR(std::log10(a.sequence.back() / b.sequence.back()) / 2.0, 1.0, 0.01);
}

TEST(Bounding, FirstTwoTerms) {
  const auto b = bounding_sequence_t2(2, 0.2, 1e-15, 0.3);
  EXPECT_NEAR(b.beta[0], 0.1, 1e-14);
  const double e = 0.01, d = 0.2, v = 0.3;
  const auto c = bounding_sequence_t2(2, d, e, v);
  EXPECT_NEAR(c.beta[1], 0.23205044583333333333, 1e-14);
  const double q = (1 + e) * (1 + e);
  // the cubic term enters with a minus sign
  const double minus = 2 * (1 + e) * (d / 2 * (1 + q / (32 * v * (1 - v))) - q * d * d * d / (128 * v * (1 - v)));
  const double plus = 2 * (1 + e) * (d / 2 * (1 + q / (32 * v * (1 - v))) + q * d * d * d / (128 * v * (1 - v)));
  EXPECT_NEAR(c.beta[1], minus, 1e-15);
  EXPECT_GT(std::abs(c.beta[1] - plus), 1e-4);
}

TEST(Bounding, IncreasingAndCloseToSequence) {
  for (double d : {1e-2, 1e-3, 1e-4}) {
    const auto s = synthesize_t2(4, d, 0.01, 0.3).sequence;
    const auto b = bounding_sequence_t2(4, d, 0.01, 0.3).beta;
    for (std::size_t l = 1; l < 4; ++l) EXPECT_GT(b[l], b[l - 1]);
    for (std::size_t l = 0; l < 4; ++l) {
      // s_l exceeds beta_l, but only at relative order delta^2
      EXPECT_GT(s[l] / b[l] - 1, 0.0);
      EXPECT_LT(s[l] / b[l] - 1, d * d);
    }
  }
}

TEST(MaxFeasibleK, Examples) {
  EXPECT_EQ(max_feasible_k(Theorem::T1, 0.6, 0.01, 1.0, 0.1, 5), 1);
  // 40-digit brute-force oracle: s3 = 2.19 > 1
  EXPECT_EQ(max_feasible_k(Theorem::T1, 0.01, 0.01, 1.0, 1e-4, 5), 2);
  EXPECT_EQ(max_feasible_k(Theorem::T1, 0.1, 0.01, 1.0, 0.01, 1), 1);
  EXPECT_EQ(max_feasible_k(Theorem::T2, 0.1, 0.01, 0.3, 0.0, 1), 1);
  EXPECT_EQ(max_feasible_k(Theorem::T2, 0.1, 0.01, 0.5, 0.0, 3), 0);
  EXPECT_EQ(max_feasible_k(Theorem::T2, 1e-3, 0.01, 0.3, 0.0, 4), 4);
}

TEST(DeltaWindow, Values) {
  const auto w2 = delta_window(Theorem::T1, 2, 1.0);
  EXPECT_NEAR(w2.hi, kPi / 6, 1e-15);
  EXPECT_FALSE(w2.hi_inclusive);
  EXPECT_NEAR(*w2.theta_lo, kPi / 6, 1e-15);
  EXPECT_NEAR(*w2.theta_hi, kPi / 4, 1e-15);
  EXPECT_NEAR(delta_window(Theorem::T1, 4, 1.0).hi, 0.125327831168065, 1e-14);
  const auto t2 = delta_window(Theorem::T2, 3, 0.3);
  EXPECT_NEAR(t2.hi, kPi / 4, 1e-15);
  EXPECT_TRUE(t2.hi_inclusive);
  EXPECT_THROW(delta_window(Theorem::T2, 3, 0.5), DomainError);
  EXPECT_THROW(delta_window(Theorem::T1, 1, 1.0), DomainError);
}

TEST(AutoDelta, PicksFeasiblePoint) {
  const auto d = pick_auto_delta(Theorem::T2, 3, 0.01, 0.3, 0.0);
  ASSERT_TRUE(d.has_value());
  EXPECT_TRUE(synthesize_t2(3, *d, 0.01, 0.3).feasible);
  const auto e = pick_auto_delta(Theorem::T1, 3, 0.01, 1.0, 1e-3);
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(synthesize_t1(3, *e, 0.01, 1e-3).feasible);
  EXPECT_FALSE(pick_auto_delta(Theorem::T1, 5, 0.01, 1.0, 0.1).has_value());
}
