#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlshare/protocol_model.hpp"

using namespace nlshare;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Observables, AliceAtQuarterPiAnticommute) {
  const auto p = build_alice_observables(kPi / 4);
  const Mat2& a0 = p.a0.matrix();
  const Mat2& a1 = p.a1.matrix();
  EXPECT_LT(max_abs_diff(a0 * a1 + a1 * a0, Mat2{}), 1e-15);
  EXPECT_TRUE(p.a0.is_sharp());
  EXPECT_TRUE(p.a1.is_sharp());
}

TEST(Observables, AnticommutatorIsTwoCos2Delta) {
  for (double d : {0.0, 0.1, 0.7, 1.3, kPi / 2}) {
    const auto p = build_alice_observables(d);
    const Mat2 anti = p.a0.matrix() * p.a1.matrix() + p.a1.matrix() * p.a0.matrix();
    EXPECT_LT(max_abs_diff(anti, 2.0 * std::cos(2.0 * d) * Mat2::identity()), 1e-14);
  }
}

TEST(Observables, DeltaDomain) {
  EXPECT_THROW(build_alice_observables(-0.1), DomainError);
  EXPECT_THROW(build_alice_observables(1.6), DomainError);
  EXPECT_THROW(Observable(Mat2{0.0, 1.0, 0.0, 0.0}), DomainError);
}

TEST(Observables, BobAndProjectors) {
  const auto b = build_bob_observables();
  EXPECT_EQ(b.b0.matrix(), pauli::X());
  EXPECT_EQ(b.b1.matrix(), pauli::Z());
  EXPECT_LT(max_abs_diff(b0_projector(1) + b0_projector(-1), Mat2::identity()), 1e-15);
  EXPECT_LT(max_abs_diff(b1_projector(1) * b1_projector(1), b1_projector(1)), 1e-15);
}

TEST(State, InitialStateInvariants) {
  for (double t : {0.0, 0.3, kPi / 8, kPi / 4}) {
    const auto rho = build_initial_state(t);
    EXPECT_NEAR(trace(rho.matrix()).real(), 1.0, 1e-15);
    const Mat2 ra = partial_trace_bob(rho.matrix());
    EXPECT_NEAR(ra(0, 0).real(), std::cos(t) * std::cos(t), 1e-15);
    EXPECT_NEAR(ra(1, 1).real(), std::sin(t) * std::sin(t), 1e-15);
    EXPECT_NEAR(std::abs(ra(0, 1)), 0.0, 1e-15);
  }
  EXPECT_NEAR(pure_state_concurrence(kPi / 4), 1.0, 1e-15);
  EXPECT_THROW(build_initial_state(0.8), DomainError);
}

TEST(State, RejectsInvalidDensityMatrices) {
  EXPECT_THROW(DensityMatrix(Mat4::identity()), DomainError);          // trace 4
  Mat4::Storage d{};
  d[0] = 1.5;
  d[5] = -0.5;
  EXPECT_THROW(DensityMatrix(Mat4(d)), DomainError);  // unit trace, eigenvalue -0.5
  Mat4::Storage e{};
  e[1] = Complex{0.0, 1.0};
  e[0] = e[15] = 0.5;
  EXPECT_THROW(DensityMatrix(Mat4(e)), DomainError);  // not Hermitian
}

TEST(Schemes, ParseAndNames) {
  EXPECT_EQ(parse_scheme_kind("ppm"), SchemeKind::PPM3);
  EXPECT_EQ(parse_scheme_kind("four-kraus"), SchemeKind::FourKraus);
  EXPECT_EQ(parse_scheme_kind("two-kraus"), SchemeKind::TwoKraus);
  EXPECT_EQ(to_string(SchemeKind::TwoKraus), "two-kraus");
  EXPECT_THROW(parse_scheme_kind("pvm"), DomainError);
  EXPECT_THROW(MeasurementScheme::ppm3(1.2), DomainError);
  EXPECT_THROW(MeasurementScheme::two_kraus(0.2, -0.1), DomainError);
  EXPECT_EQ(MeasurementScheme::make(SchemeKind::PPM3, 0.3, 0.2).v(), 1.0);
}

TEST(Schemes, CompletenessOnGrid) {
  for (SchemeKind kind : {SchemeKind::PPM3, SchemeKind::FourKraus, SchemeKind::TwoKraus}) {
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const auto s = MeasurementScheme::make(kind, i / 20.0, j / 20.0);
        Mat2 sum;
        for (const auto& k : build_kraus_set(s)) sum += adjoint(k) * k;
        ASSERT_LT(max_abs_diff(sum, Mat2::identity()), 1e-10);
        const auto e = effective_povm(s);
        ASSERT_LT(max_abs_diff(e.e_plus + e.e_minus, Mat2::identity()), 1e-10);
        ASSERT_TRUE(is_psd(e.e_plus));
        ASSERT_TRUE(is_psd(e.e_minus));
        const auto g = povm_from_kraus(s);
        ASSERT_LT(max_abs_diff(g.e_plus, e.e_plus), 1e-10);
        ASSERT_LT(max_abs_diff(g.e_minus, e.e_minus), 1e-10);
      }
    }
  }
}

TEST(Schemes, KrausCounts) {
  EXPECT_EQ(build_kraus_set(MeasurementScheme::ppm3(0.4)).size(), 3u);
  EXPECT_EQ(build_kraus_set(MeasurementScheme::four_kraus(0.4, 0.3)).size(), 4u);
  EXPECT_EQ(build_kraus_set(MeasurementScheme::two_kraus(0.4, 0.3)).size(), 2u);
}

TEST(Schemes, EffectiveObservable) {
  const double a = 0.35, v = 0.8;
  const Mat2 b = effective_observable(MeasurementScheme::four_kraus(a, v));
  EXPECT_LT(max_abs_diff(b, a * pauli::Z() + (2 * v - 1) * (1 - a) * Mat2::identity()), 1e-15);
  // sharp Z at alpha = 1, zero bias at v = 1/2 and alpha = 0
  EXPECT_LT(max_abs_diff(effective_observable(MeasurementScheme::ppm3(1.0)), pauli::Z()), 1e-15);
  EXPECT_LT(max_abs_diff(effective_observable(MeasurementScheme::two_kraus(0.0, 0.5)), Mat2{}),
            1e-15);
}
