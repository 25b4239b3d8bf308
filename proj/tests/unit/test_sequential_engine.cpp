#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nlshare/sequential_engine.hpp"

using namespace nlshare;

namespace {

constexpr double kPi = std::numbers::pi;

ProtocolConfig ppm_config(double delta, double theta, std::vector<double> alphas) {
  ProtocolConfig c;
  c.k = static_cast<int>(alphas.size());
  c.delta = delta;
  c.theta = theta;
  for (double a : alphas) c.schemes.push_back(MeasurementScheme::ppm3(a));
  return c;
}

Mat4 phi_plus() { return build_initial_state(kPi / 4).matrix(); }

}  // namespace

TEST(Engine, MaximalViolation) {
  const auto t = run_protocol(ppm_config(kPi / 4, kPi / 4, {1.0}));
  EXPECT_NEAR(t.chsh_values[0], 2.0 * std::sqrt(2.0), 1e-12);
}

TEST(Engine, ZeroStrengthAtT1AngleGivesTwo) {
  for (double d : {0.1, 0.3, 1.0}) {
    const auto t = run_protocol(ppm_config(d, kPi / 4 - d / 2, {0.0}));
    EXPECT_NEAR(t.chsh_values[0], 2.0, 1e-12);
  }
}

TEST(Engine, ThreeBobsFrozenValue) {
  // 40-digit density-matrix evaluation (tests/oracles/oracles.py)
  const auto t = run_protocol(ppm_config(0.15, kPi / 4 - 0.075, {0.02, 0.2, 0.9}));
  EXPECT_NEAR(t.chsh_values[2], 1.8139183225114740112, 1e-12);
}

TEST(Engine, TwoKrausAndFourKrausFrozenValues) {
  ProtocolConfig c;
  c.k = 2;
  c.delta = 0.05;
  c.theta = kPi / 4;
  c.schemes = {MeasurementScheme::two_kraus(0.1, 0.3), MeasurementScheme::two_kraus(0.3, 0.3)};
  EXPECT_NEAR(run_protocol(c).chsh_values[1], 2.0067303698739967364, 1e-12);

  c.k = 3;
  c.delta = 0.4;
  c.theta = 0.5;
  c.schemes = {MeasurementScheme::four_kraus(0.3, 0.7), MeasurementScheme::four_kraus(0.6, 0.7),
               MeasurementScheme::four_kraus(0.8, 0.7)};
  EXPECT_NEAR(run_protocol(c).chsh_values[2], 1.1117367784641140276, 1e-12);
}

TEST(Channel, MaximallyMixedIsFixed) {
  const DensityMatrix mixed(0.25 * Mat4::identity());
  for (const auto& s : {MeasurementScheme::ppm3(0.4), MeasurementScheme::four_kraus(0.2, 0.9),
                        MeasurementScheme::two_kraus(0.7, 0.3)}) {
    EXPECT_LT(max_abs_diff(bob_channel(mixed, s).matrix(), mixed.matrix()), 1e-15);
  }
}

TEST(Channel, PpmMatchesSpecializedRecursion) {
  // (1/4)[(3 - a) rho + X rho X + a Z rho Z] on the Bob side
  const DensityMatrix rho = build_initial_state(0.4);
  for (double a : {0.0, 0.3, 1.0}) {
    const Mat4& r = rho.matrix();
    const Mat4 want = 0.25 * ((3.0 - a) * r + conjugate_bob(r, pauli::X()) +
                              a * conjugate_bob(r, pauli::Z()));
    EXPECT_LT(max_abs_diff(bob_channel(rho, MeasurementScheme::ppm3(a)).matrix(), want), 1e-15);
  }
}

TEST(Channel, TwoKrausMatchesXiRecursion) {
  // ((2 + xi)/4) rho + (1/4) X rho X + ((1 - xi)/4) Z rho Z, xi = m1 m2 + n1 n2
  const DensityMatrix rho = build_initial_state(0.6);
  const double a = 0.37, v = 0.22;
  const double xi = std::sqrt((v * (1 - a) + a) * v * (1 - a)) +
                    std::sqrt((1 - a) * (1 - v) * (1 - v * (1 - a)));
  const Mat4& r = rho.matrix();
  const Mat4 want = ((2.0 + xi) / 4) * r + 0.25 * conjugate_bob(r, pauli::X()) +
                    ((1.0 - xi) / 4) * conjugate_bob(r, pauli::Z());
  EXPECT_LT(max_abs_diff(bob_channel(rho, MeasurementScheme::two_kraus(a, v)).matrix(), want),
            1e-15);
}

TEST(Channel, PpmAndFourKrausAgree) {
  const DensityMatrix rho(phi_plus());
  for (double a : {0.1, 0.5, 0.9}) {
    EXPECT_LT(max_abs_diff(bob_channel(rho, MeasurementScheme::ppm3(a)).matrix(),
                           bob_channel(rho, MeasurementScheme::four_kraus(a, 0.5)).matrix()),
              1e-15);
  }
}

TEST(Channel, PpmAtZeroStrength) {
  const DensityMatrix rho = build_initial_state(0.3);
  const Mat4& r = rho.matrix();
  const Mat4 want = 0.25 * (3.0 * r + conjugate_bob(r, pauli::X()));
  EXPECT_LT(max_abs_diff(bob_channel(rho, MeasurementScheme::ppm3(0.0)).matrix(), want), 1e-15);
}

TEST(Engine, TraceInvariants) {
  ProtocolConfig c;
  c.k = 6;
  c.delta = 0.3;
  c.theta = 0.5;
  for (int j = 0; j < c.k; ++j) c.schemes.push_back(MeasurementScheme::two_kraus(0.1 * j + 0.05, 0.35));
  const auto t = run_protocol(c);
  ASSERT_EQ(t.states.size(), 6u);
  const Mat2 marginal = partial_trace_bob(t.states[0].matrix());
  for (const auto& s : t.states) {
    EXPECT_NEAR(trace(s.matrix()).real(), 1.0, 1e-10);
    EXPECT_GE(hermitian_eigenvalues(s.matrix()).front(), -1e-10);
    EXPECT_LT(max_abs_diff(partial_trace_bob(s.matrix()), marginal), 1e-10);
  }
}

TEST(Engine, ConfigValidation) {
  auto c = ppm_config(0.3, 0.2, {0.1, 0.2});
  c.k = 3;
  EXPECT_THROW(run_protocol(c), DomainError);
  EXPECT_THROW(run_protocol(ppm_config(0.3, 0.9, {0.1})), DomainError);
  EXPECT_THROW(run_protocol(ppm_config(-0.1, 0.2, {0.1})), DomainError);
  c = ppm_config(0.3, 0.2, {});
  EXPECT_THROW(run_protocol(c), DomainError);
}

TEST(Engine, ChannelHookIsUsed) {
  int calls = 0;
  const ChannelFn counting = [&calls](const DensityMatrix& r, const MeasurementScheme& s) {
    ++calls;
    return bob_channel(r, s);
  };
  run_protocol(ppm_config(0.3, 0.4, {0.1, 0.2, 0.3}), counting);
  EXPECT_EQ(calls, 2);
}
