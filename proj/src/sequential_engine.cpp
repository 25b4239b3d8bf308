#include "nlshare/sequential_engine.hpp"

#include <numbers>

namespace nlshare {

void ProtocolConfig::validate() const {
  if (k < 1) throw DomainError("k must be positive");
  if (schemes.size() != static_cast<std::size_t>(k)) {
    throw DomainError("need exactly one scheme per Bob");
  }
  if (!(delta >= 0.0 && delta <= std::numbers::pi / 2)) {
    throw DomainError("delta must lie in [0, pi/2]");
  }
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 4)) {
    throw DomainError("theta must lie in [0, pi/4]");
  }
}

Mat4 conjugate_bob(const Mat4& rho, const Mat2& op) {
  const Mat4 lifted = tensor(Mat2::identity(), op);
  return lifted * rho * adjoint(lifted);
}

DensityMatrix bob_channel(const DensityMatrix& rho, const MeasurementScheme& scheme) {
  const Mat4& r = rho.matrix();
  Mat4 projective;
  for (int sign : {+1, -1}) projective += conjugate_bob(r, b0_projector(sign));
  Mat4 kraus;
  for (const auto& k : build_kraus_set(scheme)) kraus += conjugate_bob(r, k);
  const double w0 = ProtocolConfig::input_prob_y0;
  return DensityMatrix(w0 * projective + (1.0 - w0) * kraus);
}

double chsh_expectation(const ObservablePair& alice, const Mat2& b1_effective,
                        const DensityMatrix& rho) {
  const Mat2& a0 = alice.a0.matrix();
  const Mat2& a1 = alice.a1.matrix();
  const Mat4 op = tensor(a0 + a1, pauli::X()) + tensor(a0 - a1, b1_effective);
  return trace(op * rho.matrix()).real();
}

SequentialTrace run_protocol(const ProtocolConfig& config) {
  return run_protocol(config, bob_channel);
}

SequentialTrace run_protocol(const ProtocolConfig& config, const ChannelFn& channel) {
  config.validate();
  const auto alice = build_alice_observables(config.delta);
  SequentialTrace trace_out;
  trace_out.states.reserve(config.k);
  trace_out.chsh_values.reserve(config.k);

  trace_out.states.push_back(build_initial_state(config.theta));
  for (int j = 1; j < config.k; ++j) {
    trace_out.states.push_back(channel(trace_out.states.back(), config.schemes[j - 1]));
  }
  for (int j = 0; j < config.k; ++j) {
    trace_out.chsh_values.push_back(chsh_expectation(
        alice, effective_observable(config.schemes[j]), trace_out.states[j]));
  }
  return trace_out;
}

}  // namespace nlshare
