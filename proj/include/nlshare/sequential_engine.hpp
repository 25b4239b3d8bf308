// Brute-force evolution of the shared state through each Bob's unselective
// measurement, and the CHSH value between Alice and every Bob.
//
// This path never uses the closed forms in chsh_eval; it is the oracle they
// are checked against.

#pragma once

#include <functional>
#include <vector>

#include "nlshare/protocol_model.hpp"

namespace nlshare {

struct ProtocolConfig {
  int k = 1;
  double delta = 0.0;
  double theta = 0.0;
  /// One scheme per Bob; schemes[j] is Bob^{j+1}.
  std::vector<MeasurementScheme> schemes;

  /// Probability of Bob's input y = 0. Fixed.
  static constexpr double input_prob_y0 = 0.5;

  /// Throws DomainError if any invariant fails.
  void validate() const;
};

struct SequentialTrace {
  std::vector<DensityMatrix> states;  // rho_1 ... rho_k
  std::vector<double> chsh_values;    // I^1 ... I^k
};

/// (I ⊗ op) rho (I ⊗ op)†
Mat4 conjugate_bob(const Mat4& rho, const Mat2& op);

/// Average of Bob's two input branches: projective X for y = 0 and the
/// scheme's Kraus set for y = 1, each with weight 1/2.
DensityMatrix bob_channel(const DensityMatrix& rho, const MeasurementScheme& scheme);

using ChannelFn = std::function<DensityMatrix(const DensityMatrix&, const MeasurementScheme&)>;

/// Tr[{(A0 + A1) ⊗ B0 + (A0 - A1) ⊗ B1eff} rho].
double chsh_expectation(const ObservablePair& alice, const Mat2& b1_effective,
                        const DensityMatrix& rho);

SequentialTrace run_protocol(const ProtocolConfig& config);

/// Same as above with a substitute channel. Used by the verification suite's
/// fault-injection control.
SequentialTrace run_protocol(const ProtocolConfig& config, const ChannelFn& channel);

}  // namespace nlshare
