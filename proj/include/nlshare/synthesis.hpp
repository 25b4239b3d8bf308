// Constructive measurement-strength sequences for k Bobs: the PPM
// construction at theta = pi/4 - delta/2 (T1) and the two-Kraus
// construction at theta = pi/4 (T2).

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlshare/chsh_eval.hpp"

namespace nlshare {

enum class Theorem { T1, T2 };

std::string_view to_string(Theorem t);

inline constexpr double kDefaultEpsilon = 0.01;

struct SynthesisResult {
  Theorem theorem;
  int k;
  double delta;
  double theta;
  double v;  // 1 for T1
  double epsilon;
  /// s_1 ... s_m with m <= k. Shorter than k only when a term had no
  /// finite value (previous term >= 1, or delta outside that Bob's window).
  std::vector<double> sequence;
  /// Lower bound each s_l had to exceed.
  std::vector<double> thresholds;
  bool feasible = false;
  /// Closed-form CHSH values of the leading Bobs whose strengths are all
  /// valid measurement parameters.
  std::vector<double> per_bob_chsh;
  std::vector<double> per_bob_excess;
  /// T2 only: the series lower bound on each CHSH value.
  std::vector<double> per_bob_lower_bound;
  double concurrence;
  std::optional<int> infeasible_at;  // 1-based
  std::string reason;
};

/// s_1 = alpha1, s_l = (1 + eps) * alphak_lower_bound_ppm(l, ...).
/// Throws for k < 1, delta outside (0, pi/2], eps outside (0, 1],
/// alpha1 outside (0, 1]. A delta outside the k-dependent window is
/// reported as infeasible, not thrown.
SynthesisResult synthesize_t1(int k, double delta, double epsilon, double alpha1);

/// s_1 = (1 + eps) tan(delta/2), s_l = (1 + eps) * alphak_lower_bound_twokraus(l, ...).
/// Throws for inadmissible v, delta outside (0, pi/4], eps outside (0, 1].
SynthesisResult synthesize_t2(int k, double delta, double epsilon, double v);

struct BoundingSequence {
  std::vector<double> beta;
};

/// beta_1 = (1 + eps) delta / 2,
/// beta_l = (2^(l-1) (1 + eps) / delta) [1 - (1 - delta^2/2) prod_{j<l} (1 - beta_j^2 / (16 v (1-v)))].
BoundingSequence bounding_sequence_t2(int k, double delta, double epsilon, double v);

/// Largest k <= k_cap for which synthesis succeeds; 0 if none or if the
/// parameters are out of domain. v is ignored for T1, alpha1 for T2.
int max_feasible_k(Theorem theorem, double delta, double epsilon, double v, double alpha1,
                   int k_cap);

struct DeltaWindow {
  double lo;
  double hi;
  bool hi_inclusive;
  // T1: the induced theta interval (pi/4 - hi/2, pi/4)
  std::optional<double> theta_lo;
  std::optional<double> theta_hi;
};

/// T1: (0, asin 2^(1-k)), k >= 2. T2: (0, pi/4], v must be admissible.
DeltaWindow delta_window(Theorem theorem, int k, double v);

/// Scans a 600-point log grid below the window's upper edge and returns
/// the geometric midpoint of the feasible band (snapped to the nearest
/// feasible grid point). Empty if no grid point is feasible.
std::optional<double> pick_auto_delta(Theorem theorem, int k, double epsilon, double v,
                                      double alpha1);

}  // namespace nlshare
