// Closed-form CHSH values, sum-of-squares bounds, critical unsharpness
// curves and violation thresholds.
//
// Functions returning std::optional use an empty result for parameter
// boundaries where no finite threshold exists (vanishing or negative
// denominators). Out-of-domain inputs throw DomainError.

#pragma once

#include <optional>
#include <span>

namespace nlshare {

struct SosBound {
  double eta0;
  double eta1;
  double anticomm;  // <{A0, A1}>
  double bound;     // omega1 + omega2
  double omega1;    // eta0 sqrt(2 + anticomm)
  double omega2;    // eta1 sqrt(2 - anticomm)
};

SosBound sos_bound(double eta0, double eta1, double anticomm);

enum class EtaCurve {
  EqualUnsharp,  // curve a: eta0 = eta1 = eta
  SharpB0,       // curve b: eta0 = 1, eta1 = eta
};

/// Critical unsharpness above which CHSH > 2, as a function of the
/// anticommutator expectation x in [0, 2]. Curve b is evaluated in the
/// cancellation-free form sqrt(2-x) / (2 + sqrt(2+x)) and is 0 at x = 2.
double critical_eta_curve(double anticomm, EtaCurve curve);

/// I^k for the PPM scheme.
double closed_form_ppm(int k, double delta, double theta, std::span<const double> alphas);

enum class KrausFamily { FourKraus, TwoKraus };

/// I^k for the (alpha, v) POVM realized with four or two Kraus operators.
/// TwoKraus uses the exact xi_j.
double closed_form_general(int k, double delta, double theta, double v,
                           std::span<const double> alphas, KrausFamily family);

/// I^k - 2 for the same expressions, arranged so that no two O(1) terms
/// cancel. Signs stay reliable when the violation margin is far below the
/// resolution of I^k itself.
double closed_form_ppm_excess(int k, double delta, double theta,
                              std::span<const double> alphas);
double closed_form_general_excess(int k, double delta, double theta, double v,
                                  std::span<const double> alphas, KrausFamily family);

struct XiFactors {
  double v;
  double alpha;
  std::optional<double> q1;  // empty for v in {0, 1}
  std::optional<double> q2;
  double xi_exact;
  std::optional<double> xi_series;  // fourth-order expansion; empty for v in {0, 1}
};

/// Decay factor of the (A0+A1)⊗B0 correlator under a two-Kraus Bob.
XiFactors xi(double v, double alpha);

/// 1 - xi_exact without cancellation for small alpha.
double one_minus_xi(double v, double alpha);

/// Threshold on alpha_1 for I^1 > 2 (any scheme family with parameter v).
/// Empty when sin(d) {1 - (2v-1) cos(2 theta)} <= 0.
std::optional<double> alpha1_lower_bound(double delta, double theta, double v);

/// Threshold on alpha_k for I^k > 2 under PPM with theta = pi/4 - delta/2.
/// Empty outside 0 < delta < asin(2^(1-k)).
std::optional<double> alphak_lower_bound_ppm(int k, double delta,
                                             std::span<const double> alphas_prefix);

/// Threshold on alpha_k from the series lower bound on J^k (two Kraus
/// operators, theta = pi/4). Throws for inadmissible (v, alpha_j) or delta
/// outside (0, pi/4].
double alphak_lower_bound_twokraus(int k, double delta, double v,
                                   std::span<const double> alphas_prefix);

/// 2 [cos(d) prod_{j<k} (1 - a_j^2/(16 v (1-v))) + a_k sin(d) / 2^(k-1)],
/// a lower bound on J^k valid for a_j <= alpha_cap(v).
double twokraus_series_lower_bound(int k, double delta, double v,
                                   std::span<const double> alphas);

struct VAdmissibility {
  bool admissible;
  double alpha_cap;  // (1 - 4v + 4v^2) / (1 - 3v + 3v^2)
  std::optional<double> excluded_alpha;
};

/// Whether the two-Kraus series construction applies at v: requires
/// alpha_cap^2 < 16 v (1 - v) and v != 1/2. Symmetric under v -> 1 - v.
VAdmissibility v_admissibility(double v);

/// 2^(1-k) sqrt(4^(k-1) - 1), k >= 2.
double concurrence_threshold(int k);

/// 1 - prod (1 - x_j), accurate when every x_j is tiny.
double one_minus_product(std::span<const double> xs);

}  // namespace nlshare
