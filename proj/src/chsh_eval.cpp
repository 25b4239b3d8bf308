#include "nlshare/chsh_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nlshare/qmath.hpp"

namespace nlshare {

namespace {

constexpr double kPi = std::numbers::pi;

void require_range(double x, double lo, double hi, const char* what) {
  if (!(x >= lo && x <= hi)) {
    throw DomainError(std::string(what) + " out of range");
  }
}

void check_common(int k, double delta, double theta, std::span<const double> alphas) {
  if (k < 1) throw DomainError("k must be positive");
  if (alphas.size() != static_cast<std::size_t>(k)) {
    throw DomainError("alphas length must equal k");
  }
  require_range(delta, 0.0, kPi / 2, "delta");
  require_range(theta, 0.0, kPi / 4, "theta");
  for (double a : alphas) require_range(a, 0.0, 1.0, "alpha");
}

// 1 - sin(2 theta + delta), written as 2 sin^2(pi/4 - theta - delta/2).
double one_minus_sin_sum(double delta, double theta) {
  const double s = std::sin((kPi / 4 - theta) - 0.5 * delta);
  return 2.0 * s * s;
}

// Shared excess expression. one_minus_p is 1 - first product; w = 2v - 1.
double excess_from_parts(int k, double delta, double theta, double w, double one_minus_p,
                         double alpha_k) {
  const double sd = std::sin(delta);
  const double cd = std::cos(delta);
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  const double scale = std::ldexp(1.0, k - 1);
  return 2.0 * (-one_minus_sin_sum(delta, theta) - cd * s2 * one_minus_p +
                (w - 1.0) * sd * c2 + (alpha_k / scale) * sd * (1.0 - scale * w * c2));
}

double value_from_parts(int k, double delta, double theta, double w, double product,
                        double alpha_k) {
  const double sd = std::sin(delta);
  const double c2 = std::cos(2.0 * theta);
  const double scale = std::ldexp(1.0, k - 1);
  return 2.0 * (std::cos(delta) * std::sin(2.0 * theta) * product + w * sd * c2 +
                (alpha_k / scale) * sd * (1.0 - scale * w * c2));
}

std::vector<double> decay_terms(std::span<const double> prefix, double v, KrausFamily family) {
  std::vector<double> xs;
  xs.reserve(prefix.size());
  for (double a : prefix) {
    xs.push_back(family == KrausFamily::TwoKraus ? 0.5 * one_minus_xi(v, a) : 0.5 * a);
  }
  return xs;
}

double product_of(const std::vector<double>& xs) {
  double p = 1.0;
  for (double x : xs) p *= 1.0 - x;
  return p;
}

}  // namespace

double one_minus_product(std::span<const double> xs) {
  double log_sum = 0.0;
  for (double x : xs) {
    if (!(x < 1.0)) {
      double p = 1.0;
      for (double y : xs) p *= 1.0 - y;
      return 1.0 - p;
    }
    log_sum += std::log1p(-x);
  }
  return -std::expm1(log_sum);
}

SosBound sos_bound(double eta0, double eta1, double anticomm) {
  require_range(eta0, 0.0, 1.0, "eta0");
  require_range(eta1, 0.0, 1.0, "eta1");
  require_range(anticomm, -2.0 - 1e-12, 2.0 + 1e-12, "anticommutator");
  const double x = std::clamp(anticomm, -2.0, 2.0);
  const double w1 = eta0 * std::sqrt(2.0 + x);
  const double w2 = eta1 * std::sqrt(2.0 - x);
  return {eta0, eta1, anticomm, w1 + w2, w1, w2};
}

double critical_eta_curve(double anticomm, EtaCurve curve) {
  require_range(anticomm, 0.0, 2.0, "anticommutator");
  const double p = std::sqrt(2.0 + anticomm);
  const double m = std::sqrt(2.0 - anticomm);
  if (curve == EtaCurve::EqualUnsharp) return 2.0 / (p + m);
  // (2 - p)/m with the numerator rationalized: (4 - p^2) = m^2
  return m / (2.0 + p);
}

double closed_form_ppm(int k, double delta, double theta, std::span<const double> alphas) {
  check_common(k, delta, theta, alphas);
  const auto xs = decay_terms(alphas.first(k - 1), 1.0, KrausFamily::FourKraus);
  return value_from_parts(k, delta, theta, 1.0, product_of(xs), alphas[k - 1]);
}

double closed_form_general(int k, double delta, double theta, double v,
                           std::span<const double> alphas, KrausFamily family) {
  check_common(k, delta, theta, alphas);
  require_range(v, 0.0, 1.0, "v");
  const auto xs = decay_terms(alphas.first(k - 1), v, family);
  return value_from_parts(k, delta, theta, 2.0 * v - 1.0, product_of(xs), alphas[k - 1]);
}

double closed_form_ppm_excess(int k, double delta, double theta,
                              std::span<const double> alphas) {
  check_common(k, delta, theta, alphas);
  const auto xs = decay_terms(alphas.first(k - 1), 1.0, KrausFamily::FourKraus);
  return excess_from_parts(k, delta, theta, 1.0, one_minus_product(xs), alphas[k - 1]);
}

double closed_form_general_excess(int k, double delta, double theta, double v,
                                  std::span<const double> alphas, KrausFamily family) {
  check_common(k, delta, theta, alphas);
  require_range(v, 0.0, 1.0, "v");
  const auto xs = decay_terms(alphas.first(k - 1), v, family);
  return excess_from_parts(k, delta, theta, 2.0 * v - 1.0, one_minus_product(xs),
                           alphas[k - 1]);
}

XiFactors xi(double v, double alpha) {
  require_range(v, 0.0, 1.0, "v");
  require_range(alpha, 0.0, 1.0, "alpha");
  XiFactors out{v, alpha, std::nullopt, std::nullopt, 1.0, std::nullopt};
  if (v == 0.0 || v == 1.0) {
    out.xi_exact = std::sqrt(1.0 - alpha);
    return out;
  }
  const double q1 = alpha * (1.0 - 2.0 * v) / v - alpha * alpha * (1.0 - v) / v;
  const double q2 = alpha * (1.0 - 2.0 * v) / (1.0 - v) + alpha * alpha * v / (1.0 - v);
  out.q1 = q1;
  out.q2 = q2;
  if (v == 0.5) {
    out.xi_exact = std::sqrt(1.0 - alpha * alpha);
  } else {
    // 1 + q1 and 1 - q2, factored so both vanish exactly at alpha = 1
    const double r1 = (1.0 - alpha) * (v + alpha * (1.0 - v)) / v;
    const double r2 = (1.0 - alpha) * (1.0 - v + alpha * v) / (1.0 - v);
    out.xi_exact = v * std::sqrt(r1) + (1.0 - v) * std::sqrt(r2);
  }
  const double c = 1.0 / (8.0 * v * (1.0 - v));
  const double a2 = alpha * alpha;
  out.xi_series = 1.0 - a2 * c + a2 * alpha * (c - 0.5) - a2 * a2 * (c - 0.375);
  return out;
}

double one_minus_xi(double v, double alpha) {
  require_range(v, 0.0, 1.0, "v");
  require_range(alpha, 0.0, 1.0, "alpha");
  if (v == 0.0 || v == 1.0) return alpha / (1.0 + std::sqrt(1.0 - alpha));
  if (v == 0.5) return alpha * alpha / (1.0 + std::sqrt(1.0 - alpha * alpha));
  // v q1 and (1-v) q2 without the divisions
  const double vq1 = alpha * (1.0 - 2.0 * v) - alpha * alpha * (1.0 - v);
  const double wq2 = alpha * (1.0 - 2.0 * v) + alpha * alpha * v;
  const double r1 = std::sqrt((1.0 - alpha) * (v + alpha * (1.0 - v)) / v);
  const double r2 = std::sqrt((1.0 - alpha) * (1.0 - v + alpha * v) / (1.0 - v));
  return -vq1 / (1.0 + r1) + wq2 / (1.0 + r2);
}

std::optional<double> alpha1_lower_bound(double delta, double theta, double v) {
  require_range(delta, 0.0, kPi / 2, "delta");
  require_range(theta, 0.0, kPi / 4, "theta");
  require_range(v, 0.0, 1.0, "v");
  const double sd = std::sin(delta);
  const double c2 = std::cos(2.0 * theta);
  const double den = sd * (1.0 - (2.0 * v - 1.0) * c2);
  if (!(den > 0.0)) return std::nullopt;
  // 1 - sin(2t - d) - 2 v sin d cos 2t == 1 - sin(2t + d) + 2 (1 - v) sin d cos 2t
  const double num = one_minus_sin_sum(delta, theta) + 2.0 * (1.0 - v) * sd * c2;
  return num / den;
}

std::optional<double> alphak_lower_bound_ppm(int k, double delta,
                                             std::span<const double> alphas_prefix) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (alphas_prefix.size() != static_cast<std::size_t>(k - 1)) {
    throw DomainError("prefix length must equal k-1");
  }
  require_range(delta, 0.0, kPi / 2, "delta");
  for (double a : alphas_prefix) require_range(a, 0.0, 1.0, "alpha");
  const double scale = std::ldexp(1.0, k - 1);
  const double sd = std::sin(delta);
  const double gap = 1.0 - scale * sd;
  if (!(delta > 0.0 && gap > 0.0)) return std::nullopt;
  const auto xs = decay_terms(alphas_prefix, 1.0, KrausFamily::FourKraus);
  const double cd = std::cos(delta);
  return scale * cd * cd * one_minus_product(xs) / (sd * gap);
}

VAdmissibility v_admissibility(double v) {
  const double cap = (1.0 - 4.0 * v + 4.0 * v * v) / (1.0 - 3.0 * v + 3.0 * v * v);
  VAdmissibility out{false, cap, std::nullopt};
  if (!(v > 0.0 && v < 1.0)) return out;
  const double u = std::min(v, 1.0 - v);
  out.admissible = v != 0.5 && cap * cap < 16.0 * v * (1.0 - v);
  if (u < 0.25 * (2.0 - std::sqrt(2.0))) {
    out.excluded_alpha = 1.0 - (1.0 + 2.0 * std::sqrt(1.0 - 8.0 * u * (1.0 - u))) / (2.0 * (1.0 - u));
  }
  return out;
}

namespace {

void check_twokraus_domain(double delta, double v, std::span<const double> alphas,
                           std::size_t capped) {
  if (!(delta > 0.0 && delta <= kPi / 4)) throw DomainError("delta must lie in (0, pi/4]");
  const auto adm = v_admissibility(v);
  if (!adm.admissible) throw DomainError("v is not admissible");
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    const double a = alphas[j];
    require_range(a, 0.0, 1.0, "alpha");
    if (j < capped && a > adm.alpha_cap) throw DomainError("alpha exceeds alpha_cap(v)");
    if (adm.excluded_alpha && std::abs(a - *adm.excluded_alpha) < 1e-12) {
      throw DomainError("alpha at excluded point");
    }
  }
}

std::vector<double> series_decay(std::span<const double> prefix, double v) {
  const double c = 16.0 * v * (1.0 - v);
  std::vector<double> xs;
  xs.reserve(prefix.size());
  for (double a : prefix) xs.push_back(a * a / c);
  return xs;
}

}  // namespace

double alphak_lower_bound_twokraus(int k, double delta, double v,
                                   std::span<const double> alphas_prefix) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (alphas_prefix.size() != static_cast<std::size_t>(k - 1)) {
    throw DomainError("prefix length must equal k-1");
  }
  check_twokraus_domain(delta, v, alphas_prefix, alphas_prefix.size());
  const double half = std::sin(0.5 * delta);
  // 1 - cos(d) P == 2 sin^2(d/2) + cos(d) (1 - P)
  const double bracket =
      2.0 * half * half + std::cos(delta) * one_minus_product(series_decay(alphas_prefix, v));
  return std::ldexp(1.0, k - 1) * bracket / std::sin(delta);
}

double twokraus_series_lower_bound(int k, double delta, double v,
                                   std::span<const double> alphas) {
  if (k < 1) throw DomainError("k must be positive");
  if (alphas.size() != static_cast<std::size_t>(k)) {
    throw DomainError("alphas length must equal k");
  }
  check_twokraus_domain(delta, v, alphas, alphas.size() - 1);
  const double p = product_of(series_decay(alphas.first(k - 1), v));
  return 2.0 * (std::cos(delta) * p + alphas[k - 1] * std::sin(delta) / std::ldexp(1.0, k - 1));
}

double concurrence_threshold(int k) {
  if (k < 2) throw DomainError("k must be at least 2");
  return std::sqrt(1.0 - std::ldexp(1.0, 2 * (1 - k)));
}

}  // namespace nlshare
