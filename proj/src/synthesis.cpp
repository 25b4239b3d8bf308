#include "nlshare/synthesis.hpp"

#include <cmath>
#include <numbers>

#include "nlshare/qmath.hpp"

namespace nlshare {

namespace {

constexpr double kPi = std::numbers::pi;

void check_k_eps(int k, double epsilon) {
  if (k < 1) throw DomainError("k must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
}

void mark_infeasible(SynthesisResult& r, int at, std::string why) {
  r.feasible = false;
  r.infeasible_at = at;
  r.reason = std::move(why);
}

// Evaluate Bobs 1..m where every s_j is a valid measurement strength.
void fill_values(SynthesisResult& r, double upper) {
  std::size_t m = 0;
  while (m < r.sequence.size() && r.sequence[m] <= upper) ++m;
  const std::span<const double> s(r.sequence);
  for (std::size_t l = 1; l <= m; ++l) {
    const int li = static_cast<int>(l);
    if (r.theorem == Theorem::T1) {
      r.per_bob_chsh.push_back(closed_form_ppm(li, r.delta, r.theta, s.first(l)));
      r.per_bob_excess.push_back(closed_form_ppm_excess(li, r.delta, r.theta, s.first(l)));
    } else {
      r.per_bob_chsh.push_back(
          closed_form_general(li, r.delta, r.theta, r.v, s.first(l), KrausFamily::TwoKraus));
      r.per_bob_excess.push_back(closed_form_general_excess(li, r.delta, r.theta, r.v,
                                                            s.first(l), KrausFamily::TwoKraus));
      r.per_bob_lower_bound.push_back(twokraus_series_lower_bound(li, r.delta, r.v, s.first(l)));
    }
  }
}

void certify(SynthesisResult& r) {
  if (r.infeasible_at) return;
  for (std::size_t l = 0; l < r.per_bob_excess.size(); ++l) {
    if (!(r.per_bob_excess[l] > 0.0)) {
      mark_infeasible(r, static_cast<int>(l + 1), "CHSH value does not exceed 2");
      return;
    }
  }
  r.feasible = true;
}

}  // namespace

std::string_view to_string(Theorem t) { return t == Theorem::T1 ? "T1" : "T2"; }

SynthesisResult synthesize_t1(int k, double delta, double epsilon, double alpha1) {
  check_k_eps(k, epsilon);
  if (!(delta > 0.0 && delta <= kPi / 2)) throw DomainError("delta must lie in (0, pi/2]");
  if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw DomainError("alpha1 must lie in (0, 1]");

  SynthesisResult r{};
  r.theorem = Theorem::T1;
  r.k = k;
  r.delta = delta;
  r.theta = kPi / 4 - 0.5 * delta;
  r.v = 1.0;
  r.epsilon = epsilon;
  r.concurrence = std::sin(2.0 * r.theta);

  r.thresholds.push_back(alpha1_lower_bound(delta, r.theta, 1.0).value_or(0.0));
  r.sequence.push_back(alpha1);
  for (int l = 2; l <= k; ++l) {
    if (r.sequence.back() >= 1.0) {
      mark_infeasible(r, l, "previous strength reached 1");
      break;
    }
    const auto thr = alphak_lower_bound_ppm(l, delta, r.sequence);
    if (!thr) {
      mark_infeasible(r, l, "delta outside (0, asin(2^(1-l)))");
      break;
    }
    r.thresholds.push_back(*thr);
    r.sequence.push_back((1.0 + epsilon) * *thr);
    if (r.sequence.back() > 1.0) {
      mark_infeasible(r, l, "strength exceeds 1");
      break;
    }
  }
  fill_values(r, 1.0);
  certify(r);
  return r;
}

SynthesisResult synthesize_t2(int k, double delta, double epsilon, double v) {
  check_k_eps(k, epsilon);
  if (!(delta > 0.0 && delta <= kPi / 4)) throw DomainError("delta must lie in (0, pi/4]");
  const auto adm = v_admissibility(v);
  if (!adm.admissible) throw DomainError("v is not admissible");

  SynthesisResult r{};
  r.theorem = Theorem::T2;
  r.k = k;
  r.delta = delta;
  r.theta = kPi / 4;
  r.v = v;
  r.epsilon = epsilon;
  r.concurrence = 1.0;

  auto push = [&](int l, double thr) {
    r.thresholds.push_back(thr);
    r.sequence.push_back((1.0 + epsilon) * thr);
    const double s = r.sequence.back();
    if (s > adm.alpha_cap) {
      mark_infeasible(r, l, "strength exceeds alpha_cap(v)");
      return false;
    }
    if (adm.excluded_alpha && std::abs(s - *adm.excluded_alpha) < 1e-12) {
      mark_infeasible(r, l, "strength hits the excluded point");
      return false;
    }
    return true;
  };

  if (push(1, std::tan(0.5 * delta))) {
    for (int l = 2; l <= k; ++l) {
      if (!push(l, alphak_lower_bound_twokraus(l, delta, v, r.sequence))) break;
    }
  }
  fill_values(r, adm.alpha_cap);
  certify(r);
  return r;
}

BoundingSequence bounding_sequence_t2(int k, double delta, double epsilon, double v) {
  check_k_eps(k, epsilon);
  if (!(delta > 0.0 && delta <= kPi / 4)) throw DomainError("delta must lie in (0, pi/4]");
  if (!v_admissibility(v).admissible) throw DomainError("v is not admissible");
  const double c = 16.0 * v * (1.0 - v);
  const double h = 0.5 * delta * delta;
  BoundingSequence out;
  out.beta.push_back((1.0 + epsilon) * 0.5 * delta);
  std::vector<double> xs;
  for (int l = 2; l <= k; ++l) {
    const double b = out.beta.back();
    xs.push_back(b * b / c);
    // 1 - (1 - h) P == h + (1 - h)(1 - P)
    const double bracket = h + (1.0 - h) * one_minus_product(xs);
    out.beta.push_back(std::ldexp(1.0 + epsilon, l - 1) * bracket / delta);
  }
  return out;
}

int max_feasible_k(Theorem theorem, double delta, double epsilon, double v, double alpha1,
                   int k_cap) {
  int best = 0;
  try {
    for (int k = 1; k <= k_cap; ++k) {
      const auto r = theorem == Theorem::T1 ? synthesize_t1(k, delta, epsilon, alpha1)
                                            : synthesize_t2(k, delta, epsilon, v);
      if (!r.feasible) break;
      best = k;
    }
  } catch (const DomainError&) {
    return 0;
  }
  return best;
}

DeltaWindow delta_window(Theorem theorem, int k, double v) {
  if (theorem == Theorem::T1) {
    if (k < 2) throw DomainError("k must be at least 2");
    const double hi = std::asin(std::ldexp(1.0, 1 - k));
    return {0.0, hi, false, kPi / 4 - 0.5 * hi, kPi / 4};
  }
  if (k < 1) throw DomainError("k must be positive");
  if (!v_admissibility(v).admissible) throw DomainError("v is not admissible");
  return {0.0, kPi / 4, true, std::nullopt, std::nullopt};
}

std::optional<double> pick_auto_delta(Theorem theorem, int k, double epsilon, double v,
                                      double alpha1) {
  double hi = kPi / 2;
  if (theorem == Theorem::T2 || k >= 2) {
    const auto w = delta_window(theorem, k, v);
    hi = w.hi_inclusive ? w.hi : w.hi * (1.0 - 1e-6);
  }
  constexpr int kPoints = 600;
  constexpr double kDecades = 9.0;
  std::vector<double> grid;
  std::vector<bool> ok;
  for (int i = 0; i < kPoints; ++i) {
    const double d = hi * std::pow(10.0, -kDecades + kDecades * i / (kPoints - 1));
    grid.push_back(d);
    const auto r = theorem == Theorem::T1 ? synthesize_t1(k, d, epsilon, alpha1)
                                          : synthesize_t2(k, d, epsilon, v);
    ok.push_back(r.feasible);
  }
  int first = -1, last = -1;
  for (int i = 0; i < kPoints; ++i) {
    if (!ok[i]) continue;
    if (first < 0) first = i;
    last = i;
  }
  if (first < 0) return std::nullopt;
  const double target = std::sqrt(grid[first] * grid[last]);
  int pick = first;
  for (int i = first; i <= last; ++i) {
    if (ok[i] && std::abs(std::log(grid[i] / target)) < std::abs(std::log(grid[pick] / target))) {
      pick = i;
    }
  }
  return grid[pick];
}

}  // namespace nlshare
