#include "nlshare/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>

#include "nlshare/chsh_eval.hpp"
#include "nlshare/synthesis.hpp"

namespace nlshare {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStateTol = 1e-10;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

SchemeKind random_kind(Rng& rng) {
  static constexpr SchemeKind kinds[] = {SchemeKind::PPM3, SchemeKind::FourKraus,
                                         SchemeKind::TwoKraus};
  return kinds[uniform_int(rng, 0, 2)];
}

MeasurementScheme random_scheme(Rng& rng) {
  return MeasurementScheme::make(random_kind(rng), uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0));
}

// G G† / Tr for complex Gaussian G; full rank with probability one.
DensityMatrix random_mixed_state(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4::Storage g{};
  for (auto& z : g) z = Complex{n(rng), n(rng)};
  const Mat4 gm(g);
  Mat4 rho = gm * adjoint(gm);
  rho *= 1.0 / trace(rho).real();
  // symmetrize against round-off before the Hermitian check
  return DensityMatrix(0.5 * (rho + adjoint(rho)));
}

Mat4 random_pure_projector(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::array<Complex, 4> psi;
  double norm = 0.0;
  for (auto& z : psi) {
    z = Complex{n(rng), n(rng)};
    norm += std::norm(z);
  }
  Mat4::Storage e{};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) e[r * 4 + c] = psi[r] * std::conj(psi[c]) / norm;
  return Mat4(e);
}

// Unit Bloch direction dotted into (X, Y, Z).
Mat2 random_sharp_observable(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double x = n(rng), y = n(rng), z = n(rng);
  const double r = std::sqrt(x * x + y * y + z * z);
  return (x / r) * pauli::X() + (y / r) * pauli::Y() + (z / r) * pauli::Z();
}

struct Tracker {
  double worst = 0.0;
  int failures = 0;
  int checks = 0;
  void note(double dev, double tol) {
    ++checks;
    worst = std::max(worst, dev);
    if (!(dev <= tol)) ++failures;
  }
  void fail() {
    ++checks;
    ++failures;
  }
};

SuiteResult finish(std::string name, const Tracker& t, std::string extra = {}) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d checks, %d failures", t.checks, t.failures);
  std::string detail = buf;
  if (!extra.empty()) detail += "; " + extra;
  return {std::move(name), t.failures == 0 && t.checks > 0, t.worst, detail};
}

SuiteResult povm_completeness(const VerifyOptions& o, Rng& rng) {
  Tracker t;
  for (int i = 0; i < o.trials; ++i) {
    const auto scheme = random_scheme(rng);
    Mat2 sum;
    for (const auto& k : build_kraus_set(scheme)) sum += adjoint(k) * k;
    t.note(max_abs_diff(sum, Mat2::identity()), kStateTol);
    const auto povm = effective_povm(scheme);
    t.note(max_abs_diff(povm.e_plus + povm.e_minus, Mat2::identity()), kStateTol);
    t.note(std::max(0.0, -hermitian_eigenvalues(povm.e_plus).front()), kStateTol);
    t.note(std::max(0.0, -hermitian_eigenvalues(povm.e_minus).front()), kStateTol);
    const auto grouped = povm_from_kraus(scheme);
    t.note(std::max(max_abs_diff(grouped.e_plus, povm.e_plus),
                    max_abs_diff(grouped.e_minus, povm.e_minus)),
           kStateTol);
  }
  return finish("povm-completeness", t);
}

template <typename Check>
SuiteResult channel_suite(const char* name, const VerifyOptions& o, Rng& rng, Check check) {
  Tracker t;
  for (int i = 0; i < o.trials; ++i) {
    const auto rho = random_mixed_state(rng);
    const auto scheme = random_scheme(rng);
    try {
      check(t, rho, o.channel(rho, scheme));
    } catch (const DomainError&) {
      t.fail();
    }
  }
  return finish(name, t);
}

SuiteResult channel_trace(const VerifyOptions& o, Rng& rng) {
  return channel_suite("channel-trace", o, rng,
                       [](Tracker& t, const DensityMatrix&, const DensityMatrix& out) {
                         t.note(std::abs(trace(out.matrix()) - 1.0), kStateTol);
                       });
}

SuiteResult channel_positivity(const VerifyOptions& o, Rng& rng) {
  return channel_suite("channel-positivity", o, rng,
                       [](Tracker& t, const DensityMatrix&, const DensityMatrix& out) {
                         const Mat4& m = out.matrix();
                         t.note(max_abs_diff(m, adjoint(m)), kStateTol);
                         t.note(std::max(0.0, -hermitian_eigenvalues(m).front()), kStateTol);
                       });
}

SuiteResult marginal_invariance(const VerifyOptions& o, Rng& rng) {
  return channel_suite("marginal-invariance", o, rng,
                       [](Tracker& t, const DensityMatrix& in, const DensityMatrix& out) {
                         t.note(max_abs_diff(partial_trace_bob(in.matrix()),
                                             partial_trace_bob(out.matrix())),
                                kStateTol);
                       });
}

SuiteResult oracle_equivalence(const VerifyOptions& o, Rng& rng) {
  enum Family { PpmT1, PpmGeneral, Four, Two };
  const char* labels[] = {"ppm-t1", "ppm", "four-kraus", "two-kraus"};
  Tracker t;
  std::string worst_label = "-";
  for (int fam = PpmT1; fam <= Two; ++fam) {
    for (int i = 0; i < o.trials; ++i) {
      ProtocolConfig cfg;
      cfg.k = uniform_int(rng, 1, 6);
      cfg.delta = uniform(rng, 0.0, kPi / 2);
      cfg.theta = fam == PpmT1 ? std::max(0.0, kPi / 4 - 0.5 * cfg.delta)
                               : uniform(rng, 0.0, kPi / 4);
      const double v = fam >= Four ? uniform(rng, 0.0, 1.0) : 1.0;
      std::vector<double> alphas;
      for (int j = 0; j < cfg.k; ++j) {
        alphas.push_back(uniform(rng, 0.0, 1.0));
        const SchemeKind kind = fam == Four  ? SchemeKind::FourKraus
                                : fam == Two ? SchemeKind::TwoKraus
                                             : SchemeKind::PPM3;
        cfg.schemes.push_back(MeasurementScheme::make(kind, alphas.back(), v));
      }
      try {
        const auto trace_out = run_protocol(cfg, o.channel);
        for (int j = 1; j <= cfg.k; ++j) {
          const std::span<const double> a(alphas.data(), static_cast<std::size_t>(j));
          const double cf =
              fam <= PpmGeneral
                  ? closed_form_ppm(j, cfg.delta, cfg.theta, a)
                  : closed_form_general(j, cfg.delta, cfg.theta, v, a,
                                        fam == Four ? KrausFamily::FourKraus
                                                    : KrausFamily::TwoKraus);
          const double dev = std::abs(cf - trace_out.chsh_values[j - 1]);
          if (dev > t.worst) worst_label = labels[fam];
          t.note(dev, o.tolerance);
        }
      } catch (const DomainError&) {
        t.fail();
      }
    }
  }
  return finish("oracle-equivalence", t, std::string("worst family ") + worst_label);
}

SuiteResult sos_soundness(const VerifyOptions& o, Rng& rng) {
  Tracker t;
  const int n = 2 * o.trials;
  for (int i = 0; i < n; ++i) {
    const Mat4 rho = random_pure_projector(rng);
    const double delta = uniform(rng, 0.0, kPi / 2);
    const double eta0 = uniform(rng, 0.0, 1.0);
    const double eta1 = uniform(rng, 0.0, 1.0);
    const auto alice = build_alice_observables(delta);
    const Mat2& a0 = alice.a0.matrix();
    const Mat2& a1 = alice.a1.matrix();
    const Mat2 b0 = random_sharp_observable(rng);
    const Mat2 b1 = random_sharp_observable(rng);
    const Mat4 op = tensor(a0 + a1, eta0 * b0) + tensor(a0 - a1, eta1 * b1);
    const double value = trace(op * rho).real();
    const Mat2 anti = a0 * a1 + a1 * a0;
    const double x = trace(tensor(anti, Mat2::identity()) * rho).real();
    const auto bound = sos_bound(eta0, eta1, std::clamp(x, -2.0, 2.0));
    t.note(std::max(0.0, value - bound.bound), o.tolerance);
  }
  return finish("sos-soundness", t);
}

SuiteResult t1_monotonicity(const VerifyOptions& o, Rng& rng) {
  Tracker t;
  int feasible = 0;
  const double ratio_min = 2.0 * (std::sqrt(3.0) + 2.0);
  for (int i = 0; i < o.trials; ++i) {
    const int k = uniform_int(rng, 2, 6);
    const double hi = std::asin(std::ldexp(1.0, 1 - k));
    const double delta = log_uniform(rng, hi * 1e-3, hi * (1.0 - 1e-9));
    const double alpha1 = log_uniform(rng, 1e-12, 0.2);
    const double eps = uniform(rng, 1e-3, 0.1);
    const auto r = synthesize_t1(k, delta, eps, alpha1);
    if (!r.feasible) continue;
    ++feasible;
    const auto& s = r.sequence;
    // relative slack hi enough for round-off in the ratio, not more
    t.note(std::max(0.0, 1.0 - s[1] / ((1.0 + eps) * ratio_min * s[0])), 1e-9);
    for (std::size_t l = 2; l < s.size(); ++l) {
      t.note(s[l] > 2.0 * s[l - 1] ? 0.0 : 2.0 * s[l - 1] - s[l], 0.0);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d feasible syntheses", feasible);
  return finish("t1-monotonicity", t, buf);
}

SuiteResult t2_monotonicity(const VerifyOptions& o, Rng& rng) {
  Tracker t;
  int feasible = 0;
  for (int i = 0; i < o.trials; ++i) {
    const int k = uniform_int(rng, 2, 6);
    double v = uniform(rng, 0.06, 0.94);
    if (!v_admissibility(v).admissible) continue;
    const double delta = log_uniform(rng, 1e-6, kPi / 4);
    const double eps = uniform(rng, 1e-3, 0.1);
    const auto r = synthesize_t2(k, delta, eps, v);
    if (!r.feasible) continue;
    ++feasible;
    const auto& s = r.sequence;
    for (std::size_t l = 1; l < s.size(); ++l) {
      t.note(s[l] > 2.0 * s[l - 1] ? 0.0 : 2.0 * s[l - 1] - s[l], 0.0);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d feasible syntheses", feasible);
  return finish("t2-monotonicity", t, buf);
}

SuiteResult bell_diagonal(const VerifyOptions& o, Rng& rng) {
  Tracker t;
  for (int i = 0; i < o.trials; ++i) {
    ProtocolConfig cfg;
    cfg.k = uniform_int(rng, 1, 6);
    cfg.delta = uniform(rng, 0.0, kPi / 2);
    cfg.theta = kPi / 4;
    for (int j = 0; j < cfg.k; ++j) cfg.schemes.push_back(random_scheme(rng));
    const auto alice = build_alice_observables(cfg.delta);
    const Mat4 op = tensor(alice.a0.matrix() - alice.a1.matrix(), Mat2::identity());
    try {
      const auto tr = run_protocol(cfg, o.channel);
      for (const auto& rho : tr.states) {
        t.note(std::abs(trace(op * rho.matrix()).real()), kStateTol);
      }
    } catch (const DomainError&) {
      t.fail();
    }
  }
  return finish("bell-diagonal", t);
}

SuiteResult realization_dependence(const VerifyOptions& o, Rng& rng) {
  Tracker t;
  double min_state_gap = 1.0;
  const auto phi = build_initial_state(kPi / 4);
  for (int i = 0; i < o.trials; ++i) {
    const double alpha = uniform(rng, 0.01, 0.99);
    const auto ppm = MeasurementScheme::ppm3(alpha);
    const auto two = MeasurementScheme::two_kraus(alpha, 1.0);
    try {
      const double gap =
          max_abs_diff(o.channel(phi, ppm).matrix(), o.channel(phi, two).matrix());
      min_state_gap = std::min(min_state_gap, gap);
      if (!(gap > 1e-6)) t.fail();
      const auto pa = povm_from_kraus(ppm);
      const auto pb = povm_from_kraus(two);
      for (const auto& [ea, eb] : {std::pair{pa.e_plus, pb.e_plus}, std::pair{pa.e_minus, pb.e_minus}}) {
        const double prob_a = trace(tensor(Mat2::identity(), ea) * phi.matrix()).real();
        const double prob_b = trace(tensor(Mat2::identity(), eb) * phi.matrix()).real();
        t.note(std::abs(prob_a - prob_b), 1e-12);
      }
    } catch (const DomainError&) {
      t.fail();
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "smallest state gap %.3g", min_state_gap);
  return finish("realization-dependence", t, buf);
}

using SuiteFn = SuiteResult (*)(const VerifyOptions&, Rng&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"povm-completeness", povm_completeness},
      {"channel-trace", channel_trace},
      {"channel-positivity", channel_positivity},
      {"oracle-equivalence", oracle_equivalence},
      {"sos-soundness", sos_soundness},
      {"t1-monotonicity", t1_monotonicity},
      {"t2-monotonicity", t2_monotonicity},
      {"marginal-invariance", marginal_invariance},
      {"bell-diagonal", bell_diagonal},
      {"realization-dependence", realization_dependence},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& verification_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(std::string_view name, const VerifyOptions& options) {
  if (options.trials < 1) throw DomainError("trials must be positive");
  const auto& reg = registry();
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (reg[i].first != name) continue;
    // each suite draws from its own stream so suites can run alone
    Rng rng(options.seed * 0x9E3779B97F4A7C15ULL + i);
    return reg[i].second(options, rng);
  }
  throw DomainError("unknown suite: " + std::string(name));
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  std::vector<SuiteResult> out;
  for (const auto& name : verification_suite_names()) out.push_back(run_suite(name, options));
  return out;
}

ChannelFn faulty_channel() {
  return [](const DensityMatrix& rho, const MeasurementScheme& scheme) {
    const Mat4& r = rho.matrix();
    Mat4 projective;
    for (int sign : {+1, -1}) projective += conjugate_bob(r, b0_projector(sign));
    Mat4 kraus;
    for (const auto& k : build_kraus_set(scheme)) kraus += conjugate_bob(r, k);
    return DensityMatrix(0.6 * projective + 0.4 * kraus);
  };
}

}  // namespace nlshare
