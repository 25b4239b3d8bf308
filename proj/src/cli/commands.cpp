#include "nlshare/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>

#include "CLI11.hpp"
#include "nlshare/chsh_eval.hpp"
#include "nlshare/cli/report.hpp"
#include "nlshare/sequential_engine.hpp"
#include "nlshare/synthesis.hpp"
#include "nlshare/verification.hpp"

namespace nlshare::cli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOracleTolerance = 1e-9;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::string format = "csv";
  std::string out_path;
  bool timestamp = false;
};

struct SimulateArgs {
  std::string scheme = "ppm";
  int k = 0;
  double delta = 0.0;
  std::optional<double> theta;
  std::string theta_rule;
  std::optional<double> v;
  std::vector<double> alphas;
  bool degrees = false;
  bool oracle = false;
  OutputOptions output;
};

struct SynthesizeArgs {
  int theorem = 0;
  int k = 0;
  std::string delta = "auto";
  double epsilon = kDefaultEpsilon;
  double alpha1 = 0.01;
  std::optional<double> v;
  bool degrees = false;
  bool oracle = false;
  OutputOptions output;
};

struct TradeoffArgs {
  std::string curve = "both";
  int samples = 201;
  OutputOptions output;
};

struct VerifyArgs {
  std::uint64_t seed = 1;
  int trials = 500;
  double tolerance = 1e-9;
  OutputOptions output;
};

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "Output file (default stdout)");
  cmd->add_flag("--timestamp", o.timestamp, "Record the UTC time in JSON metadata");
}

void emit(const OutputOptions& o, const std::string& payload, std::ostream& out) {
  if (o.out_path.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw IoError("cannot open " + o.out_path);
  f << payload;
  if (!f) throw IoError("write failed: " + o.out_path);
}

std::string render(const OutputOptions& o, const Table& table, Json doc, const char* rows_key) {
  if (o.format == "csv") return to_csv(table);
  doc[rows_key] = to_json_rows(table);
  doc["metadata"] = metadata(o.timestamp, kOracleTolerance);
  return doc.dump(2) + "\n";
}

Json json_array(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(json_number(x));
  return a;
}

// Accept inputs within kSnap above an interval edge (e.g. pi/4 typed to
// 10 digits) as the edge itself.
constexpr double kSnap = 1e-9;

double snap_to(double x, double edge) { return x > edge && x <= edge + kSnap ? edge : x; }

double parse_real(const std::string& s, const char* flag) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw UsageError(std::string(flag) + ": not a number: " + s);
  }
  return x;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const SchemeKind kind = parse_scheme_kind(a.scheme);
  const double to_rad = a.degrees ? kPi / 180.0 : 1.0;
  const double delta = snap_to(a.delta * to_rad, kPi / 2);
  double theta = 0.0;
  if (a.theta) {
    theta = snap_to(*a.theta * to_rad, kPi / 4);
  } else if (a.theta_rule == "t1") {
    theta = kPi / 4 - 0.5 * delta;
  } else if (a.theta_rule == "max-ent") {
    theta = kPi / 4;
  } else {
    throw UsageError("one of --theta or --theta-rule is required");
  }
  if (kind != SchemeKind::PPM3 && !a.v) throw UsageError("--v is required for " + a.scheme);
  const double v = kind == SchemeKind::PPM3 ? 1.0 : *a.v;
  if (a.alphas.size() != static_cast<std::size_t>(a.k)) {
    throw DomainError("--alphas must have exactly k entries");
  }

  ProtocolConfig cfg;
  cfg.k = a.k;
  cfg.delta = delta;
  cfg.theta = theta;
  for (double al : a.alphas) cfg.schemes.push_back(MeasurementScheme::make(kind, al, v));
  cfg.validate();

  std::optional<SequentialTrace> brute;
  if (a.oracle) brute = run_protocol(cfg);

  Table t;
  t.columns = {"index", "chsh_closed_form", "chsh_bruteforce", "abs_diff", "violated"};
  const std::span<const double> al(a.alphas);
  for (int j = 1; j <= a.k; ++j) {
    const auto pre = al.first(static_cast<std::size_t>(j));
    double cf = 0.0, ex = 0.0;
    if (kind == SchemeKind::PPM3) {
      cf = closed_form_ppm(j, delta, theta, pre);
      ex = closed_form_ppm_excess(j, delta, theta, pre);
    } else {
      const auto fam = kind == SchemeKind::FourKraus ? KrausFamily::FourKraus
                                                      : KrausFamily::TwoKraus;
      cf = closed_form_general(j, delta, theta, v, pre, fam);
      ex = closed_form_general_excess(j, delta, theta, v, pre, fam);
    }
    Cell bf, diff;
    if (brute) {
      const double b = brute->chsh_values[j - 1];
      bf = b;
      diff = std::abs(cf - b);
    }
    t.add_row({static_cast<long long>(j), cf, bf, diff, ex > 0.0});
  }

  Json doc = Json::object();
  doc["command"] = "simulate";
  Json c = Json::object();
  c["scheme"] = std::string(to_string(kind));
  c["k"] = a.k;
  c["delta"] = json_number(delta);
  c["theta"] = json_number(theta);
  c["theta_rule"] = a.theta ? Json(nullptr) : Json(a.theta_rule);
  c["v"] = json_number(v);
  c["alphas"] = json_array(a.alphas);
  c["oracle"] = a.oracle;
  doc["config"] = c;
  emit(a.output, render(a.output, t, doc, "rows"), out);
  return kExitOk;
}

// -------------------------------------------------------------- synthesize

int cmd_synthesize(const SynthesizeArgs& a, std::ostream& out, std::ostream& err) {
  const Theorem th = a.theorem == 1 ? Theorem::T1 : Theorem::T2;
  if (th == Theorem::T2 && !a.v) throw UsageError("--v is required for theorem 2");
  const double v = th == Theorem::T2 ? *a.v : 1.0;
  if (th == Theorem::T2 && !v_admissibility(v).admissible) {
    throw DomainError("v is not admissible for theorem 2");
  }

  std::optional<double> delta;
  if (a.delta == "auto") {
    if (a.k < 1) throw DomainError("k must be positive");
    delta = pick_auto_delta(th, a.k, a.epsilon, v, a.alpha1);
    if (!delta) {
      err << Json{{"error", "infeasible"},
                  {"exit_code", kExitInfeasible},
                  {"message", "no feasible delta found on the search grid"}}
                 .dump()
          << "\n";
      return kExitInfeasible;
    }
  } else {
    const double d = parse_real(a.delta, "--delta") * (a.degrees ? kPi / 180.0 : 1.0);
    delta = snap_to(d, th == Theorem::T1 ? kPi / 2 : kPi / 4);
  }

  const auto r = th == Theorem::T1 ? synthesize_t1(a.k, *delta, a.epsilon, a.alpha1)
                                   : synthesize_t2(a.k, *delta, a.epsilon, v);

  std::optional<SequentialTrace> brute;
  const std::size_t evaluated = r.per_bob_chsh.size();
  if (a.oracle && evaluated > 0) {
    ProtocolConfig cfg;
    cfg.k = static_cast<int>(evaluated);
    cfg.delta = r.delta;
    cfg.theta = r.theta;
    for (std::size_t j = 0; j < evaluated; ++j) {
      cfg.schemes.push_back(th == Theorem::T1 ? MeasurementScheme::ppm3(r.sequence[j])
                                              : MeasurementScheme::two_kraus(r.sequence[j], v));
    }
    brute = run_protocol(cfg);
  }

  Table t;
  t.columns = {"index",  "s",          "threshold", "chsh_closed_form", "chsh_bruteforce",
               "excess", "lower_bound", "violated"};
  for (std::size_t j = 0; j < r.sequence.size(); ++j) {
    Cell chsh, bf, ex, lb, viol;
    if (j < evaluated) {
      chsh = r.per_bob_chsh[j];
      ex = r.per_bob_excess[j];
      viol = r.per_bob_excess[j] > 0.0;
      if (brute) bf = brute->chsh_values[j];
      if (th == Theorem::T2) lb = r.per_bob_lower_bound[j];
    }
    t.add_row({static_cast<long long>(j + 1), r.sequence[j], r.thresholds[j], chsh, bf, ex, lb,
               viol});
  }

  Json doc = Json::object();
  doc["command"] = "synthesize";
  Json c = Json::object();
  c["theorem"] = a.theorem;
  c["k"] = a.k;
  c["delta"] = json_number(r.delta);
  c["delta_auto"] = a.delta == "auto";
  c["epsilon"] = json_number(a.epsilon);
  if (th == Theorem::T1) {
    c["alpha1"] = json_number(a.alpha1);
  } else {
    c["v"] = json_number(v);
  }
  doc["config"] = c;
  Json res = Json::object();
  res["theta"] = json_number(r.theta);
  res["concurrence"] = json_number(r.concurrence);
  if (th == Theorem::T1 && a.k >= 2) {
    res["concurrence_threshold"] = json_number(concurrence_threshold(a.k));
  }
  if (th == Theorem::T2) res["alpha_cap"] = json_number(v_admissibility(v).alpha_cap);
  res["feasible"] = r.feasible;
  res["infeasible_at"] = r.infeasible_at ? Json(*r.infeasible_at) : Json(nullptr);
  res["reason"] = r.reason.empty() ? Json(nullptr) : Json(r.reason);
  doc["result"] = res;
  emit(a.output, render(a.output, t, doc, "bobs"), out);

  if (!r.feasible) {
    err << Json{{"error", "infeasible"},
                {"exit_code", kExitInfeasible},
                {"infeasible_at", *r.infeasible_at},
                {"message", r.reason}}
               .dump()
        << "\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- tradeoff

int cmd_tradeoff(const TradeoffArgs& a, std::ostream& out) {
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  std::vector<std::pair<std::string, EtaCurve>> curves;
  if (a.curve != "b") curves.emplace_back("a", EtaCurve::EqualUnsharp);
  if (a.curve != "a") curves.emplace_back("b", EtaCurve::SharpB0);

  Table t;
  t.columns = {"curve", "x", "eta_critical"};
  for (const auto& [name, curve] : curves) {
    for (int i = 0; i < a.samples; ++i) {
      // exact endpoints; interior points evenly spaced
      const double x = i == a.samples - 1 ? 2.0 : 2.0 * i / (a.samples - 1);
      t.add_row({name, x, critical_eta_curve(x, curve)});
    }
  }
  Json doc = Json::object();
  doc["command"] = "tradeoff";
  doc["config"] = Json{{"curve", a.curve}, {"samples", a.samples}};
  emit(a.output, render(a.output, t, doc, "rows"), out);
  return kExitOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (a.trials < 1) throw UsageError("--trials must be positive");
  if (!(a.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  VerifyOptions opts;
  opts.seed = a.seed;
  opts.trials = a.trials;
  opts.tolerance = a.tolerance;
  const auto results = run_verification(opts);

  Table t;
  t.columns = {"suite", "passed", "worst", "detail"};
  bool all = true;
  for (const auto& s : results) {
    t.add_row({s.name, s.passed, s.worst, s.detail});
    all = all && s.passed;
  }
  Json doc = Json::object();
  doc["command"] = "verify";
  doc["config"] = Json{{"seed", a.seed}, {"trials", a.trials}, {"tolerance", json_number(a.tolerance)}};
  doc["all_passed"] = all;
  emit(a.output, render(a.output, t, doc, "suites"), out);
  return all ? kExitOk : kExitVerifyFailed;
}

void error_line(std::ostream& err, const char* kind, int code, const std::string& msg) {
  err << Json{{"error", kind}, {"exit_code", code}, {"message", msg}}.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential CHSH sharing: simulation, sequence synthesis and checks", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "CHSH values for a given measurement sequence");
  c_sim->add_option("--scheme", sim.scheme, "ppm | four-kraus | two-kraus")
      ->check(CLI::IsMember({"ppm", "four-kraus", "two-kraus"}))
      ->capture_default_str();
  c_sim->add_option("--k", sim.k, "Number of Bobs")->required();
  c_sim->add_option("--delta", sim.delta, "Alice's angle")->required();
  auto* o_theta = c_sim->add_option("--theta", sim.theta, "State angle");
  auto* o_rule = c_sim->add_option("--theta-rule", sim.theta_rule, "t1 | max-ent")
                     ->check(CLI::IsMember({"t1", "max-ent"}));
  o_theta->excludes(o_rule);
  c_sim->add_option("--v", sim.v, "POVM bias (four-kraus, two-kraus)");
  c_sim->add_option("--alphas", sim.alphas, "Comma-separated strengths")
      ->delimiter(',')
      ->required();
  c_sim->add_flag("--degrees", sim.degrees, "Angles are given in degrees");
  c_sim->add_flag("--oracle", sim.oracle, "Add the density-matrix evaluation");
  add_output_flags(c_sim, sim.output);

  SynthesizeArgs syn;
  auto* c_syn = app.add_subcommand("synthesize", "Build a strength sequence for k Bobs");
  c_syn->add_option("--theorem", syn.theorem, "1 (PPM) or 2 (two Kraus)")
      ->check(CLI::IsMember({1, 2}))
      ->required();
  c_syn->add_option("--k", syn.k, "Number of Bobs")->required();
  c_syn->add_option("--delta", syn.delta, "Alice's angle, or auto")->capture_default_str();
  c_syn->add_option("--epsilon", syn.epsilon, "Relative excess over each threshold")
      ->capture_default_str();
  c_syn->add_option("--alpha1", syn.alpha1, "First strength (theorem 1)")->capture_default_str();
  c_syn->add_option("--v", syn.v, "POVM bias (theorem 2)");
  c_syn->add_flag("--degrees", syn.degrees, "--delta is given in degrees");
  c_syn->add_flag("--oracle", syn.oracle, "Add the density-matrix evaluation");
  add_output_flags(c_syn, syn.output);

  TradeoffArgs tr;
  auto* c_tr = app.add_subcommand("tradeoff", "Critical unsharpness against <{A0,A1}>");
  c_tr->add_option("--curve", tr.curve, "a | b | both")
      ->check(CLI::IsMember({"a", "b", "both"}))
      ->capture_default_str();
  c_tr->add_option("--samples", tr.samples, "Points per curve")->capture_default_str();
  add_output_flags(c_tr, tr.output);

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Run the randomized invariant suites");
  c_ver->add_option("--seed", ver.seed)->capture_default_str();
  c_ver->add_option("--trials", ver.trials)->capture_default_str();
  c_ver->add_option("--tolerance", ver.tolerance)->capture_default_str();
  add_output_flags(c_ver, ver.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", kExitUsage, e.what());
    return kExitUsage;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_syn->parsed()) return cmd_synthesize(syn, out, err);
    if (c_tr->parsed()) return cmd_tradeoff(tr, out);
    if (c_ver->parsed()) return cmd_verify(ver, out);
  } catch (const UsageError& e) {
    error_line(err, "usage", kExitUsage, e.what());
    return kExitUsage;
  } catch (const DomainError& e) {
    error_line(err, "domain", kExitDomain, e.what());
    return kExitDomain;
  } catch (const IoError& e) {
    error_line(err, "io", kExitDomain, e.what());
    return kExitDomain;
  }
  error_line(err, "usage", kExitUsage, "no subcommand");
  return kExitUsage;
}

}  // namespace nlshare::cli
