#include "ubsr/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ubsr/distributions.hpp"
#include "ubsr/errors.hpp"
#include "ubsr/estimator.hpp"
#include "ubsr/grammar.hpp"
#include "ubsr/io.hpp"
#include "ubsr/lmo.hpp"
#include "ubsr/optimizer.hpp"
#include "ubsr/parallel.hpp"
#include "ubsr/rng.hpp"
#include "ubsr/verify.hpp"

namespace ubsr::cli {
namespace {

using nlohmann::json;

constexpr const char* kSeedEnv = "UBSR_SEED";

// Re-raises grammar and argument errors with the flag that carried them.
template <class F>
auto from_flag(const std::string& flag, F&& parse) {
  try {
    return parse();
  } catch (const DataError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(flag + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string joined(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s;
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Every option of the app and of the chosen subcommand, given or defaulted.
json flag_set(const CLI::App& app, const CLI::App* sub) {
  json flags = json::object();
  auto collect = [&](const CLI::App& a) {
    for (const CLI::Option* opt : a.get_options()) {
      const auto name = opt->get_lnames().empty() ? std::string() : opt->get_lnames().front();
      if (name.empty() || name == "help") continue;
      if (opt->count() > 0) {
        flags[name] = opt->get_type_size() == 0 ? "true" : joined(opt->results());
      } else {
        flags[name] = opt->get_type_size() == 0 ? "false" : opt->get_default_str();
      }
    }
  };
  collect(app);
  if (sub) collect(*sub);
  return flags;
}

struct Context {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string config;
  std::ostream& out;
  std::ostream& err;
  json metadata;
};

void emit_json(Context& ctx, json body) {
  body["metadata"] = ctx.metadata;
  ctx.out << body.dump(2) << "\n";
}

void write_json_file(const std::string& path, json body, const Context& ctx) {
  body["metadata"] = ctx.metadata;
  write_file_atomic(path, body.dump(2) + "\n");
}

// CSV files stay pure tables; their metadata goes to <path>.meta.json.
void write_csv_file(const std::string& path, const std::string& csv, const Context& ctx) {
  write_file_atomic(path, csv);
  write_file_atomic(path + ".meta.json", json{{"metadata", ctx.metadata}}.dump(2) + "\n");
}

std::pair<double, double> parse_bracket(const std::string& text) {
  return from_flag("--bracket", [&] {
    const auto v = parse_real_list(text, "bracket endpoint");
    if (v.size() != 2 || !(v[0] < v[1])) throw GrammarError("expected lo,hi with lo < hi, got '" + text + "'");
    return std::pair{v[0], v[1]};
  });
}

// ---------------------------------------------------------------- analytic

struct AnalyticArgs {
  std::string dist, utility;
  double lambda = 0.0;
  double tol = 1e-10;
  std::optional<double> t;
};

int do_analytic(const AnalyticArgs& a, Context& ctx) {
  const auto d = from_flag("--dist", [&] { return parse_distribution(a.dist); });
  const auto u = from_flag("--utility", [&] { return parse_utility(a.utility); });
  const double sr = ubsr_exact(d, u, a.lambda, UbsrOptions{a.tol});
  json body{{"ubsr", sr}, {"dist", d.to_string()}, {"utility", u.to_string()}, {"lambda", a.lambda}};
  body["l_f_at_ubsr"] = l_f_exact(d, u, sr);
  if (a.t) {
    body["t"] = *a.t;
    body["l_f"] = l_f_exact(d, u, *a.t);
    body["l_f_slope"] = l_f_slope(d, u, *a.t);
  }
  emit_json(ctx, std::move(body));
  return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string input, utility, bracket;
  double lambda = 0.0;
  std::optional<double> tol;
  std::size_t n = 10000;
};

int do_estimate(const EstimateArgs& a, Context& ctx) {
  const auto u = from_flag("--utility", [&] { return parse_utility(a.utility); });
  SampleVector z;
  std::string source;
  if (std::filesystem::is_regular_file(a.input)) {
    z = load_samples(a.input);
    source = "file";
  } else {
    const auto d = from_flag("--input", [&] {
      try {
        return parse_distribution(a.input);
      } catch (const GrammarError& e) {
        throw GrammarError("'" + a.input + "' is neither a readable file nor a distribution spec (" + e.what() + ")");
      }
    });
    z = sample(d, a.n, ctx.seed);
    source = d.to_string();
  }
  const auto [mn, mx] = std::minmax_element(z.values.begin(), z.values.end());
  SrProblem prob{a.lambda, *mn - 1.0, *mx + 1.0, 1.0};
  if (!a.bracket.empty()) std::tie(prob.t_lo, prob.t_hi) = parse_bracket(a.bracket);
  const double tol = a.tol.value_or(default_estimator_tol(prob.t_lo, prob.t_hi));
  const auto est = estimate_ubsr(z.values, u, prob, tol);
  emit_json(ctx, json{{"estimate", est.value},
                      {"iterations", est.iterations},
                      {"bracket_used", {est.bracket_lo, est.bracket_hi}},
                      {"expansions", est.expansions},
                      {"q_at_estimate", est.q_at_estimate},
                      {"n", z.values.size()},
                      {"source", source},
                      {"tol", tol}});
  return kOk;
}

// ---------------------------------------------------------------- lmo

struct LmoArgs {
  std::string data, utility;
  double gamma = 0.0;
  std::optional<double> norm_bound;
  LmoSettings settings;
};

int do_lmo(const LmoArgs& a, Context& ctx) {
  const auto u = from_flag("--utility", [&] { return parse_utility(a.utility); });
  const auto data = load_dataset(a.data);
  const auto r = solve_lmo(data, u, a.gamma, a.norm_bound, a.settings);
  emit_json(ctx, json{{"weights", vec_json(r.model.weights)},
                      {"objective", r.objective},
                      {"objective_mean", r.objective / static_cast<double>(data.rows())},
                      {"iterations", r.iterations},
                      {"grad_norm", r.grad_norm},
                      {"converged", r.converged},
                      {"feature_bound", data.feature_bound()},
                      {"target_bound", data.target_bound()}});
  return kOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string data, utility = "blend", out, trace;
  double lambda = 0.0;
  int iterations = 20;
  std::optional<double> norm_bound;
  std::optional<std::uint64_t> shuffle_seed;
  bool best_so_far = false;
  double beta0_margin = 0.0;
  double estimator_tol = 1e-10;
};

std::string trace_csv(const BisectionTrace& trace) {
  std::string s = "t,alpha,beta,gamma_t,gamma_hat,branch,lmo_objective,lmo_iters\n";
  for (const auto& r : trace.records) {
    s += std::to_string(r.t) + "," + format_real(r.alpha) + "," + format_real(r.beta) + "," + format_real(r.gamma_t) +
         "," + format_real(r.gamma_hat) + "," + (r.branch == Branch::Lower ? "lower" : "upper") + "," +
         format_real(r.lmo_objective) + "," + std::to_string(r.lmo_iterations) + "\n";
  }
  return s;
}

int do_train(const TrainArgs& a, Context& ctx) {
  BisectionConfig cfg;
  cfg.iterations = a.iterations;
  cfg.lambda = a.lambda;
  cfg.utility = from_flag("--utility", [&] { return parse_utility(a.utility); });
  cfg.norm_bound = a.norm_bound;
  cfg.estimator_tol = a.estimator_tol;
  cfg.beta0_margin = a.beta0_margin;
  cfg.best_so_far = a.best_so_far;
  cfg.shuffle_seed = a.shuffle_seed;
  // CLI11 already enforces T >= 1, so what validate() can still reject is the utility.
  from_flag("--utility", [&] { cfg.validate(); return 0; });
  const auto data = load_dataset(a.data);
  const auto result = train(data, cfg);

  SavedModel saved{result.model, cfg.lambda, cfg.utility, cfg.iterations, result.trace.beta0,
                   result.final_ubsr_estimate};
  auto body = model_to_json(saved);
  if (!a.out.empty()) write_json_file(a.out, body, ctx);
  if (!a.trace.empty()) write_csv_file(a.trace, trace_csv(result.trace), ctx);
  body["beta0_exceeded"] = result.trace.beta0_exceeded;
  emit_json(ctx, std::move(body));
  return kOk;
}

// ---------------------------------------------------------------- concentration

struct ConcentrationArgs {
  std::string dist, utility, tail, bracket, out;
  std::string n_grid = "100,1000,10000";
  std::string delta_grid = "0.05,0.1";
  double lambda = 0.0;
  double half_width = 5.0;
  std::size_t trials = 2000;
};

std::string concentration_csv(const ConcentrationResult& r) {
  std::string s = "n,delta,trial,abs_error,bound,covered\n";
  for (const auto& row : r.rows) {
    s += std::to_string(row.n) + "," + format_real(row.delta) + "," + std::to_string(row.trial) + "," +
         format_real(row.abs_error) + "," + format_real(row.bound) + "," + (row.covered ? "1" : "0") + "\n";
  }
  return s;
}

json report_json(const VerificationReport& r) {
  return json{{"name", r.name}, {"passed", r.passed}, {"skipped", r.skipped}, {"details", r.details},
              {"message", r.message}};
}

ConcentrationResult concentration_run(const ConcentrationArgs& a, const Context& ctx) {
  const auto d = from_flag("--dist", [&] { return parse_distribution(a.dist); });
  const auto u = from_flag("--utility", [&] { return parse_utility(a.utility); });
  const auto tail = a.tail.empty() ? from_flag("--dist", [&] { return default_tail(d); })
                                   : from_flag("--tail", [&] { return parse_tail(a.tail); });
  SrProblem prob = from_flag("--half-width", [&] { return instance_problem(d, u, a.lambda, a.half_width); });
  if (!a.bracket.empty()) {
    const auto [lo, hi] = parse_bracket(a.bracket);
    prob.t_lo = lo;
    prob.t_hi = hi;
    prob.eta = std::min(l_f_exact(d, u, lo) - a.lambda, a.lambda - l_f_exact(d, u, hi));
    if (!(prob.eta > 0.0)) throw InvalidArgument("--bracket: L_F - lambda does not change sign on the bracket");
  }
  ConcentrationSettings s;
  s.n_grid = from_flag("--n-grid", [&] { return parse_size_list(a.n_grid, "sample size"); });
  s.delta_grid = from_flag("--delta-grid", [&] { return parse_real_list(a.delta_grid, "delta"); });
  s.trials = a.trials;
  s.seed = ctx.seed;
  s.threads = ctx.threads;
  return run_concentration_suite(tail, d, u, prob, s);
}

int do_concentration(const ConcentrationArgs& a, Context& ctx) {
  const auto r = concentration_run(a, ctx);
  const auto csv = concentration_csv(r);
  if (a.out.empty()) {
    ctx.out << csv;
  } else {
    write_csv_file(a.out, csv, ctx);
    emit_json(ctx, json{{"true_ubsr", r.true_ubsr}, {"report", report_json(r.report)}});
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string check = "all", report, dist1, dist2, utility, eps_grid = "1e-3,1e-4,1e-5",
              alphas = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::optional<double> lambda;
  int grid = 101;
  ConcentrationArgs conc;
};

int do_verify(VerifyArgs a, Context& ctx) {
  auto dist_or = [&](const std::string& flag, const std::string& given, const char* fallback) {
    return from_flag(flag, [&] { return parse_distribution(given.empty() ? fallback : given); });
  };
  auto util_or = [&](const char* fallback) {
    return from_flag("--utility", [&] { return parse_utility(a.utility.empty() ? fallback : a.utility); });
  };
  const bool all = a.check == "all";
  std::vector<VerificationReport> reports;
  if (all || a.check == "nonconvexity") reports.push_back(check_nonconvexity());
  if (all || a.check == "pseudolinear") {
    reports.push_back(check_pseudolinearity(dist_or("--dist1", a.dist1, "uniform:0,10"),
                                            dist_or("--dist2", a.dist2, "uniform:10,20"), util_or("hinge"),
                                            a.lambda.value_or(2.0), a.grid));
  }
  if (all || a.check == "gradient") {
    const auto eps = from_flag("--eps-grid", [&] { return parse_real_list(a.eps_grid, "epsilon"); });
    reports.push_back(check_gradient(dist_or("--dist1", a.dist1, "uniform:0,10"),
                                     dist_or("--dist2", a.dist2, "uniform:10,20"), util_or("blend:a=0.9,tau=0.5"),
                                     a.lambda.value_or(2.0), eps));
  }
  if (all || a.check == "randomization") {
    const auto alphas = from_flag("--alphas", [&] { return parse_real_list(a.alphas, "alpha"); });
    reports.push_back(check_randomization_invariance(dist_or("--dist1", a.dist1, "uniform:0,10"),
                                                     dist_or("--dist2", a.dist2, "uniform:0,4"), util_or("hinge"),
                                                     a.lambda.value_or(6.0), alphas));
  }
  if (all || a.check == "concentration") {
    if (a.conc.dist.empty()) a.conc.dist = "uniform:0,10";
    a.conc.utility = a.utility.empty() ? "hinge" : a.utility;
    a.conc.lambda = a.lambda.value_or(2.0);
    reports.push_back(concentration_run(a.conc, ctx).report);
  }

  bool passed = true;
  json checks = json::array();
  for (const auto& r : reports) {
    passed = passed && r.passed;
    checks.push_back(report_json(r));
  }
  json body{{"passed", passed}, {"checks", checks}};
  if (!a.report.empty()) write_json_file(a.report, body, ctx);
  emit_json(ctx, std::move(body));
  for (const auto& r : reports) {
    if (!r.passed) ctx.err << "check " << r.name << " failed: " << r.message << "\n";
  }
  return passed ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- config

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.starts_with(flag + "=")) return true;
  }
  return false;
}

// Pulls --config out of `args` and appends each JSON key as a flag not
// already given on the command line.
std::string apply_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return path;
  json cfg;
  try {
    cfg = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("--config: " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw InvalidArgument("--config: " + path + " must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<std::string> parts;
      for (const auto& v : value) parts.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      text = joined(parts);
    } else if (value.is_number()) {
      text = value.dump();
    } else {
      throw InvalidArgument("--config: key '" + key + "' must be a string, number, boolean, or array");
    }
    args.push_back(flag);
    args.push_back(text);
  }
  return path;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  Context ctx{0, 0, "", out, err, {}};
  try {
    ctx.config = apply_config(args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  CLI::App app{"Utility-based shortfall risk: estimation, verification, and risk-aware regression", "ubsr"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", kVersion);
  app.add_option("--seed", ctx.seed, "Base seed (default from $UBSR_SEED, else 0)")->envname(kSeedEnv);
  app.add_option("--threads", ctx.threads, "Worker threads; 0 = hardware concurrency")->check(CLI::NonNegativeNumber);

  AnalyticArgs an;
  auto* analytic = app.add_subcommand("analytic", "Exact UBSR of an analytic law");
  analytic->add_option("--dist", an.dist, "Distribution spec")->required();
  analytic->add_option("--utility", an.utility, std::string(kUtilityGrammar))->required();
  analytic->add_option("--lambda", an.lambda, "Threshold lambda")->required();
  analytic->add_option("--tol", an.tol, "Root bracket width")->check(CLI::PositiveNumber);
  analytic->add_option("--t", an.t, "Also report L_F(t) and its slope at this t");

  EstimateArgs es;
  auto* estimate = app.add_subcommand("estimate", "SAA estimate from samples");
  estimate->add_option("--input", es.input, "CSV with column z, or a distribution spec to sample")->required();
  estimate->add_option("--utility", es.utility, std::string(kUtilityGrammar))->required();
  estimate->add_option("--lambda", es.lambda, "Threshold lambda")->required();
  estimate->add_option("--bracket", es.bracket, "Initial bracket lo,hi (default: min z - 1, max z + 1)");
  estimate->add_option("--tol", es.tol, "Bisection width")->check(CLI::PositiveNumber);
  estimate->add_option("--n", es.n, "Sample size when --input is a distribution")->check(CLI::PositiveNumber);

  LmoArgs lm;
  auto* lmo = app.add_subcommand("lmo", "Minimize the surrogate loss at one level gamma");
  lmo->add_option("--data", lm.data, "CSV with columns x1..xd,y")->required();
  lmo->add_option("--utility", lm.utility, std::string(kUtilityGrammar))->required();
  lmo->add_option("--gamma", lm.gamma, "Level gamma")->required();
  lmo->add_option("--norm-bound", lm.norm_bound, "Radius of the weight ball")->check(CLI::PositiveNumber);
  lmo->add_option("--grad-tol", lm.settings.grad_tol, "Relative gradient tolerance")->check(CLI::PositiveNumber);
  lmo->add_option("--max-iter", lm.settings.max_iter, "Iteration cap")->check(CLI::PositiveNumber);

  TrainArgs tr;
  auto* trn = app.add_subcommand("train", "Bisection training of a linear model");
  trn->add_option("--data", tr.data, "CSV with columns x1..xd,y")->required();
  trn->add_option("--utility", tr.utility, std::string(kUtilityGrammar));
  trn->add_option("--lambda", tr.lambda, "Threshold lambda")->required();
  trn->add_option("--T", tr.iterations, "Bisection rounds")->check(CLI::PositiveNumber);
  trn->add_option("--norm-bound", tr.norm_bound, "Radius of the weight ball")->check(CLI::PositiveNumber);
  trn->add_option("--shuffle-seed", tr.shuffle_seed, "Shuffle rows before splitting");
  trn->add_option("--out", tr.out, "Write model JSON here");
  trn->add_option("--trace", tr.trace, "Write the per-round trace CSV here");
  trn->add_flag("--best-so-far", tr.best_so_far, "Return the iterate with the smallest estimated UBSR");
  trn->add_option("--beta0-margin", tr.beta0_margin, "Added to the initial upper level")->check(CLI::NonNegativeNumber);
  trn->add_option("--estimator-tol", tr.estimator_tol, "Bisection width of each UBSR estimate")
      ->check(CLI::PositiveNumber);

  ConcentrationArgs co;
  auto add_concentration_flags = [](CLI::App* sub, ConcentrationArgs& c) {
    sub->add_option("--tail", c.tail, std::string(kTailGrammar) + " (default derived from --dist)");
    sub->add_option("--n-grid", c.n_grid, "Comma-separated sample sizes");
    sub->add_option("--delta-grid", c.delta_grid, "Comma-separated confidence levels");
    sub->add_option("--trials", c.trials, "Trials per grid point")->check(CLI::PositiveNumber);
    sub->add_option("--half-width", c.half_width, "Bracket half-width around the true UBSR")
        ->check(CLI::PositiveNumber);
    sub->add_option("--bracket", c.bracket, "Explicit bracket lo,hi (overrides --half-width)");
  };
  auto* conc = app.add_subcommand("concentration", "Monte-Carlo coverage of the concentration bounds");
  conc->add_option("--dist", co.dist, "Distribution spec")->required();
  conc->add_option("--utility", co.utility, std::string(kUtilityGrammar))->required();
  conc->add_option("--lambda", co.lambda, "Threshold lambda")->required();
  conc->add_option("--out", co.out, "Write the CSV here instead of stdout");
  add_concentration_flags(conc, co);

  VerifyArgs ve;
  auto* ver = app.add_subcommand("verify", "Structural checks; exit 0 iff all selected checks pass");
  ver->add_option("--check", ve.check, "Which check")
      ->check(CLI::IsMember({"nonconvexity", "pseudolinear", "gradient", "randomization", "concentration", "all"}));
  ver->add_option("--report", ve.report, "Write the JSON report here");
  ver->add_option("--dist1", ve.dist1, "First law (pseudolinear, gradient, randomization)");
  ver->add_option("--dist2", ve.dist2, "Second law (pseudolinear, gradient, randomization)");
  ver->add_option("--utility", ve.utility, std::string(kUtilityGrammar));
  ver->add_option("--lambda", ve.lambda, "Threshold lambda");
  ver->add_option("--grid", ve.grid, "Alpha grid size for pseudolinear")->check(CLI::Range(2, 1000000));
  ver->add_option("--eps-grid", ve.eps_grid, "Finite-difference steps for gradient");
  ver->add_option("--alphas", ve.alphas, "Mixture weights for randomization");
  ver->add_option("--dist", ve.conc.dist, "Law for concentration");
  add_concentration_flags(ver, ve.conc);

  std::vector<const char*> argv{"ubsr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for the flag grammar.\n";
    return kUsageError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  ctx.metadata = json{{"version", kVersion},
                      {"subcommand", chosen->get_name()},
                      {"seed", ctx.seed},
                      {"rng", SplitMix64::kName},
                      {"config", ctx.config},
                      {"flags", flag_set(app, chosen)},
                      {"timestamp", utc_timestamp()}};
  try {
    if (chosen == analytic) return do_analytic(an, ctx);
    if (chosen == estimate) return do_estimate(es, ctx);
    if (chosen == lmo) return do_lmo(lm, ctx);
    if (chosen == trn) return do_train(tr, ctx);
    if (chosen == conc) return do_concentration(co, ctx);
    return do_verify(ve, ctx);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kUsageError;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kComputeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputeError;
  }
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace ubsr::cli
