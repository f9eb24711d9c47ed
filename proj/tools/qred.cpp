#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qred/analytic.hpp"
#include "qred/codes.hpp"
#include "qred/exact.hpp"
#include "qred/kravchuk.hpp"
#include "qred/quantum.hpp"
#include "qred/reduction.hpp"

namespace {

using nlohmann::json;
using namespace qred;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::uint32_t q = 2;
  std::size_t n = 3, k = 1, t = 1;
  std::optional<std::size_t> u, l;
  std::string decoder = "exhaustive";
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  std::string mode = "exploratory";
  std::uint64_t budget = kDefaultBudget;
  std::string out;
  std::string preset;
  std::string q_est_mode = "exact";
  bool no_amplify = false;

  // params
  std::optional<double> rate;
  double rate_step = 0.05;
  double tau_step = 1e-3;
  bool fig2 = false;

  // kravchuk
  std::vector<std::size_t> degrees;

  // verify
  std::string verifier;
  double p = 0.25;
  double q_est = 0.25;
  double delta = 0.1;
  std::size_t codes = 100;
  std::size_t samples = 200;
};

double r12(double x) { return round_sig(x, 12); }

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + cfg.out);
  os << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_params(const RunConfig& cfg) {
  if (cfg.q < 2) throw UsageError("--q must be >= 2");
  if (!(cfg.tau_step > 0 && cfg.tau_step < 1)) throw UsageError("--tau-step must lie in (0, 1)");
  std::vector<double> rates;
  if (cfg.rate) {
    if (!(*cfg.rate > 0 && *cfg.rate < 1)) throw UsageError("--rate must lie in (0, 1)");
    rates = {*cfg.rate};
  } else {
    if (!(cfg.rate_step > 0 && cfg.rate_step < 1)) throw UsageError("--rate-step must lie in (0, 1)");
    rates = analytic::grid(cfg.rate_step, 1.0 - cfg.rate_step / 2, cfg.rate_step);
  }
  const auto taus = analytic::grid(0.0, (cfg.q - 1.0) / cfg.q, cfg.tau_step);
  const auto scan = analytic::usefulness_scan(cfg.q, rates, taus);
  emit(cfg, cfg.fig2 ? analytic::fig2_csv(scan) : analytic::fig1_csv(scan));
  return kExitOk;
}

int cmd_kravchuk(const RunConfig& cfg) {
  if (cfg.q < 2 || cfg.n < 1) throw UsageError("kravchuk needs q >= 2 and n >= 1");
  std::vector<std::size_t> degrees = cfg.degrees;
  if (degrees.empty())
    for (std::size_t t = 1; t <= cfg.n / cfg.q; ++t) degrees.push_back(t);
  const KrawtchoukContext kc(cfg.q, cfg.n);
  for (std::size_t t : degrees)
    if (t < 1 || static_cast<double>(t) > cfg.n * (cfg.q - 1.0) / cfg.q)
      throw UsageError("degree " + std::to_string(t) + " outside [1, n(q-1)/q]");
  emit(cfg, kc.report_csv(degrees));
  return kExitOk;
}

reduction::ReductionParams to_params(const RunConfig& cfg) {
  reduction::ReductionParams p;
  p.q = cfg.q;
  p.n = cfg.n;
  p.k = cfg.k;
  p.t = cfg.t;
  p.l = cfg.l;
  p.u = cfg.u;
  p.decoder = cfg.decoder;
  p.shots = cfg.shots;
  p.seed = cfg.seed;
  p.budget = cfg.budget;
  p.delta = cfg.delta;
  p.amplify = !cfg.no_amplify;
  try {
    p.mode = reduction::parse_mode(cfg.mode);
    p.q_est_mode = reduction::parse_q_est_mode(cfg.q_est_mode);
    parse_decoder(cfg.decoder, cfg.t);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (p.k > p.n || p.t > p.n || p.n == 0) throw UsageError("need 0 <= k <= n, t <= n, n >= 1");
  (void)PrimeField(p.q);
  return p;
}

std::optional<LinearCode> fixed_code(const RunConfig& cfg) {
  if (cfg.preset.empty()) return std::nullopt;
  return reduction::preset(cfg.preset).code;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto params = to_params(cfg);
  const auto fixed = fixed_code(cfg);
  const auto tr = fixed ? reduction::run_pipeline(params, *fixed) : reduction::run_pipeline(params);
  std::cerr << "Z = " << format_sig(tr.analysis.z, 12) << ", epsilon_G = " << format_sig(tr.analysis.epsilon_g, 12)
            << ", D_tr = " << format_sig(tr.analysis.d_tr, 12) << " (bound " << format_sig(tr.analysis.d_tr_bound, 12)
            << "), u = " << tr.u << " (" << tr.u_source << "), success rate = " << format_sig(tr.success_rate(), 12)
            << " over " << tr.samples.size() << " shots, exact success = " << format_sig(tr.success_probability, 12)
            << '\n';
  if (!tr.plan.warning.empty()) std::cerr << "warning: " << tr.plan.warning << '\n';
  emit(cfg, dump(tr.to_json()));
  return kExitOk;
}

json verify_one(const std::string& name, const RunConfig& cfg) {
  json rep;
  bool passed = false;
  if (name == "qft-radial") {
    const auto c = quantum::check_sphere_qft(cfg.q, cfg.n);
    passed = c.max_profile_deviation <= 1e-10 && c.max_radial_spread <= 1e-10 && c.max_norm_error <= 1e-9;
    rep = {{"q", cfg.q}, {"n", cfg.n}, {"states", c.states}, {"max_profile_deviation", r12(c.max_profile_deviation)},
           {"max_radial_spread", r12(c.max_radial_spread)}, {"max_norm_error", r12(c.max_norm_error)}};
  } else if (name == "lemma-measure") {
    const auto params = to_params(cfg);
    const auto dist = quantum::RadialErrorDistribution::sphere(params.q, params.n, params.t);
    const auto fixed = fixed_code(cfg);
    double worst = 0.0;
    std::size_t count = 0;
    const std::size_t todo = fixed ? 1 : cfg.codes;
    for (std::size_t i = 0; i < todo; ++i) {
      CounterRng rng(cfg.seed, 4000 + i);
      const LinearCode code = fixed ? *fixed : sample_code_G_model(params.q, params.n, params.k, rng).code;
      const auto r = reduction::verify_lemma_measure(code, dist, params.coin_bits(), params.budget);
      worst = std::max(worst, r.max_deviation);
      ++count;
    }
    passed = worst <= 1e-8;
    rep = {{"codes", count}, {"max_deviation", r12(worst)}, {"tolerance", 1e-8}};
  } else if (name == "amplify") {
    if (!(cfg.p >= 0 && cfg.p <= 1) || !(cfg.q_est > 0 && cfg.q_est < 1)) throw UsageError("need p in [0,1], q-est in (0,1)");
    const auto builder = quantum::synthetic_toy(cfg.p);
    const auto res = quantum::amplify(builder, [](std::uint64_t i) { return i == 1; }, cfg.q_est);
    const double theta = std::asin(std::sqrt(res.plan.alpha * cfg.p));
    const double spread = (2.0 * res.plan.iterations + 1.0) * (theta - res.plan.rho);
    const double floor = 1.0 - spread * spread;
    passed = res.good_probability >= floor - 1e-9;
    rep = {{"p", r12(cfg.p)}, {"q_est", r12(cfg.q_est)}, {"alpha", r12(res.plan.alpha)},
           {"iterations", res.plan.iterations}, {"success", r12(res.good_probability)}, {"lower_bound", r12(floor)}};
  } else if (name == "theorem-main") {
    const auto params = to_params(cfg);
    const auto r = reduction::verify_theorem_main(params, cfg.codes, fixed_code(cfg));
    passed = r.passed;
    rep = r.to_json();
  } else if (name == "step1") {
    const auto r = reduction::verify_step1_bound(to_params(cfg), cfg.samples);
    passed = r.passed;
    rep = r.to_json();
  } else if (name == "nperp") {
    const std::size_t u = cfg.u.value_or(cfg.n / 2);
    const auto r = reduction::verify_nperp(cfg.q, cfg.n, cfg.k, u, cfg.samples, cfg.seed, cfg.budget);
    passed = r.passed;
    rep = r.to_json();
  } else if (name == "gv-lemma") {
    const auto r = reduction::verify_gv_lemma(cfg.q, cfg.rate.value_or(0.5), cfg.delta);
    passed = r.passed;
    rep = r.to_json();
  } else if (name == "krawtchouk") {
    const auto r = run_krawtchouk_suite(cfg.q, cfg.n);
    passed = r.passed();
    rep = {{"q", r.q}, {"n", r.n}, {"recurrence_exact", r.recurrence_exact},
           {"orthogonality_exact", r.orthogonality_exact}, {"root_counts_ok", r.root_counts_ok},
           {"spacing_ok", r.spacing_ok}, {"mass_ok", r.mass_ok}, {"min_gap", r12(r.min_gap)},
           {"max_gap", r12(r.max_gap)}, {"min_mass_ratio", r12(r.min_mass_ratio)}};
  } else if (name == "obstruction") {
    const double rate = cfg.rate.value_or(0.5);
    const auto scan = analytic::bernoulli_obstruction_scan(cfg.q, rate, cfg.tau_step);
    double worst = 0.0;
    for (std::size_t n = 1; n <= std::min<std::size_t>(cfg.n, 8); ++n)
      for (double p : {0.0, 0.05, 0.11, 0.25, (cfg.q - 1.0) / cfg.q})
        worst = std::max(worst, quantum::hellinger_identity_gap(quantum::RadialErrorDistribution::bernoulli(cfg.q, n, p)));
    passed = scan.feasible == 0 && worst <= 1e-10;
    rep = {{"q", cfg.q}, {"rate", r12(rate)}, {"grid_points", scan.grid_points}, {"feasible", scan.feasible},
           {"meets_i", scan.meets_i}, {"meets_ii", scan.meets_ii}, {"meets_iii", scan.meets_iii},
           {"hellinger_max_gap", r12(worst)}};
  } else {
    throw UsageError("unknown verifier '" + name + "'");
  }
  return {{"name", name}, {"passed", passed}, {"report", rep}};
}

const std::vector<std::string> kVerifiers = {"qft-radial", "lemma-measure", "amplify", "theorem-main", "step1",
                                             "nperp", "gv-lemma", "krawtchouk", "obstruction"};

int cmd_verify(const RunConfig& cfg) {
  json out;
  out["schema_version"] = 1;
  out["kind"] = "verify";
  out["results"] = json::array();
  bool all_ok = true;
  if (cfg.verifier == "all") {
    for (const auto& name : kVerifiers) {
      RunConfig c = cfg;
      if (name == "nperp") {
        c.n = 14;
        c.k = 4;
        c.u.reset();
      } else if (name == "krawtchouk") {
        c.n = 30;
      } else if (name == "qft-radial") {
        c.n = 6;
      } else if (name == "obstruction") {
        c.n = 8;
      }
      json r = verify_one(name, c);
      all_ok = all_ok && r["passed"].get<bool>();
      out["results"].push_back(std::move(r));
    }
  } else {
    json r = verify_one(cfg.verifier, cfg);
    all_ok = r["passed"].get<bool>();
    out["results"].push_back(std::move(r));
  }
  out["passed"] = all_ok;
  emit(cfg, dump(out));
  return all_ok ? kExitOk : kExitFail;
}

void apply_preset(RunConfig& cfg, const CLI::App& sub) {
  if (cfg.preset.empty()) return;
  reduction::Preset p;
  try {
    p = reduction::preset(cfg.preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (p.code && (sub.count("--q") || sub.count("--n") || sub.count("--k")))
    throw UsageError("preset " + p.name + " fixes q, n and k");
  if (!sub.count("--q")) cfg.q = p.q;
  if (!sub.count("--n")) cfg.n = p.n;
  if (!sub.count("--k")) cfg.k = p.k;
  if (!sub.count("--t")) cfg.t = p.t;
}

void add_run_options(CLI::App* s, RunConfig& cfg) {
  s->add_option("--q", cfg.q, "field order (prime)");
  s->add_option("--n", cfg.n, "code length");
  s->add_option("--k", cfg.k, "code dimension");
  s->add_option("--t", cfg.t, "error weight");
  s->add_option("--u", cfg.u, "target dual weight");
  s->add_option("--l", cfg.l, "coin bits");
  s->add_option("--decoder", cfg.decoder, "exhaustive | unreliable:EPS | constant");
  s->add_option("--shots", cfg.shots, "measurement repetitions");
  s->add_option("--seed", cfg.seed, "RNG seed");
  s->add_option("--mode", cfg.mode, "strict | exploratory");
  s->add_option("--budget", cfg.budget, "enumeration/statevector budget");
  s->add_option("--out", cfg.out, "output path (default stdout)");
  s->add_option("--preset", cfg.preset, "repetition3 | small-random | ternary");
  s->add_option("--q-est-mode", cfg.q_est_mode, "exact | analytic");
  s->add_option("--delta", cfg.delta, "slack in t <= (1-delta) d_GV");
  s->add_flag("--no-amplify", cfg.no_amplify, "skip amplitude amplification");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and verifiers for the quantum reduction from short dual codewords to decoding"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* params = app.add_subcommand("params", "usefulness scan CSV (tau_perp against the dual hard band)");
  params->add_option("--q", cfg.q, "alphabet size");
  params->add_option("--rate", cfg.rate, "single rate R");
  params->add_option("--rate-step", cfg.rate_step, "rate grid step");
  params->add_option("--tau-step", cfg.tau_step, "tau grid step");
  params->add_flag("--fig2", cfg.fig2, "per-rate summary at tau = delta_GV");
  params->add_option("--out", cfg.out, "output path (default stdout)");

  auto* krav = app.add_subcommand("kravchuk", "Krawtchouk roots, gaps and bracket masses CSV");
  krav->add_option("--q", cfg.q, "alphabet size");
  krav->add_option("--n", cfg.n, "length");
  krav->add_option("--t", cfg.degrees, "degrees (comma separated)")->delimiter(',');
  krav->add_option("--out", cfg.out, "output path (default stdout)");

  auto* sim = app.add_subcommand("simulate", "run the reduction pipeline and print a JSON transcript");
  add_run_options(sim, cfg);

  auto* ver = app.add_subcommand("verify", "run a named verifier (or all)");
  ver->add_option("name", cfg.verifier, "verifier name")->required();
  add_run_options(ver, cfg);
  ver->add_option("--p", cfg.p, "toy success probability (amplify)");
  ver->add_option("--q-est", cfg.q_est, "success estimate (amplify)");
  ver->add_option("--codes", cfg.codes, "number of codes");
  ver->add_option("--samples", cfg.samples, "number of sampled codes");
  ver->add_option("--rate", cfg.rate, "rate R");
  ver->add_option("--tau-step", cfg.tau_step, "tau grid step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (const char* env = std::getenv("REDUCE_BUDGET")) {
      try {
        std::size_t pos = 0;
        cfg.budget = std::stoull(env, &pos);
        if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw UsageError(std::string("REDUCE_BUDGET is not an unsigned integer: ") + env);
      }
    }
    if (params->parsed()) return cmd_params(cfg);
    if (krav->parsed()) return cmd_kravchuk(cfg);
    if (sim->parsed()) {
      apply_preset(cfg, *sim);
      return cmd_simulate(cfg);
    }
    if (ver->parsed()) {
      apply_preset(cfg, *ver);
      return cmd_verify(cfg);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const reduction::AssumptionViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: budget exceeded on " << e.dimension() << ": needs " << e.required() << ", budget "
              << e.budget() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
