#include "qred/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qred/analytic.hpp"
#include "qred/exact.hpp"
#include "qred/kravchuk.hpp"

namespace qred::reduction {

using quantum::Amp;
using quantum::RadialErrorDistribution;
using quantum::Register;
using quantum::StateVector;

namespace {

double r12(double x) { return round_sig(x, 12); }

nlohmann::json r12(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(r12(x));
  return a;
}

/// Digit table for all q^n vectors, so index arithmetic stays cheap.
class VectorIndex {
 public:
  VectorIndex(std::uint32_t q, std::size_t n) : q_(q), n_(n), size_(checked_pow(q, n)), digits_(size_ * n) {
    for (std::uint64_t i = 0; i < size_; ++i) {
      std::uint64_t v = i;
      for (std::size_t j = n; j-- > 0;) {
        digits_[i * n + j] = static_cast<std::uint32_t>(v % q);
        v /= q;
      }
    }
  }

  std::uint64_t size() const { return size_; }

  std::uint64_t add(std::uint64_t a, std::uint64_t b, bool subtract = false) const {
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      const std::uint32_t x = digits_[a * n_ + j], y = digits_[b * n_ + j];
      r = r * q_ + (subtract ? (x + q_ - y) % q_ : (x + y) % q_);
    }
    return r;
  }

 private:
  std::uint32_t q_;
  std::size_t n_;
  std::uint64_t size_;
  std::vector<std::uint32_t> digits_;
};

void check_state_budget(std::uint32_t q, std::size_t n, std::size_t l, std::uint64_t extra_factor, std::uint64_t budget) {
  const std::uint64_t need = saturating_mul(saturating_mul(saturating_pow(q, 2 * n), saturating_pow(2, l)), extra_factor);
  if (need > budget) throw BudgetExceeded("statevector q^(2n)*2^l", need, budget);
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "strict") return Mode::Strict;
  if (s == "exploratory") return Mode::Exploratory;
  throw std::invalid_argument("mode must be strict or exploratory, got '" + s + "'");
}

std::string to_string(Mode m) { return m == Mode::Strict ? "strict" : "exploratory"; }

QEstMode parse_q_est_mode(const std::string& s) {
  if (s == "exact") return QEstMode::Exact;
  if (s == "analytic") return QEstMode::Analytic;
  throw std::invalid_argument("q-est mode must be exact or analytic, got '" + s + "'");
}

std::string to_string(QEstMode m) { return m == QEstMode::Exact ? "exact" : "analytic"; }

std::size_t ReductionParams::coin_bits() const {
  if (l) return *l;
  return parse_decoder(decoder, t).min_coin_bits();
}

AssumptionReport assumption_report(std::uint32_t q, std::size_t n, std::size_t k, std::size_t t, std::size_t u) {
  if (u < 1 || u > n || t > n) throw std::invalid_argument("assumption report needs 1 <= u <= n and t <= n");
  const KrawtchoukContext kc(q, n);
  AssumptionReport r;
  r.u = u;
  const BigInt st = sphere_size(q, n, t), su = sphere_size(q, n, u);
  const Rational ratio1(st, big_pow(q, n - k)), ratio2(big_pow(q, k), su);
  r.exponent1 = log_base(ratio1, q);
  r.exponent2 = log_base(ratio2, q);
  r.mass = to_double(kc.normalized_mass(t, u));
  r.mass_threshold = 1.0 / ((q - 1.0) * std::pow(static_cast<double>(n), 5));
  r.exponent1_negative = r.exponent1 < 0;
  r.exponent2_negative = r.exponent2 < 0;
  r.mass_ok = r.mass >= r.mass_threshold;
  r.delta = std::pow(to_double(ratio2), 0.25) + std::sqrt(to_double(ratio1));
  return r;
}

AssumptionReport select_u(std::uint32_t q, std::size_t n, std::size_t k, std::size_t t, Mode mode) {
  const KrawtchoukContext kc(q, n);
  const MassResult m = kc.mass_between_roots(t, 0);
  AssumptionReport r = assumption_report(q, n, k, t, m.u);
  if (mode == Mode::Strict && !r.holds()) {
    throw AssumptionViolation("u = " + std::to_string(m.u) + " fails the assumption: exponent1 = " +
                              format_sig(r.exponent1, 6) + ", exponent2 = " + format_sig(r.exponent2, 6) +
                              ", mass = " + format_sig(r.mass, 6));
  }
  return r;
}

void check_strict_preconditions(const ReductionParams& p) {
  if (p.mode != Mode::Strict) return;
  if (p.t < 1 || p.t > p.n / p.q)
    throw AssumptionViolation("strict mode needs 1 <= t <= floor(n/q) = " + std::to_string(p.n / p.q));
  const double cap = (1.0 - p.delta) * static_cast<double>(gv_distance(p.q, p.n, p.k));
  if (static_cast<double>(p.t) > cap)
    throw AssumptionViolation("strict mode needs t <= (1-delta) d_GV = " + format_sig(cap, 6));
}

quantum::Shape pipeline_shape(std::uint32_t q, std::size_t n, std::size_t l) {
  return {Register{q, n}, Register{q, n}, Register{2, l}};
}

IdealState build_ideal_state(const LinearCode& code, const RadialErrorDistribution& dist, std::size_t l,
                             std::uint64_t budget) {
  const std::uint32_t q = code.q();
  const std::size_t n = code.n();
  check_state_budget(q, n, l, 1, budget);
  const VectorIndex vi(q, n);
  const Register reg{q, n};
  const std::uint64_t coins = std::uint64_t{1} << l;

  std::vector<std::uint64_t> words;
  for (const auto& c : code.codewords(budget)) words.push_back(index_of(c));
  std::vector<double> column(vi.size(), 0.0);  // sum_c pi_{y-c}
  for (std::uint64_t y = 0; y < vi.size(); ++y)
    for (std::uint64_t c : words) column[y] += dist.f(quantum::digit_weight(vi.add(y, c, true), reg));

  double z = 0.0;
  double x = 0.0;
  if (dist.kind() == quantum::ProfileKind::Sphere) {
    // Sum_c pi_{y-c} = #{c : |y-c| = t} / sqrt(S_t), so Z is an exact rational.
    BigInt pairs = 0;
    for (std::uint64_t y = 0; y < vi.size(); ++y) {
      std::uint64_t hits = 0;
      for (std::uint64_t c : words) hits += quantum::digit_weight(vi.add(y, c, true), reg) == dist.t();
      pairs += BigInt(hits) * hits;
    }
    const Rational zr(pairs * coins, sphere_size(q, n, dist.t()));
    z = to_double(zr);
    x = to_double(zr / (BigInt(coins) * big_pow(q, code.k())) - 1);
  } else {
    for (double a : column) z += a * a;
    z *= static_cast<double>(coins);
    x = z / (static_cast<double>(coins) * std::pow(q, static_cast<double>(code.k()))) - 1.0;
  }

  StateVector s(pipeline_shape(q, n, l), std::vector<Amp>(vi.size() * vi.size() * coins, Amp(0.0)));
  const double inv = 1.0 / std::sqrt(z);
  for (std::uint64_t y = 0; y < vi.size(); ++y)
    for (std::uint64_t w = 0; w < coins; ++w) s[s.compose({0, y, w})] = column[y] * inv;
  IdealState out{std::move(s), z, x};
  out.state.check_normalized();
  return out;
}

namespace {

StateVector initial_state_for(const LinearCode& code, const RadialErrorDistribution& dist, std::size_t l,
                              std::uint64_t budget) {
  const std::uint32_t q = code.q();
  const std::size_t n = code.n();
  const Register reg{q, n};
  const std::uint64_t qn = reg.size(), coins = std::uint64_t{1} << l;
  StateVector s(pipeline_shape(q, n, l), std::vector<Amp>(qn * qn * coins, Amp(0.0)));
  const double scale = 1.0 / std::sqrt(static_cast<double>(coins) * std::pow(q, static_cast<double>(code.k())));
  const auto words = code.codewords(budget);
  for (std::uint64_t e = 0; e < qn; ++e) {
    const double amp = dist.f(quantum::digit_weight(e, reg)) * scale;
    if (amp == 0.0) continue;
    for (const auto& c : words)
      for (std::uint64_t w = 0; w < coins; ++w) s[s.compose({e, index_of(c), w})] = amp;
  }
  s.check_normalized();
  return s;
}

std::vector<bool> dual_membership(const LinearCode& code) {
  const std::uint64_t qn = checked_pow(code.q(), code.n());
  std::vector<bool> in(qn);
  for (std::uint64_t y = 0; y < qn; ++y) in[y] = code.generator().apply(vector_from_index(code.field(), code.n(), y)).is_zero();
  return in;
}

bool verify_dual(const LinearCode& code, const FqVector& c) {
  for (std::size_t i = 0; i < code.k(); ++i)
    if (inner_product(code.generator().row(i), c).value != 0) return false;
  return true;
}

}  // namespace

PipelineOps::PipelineOps(const LinearCode& code, const BoundDecoder& decoder, std::size_t l)
    : code_(code), l_(l), shape_(pipeline_shape(code.q(), code.n(), l)) {
  const VectorIndex vi(code.q(), code.n());
  qn_ = vi.size();
  coins_ = std::uint64_t{1} << l;
  const std::uint64_t total = qn_ * qn_ * coins_;
  add_map_.resize(total);
  sub_map_.resize(total);
  dec_map_.resize(total);
  undec_map_.resize(total);

  std::vector<std::uint64_t> estimate(qn_ * coins_);
  for (std::uint64_t y = 0; y < qn_; ++y) {
    const FqVector received = vector_from_index(code.field(), code.n(), y);
    for (std::uint64_t w = 0; w < coins_; ++w) estimate[y * coins_ + w] = index_of(decoder.decode(received, w));
  }
  for (std::uint64_t e = 0; e < qn_; ++e)
    for (std::uint64_t y = 0; y < qn_; ++y)
      for (std::uint64_t w = 0; w < coins_; ++w) {
        const std::uint64_t i = (e * qn_ + y) * coins_ + w;
        add_map_[i] = (e * qn_ + vi.add(y, e)) * coins_ + w;
        sub_map_[i] = (e * qn_ + vi.add(y, e, true)) * coins_ + w;
        const std::uint64_t a = estimate[y * coins_ + w];
        dec_map_[i] = (vi.add(e, a, true) * qn_ + y) * coins_ + w;
        undec_map_[i] = (vi.add(e, a) * qn_ + y) * coins_ + w;
      }
}

StateVector PipelineOps::initial_state(const RadialErrorDistribution& dist, std::uint64_t budget) const {
  return initial_state_for(code_, dist, l_, budget);
}

void PipelineOps::permute(StateVector& s, const std::vector<std::uint64_t>& map) const {
  if (s.shape() != shape_) throw quantum::ShapeMismatch("state does not match the pipeline registers");
  std::vector<Amp> out(s.size());
  for (std::uint64_t i = 0; i < s.size(); ++i) out[map[i]] = s[i];
  s.amplitudes() = std::move(out);
}

void PipelineOps::add_error(StateVector& s) const { permute(s, add_map_); }
void PipelineOps::subtract_error(StateVector& s) const { permute(s, sub_map_); }
void PipelineOps::apply_decoder(StateVector& s) const { permute(s, dec_map_); }
void PipelineOps::undo_decoder(StateVector& s) const { permute(s, undec_map_); }

void PipelineOps::forward(StateVector& s) const {
  add_error(s);
  apply_decoder(s);
  quantum::qft_register(s, 1);
}

void PipelineOps::inverse(StateVector& s) const {
  quantum::inverse_qft_register(s, 1);
  undo_decoder(s);
  subtract_error(s);
}


CodeAnalysis analyze_code(const LinearCode& code, const RadialErrorDistribution& dist, const BoundDecoder& decoder,
                          std::size_t l, std::uint64_t budget) {
  check_state_budget(code.q(), code.n(), l, 1, budget);
  const PipelineOps ops(code, decoder, l);
  CodeAnalysis a;
  StateVector psi_a = ops.initial_state(dist, budget);
  ops.add_error(psi_a);
  ops.apply_decoder(psi_a);
  IdealState ideal = build_ideal_state(code, dist, l, budget);
  a.z = ideal.z;
  a.x = ideal.x;
  a.d_tr = quantum::trace_distance(psi_a, ideal.state);
  quantum::qft_register(psi_a, 1);
  quantum::qft_register(ideal.state, 1);
  psi_a.check_normalized();
  a.d_tr_qft = quantum::trace_distance(psi_a, ideal.state);
  a.actual_weights = quantum::measure_weight_distribution(psi_a, 1);
  a.ideal_weights = quantum::measure_weight_distribution(ideal.state, 1);
  a.dual_distribution = weight_distribution(code.dual(), budget).counts;

  const double coins = std::ldexp(1.0, static_cast<int>(l));
  const double qk = std::pow(code.q(), static_cast<double>(code.k()));
  const auto fperp = dist.dual_profile();
  a.lemma_weights.resize(code.n() + 1);
  for (std::size_t u = 0; u <= code.n(); ++u)
    a.lemma_weights[u] = coins * qk * qk * static_cast<double>(a.dual_distribution[u]) * fperp[u] * fperp[u] / a.z;

  a.epsilon_g = empirical_epsilon(decoder, budget).estimate;
  a.p_t = dist.p_t();
  a.d_tr_bound = std::sqrt(std::max(0.0, 1.0 - coins * qk * a.p_t * a.p_t * a.epsilon_g * a.epsilon_g / a.z));
  const double ov = dist.overlap_with_ones();
  a.overlap_sq = ov * ov;
  return a;
}

double PipelineTranscript::success_rate() const {
  return samples.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(samples.size());
}

LinearCode default_code(const ReductionParams& params) {
  CounterRng rng(params.seed, 0);
  return sample_code_G_model(params.q, params.n, params.k, rng).code;
}

PipelineTranscript run_pipeline(const ReductionParams& params) { return run_pipeline(params, default_code(params)); }

PipelineTranscript run_pipeline(const ReductionParams& params, const LinearCode& code) {
  if (code.q() != params.q || code.n() != params.n || code.k() != params.k)
    throw std::invalid_argument("code parameters disagree with the run parameters");
  if (params.t > params.n) throw std::invalid_argument("t exceeds n");
  check_strict_preconditions(params);
  const std::size_t l = params.coin_bits();
  check_state_budget(params.q, params.n, l, params.amplify ? 2 : 1, params.budget);

  PipelineTranscript tr;
  tr.params = params;
  tr.code = code_to_json(code);
  tr.l = l;
  const DecoderOracle oracle = parse_decoder(params.decoder, params.t);
  tr.decoder = oracle.describe();
  const BoundDecoder decoder(oracle, code, l, params.budget);
  const auto dist = RadialErrorDistribution::sphere(params.q, params.n, params.t);
  tr.analysis = analyze_code(code, dist, decoder, l, params.budget);
  const auto& ideal = tr.analysis.ideal_weights;

  if (params.u) {
    if (*params.u < 1 || *params.u > params.n) throw std::invalid_argument("u must lie in [1, n]");
    tr.u = *params.u;
    tr.u_source = "override";
  } else if (params.mode == Mode::Strict) {
    tr.u = select_u(params.q, params.n, params.k, params.t, Mode::Strict).u;
    tr.u_source = "roots";
  } else {
    tr.u = 1;
    for (std::size_t u = 2; u <= params.n; ++u)
      if (ideal[u] > ideal[tr.u]) tr.u = u;
    tr.u_source = "ideal-argmax";
  }
  tr.assumption = assumption_report(params.q, params.n, params.k, params.t, tr.u);
  tr.q_est_exact = ideal[tr.u];
  tr.q_est_analytic = tr.assumption.mass;
  tr.q_est = params.q_est_mode == QEstMode::Exact ? tr.q_est_exact : tr.q_est_analytic;

  if (params.k > 0 && params.k < params.n) {
    const auto pt = analytic::evaluate_point(params.q, static_cast<double>(params.k) / params.n,
                                             std::min(static_cast<double>(params.t) / params.n, (params.q - 1.0) / params.q));
    tr.band_low = pt.delta_gv_dual;
    tr.band_high = pt.omega_easy_dual;
  }

  const PipelineOps ops(code, decoder, l);
  const StateVector psi0 = ops.initial_state(dist, params.budget);
  const Register reg{params.q, params.n};
  const std::uint64_t coins = std::uint64_t{1} << l;
  const std::size_t target = tr.u;
  auto good = [&](std::uint64_t i) { return quantum::digit_weight((i / coins) % reg.size(), reg) == target; };

  std::optional<StateVector> final_state;
  if (params.amplify && tr.q_est > 0.0 && tr.q_est < 1.0) {
    quantum::UnitaryBuilder builder{psi0, [&](StateVector& s) { ops.forward(s); }, [&](StateVector& s) { ops.inverse(s); }};
    auto res = quantum::amplify(builder, good, tr.q_est);
    tr.plan = res.plan;
    tr.amplified = res.plan.feasible;
    tr.ideal_amplified_success = res.plan.predicted_success(tr.q_est_exact);
    final_state = std::move(res.state);
  } else {
    StateVector s = psi0;
    ops.forward(s);
    tr.plan.q_est = tr.q_est;
    tr.plan.iterations = 0;
    tr.plan.feasible = tr.q_est > 0.0;
    if (params.amplify && tr.q_est <= 0.0) tr.plan.warning = "q_est is zero; amplification skipped";
    tr.ideal_amplified_success = tr.q_est_exact;
    final_state = std::move(s);
  }
  const StateVector& fs = *final_state;
  fs.check_normalized();
  tr.final_weights = quantum::measure_weight_distribution(fs, 1);

  const auto in_dual = dual_membership(code);
  const bool has_ancilla = fs.shape().size() == 4;
  std::vector<double> cdf(fs.size());
  double acc = 0.0;
  for (std::uint64_t i = 0; i < fs.size(); ++i) {
    const double p = std::norm(fs[i]);
    acc += p;
    cdf[i] = acc;
    const std::uint64_t y = fs.register_value(i, 1);
    if (in_dual[y] && quantum::digit_weight(y, reg) == target) tr.success_probability += p;
  }

  const double n_d = static_cast<double>(params.n);
  for (std::uint64_t s = 0; s < params.shots; ++s) {
    CounterRng rng(params.seed, (std::uint64_t{1} << 32) + s);
    const double r = rng.uniform() * acc;
    const std::uint64_t i = std::min<std::uint64_t>(
        static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin()), fs.size() - 1);
    Shot shot;
    shot.index = s;
    shot.e = fs.register_value(i, 0);
    const std::uint64_t y = fs.register_value(i, 1);
    const FqVector c = vector_from_index(code.field(), params.n, y);
    shot.c_perp = c.to_string();
    shot.w = fs.register_value(i, 2);
    shot.ancilla = has_ancilla ? static_cast<int>(fs.register_value(i, 3)) : -1;
    shot.weight = c.hamming_weight();
    shot.in_dual = verify_dual(code, c);
    shot.success = shot.in_dual && shot.weight == target;
    const double wt = static_cast<double>(shot.weight);
    shot.relaxed = shot.in_dual && shot.weight > 0 && wt >= tr.band_low * n_d && wt < tr.band_high * n_d;
    tr.in_dual += shot.in_dual;
    tr.successes += shot.success;
    tr.relaxed_successes += shot.relaxed;
    tr.samples.push_back(std::move(shot));
  }
  return tr;
}

nlohmann::json PipelineTranscript::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["kind"] = "transcript";
  j["params"] = {{"q", params.q},
                 {"n", params.n},
                 {"k", params.k},
                 {"t", params.t},
                 {"l", l},
                 {"decoder", params.decoder},
                 {"shots", params.shots},
                 {"seed", params.seed},
                 {"mode", to_string(params.mode)},
                 {"delta", r12(params.delta)},
                 {"budget", params.budget},
                 {"q_est_mode", to_string(params.q_est_mode)},
                 {"amplify", params.amplify}};
  j["code"] = code;
  j["decoder"] = decoder;
  j["u"] = u;
  j["u_source"] = u_source;
  j["Z"] = r12(analysis.z);
  j["X"] = r12(analysis.x);
  j["epsilon_G"] = r12(analysis.epsilon_g);
  j["p_t"] = r12(analysis.p_t);
  j["trace_distance"] = {{"after_decoder", r12(analysis.d_tr)},
                         {"after_qft", r12(analysis.d_tr_qft)},
                         {"lemma_bound", r12(analysis.d_tr_bound)}};
  j["assumption"] = {{"u", assumption.u},
                     {"exponent1", r12(assumption.exponent1)},
                     {"exponent2", r12(assumption.exponent2)},
                     {"mass", r12(assumption.mass)},
                     {"mass_threshold", r12(assumption.mass_threshold)},
                     {"delta", r12(assumption.delta)},
                     {"holds", assumption.holds()}};
  j["q_est"] = {{"mode", to_string(params.q_est_mode)},
                {"value", r12(q_est)},
                {"exact", r12(q_est_exact)},
                {"analytic", r12(q_est_analytic)}};
  j["amplification"] = {{"applied", amplified},
                        {"iterations", plan.iterations},
                        {"alpha", r12(plan.alpha)},
                        {"rho", r12(plan.rho)},
                        {"warning", plan.warning}};
  j["weights"] = {{"ideal", r12(analysis.ideal_weights)},
                  {"lemma", r12(analysis.lemma_weights)},
                  {"before_amplification", r12(analysis.actual_weights)},
                  {"final", r12(final_weights)}};
  j["dual_distribution"] = analysis.dual_distribution;
  j["success_probability"] = r12(success_probability);
  j["ideal_amplified_success"] = r12(ideal_amplified_success);
  j["band"] = {{"low", r12(band_low)}, {"high", r12(band_high)}};
  std::vector<std::uint64_t> histogram(params.n + 1, 0);
  for (const auto& s : samples) ++histogram[s.weight];
  j["counters"] = {{"shots", samples.size()},
                   {"successes", successes},
                   {"relaxed_successes", relaxed_successes},
                   {"in_dual", in_dual},
                   {"success_rate", r12(success_rate())},
                   {"weight_histogram", histogram}};
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : samples)
    arr.push_back({{"shot", s.index},
                   {"e", s.e},
                   {"c_perp", s.c_perp},
                   {"w", s.w},
                   {"ancilla", s.ancilla},
                   {"weight", s.weight},
                   {"in_dual", s.in_dual},
                   {"success", s.success},
                   {"relaxed", s.relaxed}});
  j["samples"] = std::move(arr);
  return j;
}

Preset preset(const std::string& name) {
  if (name == "repetition3") {
    const PrimeField f(2);
    return Preset{name, 2, 3, 1, 1, LinearCode::from_generator(FqMatrix(f, 1, 3, {1, 1, 1}))};
  }
  if (name == "small-random") return Preset{name, 2, 6, 3, 1, std::nullopt};
  if (name == "ternary") return Preset{name, 3, 4, 2, 1, std::nullopt};
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"repetition3", "small-random", "ternary"}; }

nlohmann::json LemmaMeasureReport::to_json() const {
  return {{"codes", codes}, {"max_deviation", r12(max_deviation)}, {"tolerance", 1e-8}, {"passed", passed}};
}

LemmaMeasureReport verify_lemma_measure(const LinearCode& code, const RadialErrorDistribution& dist, std::size_t l,
                                        std::uint64_t budget) {
  IdealState ideal = build_ideal_state(code, dist, l, budget);
  quantum::qft_register(ideal.state, 1);
  const auto measured = quantum::measure_weight_distribution(ideal.state, 1);
  const auto dual = weight_distribution(code.dual(), budget).counts;
  const auto fperp = dist.dual_profile();
  const double coins = std::ldexp(1.0, static_cast<int>(l));
  const double qk = std::pow(code.q(), static_cast<double>(code.k()));
  LemmaMeasureReport r;
  r.codes = 1;
  for (std::size_t u = 0; u <= code.n(); ++u) {
    const double formula = coins * qk * qk * static_cast<double>(dual[u]) * fperp[u] * fperp[u] / ideal.z;
    r.max_deviation = std::max(r.max_deviation, std::abs(formula - measured[u]));
  }
  r.passed = r.max_deviation <= 1e-8;
  return r;
}

nlohmann::json TheoremReport::to_json() const {
  return {{"codes", codes},         {"shots", shots},         {"successes", successes},
          {"frequency", r12(frequency)}, {"epsilon", r12(epsilon)}, {"p_t", r12(p_t)},
          {"bound", r12(bound)},   {"sigma", r12(sigma)},    {"margin", r12(margin)},
          {"vacuous", vacuous},    {"passed", passed}};
}

TheoremReport verify_theorem_main(const ReductionParams& params, std::size_t codes,
                                  const std::optional<LinearCode>& fixed_code) {
  TheoremReport r;
  r.codes = codes;
  double eps_sum = 0.0, pt = 0.0;
  for (std::size_t i = 0; i < codes; ++i) {
    ReductionParams p = params;
    p.seed = params.seed * 1000003ULL + i;
    CounterRng rng(params.seed, 1000 + i);
    const LinearCode code = fixed_code ? *fixed_code : sample_code_G_model(p.q, p.n, p.k, rng).code;
    const PipelineTranscript tr = run_pipeline(p, code);
    r.shots += tr.samples.size();
    r.successes += tr.successes;
    eps_sum += tr.analysis.epsilon_g;
    pt = tr.analysis.p_t;
  }
  r.p_t = pt;
  r.epsilon = codes ? eps_sum / static_cast<double>(codes) : 0.0;
  r.frequency = r.shots ? static_cast<double>(r.successes) / static_cast<double>(r.shots) : 0.0;
  r.bound = r.p_t * r.p_t * std::pow(r.epsilon, 3) / 16.0;
  r.sigma = r.shots ? std::sqrt(r.frequency * (1 - r.frequency) / static_cast<double>(r.shots)) : 0.0;
  r.margin = r.frequency - (r.bound - 3 * r.sigma);
  r.vacuous = r.bound <= 0.0;
  r.passed = r.vacuous || (r.shots > 0 && r.margin >= 0.0);
  return r;
}

nlohmann::json SamplingReport::to_json() const {
  return {{"name", name},
          {"samples", samples},
          {"violations", violations},
          {"violation_rate", r12(violation_rate)},
          {"allowed", r12(allowed)},
          {"slack", r12(slack)},
          {"vacuous", vacuous},
          {"passed", passed},
          {"extra", extra}};
}

namespace {

void finish(SamplingReport& r) {
  r.violation_rate = r.samples ? static_cast<double>(r.violations) / static_cast<double>(r.samples) : 0.0;
  const double a = std::min(r.allowed, 1.0);
  r.slack = r.samples ? 3.0 * std::sqrt(a * (1 - a) / static_cast<double>(r.samples)) + 1.0 / static_cast<double>(r.samples) : 0.0;
  r.vacuous = r.allowed >= 1.0;
  r.passed = r.violation_rate <= r.allowed + r.slack;
}

}  // namespace

SamplingReport verify_step1_bound(const ReductionParams& params, std::size_t samples) {
  SamplingReport r;
  r.name = "step1";
  r.samples = samples;
  const std::size_t l = params.coin_bits();
  const DecoderOracle oracle = parse_decoder(params.decoder, params.t);
  const auto dist = RadialErrorDistribution::sphere(params.q, params.n, params.t);
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng(params.seed, 2000 + i);
    const LinearCode code = sample_code_G_model(params.q, params.n, params.k, rng).code;
    const BoundDecoder dec(oracle, code, l, params.budget);
    const CodeAnalysis a = analyze_code(code, dist, dec, l, params.budget);
    const double limit = std::sqrt(std::max(0.0, 1.0 - a.p_t * a.p_t * a.epsilon_g * a.epsilon_g / 2.0));
    r.violations += a.d_tr > limit + 1e-12;
    max_ratio = std::max(max_ratio, a.d_tr - limit);
    if (i == 0) r.allowed = a.overlap_sq / std::pow(params.q, static_cast<double>(params.n - params.k));
  }
  r.extra = {{"max_excess", r12(max_ratio)}};
  finish(r);
  return r;
}

SamplingReport verify_nperp(std::uint32_t q, std::size_t n, std::size_t k, std::size_t u, std::size_t samples,
                            std::uint64_t seed, std::uint64_t budget) {
  SamplingReport r;
  r.name = "nperp";
  r.samples = samples;
  const double mean = to_double(Rational(sphere_size(q, n, u), big_pow(q, k)));
  const double radius = std::pow(mean, 0.75);
  double worst = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    CounterRng rng(seed, 3000 + i);
    const LinearCode code = sample_code_G_model(q, n, k, rng).code;
    const double nu = static_cast<double>(weight_distribution(code.dual(), budget).counts.at(u));
    worst = std::max(worst, std::abs(nu - mean));
    r.violations += std::abs(nu - mean) >= radius;
  }
  r.allowed = (q - 1.0) / std::sqrt(mean);
  r.extra = {{"u", u}, {"mean", r12(mean)}, {"radius", r12(radius)}, {"max_deviation", r12(worst)}};
  finish(r);
  return r;
}

nlohmann::json GvLemmaReport::to_json() const {
  return {{"rate", r12(rate)}, {"delta", r12(delta)}, {"lengths", lengths}, {"log_ratios", r12(log_ratios)},
          {"slope", r12(slope)}, {"alpha", r12(alpha)}, {"passed", passed}};
}

GvLemmaReport verify_gv_lemma(std::uint32_t q, double rate, double delta, std::size_t n_min, std::size_t n_max) {
  GvLemmaReport r;
  r.rate = rate;
  r.delta = delta;
  r.alpha = analytic::gv_lemma_exponent(q, rate, delta);
  const double dgv = analytic::entropy_inverse(q, 1 - rate);
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto k = static_cast<std::size_t>(std::lround(rate * static_cast<double>(n)));
    const auto t = static_cast<std::size_t>(std::floor((1 - delta) * dgv * static_cast<double>(n)));
    r.lengths.push_back(n);
    r.log_ratios.push_back(log_base(Rational(sphere_size(q, n, t), big_pow(q, n - k)), q));
  }
  const double m = static_cast<double>(r.lengths.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < r.lengths.size(); ++i) {
    const double x = static_cast<double>(r.lengths[i]), y = r.log_ratios[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  r.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  r.passed = r.alpha < 0 && r.slope < 0 && r.log_ratios.back() < r.log_ratios.front();
  return r;
}

}  // namespace qred::reduction
