#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qred/codes.hpp"
#include "qred/quantum.hpp"

namespace qred::reduction {

enum class Mode { Strict, Exploratory };
enum class QEstMode { Exact, Analytic };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);
QEstMode parse_q_est_mode(const std::string& s);
std::string to_string(QEstMode m);

/// A strict-mode hypothesis does not hold.
class AssumptionViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ReductionParams {
  std::uint32_t q = 2;
  std::size_t n = 3;
  std::size_t k = 1;
  std::size_t t = 1;
  /// Coin bits; defaults to the decoder's gate bits.
  std::optional<std::size_t> l;
  std::optional<std::size_t> u;
  std::string decoder = "exhaustive";
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  Mode mode = Mode::Exploratory;
  double delta = 0.1;
  std::uint64_t budget = kDefaultBudget;
  QEstMode q_est_mode = QEstMode::Exact;
  bool amplify = true;

  std::size_t coin_bits() const;
};

struct AssumptionReport {
  std::size_t u = 0;
  double exponent1 = 0.0;  // log_q(<pi|1>^2 / q^{n-k})
  double exponent2 = 0.0;  // log_q(q^k / S_u)
  double mass = 0.0;       // S_u |f_perp(u)|^2
  double mass_threshold = 0.0;  // 1/((q-1) n^5)
  bool exponent1_negative = false;
  bool exponent2_negative = false;
  bool mass_ok = false;
  /// (q^k/S_u)^{1/4} + sqrt(<pi|1>^2/q^{n-k})
  double delta = 0.0;

  bool holds() const { return exponent1_negative && exponent2_negative && mass_ok; }
};

/// Assumption quantities for the weight-t sphere and a target weight u.
AssumptionReport assumption_report(std::uint32_t q, std::size_t n, std::size_t k, std::size_t t, std::size_t u);

/// u maximizing S_u|f_perp(u)|^2 over integers strictly between the first two roots of K_t,
/// or above x_1 when t = 1. Strict mode throws AssumptionViolation when the report fails.
AssumptionReport select_u(std::uint32_t q, std::size_t n, std::size_t k, std::size_t t, Mode mode);

/// Throws AssumptionViolation when strict-mode preconditions on t fail.
void check_strict_preconditions(const ReductionParams& p);

/// Register layout (e, y, w): two F_q^n registers and l coin bits.
quantum::Shape pipeline_shape(std::uint32_t q, std::size_t n, std::size_t l);

struct IdealState {
  quantum::StateVector state;
  double z = 0.0;
  /// Z / (2^l q^k) - 1
  double x = 0.0;
};

/// (1/sqrt Z) sum_{e,c,w} pi_e |0>|c+e>|w>.
IdealState build_ideal_state(const LinearCode& code, const quantum::RadialErrorDistribution& dist, std::size_t l,
                             std::uint64_t budget = kDefaultBudget);

/// The pre-measurement unitaries of the reduction on one code.
class PipelineOps {
 public:
  PipelineOps(const LinearCode& code, const BoundDecoder& decoder, std::size_t l);

  const quantum::Shape& shape() const { return shape_; }

  /// (1/sqrt(2^l q^k)) sum pi_e |e>|c>|w>
  quantum::StateVector initial_state(const quantum::RadialErrorDistribution& dist,
                                     std::uint64_t budget = kDefaultBudget) const;
  void add_error(quantum::StateVector& s) const;
  void subtract_error(quantum::StateVector& s) const;
  /// |e>|y>|w> -> |e - A(G,y,w)>|y>|w>
  void apply_decoder(quantum::StateVector& s) const;
  void undo_decoder(quantum::StateVector& s) const;
  /// add, decode, QFT on y
  void forward(quantum::StateVector& s) const;
  void inverse(quantum::StateVector& s) const;

 private:
  void permute(quantum::StateVector& s, const std::vector<std::uint64_t>& map) const;

  LinearCode code_;
  std::size_t l_;
  quantum::Shape shape_;
  std::uint64_t qn_ = 0, coins_ = 0;
  std::vector<std::uint64_t> add_map_, sub_map_, dec_map_, undec_map_;
};

struct Shot {
  std::uint64_t index = 0;
  std::uint64_t e = 0;
  std::string c_perp;
  std::uint64_t w = 0;
  int ancilla = -1;
  std::size_t weight = 0;
  bool in_dual = false;
  bool success = false;
  bool relaxed = false;
};

struct CodeAnalysis {
  double z = 0.0;
  double x = 0.0;
  double epsilon_g = 0.0;
  double p_t = 0.0;
  double d_tr = 0.0;        // D_tr(psi_A, psi_ideal)
  double d_tr_qft = 0.0;    // after the QFT on both
  double d_tr_bound = 0.0;  // sqrt(1 - 2^l q^k p_t^2 eps_G^2 / Z)
  std::vector<double> ideal_weights;   // psi_ideal^QFT on register y
  std::vector<double> lemma_weights;   // 2^l q^{2k} N_perp_u |f_perp(u)|^2 / Z
  std::vector<double> actual_weights;  // psi_A^QFT on register y
  std::vector<std::uint64_t> dual_distribution;
  double overlap_sq = 0.0;  // <pi|1>^2
};

/// Builds psi_A and psi_ideal for one code and compares them.
CodeAnalysis analyze_code(const LinearCode& code, const quantum::RadialErrorDistribution& dist,
                          const BoundDecoder& decoder, std::size_t l, std::uint64_t budget = kDefaultBudget);

struct PipelineTranscript {
  ReductionParams params;
  nlohmann::json code;
  std::string decoder;
  std::size_t l = 0;
  std::size_t u = 0;
  std::string u_source;
  AssumptionReport assumption;
  CodeAnalysis analysis;
  double q_est = 0.0;
  double q_est_analytic = 0.0;
  double q_est_exact = 0.0;
  quantum::AmplificationPlan plan;
  bool amplified = false;
  std::vector<double> final_weights;
  double success_probability = 0.0;        // exact, from the final state
  double ideal_amplified_success = 0.0;    // plan applied to the ideal probability
  double band_low = 0.0, band_high = 0.0;  // relative dual hard band
  std::vector<Shot> samples;
  std::uint64_t successes = 0;
  std::uint64_t relaxed_successes = 0;
  std::uint64_t in_dual = 0;

  double success_rate() const;
  nlohmann::json to_json() const;
};

/// The sampled code for `params` when no code is given: G-model, stream 0.
LinearCode default_code(const ReductionParams& params);

PipelineTranscript run_pipeline(const ReductionParams& params, const LinearCode& code);
PipelineTranscript run_pipeline(const ReductionParams& params);

struct Preset {
  std::string name;
  std::uint32_t q;
  std::size_t n, k, t;
  std::optional<LinearCode> code;  // fixed fixture, else sampled from the seed
};

Preset preset(const std::string& name);
std::vector<std::string> preset_names();

struct LemmaMeasureReport {
  std::size_t codes = 0;
  double max_deviation = 0.0;
  bool passed = false;
  nlohmann::json to_json() const;
};

LemmaMeasureReport verify_lemma_measure(const LinearCode& code, const quantum::RadialErrorDistribution& dist,
                                        std::size_t l = 0, std::uint64_t budget = kDefaultBudget);

struct TheoremReport {
  std::size_t codes = 0;
  std::uint64_t shots = 0;
  std::uint64_t successes = 0;
  double frequency = 0.0;
  double epsilon = 0.0;  // mean of the per-code eps_G
  double p_t = 0.0;
  double bound = 0.0;    // p_t^2 eps^3 / 16
  double sigma = 0.0;
  double margin = 0.0;   // frequency - (bound - 3 sigma)
  bool vacuous = false;
  bool passed = false;
  nlohmann::json to_json() const;
};

/// Runs the full pipeline on `codes` codes with `shots_per_code` shots each. A fixed code is reused
/// with independent shot streams; otherwise codes are sampled from the G-model.
TheoremReport verify_theorem_main(const ReductionParams& params, std::size_t codes,
                                  const std::optional<LinearCode>& fixed_code = std::nullopt);

struct SamplingReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  double allowed = 0.0;  // lemma exception probability
  double slack = 0.0;
  bool vacuous = false;
  bool passed = false;
  nlohmann::json extra;
  nlohmann::json to_json() const;
};

/// Fraction of sampled G with D_tr > sqrt(1 - p_t^2 eps_G^2 / 2) against <pi|1>^2/q^{n-k}.
SamplingReport verify_step1_bound(const ReductionParams& params, std::size_t samples);
/// Fraction of sampled G with |N_perp_u - S_u/q^k| >= (S_u/q^k)^{3/4} against (q-1) sqrt(q^k/S_u).
SamplingReport verify_nperp(std::uint32_t q, std::size_t n, std::size_t k, std::size_t u, std::size_t samples,
                            std::uint64_t seed, std::uint64_t budget = kDefaultBudget);

struct GvLemmaReport {
  double rate = 0.5;
  double delta = 0.1;
  std::vector<std::size_t> lengths;
  std::vector<double> log_ratios;  // log_q(S_t / q^{n-k}), t = floor((1-delta) delta_gv n)
  double slope = 0.0;              // least-squares slope of log_ratios in n
  double alpha = 0.0;
  bool passed = false;
  nlohmann::json to_json() const;
};

GvLemmaReport verify_gv_lemma(std::uint32_t q, double rate, double delta, std::size_t n_min = 10, std::size_t n_max = 20);

}  // namespace qred::reduction
