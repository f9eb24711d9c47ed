#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qred/exact.hpp"
#include "qred/fq.hpp"
#include "qred/rng.hpp"

namespace qred {

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// An enumeration or statevector would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string dimension, std::uint64_t required, std::uint64_t budget);
  const std::string& dimension() const { return dimension_; }
  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::string dimension_;
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// Saturating q^e, used for budget checks.
std::uint64_t saturating_pow(std::uint64_t q, std::size_t e);
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

class LinearCode {
 public:
  /// Code spanned by the rows of g. A full-rank g is kept verbatim; otherwise
  /// the nonzero rows of its RREF become the generator.
  static LinearCode from_generator(const FqMatrix& g);
  static LinearCode from_parity_check(const FqMatrix& h);

  const PrimeField& field() const { return generator_.field(); }
  std::uint32_t q() const { return field().order(); }
  std::size_t n() const { return generator_.cols(); }
  std::size_t k() const { return generator_.rows(); }
  const FqMatrix& generator() const { return generator_; }
  const FqMatrix& parity_check() const { return parity_check_; }

  LinearCode dual() const;
  bool contains(const FqVector& x) const;
  FqVector encode(const FqVector& message) const { return generator_.left_multiply(message); }
  /// All q^k codewords, message index order (most significant digit first).
  std::vector<FqVector> codewords(std::uint64_t budget = kDefaultBudget) const;
  std::size_t min_distance(std::uint64_t budget = kDefaultBudget) const;

 private:
  LinearCode(FqMatrix g, FqMatrix h) : generator_(std::move(g)), parity_check_(std::move(h)) {}
  FqMatrix generator_;
  FqMatrix parity_check_;
};

struct WeightDistribution {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  std::uint64_t operator[](std::size_t w) const { return counts.at(w); }
};

WeightDistribution weight_distribution(const LinearCode& code, std::uint64_t budget = kDefaultBudget);

struct SampledCode {
  LinearCode code;
  std::size_t resamples = 0;
};

/// Uniform generator matrix, redrawn until rank k.
SampledCode sample_code_G_model(std::uint32_t q, std::size_t n, std::size_t k, CounterRng& rng);
/// Uniform parity-check matrix, redrawn until rank n-k.
SampledCode sample_code_H_model(std::uint32_t q, std::size_t n, std::size_t k, CounterRng& rng);

FqMatrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, CounterRng& rng);

/// Largest t with q^k·|B_t| <= q^n.
std::size_t gv_distance(std::uint32_t q, std::size_t n, std::size_t k);
/// Largest t with q^k·|S_t| >= q^n, if any.
std::optional<std::size_t> gv_distance_plus(std::uint32_t q, std::size_t n, std::size_t k);

enum class DecoderKind { BoundedDistanceExhaustive, Unreliable, AdversarialConstant };

struct DecoderOracle {
  DecoderKind kind = DecoderKind::BoundedDistanceExhaustive;
  std::size_t radius = 0;
  double epsilon_target = 1.0;
  /// Number of leading coin bits that must be zero for the unreliable decoder to answer.
  std::size_t gate_bits = 0;

  static DecoderOracle exhaustive(std::size_t t);
  static DecoderOracle unreliable(std::size_t t, double epsilon_target);
  static DecoderOracle constant();

  /// Smallest coin register length the oracle can use.
  std::size_t min_coin_bits() const { return gate_bits; }
  std::string describe() const;
};

/// "exhaustive", "unreliable:EPS", "constant".
DecoderOracle parse_decoder(const std::string& spec, std::size_t t);

/// Caches the codeword list of one code; decode() is a pure function of
/// (received, coins). Coins are an l-bit index, first coin bit most significant.
class BoundDecoder {
 public:
  BoundDecoder(DecoderOracle oracle, const LinearCode& code, std::size_t coin_bits,
               std::uint64_t budget = kDefaultBudget);

  /// Error estimate; the zero vector on failure (decoded word = received).
  FqVector decode(const FqVector& received, std::uint64_t coins) const;

  const DecoderOracle& oracle() const { return oracle_; }
  std::size_t coin_bits() const { return coin_bits_; }
  const LinearCode& code() const { return code_; }

 private:
  FqVector exhaustive(const FqVector& received) const;

  DecoderOracle oracle_;
  LinearCode code_;
  std::size_t coin_bits_;
  std::vector<FqVector> codewords_;
};

FqVector decode(const DecoderOracle& oracle, const FqMatrix& generator, const FqVector& received,
                std::uint64_t coins, std::size_t coin_bits);

struct EpsilonEstimate {
  bool exact = true;
  Rational value;           // exact fraction when exact
  double estimate = 0.0;
  double half_width = 0.0;  // 95% normal half-width for Monte Carlo
  std::uint64_t trials = 0;
};

/// Fraction of (c, e, w), e on the weight-t sphere, with A(G, c+e, w) = e.
EpsilonEstimate empirical_epsilon(const BoundDecoder& decoder, std::uint64_t budget = kDefaultBudget,
                                  std::uint64_t mc_samples = 200'000, std::uint64_t seed = 0);

bool verify_scp_solution(const FqMatrix& parity_check, const FqVector& c, std::size_t w);

/// All vectors of F_q^n with Hamming weight exactly w, index order.
std::vector<FqVector> sphere_vectors(const PrimeField& f, std::size_t n, std::size_t w);

nlohmann::json code_to_json(const LinearCode& code);
LinearCode code_from_json(const nlohmann::json& j);

struct ModelComparison {
  double p_g = 0.0;  // over all raw k×n generator matrices
  double p_h = 0.0;  // over all raw (n-k)×n parity-check matrices
  double slack = 0.0;  // q^{-min(k, n-k)}
};

/// Exhaustive over every matrix (no rank resampling) of both ensembles.
ModelComparison compare_models_exhaustive(std::uint32_t q, std::size_t n, std::size_t k,
                                          const std::function<bool(const LinearCode&)>& property,
                                          std::uint64_t budget = kDefaultBudget);

}  // namespace qred
