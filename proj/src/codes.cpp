#include "qred/codes.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qred {

BudgetExceeded::BudgetExceeded(std::string dimension, std::uint64_t required, std::uint64_t budget)
    : std::runtime_error("budget exceeded: " + dimension + " needs " + std::to_string(required) +
                         " > budget " + std::to_string(budget)),
      dimension_(std::move(dimension)),
      required_(required),
      budget_(budget) {}

std::uint64_t saturating_pow(std::uint64_t q, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (q != 0 && r > std::numeric_limits<std::uint64_t>::max() / q) return std::numeric_limits<std::uint64_t>::max();
    r *= q;
  }
  return r;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

namespace {

FqMatrix nonzero_rows(const RrefResult& r) {
  FqMatrix g(r.reduced.field(), r.rank, r.reduced.cols());
  for (std::size_t i = 0; i < r.rank; ++i)
    for (std::size_t c = 0; c < r.reduced.cols(); ++c) g.set(i, c, r.reduced.at(i, c));
  return g;
}

}  // namespace

LinearCode LinearCode::from_generator(const FqMatrix& g) {
  RrefResult r = rref(g);
  FqMatrix basis = r.rank == g.rows() ? g : nonzero_rows(r);
  FqMatrix h = kernel_basis(basis);
  return LinearCode(std::move(basis), std::move(h));
}

LinearCode LinearCode::from_parity_check(const FqMatrix& h) {
  RrefResult r = rref(h);
  FqMatrix checks = r.rank == h.rows() ? h : nonzero_rows(r);
  FqMatrix g = kernel_basis(checks);
  return LinearCode(std::move(g), std::move(checks));
}

LinearCode LinearCode::dual() const { return LinearCode(parity_check_, generator_); }

bool LinearCode::contains(const FqVector& x) const { return parity_check_.apply(x).is_zero(); }

std::vector<FqVector> LinearCode::codewords(std::uint64_t budget) const {
  const std::uint64_t count = saturating_pow(q(), k());
  if (count > budget) throw BudgetExceeded("q^k codewords", count, budget);
  std::vector<FqVector> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(encode(vector_from_index(field(), k(), i)));
  return out;
}

std::size_t LinearCode::min_distance(std::uint64_t budget) const {
  std::size_t best = n() + 1;
  for (const auto& c : codewords(budget)) {
    const std::size_t w = c.hamming_weight();
    if (w > 0 && w < best) best = w;
  }
  return best;
}

std::uint64_t WeightDistribution::total() const {
  std::uint64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

WeightDistribution weight_distribution(const LinearCode& code, std::uint64_t budget) {
  WeightDistribution wd{std::vector<std::uint64_t>(code.n() + 1, 0)};
  const std::uint64_t count = saturating_pow(code.q(), code.k());
  if (count > budget) throw BudgetExceeded("q^dim codewords", count, budget);
  // Odometer over messages; each digit step adds one generator row.
  const PrimeField& f = code.field();
  const std::size_t n = code.n(), k = code.k();
  std::vector<std::uint32_t> word(n, 0);
  std::vector<std::uint32_t> digits(k, 0);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::size_t w = 0;
    for (auto x : word) w += x != 0;
    ++wd.counts[w];
    for (std::size_t d = k; d-- > 0;) {
      for (std::size_t c = 0; c < n; ++c) word[c] = f.add(word[c], code.generator().at(d, c));
      if (++digits[d] < code.q()) break;
      digits[d] = 0;  // wrapped: q additions of the row returned word to its old value
    }
  }
  return wd;
}

FqMatrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, CounterRng& rng) {
  std::vector<std::uint32_t> data(rows * cols);
  for (auto& x : data) x = static_cast<std::uint32_t>(rng.below(f.order()));
  return FqMatrix(f, rows, cols, std::move(data));
}

SampledCode sample_code_G_model(std::uint32_t q, std::size_t n, std::size_t k, CounterRng& rng) {
  if (k > n) throw std::invalid_argument("k must not exceed n");
  PrimeField f(q);
  std::size_t resamples = 0;
  for (;;) {
    FqMatrix g = random_matrix(f, k, n, rng);
    if (rank(g) == k) return SampledCode{LinearCode::from_generator(g), resamples};
    ++resamples;
  }
}

SampledCode sample_code_H_model(std::uint32_t q, std::size_t n, std::size_t k, CounterRng& rng) {
  if (k > n) throw std::invalid_argument("k must not exceed n");
  PrimeField f(q);
  std::size_t resamples = 0;
  for (;;) {
    FqMatrix h = random_matrix(f, n - k, n, rng);
    if (rank(h) == n - k) return SampledCode{LinearCode::from_parity_check(h), resamples};
    ++resamples;
  }
}

std::size_t gv_distance(std::uint32_t q, std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("k must not exceed n");
  const BigInt space = big_pow(q, n);
  const BigInt code_size = big_pow(q, k);
  std::size_t best = 0;
  BigInt ball = 0;
  for (std::size_t t = 0; t <= n; ++t) {
    ball += sphere_size(q, n, t);
    if (code_size * ball <= space) best = t;
    else break;
  }
  return best;
}

std::optional<std::size_t> gv_distance_plus(std::uint32_t q, std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("k must not exceed n");
  const BigInt space = big_pow(q, n);
  const BigInt code_size = big_pow(q, k);
  for (std::size_t t = n + 1; t-- > 0;) {
    if (code_size * sphere_size(q, n, t) >= space) return t;
  }
  return std::nullopt;
}

DecoderOracle DecoderOracle::exhaustive(std::size_t t) {
  return DecoderOracle{DecoderKind::BoundedDistanceExhaustive, t, 1.0, 0};
}

DecoderOracle DecoderOracle::unreliable(std::size_t t, double epsilon_target) {
  if (!(epsilon_target > 0.0 && epsilon_target <= 1.0))
    throw std::invalid_argument("unreliable decoder needs epsilon in (0, 1]");
  const auto bits = static_cast<std::size_t>(std::ceil(std::log2(1.0 / epsilon_target) - 1e-12));
  return DecoderOracle{DecoderKind::Unreliable, t, epsilon_target, bits};
}

DecoderOracle DecoderOracle::constant() { return DecoderOracle{DecoderKind::AdversarialConstant, 0, 0.0, 0}; }

std::string DecoderOracle::describe() const {
  switch (kind) {
    case DecoderKind::BoundedDistanceExhaustive: return "exhaustive";
    case DecoderKind::Unreliable: {
      std::ostringstream os;
      os << "unreliable:" << epsilon_target;
      return os.str();
    }
    case DecoderKind::AdversarialConstant: return "constant";
  }
  return "unknown";
}

DecoderOracle parse_decoder(const std::string& spec, std::size_t t) {
  if (spec == "exhaustive") return DecoderOracle::exhaustive(t);
  if (spec == "constant") {
    DecoderOracle o = DecoderOracle::constant();
    o.radius = t;
    return o;
  }
  const std::string prefix = "unreliable:";
  if (spec.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(spec.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad decoder spec: " + spec);
    }
    if (used != spec.size() - prefix.size()) throw std::invalid_argument("bad decoder spec: " + spec);
    return DecoderOracle::unreliable(t, eps);
  }
  throw std::invalid_argument("unknown decoder: " + spec);
}

BoundDecoder::BoundDecoder(DecoderOracle oracle, const LinearCode& code, std::size_t coin_bits,
                           std::uint64_t budget)
    : oracle_(oracle), code_(code), coin_bits_(coin_bits) {
  if (coin_bits < oracle.min_coin_bits())
    throw std::invalid_argument("coin register shorter than the decoder's gate bits");
  if (oracle.kind != DecoderKind::AdversarialConstant) codewords_ = code.codewords(budget);
}

FqVector BoundDecoder::exhaustive(const FqVector& received) const {
  const std::size_t n = received.size();
  const FqVector* best = nullptr;
  std::size_t best_dist = n + 1;
  for (const auto& c : codewords_) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n; ++i) d += c[i] != received[i];
    if (d < best_dist || (d == best_dist && best != nullptr && c < *best)) {
      best = &c;
      best_dist = d;
    }
  }
  if (best == nullptr || best_dist > oracle_.radius) return FqVector(received.field(), n);
  return received - *best;
}

FqVector BoundDecoder::decode(const FqVector& received, std::uint64_t coins) const {
  if (received.size() != code_.n()) throw std::invalid_argument("received word has wrong length");
  switch (oracle_.kind) {
    case DecoderKind::BoundedDistanceExhaustive: return exhaustive(received);
    case DecoderKind::Unreliable: {
      const std::uint64_t open_below = std::uint64_t{1} << (coin_bits_ - oracle_.gate_bits);
      if (coins < open_below) return exhaustive(received);
      return FqVector(received.field(), received.size());
    }
    case DecoderKind::AdversarialConstant: return FqVector(received.field(), received.size());
  }
  return FqVector(received.field(), received.size());
}

FqVector decode(const DecoderOracle& oracle, const FqMatrix& generator, const FqVector& received,
                std::uint64_t coins, std::size_t coin_bits) {
  return BoundDecoder(oracle, LinearCode::from_generator(generator), coin_bits).decode(received, coins);
}

std::vector<FqVector> sphere_vectors(const PrimeField& f, std::size_t n, std::size_t w) {
  std::vector<FqVector> out;
  const std::uint64_t total = saturating_pow(f.order(), n);
  for (std::uint64_t i = 0; i < total; ++i) {
    FqVector v = vector_from_index(f, n, i);
    if (v.hamming_weight() == w) out.push_back(std::move(v));
  }
  return out;
}

namespace {

FqVector random_sphere_vector(const PrimeField& f, std::size_t n, std::size_t w, CounterRng& rng) {
  // Partial Fisher-Yates for the support, uniform nonzero symbols on it.
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[i] = i;
  FqVector v(f, n);
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pos[i], pos[j]);
    v.set(pos[i], static_cast<std::uint32_t>(1 + rng.below(f.order() - 1)));
  }
  return v;
}

}  // namespace

EpsilonEstimate empirical_epsilon(const BoundDecoder& decoder, std::uint64_t budget, std::uint64_t mc_samples,
                                  std::uint64_t seed) {
  const LinearCode& code = decoder.code();
  const PrimeField& f = code.field();
  const std::size_t t = decoder.oracle().radius;
  const std::uint64_t coins = std::uint64_t{1} << decoder.coin_bits();
  const BigInt sphere = sphere_size(code.q(), code.n(), t);
  const BigInt work = big_pow(code.q(), code.k()) * sphere * coins;
  EpsilonEstimate out;
  if (work <= budget && saturating_pow(code.q(), code.n()) <= budget) {
    const auto errors = sphere_vectors(f, code.n(), t);
    const auto words = code.codewords(budget);
    std::uint64_t good = 0;
    for (const auto& c : words)
      for (const auto& e : errors) {
        const FqVector y = c + e;
        for (std::uint64_t w = 0; w < coins; ++w) good += decoder.decode(y, w) == e;
      }
    out.exact = true;
    out.value = Rational(good, work);
    out.estimate = to_double(out.value);
    out.trials = static_cast<std::uint64_t>(work);
    return out;
  }
  CounterRng rng(seed, 0xe951);
  std::uint64_t good = 0;
  for (std::uint64_t s = 0; s < mc_samples; ++s) {
    FqVector msg(f, code.k());
    for (std::size_t i = 0; i < code.k(); ++i) msg.set(i, static_cast<std::uint32_t>(rng.below(f.order())));
    const FqVector e = random_sphere_vector(f, code.n(), t, rng);
    const std::uint64_t w = rng.below(coins);
    good += decoder.decode(code.encode(msg) + e, w) == e;
  }
  out.exact = false;
  out.estimate = static_cast<double>(good) / static_cast<double>(mc_samples);
  out.value = Rational(good, mc_samples);
  out.half_width = 1.96 * std::sqrt(std::max(out.estimate * (1 - out.estimate), 1e-12) / mc_samples);
  out.trials = mc_samples;
  return out;
}

bool verify_scp_solution(const FqMatrix& parity_check, const FqVector& c, std::size_t w) {
  if (c.size() != parity_check.cols()) return false;
  const std::size_t weight = c.hamming_weight();
  return weight > 0 && weight <= w && parity_check.apply(c).is_zero();
}

nlohmann::json code_to_json(const LinearCode& code) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < code.k(); ++r) rows.push_back(code.generator().row(r).entries());
  return nlohmann::json{{"q", code.q()}, {"n", code.n()}, {"k", code.k()}, {"generator", rows}};
}

LinearCode code_from_json(const nlohmann::json& j) {
  const auto q = j.at("q").get<std::uint32_t>();
  const auto n = j.at("n").get<std::size_t>();
  const auto k = j.at("k").get<std::size_t>();
  const auto rows = j.at("generator").get<std::vector<std::vector<std::uint32_t>>>();
  if (rows.size() != k) throw std::invalid_argument("generator in JSON has the wrong number of rows");
  std::vector<std::uint32_t> data;
  for (const auto& row : rows) {
    if (row.size() != n) throw std::invalid_argument("generator row in JSON has the wrong length");
    data.insert(data.end(), row.begin(), row.end());
  }
  FqMatrix g(PrimeField(q), k, n, std::move(data));
  if (rank(g) != k) throw std::invalid_argument("generator in JSON is not full rank");
  return LinearCode::from_generator(g);
}

ModelComparison compare_models_exhaustive(std::uint32_t q, std::size_t n, std::size_t k,
                                          const std::function<bool(const LinearCode&)>& property,
                                          std::uint64_t budget) {
  PrimeField f(q);
  auto run = [&](std::size_t rows, bool generator_model) {
    const std::uint64_t count = saturating_pow(q, rows * n);
    if (count > budget) throw BudgetExceeded("q^(rows*n) matrices", count, budget);
    std::uint64_t hits = 0;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      FqVector flat = vector_from_index(f, rows * n, idx);
      FqMatrix m(f, rows, n, flat.entries());
      const LinearCode code = generator_model ? LinearCode::from_generator(m) : LinearCode::from_parity_check(m);
      hits += property(code);
    }
    return static_cast<double>(hits) / static_cast<double>(count);
  };
  ModelComparison out;
  out.p_g = run(k, true);
  out.p_h = run(n - k, false);
  out.slack = std::pow(static_cast<double>(q), -static_cast<double>(std::min(k, n - k)));
  return out;
}

}  // namespace qred
