#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qred/codes.hpp"
#include "qred/exact.hpp"

using namespace qred;

namespace {

LinearCode repetition3() { return LinearCode::from_generator(FqMatrix(PrimeField(2), 1, 3, {1, 1, 1})); }

// Weight counts of {x : x . g_i = 0 for all rows}, by enumeration of F_q^n.
std::vector<std::uint64_t> brute_dual_weights(const LinearCode& code) {
  std::vector<std::uint64_t> counts(code.n() + 1, 0);
  const std::uint64_t total = checked_pow(code.q(), code.n());
  for (std::uint64_t i = 0; i < total; ++i) {
    FqVector x = vector_from_index(code.field(), code.n(), i);
    bool orth = true;
    for (std::size_t r = 0; r < code.k() && orth; ++r) orth = inner_product(x, code.generator().row(r)).value == 0;
    if (orth) ++counts[x.hamming_weight()];
  }
  return counts;
}

std::size_t brute_gv(std::uint32_t q, std::size_t n, std::size_t k) {
  // Largest t with q^k * |B_t| <= q^n by direct integer counting.
  std::size_t best = 0;
  for (std::size_t t = 0; t <= n; ++t) {
    BigInt ball = 0;
    for (std::size_t i = 0; i <= t; ++i) ball += binomial(n, i) * big_pow(q - 1, i);
    if (big_pow(q, k) * ball <= big_pow(q, n)) best = t;
  }
  return best;
}

}  // namespace

TEST(LinearCode, RepetitionDualIsEvenWeight) {
  LinearCode c = repetition3();
  LinearCode d = c.dual();
  EXPECT_EQ(d.k(), 2u);
  EXPECT_EQ(weight_distribution(d).counts, (std::vector<std::uint64_t>{1, 0, 3, 0}));
  EXPECT_EQ(weight_distribution(c).counts, (std::vector<std::uint64_t>{1, 0, 0, 1}));
  EXPECT_EQ(c.min_distance(), 3u);
}

TEST(LinearCode, RankDeficientGeneratorIsReduced) {
  PrimeField f(2);
  LinearCode c = LinearCode::from_generator(FqMatrix(f, 2, 3, {1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(c.k(), 1u);
  EXPECT_EQ(c.codewords().size(), 2u);
}

TEST(Sampling, GModelInvariants) {
  CounterRng rng(3, 0);
  for (auto [q, n, k] : {std::tuple<std::uint32_t, std::size_t, std::size_t>{2, 4, 2}, {2, 8, 3}, {3, 5, 2}, {5, 4, 2}}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto s = sample_code_G_model(q, n, k, rng);
      EXPECT_EQ(s.code.k(), k);
      EXPECT_EQ(rank(s.code.generator()), k);
      EXPECT_TRUE((s.code.generator() * s.code.parity_check().transpose()).is_zero());
      auto w = weight_distribution(s.code);
      auto wd = weight_distribution(s.code.dual());
      EXPECT_EQ(w.total(), checked_pow(q, k));
      EXPECT_EQ(wd.total(), checked_pow(q, n - k));
      EXPECT_EQ(wd.counts, brute_dual_weights(s.code));
    }
  }
}

TEST(Sampling, HModelInvariants) {
  CounterRng rng(4, 0);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = sample_code_H_model(3, 5, 2, rng);
    EXPECT_EQ(s.code.k(), 2u);
    EXPECT_EQ(rank(s.code.parity_check()), 3u);
    EXPECT_TRUE((s.code.generator() * s.code.parity_check().transpose()).is_zero());
  }
}

TEST(Sampling, FourCodewordsAtTwoFourTwo) {
  CounterRng rng(0, 0);
  EXPECT_EQ(sample_code_G_model(2, 4, 2, rng).code.codewords().size(), 4u);
}

TEST(Sampling, FullRankFractionMatchesProduct) {
  // P(rank k) for a uniform k x n matrix is prod_{i<k} (1 - q^{i-n}).
  const std::uint32_t q = 2;
  const std::size_t n = 4, k = 3;
  double expected = 1.0;
  for (std::size_t i = 0; i < k; ++i) expected *= 1.0 - std::pow(double(q), double(i) - double(n));
  PrimeField f(q);
  CounterRng rng(99, 5);
  const int trials = 40000;
  int full = 0;
  for (int i = 0; i < trials; ++i) full += rank(random_matrix(f, k, n, rng)) == k;
  const double freq = double(full) / trials;
  const double sigma = std::sqrt(expected * (1 - expected) / trials);
  EXPECT_NEAR(freq, expected, 5 * sigma);
}

TEST(Sampling, DeterministicPerStream) {
  CounterRng a(17, 3), b(17, 3), c(17, 4);
  auto ga = sample_code_G_model(2, 8, 4, a).code.generator();
  EXPECT_EQ(ga, sample_code_G_model(2, 8, 4, b).code.generator());
  EXPECT_NE(ga, sample_code_G_model(2, 8, 4, c).code.generator());
}

TEST(Sampling, ModelsAgreeExhaustively) {
  // Property: minimum distance at least 2.
  auto prop = [](const LinearCode& c) { return c.min_distance() >= 2; };
  auto cmp = compare_models_exhaustive(2, 4, 2, prop);
  EXPECT_LE(std::abs(cmp.p_g - cmp.p_h), cmp.slack + 1e-12);
  EXPECT_DOUBLE_EQ(cmp.slack, 0.25);
  EXPECT_THROW(compare_models_exhaustive(2, 6, 3, prop, 1000), BudgetExceeded);
}

TEST(Budget, EnumerationRefusesAboveBudget) {
  CounterRng rng(1, 0);
  auto s = sample_code_G_model(2, 24, 12, rng);
  try {
    (void)s.code.codewords(1000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required(), 4096u);
    EXPECT_EQ(e.budget(), 1000u);
    EXPECT_FALSE(e.dimension().empty());
  }
}

TEST(GvDistance, AgreesWithDirectCount) {
  for (std::uint32_t q : {2u, 3u, 5u})
    for (std::size_t n = 1; n <= 24; n += 3)
      for (std::size_t k = 0; k <= n; ++k) EXPECT_EQ(gv_distance(q, n, k), brute_gv(q, n, k)) << q << n << k;
  auto plus = gv_distance_plus(2, 100, 50);
  ASSERT_TRUE(plus.has_value());
  EXPECT_GE(*plus, gv_distance(2, 100, 50));
}

TEST(Decoder, RepetitionExamples) {
  LinearCode c = repetition3();
  PrimeField f(2);
  BoundDecoder d(DecoderOracle::exhaustive(1), c, 0);
  EXPECT_EQ(d.decode(FqVector(f, {1, 1, 0}), 0), FqVector(f, {0, 0, 1}));
  for (const auto& word : c.codewords()) EXPECT_TRUE(d.decode(word, 0).is_zero());
  BoundDecoder d0(DecoderOracle::exhaustive(0), c, 0);
  EXPECT_TRUE(d0.decode(FqVector(f, {1, 1, 1}), 0).is_zero());
}

TEST(Decoder, RepeatedCallsAgree) {
  CounterRng rng(5, 0);
  auto s = sample_code_G_model(3, 5, 2, rng);
  BoundDecoder d(DecoderOracle::unreliable(1, 0.5), s.code, 2);
  for (std::uint64_t i = 0; i < 243; ++i)
    for (std::uint64_t w = 0; w < 4; ++w) {
      FqVector y = vector_from_index(s.code.field(), 5, i);
      EXPECT_EQ(d.decode(y, w), d.decode(y, w));
    }
}

TEST(Decoder, ParseSpecs) {
  EXPECT_EQ(parse_decoder("exhaustive", 2).kind, DecoderKind::BoundedDistanceExhaustive);
  EXPECT_EQ(parse_decoder("constant", 2).kind, DecoderKind::AdversarialConstant);
  auto u = parse_decoder("unreliable:0.25", 1);
  EXPECT_EQ(u.kind, DecoderKind::Unreliable);
  EXPECT_EQ(u.gate_bits, 2u);
  EXPECT_THROW(parse_decoder("unreliable:", 1), std::invalid_argument);
  EXPECT_THROW(parse_decoder("unreliable:0.5x", 1), std::invalid_argument);
  EXPECT_THROW(parse_decoder("unreliable:0", 1), std::invalid_argument);
  EXPECT_THROW(parse_decoder("unreliable:1.5", 1), std::invalid_argument);
  EXPECT_THROW(parse_decoder("magic", 1), std::invalid_argument);
  EXPECT_THROW(BoundDecoder(u, repetition3(), 1), std::invalid_argument);
}

TEST(Epsilon, Examples) {
  LinearCode c = repetition3();
  auto e1 = empirical_epsilon(BoundDecoder(DecoderOracle::exhaustive(1), c, 0));
  ASSERT_TRUE(e1.exact);
  EXPECT_EQ(e1.value, Rational(1));
  auto eq = empirical_epsilon(BoundDecoder(DecoderOracle::unreliable(1, 0.25), c, 2));
  ASSERT_TRUE(eq.exact);
  EXPECT_EQ(eq.value, Rational(1, 4));
}

TEST(Epsilon, ConstantDecoderOnRepetitionAtOne) {
  DecoderOracle o = DecoderOracle::constant();
  o.radius = 1;
  auto e = empirical_epsilon(BoundDecoder(o, repetition3(), 0));
  ASSERT_TRUE(e.exact);
  EXPECT_EQ(e.value, Rational(0));
}

TEST(Epsilon, MonotoneBeyondUniqueRadius) {
  CounterRng rng(8, 0);
  for (int trial = 0; trial < 5; ++trial) {
    auto s = sample_code_G_model(2, 8, 3, rng);
    const std::size_t d = s.code.min_distance();
    const std::size_t unique = d == 0 ? 0 : (d - 1) / 2;
    double prev = 2.0;
    for (std::size_t t = unique; t <= 8; ++t) {
      auto e = empirical_epsilon(BoundDecoder(DecoderOracle::exhaustive(t), s.code, 0));
      ASSERT_TRUE(e.exact);
      if (t == unique) EXPECT_EQ(e.value, Rational(1));
      EXPECT_LE(e.estimate, prev + 1e-15);
      prev = e.estimate;
    }
  }
}

TEST(Epsilon, MonteCarloAboveBudget) {
  CounterRng rng(2, 0);
  auto s = sample_code_G_model(2, 20, 10, rng);
  auto e = empirical_epsilon(BoundDecoder(DecoderOracle::exhaustive(1), s.code, 0), 10000, 2000, 1);
  EXPECT_FALSE(e.exact);
  EXPECT_GT(e.half_width, 0.0);
  EXPECT_EQ(e.trials, 2000u);
}

TEST(Scp, Verifier) {
  LinearCode c = repetition3();
  const FqMatrix& h = c.parity_check();
  PrimeField f(2);
  EXPECT_FALSE(verify_scp_solution(h, FqVector(f, 3), 3));
  EXPECT_TRUE(verify_scp_solution(h, FqVector(f, {1, 1, 1}), 3));
  EXPECT_FALSE(verify_scp_solution(h, FqVector(f, {1, 1, 1}), 2));
  EXPECT_FALSE(verify_scp_solution(h, FqVector(f, {1, 0, 0}), 3));
  LinearCode d = c.dual();
  EXPECT_TRUE(verify_scp_solution(d.parity_check(), d.generator().row(0), 2));
}

TEST(Nperp, ConcentrationNearHalfLength) {
  // Fraction of G with |N_perp_u - S_u/q^k| >= (S_u/q^k)^{3/4}, bounded by (q-1) sqrt(q^k/S_u) plus slack.
  const std::uint32_t q = 2;
  const std::size_t n = 14, k = 4, u = 7;
  const double mean = to_double(sphere_size(q, n, u)) / 16.0;
  const double threshold = std::pow(mean, 0.75);
  const double allowed = (q - 1) * std::sqrt(16.0 / to_double(sphere_size(q, n, u)));
  const int samples = 200;
  int bad = 0;
  for (int i = 0; i < samples; ++i) {
    CounterRng rng(21, 3000 + i);
    auto s = sample_code_G_model(q, n, k, rng);
    const double nu = double(weight_distribution(s.code.dual())[u]);
    bad += std::abs(nu - mean) >= threshold;
  }
  const double rate = double(bad) / samples;
  EXPECT_LE(rate, allowed + 3 * std::sqrt(allowed * (1 - allowed) / samples) + 1.0 / samples);
}

TEST(Json, CodeRoundTrip) {
  CounterRng rng(6, 0);
  auto s = sample_code_G_model(3, 6, 3, rng);
  auto j = code_to_json(s.code);
  LinearCode back = code_from_json(j);
  EXPECT_EQ(back.generator(), s.code.generator());
  EXPECT_EQ(code_to_json(back).dump(), j.dump());
}

TEST(Sphere, VectorsCountAndOrder) {
  PrimeField f(3);
  auto v = sphere_vectors(f, 4, 2);
  EXPECT_EQ(v.size(), 24u);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(index_of(v[i - 1]), index_of(v[i]));
}
