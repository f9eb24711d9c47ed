#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qred/analytic.hpp"
#include "qred/codes.hpp"
#include "qred/rng.hpp"

using namespace qred;
using namespace qred::analytic;

TEST(Entropy, Endpoints) {
  EXPECT_DOUBLE_EQ(entropy(2, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(entropy(2, 0.0), 0.0);
  EXPECT_NEAR(entropy(3, 2.0 / 3.0), 1.0, 1e-15);
  EXPECT_THROW(entropy(2, 0.6), std::domain_error);
  EXPECT_THROW(entropy(1, 0.1), std::domain_error);
}

TEST(Entropy, InverseValues) {
  EXPECT_NEAR(entropy_inverse(2, 0.5), 0.110028, 1e-6);
  EXPECT_DOUBLE_EQ(entropy_inverse(2, 0.0), 0.0);
  EXPECT_NEAR(entropy_inverse(2, 1.0), 0.5, 1e-12);
  EXPECT_THROW(entropy_inverse(2, 1.5), std::domain_error);
}

TEST(Entropy, InverseOfEntropyOnGrids) {
  for (double q : {2.0, 3.0, 5.0, 57.0}) {
    const double top = (q - 1) / q;
    for (double x = 0.0; x <= top; x += top / 200) EXPECT_NEAR(entropy_inverse(q, entropy(q, x)), x, 1e-10) << q << " " << x;
  }
}

TEST(TauPerp, Values) {
  EXPECT_DOUBLE_EQ(tau_perp(2, 0), 0.5);
  EXPECT_NEAR(tau_perp(2, 0.5), 0.0, 1e-16);
  EXPECT_NEAR(tau_perp(3, 2.0 / 3.0), 0.0, 1e-16);
  EXPECT_NEAR(tau_perp(2, 0.110), 0.1871, 5e-5);
  EXPECT_NEAR(tau_perp(2, entropy_inverse(2, 0.5) / 2), 0.27199, 5e-5);
}

TEST(TauPerp, StrictlyDecreasing) {
  for (double q : {2.0, 3.0, 7.0}) {
    double prev = tau_perp(q, 0);
    const double top = (q - 1) / q;
    for (int i = 1; i <= 500; ++i) {
      const double v = tau_perp(q, top * i / 500.0);
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(TauPerp, SharedWithBernoulliDual) {
  CounterRng rng(12, 0);
  for (int i = 0; i < 1000; ++i) {
    const double q = 2 + double(rng.below(60));
    const double tau = rng.uniform() * (q - 1) / q;
    const auto b = bernoulli_dual(q, tau);
    EXPECT_EQ(b.p_perp, tau_perp(q, tau));
    EXPECT_EQ(b.p, tau);
  }
  EXPECT_NEAR(bernoulli_dual(2, 0.11).p_perp, 0.1871, 5e-4);
}

TEST(OmegaEasy, Values) {
  EXPECT_DOUBLE_EQ(omega_easy(2, 10, 10), 0.0);
  EXPECT_DOUBLE_EQ(omega_easy(2, 10, 0), 0.5);
  EXPECT_DOUBLE_EQ(omega_easy(2, 100, 50), 0.25);
}

TEST(Usefulness, PointVerdicts) {
  const double dgv = entropy_inverse(2, 0.5);
  auto p = evaluate_point(2, 0.5, dgv);
  EXPECT_EQ(p.verdict, Verdict::Useful);
  EXPECT_NEAR(p.tau_perp, 0.1871, 5e-4);
  EXPECT_NEAR(p.omega_easy_dual, 0.25, 1e-15);
  EXPECT_NEAR(p.delta_gv_dual, dgv, 1e-12);
  auto easy = evaluate_point(2, 0.5, dgv / 2);
  EXPECT_EQ(easy.verdict, Verdict::Easy);
  EXPECT_GE(easy.tau_perp, 0.25);
  auto vac = evaluate_point(2, 0.5, 0.3);
  EXPECT_EQ(vac.verdict, Verdict::Vacuous);
}

TEST(Usefulness, BinaryUsefulAtEveryRate) {
  auto scan = usefulness_scan(2, default_rate_grid(), default_tau_grid(2));
  ASSERT_EQ(scan.per_rate.size(), 19u);
  for (const auto& r : scan.per_rate) EXPECT_TRUE(r.any_useful) << r.rate;
}

TEST(Usefulness, LargeFieldFails) {
  auto scan = usefulness_scan(57, default_rate_grid(), default_tau_grid(57));
  bool half_useless = false, some_useless = false;
  for (const auto& r : scan.per_rate) {
    if (!r.any_useful) some_useless = true;
    if (std::abs(r.rate - 0.5) < 1e-12) half_useless = !r.any_useful;
  }
  EXPECT_TRUE(some_useless);
  EXPECT_TRUE(half_useless);
}

TEST(Usefulness, ExactGvDistanceNearAsymptotic) {
  for (auto [n, k] : {std::pair<std::size_t, std::size_t>{100, 50}, {100, 30}, {100, 70}}) {
    const double exact = double(gv_distance(2, n, k)) / n;
    EXPECT_NEAR(exact, entropy_inverse(2, 1.0 - double(k) / n), 2.0 / n) << k;
  }
}

TEST(Grid, InclusiveAndValidated) {
  auto g = grid(0.05, 0.95, 0.05);
  ASSERT_EQ(g.size(), 19u);
  EXPECT_DOUBLE_EQ(g.back(), 0.95);
  EXPECT_THROW(grid(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(grid(1, 0, 0.1), std::invalid_argument);
  EXPECT_EQ(default_tau_grid(2).size(), 501u);
}

TEST(Obstruction, NoFeasibleTau) {
  auto s = bernoulli_obstruction_scan(2, 0.5, 1e-3);
  EXPECT_EQ(s.feasible, 0u);
  EXPECT_GT(s.grid_points, 400u);
  EXPECT_GT(s.meets_i, 0u);
  EXPECT_GT(s.meets_ii, 0u);
  EXPECT_GT(s.meets_iii, 0u);
}

TEST(Obstruction, ExponentAtMaximalNoise) {
  EXPECT_NEAR(bernoulli_obstruction(2, 20, 7, 0.5), 7.0, 1e-12);
  EXPECT_NEAR(bernoulli_obstruction(3, 20, 7, 2.0 / 3.0), 7.0, 1e-12);
  EXPECT_NEAR(bernoulli_obstruction(2, 20, 7, 0.0), 7.0 - 20.0, 1e-12);
}

TEST(GvLemma, ExponentSignAndLimit) {
  EXPECT_LT(gv_lemma_exponent(2, 0.5, 0.1), 0.0);
  const double small = gv_lemma_exponent(2, 0.5, 1e-6);
  EXPECT_LT(small, 0.0);
  EXPECT_GT(small, -1e-4);
  EXPECT_LT(gv_lemma_exponent(2, 0.5, 0.2), gv_lemma_exponent(2, 0.5, 0.1));
}

TEST(Csv, StableHeadersAndRows) {
  auto scan = usefulness_scan(2, {0.5}, grid(0.0, 0.11, 0.01));
  const std::string f1 = fig1_csv(scan), f2 = fig2_csv(scan);
  std::istringstream a(f1), b(f2);
  std::string line;
  std::getline(a, line);
  EXPECT_EQ(line, "q,R,tau,tau_perp,omega_easy_dual,delta_gv_dual,verdict");
  std::size_t rows = 0;
  while (std::getline(a, line)) ++rows;
  EXPECT_EQ(rows, scan.points.size());
  std::getline(b, line);
  EXPECT_EQ(line, "q,R,tau_star,tau_perp_at_star,band_low,band_high,verdict");
  std::getline(b, line);
  EXPECT_EQ(line.rfind("2,0.5,0.110027864", 0), 0u) << line;
  EXPECT_EQ(f1, fig1_csv(usefulness_scan(2, {0.5}, grid(0.0, 0.11, 0.01))));
}
