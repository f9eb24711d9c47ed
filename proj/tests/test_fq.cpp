#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qred/codes.hpp"
#include "qred/fq.hpp"
#include "qred/rng.hpp"

using namespace qred;

namespace {

// Brute-force null space: every x with M x^T = 0.
std::vector<FqVector> brute_kernel(const FqMatrix& m) {
  std::vector<FqVector> out;
  const std::uint64_t total = checked_pow(m.field().order(), m.cols());
  for (std::uint64_t i = 0; i < total; ++i) {
    FqVector x = vector_from_index(m.field(), m.cols(), i);
    if (m.apply(x).is_zero()) out.push_back(x);
  }
  return out;
}

std::uint64_t span_size(const FqMatrix& basis) {
  return checked_pow(basis.field().order(), basis.rows());
}

}  // namespace

TEST(PrimeField, RejectsNonPrimes) {
  EXPECT_THROW(PrimeField(4), FieldError);
  EXPECT_THROW(PrimeField(6), FieldError);
  EXPECT_THROW(PrimeField(1), FieldError);
  EXPECT_THROW(PrimeField(0), FieldError);
  EXPECT_NO_THROW(PrimeField(57 + 2));
}

TEST(PrimeField, InversesByExhaustiveSearch) {
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 13u}) {
    PrimeField f(q);
    for (std::uint32_t a = 1; a < q; ++a) {
      std::uint32_t found = 0;
      for (std::uint32_t b = 1; b < q; ++b)
        if ((a * b) % q == 1) found = b;
      EXPECT_EQ(f.inv(a), found) << q << " " << a;
    }
    EXPECT_THROW(f.inv(0), std::domain_error);
  }
}

TEST(Rref, Identity) {
  PrimeField f(2);
  auto r = rref(FqMatrix::identity(f, 3));
  EXPECT_EQ(r.rank, 3u);
  EXPECT_EQ(r.reduced, FqMatrix::identity(f, 3));
}

TEST(Rref, ZeroMatrix) {
  PrimeField f(3);
  FqMatrix z(f, 2, 4);
  auto r = rref(z);
  EXPECT_EQ(r.rank, 0u);
  EXPECT_TRUE(r.reduced.is_zero());
}

TEST(Rref, HandElimination) {
  PrimeField f(2);
  FqMatrix m(f, 2, 3, {1, 1, 0, 1, 1, 1});
  auto r = rref(m);
  EXPECT_EQ(r.rank, 2u);
  EXPECT_EQ(r.reduced, FqMatrix(f, 2, 3, {1, 1, 0, 0, 0, 1}));
  EXPECT_EQ(r.pivot_columns, (std::vector<std::size_t>{0, 2}));
}

TEST(Rref, RowSpaceAndRankAgreeWithBruteForce) {
  CounterRng rng(7, 1);
  for (std::uint32_t q : {2u, 3u, 5u}) {
    PrimeField f(q);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
      FqMatrix m = random_matrix(f, rows, cols, rng);
      auto r = rref(m);
      // rank = dim of row space = n - dim of kernel, kernel counted by enumeration
      const auto ker = brute_kernel(m);
      EXPECT_EQ(checked_pow(q, cols - r.rank), ker.size());
      // every row of M lies in the span of the reduced rows: same kernel
      EXPECT_EQ(brute_kernel(r.reduced).size(), ker.size());
      for (const auto& x : ker) EXPECT_TRUE(r.reduced.apply(x).is_zero());
      // reduced echelon shape
      for (std::size_t i = 0; i < r.rank; ++i) {
        const std::size_t p = r.pivot_columns[i];
        EXPECT_EQ(r.reduced.at(i, p), 1u);
        for (std::size_t j = 0; j < rows; ++j)
          if (j != i) EXPECT_EQ(r.reduced.at(j, p), 0u);
        for (std::size_t c = 0; c < p; ++c) EXPECT_EQ(r.reduced.at(i, c), 0u);
      }
    }
  }
}

TEST(Kernel, EvenWeightCode) {
  PrimeField f(2);
  FqMatrix m(f, 1, 3, {1, 1, 1});
  FqMatrix k = kernel_basis(m);
  EXPECT_EQ(k.rows(), 2u);
  std::vector<FqVector> even = brute_kernel(m);
  ASSERT_EQ(even.size(), 4u);
  for (std::size_t i = 0; i < k.rows(); ++i) EXPECT_EQ(k.row(i).hamming_weight() % 2, 0u);
}

TEST(Kernel, IdentityAndZero) {
  PrimeField f(3);
  EXPECT_EQ(kernel_basis(FqMatrix::identity(f, 4)).rows(), 0u);
  FqMatrix k = kernel_basis(FqMatrix(f, 1, 4));
  EXPECT_EQ(k.rows(), 4u);
  EXPECT_EQ(rank(k), 4u);
}

TEST(Kernel, OrthogonalAndComplementaryDimension) {
  CounterRng rng(11, 2);
  for (std::uint32_t q : {2u, 3u, 7u}) {
    PrimeField f(q);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t rows = 1 + rng.below(5), cols = 1 + rng.below(6);
      FqMatrix m = random_matrix(f, rows, cols, rng);
      FqMatrix k = kernel_basis(m);
      EXPECT_EQ(rank(m) + k.rows(), cols);
      EXPECT_EQ(rank(k), k.rows());
      if (k.rows() > 0) EXPECT_TRUE((m * k.transpose()).is_zero());
      if (q == 2 && cols <= 5) EXPECT_EQ(span_size(k), brute_kernel(m).size());
    }
  }
}

TEST(InnerProduct, Examples) {
  PrimeField f2(2), f3(3);
  EXPECT_EQ(inner_product(FqVector(f2, {1, 1, 0}), FqVector(f2, {1, 0, 1})).value, 1u);
  EXPECT_EQ(inner_product(FqVector(f3, {1, 2}), FqVector(f3, 2)).value, 0u);
  EXPECT_EQ(inner_product(FqVector(f3, {1, 2}), FqVector(f3, {2, 2})).value, 0u);
  EXPECT_THROW(inner_product(FqVector(f3, 2), FqVector(f3, 3)), std::invalid_argument);
  EXPECT_THROW(inner_product(FqVector(f2, 2), FqVector(f3, 2)), std::invalid_argument);
}

TEST(Character, DirectSubstitution) {
  PrimeField f(3);
  auto c = character(FqVector(f, std::vector<std::uint32_t>{2}), FqVector(f, std::vector<std::uint32_t>{1}));
  const double a = 4 * std::numbers::pi / 3;
  EXPECT_NEAR(c.real(), std::cos(a), 1e-15);
  EXPECT_NEAR(c.imag(), std::sin(a), 1e-15);
}

TEST(Character, MultiplicativeExhaustive) {
  for (std::uint32_t q : {2u, 3u}) {
    PrimeField f(q);
    for (std::size_t n = 1; n <= 3; ++n) {
      const std::uint64_t total = checked_pow(q, n);
      for (std::uint64_t yi = 0; yi < total; ++yi) {
        FqVector y = vector_from_index(f, n, yi);
        for (std::uint64_t a = 0; a < total; ++a)
          for (std::uint64_t b = 0; b < total; ++b) {
            FqVector x = vector_from_index(f, n, a), xp = vector_from_index(f, n, b);
            auto lhs = character(y, x + xp);
            auto rhs = character(y, x) * character(y, xp);
            EXPECT_LT(std::abs(lhs - rhs), 1e-12);
          }
      }
    }
  }
}

TEST(Character, OrthogonalitySums) {
  for (auto [q, n] : {std::pair<std::uint32_t, std::size_t>{2, 8}, {3, 5}, {5, 3}, {7, 2}}) {
    PrimeField f(q);
    const std::uint64_t total = checked_pow(q, n);
    for (std::uint64_t yi = 0; yi < total; yi += (yi < 20 ? 1 : 37)) {
      FqVector y = vector_from_index(f, n, yi);
      std::complex<double> s = 0;
      for (std::uint64_t xi = 0; xi < total; ++xi) s += character(y, vector_from_index(f, n, xi));
      const double expected = yi == 0 ? static_cast<double>(total) : 0.0;
      EXPECT_NEAR(s.real(), expected, 1e-9);
      EXPECT_NEAR(s.imag(), 0.0, 1e-9);
    }
  }
}

TEST(Indexing, RoundTripMostSignificantFirst) {
  PrimeField f(3);
  FqVector v = vector_from_index(f, 3, 5);  // 5 = 0*9 + 1*3 + 2
  EXPECT_EQ(v.entries(), (std::vector<std::uint32_t>{0, 1, 2}));
  for (std::uint64_t i = 0; i < 27; ++i) EXPECT_EQ(index_of(vector_from_index(f, 3, i)), i);
}
