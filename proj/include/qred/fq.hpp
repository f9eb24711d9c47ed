#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qred {

/// Raised when a modulus is not a prime (prime powers get a dedicated message).
class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_prime(std::uint32_t value);

/// Arithmetic context of a prime field F_q.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t q);

  std::uint32_t order() const { return q_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % q_; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + q_ - b) % q_; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % q_);
  }
  std::uint32_t inv(std::uint32_t a) const;

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t q_;
};

struct FqElement {
  std::uint32_t value = 0;
  std::uint32_t modulus = 2;

  bool operator==(const FqElement&) const = default;
};

class FqVector {
 public:
  FqVector(PrimeField field, std::size_t length);
  FqVector(PrimeField field, std::vector<std::uint32_t> entries);

  const PrimeField& field() const { return field_; }
  std::size_t size() const { return entries_.size(); }
  std::uint32_t operator[](std::size_t i) const { return entries_[i]; }
  void set(std::size_t i, std::uint32_t value);
  const std::vector<std::uint32_t>& entries() const { return entries_; }

  std::size_t hamming_weight() const;
  bool is_zero() const { return hamming_weight() == 0; }

  FqVector operator+(const FqVector& other) const;
  FqVector operator-(const FqVector& other) const;

  bool operator==(const FqVector&) const = default;
  /// Lexicographic on entries.
  bool operator<(const FqVector& other) const { return entries_ < other.entries_; }

  std::string to_string() const;

 private:
  PrimeField field_;
  std::vector<std::uint32_t> entries_;
};

class FqMatrix {
 public:
  FqMatrix(PrimeField field, std::size_t rows, std::size_t cols);
  FqMatrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> row_major);
  static FqMatrix identity(PrimeField field, std::size_t n);
  static FqMatrix from_rows(PrimeField field, std::size_t cols, const std::vector<FqVector>& rows);

  const PrimeField& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint32_t value);
  const std::vector<std::uint32_t>& data() const { return data_; }

  FqVector row(std::size_t r) const;
  FqMatrix transpose() const;
  FqMatrix operator*(const FqMatrix& other) const;
  /// M · vᵀ as a vector of length rows().
  FqVector apply(const FqVector& v) const;
  /// u · M for u of length rows().
  FqVector left_multiply(const FqVector& u) const;

  bool is_zero() const;
  bool operator==(const FqMatrix&) const = default;

 private:
  PrimeField field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> data_;
};

struct RrefResult {
  FqMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
};

RrefResult rref(const FqMatrix& m);
std::size_t rank(const FqMatrix& m);

/// Basis (as rows) of {x : M·xᵀ = 0}.
FqMatrix kernel_basis(const FqMatrix& m);

FqElement inner_product(const FqVector& x, const FqVector& y);

/// χ_y(x) = exp(2πi·(x·y)/q).
std::complex<double> character(const FqVector& y, const FqVector& x);

/// Decodes index as n base-q digits, most significant digit first.
FqVector vector_from_index(const PrimeField& field, std::size_t n, std::uint64_t index);
std::uint64_t index_of(const FqVector& v);

std::uint64_t checked_pow(std::uint64_t base, std::size_t exponent);

}  // namespace qred
