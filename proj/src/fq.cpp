#include "qred/fq.hpp"

#include <numbers>
#include <sstream>

namespace qred {

bool is_prime(std::uint32_t value) {
  if (value < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

namespace {

bool is_prime_power(std::uint32_t value) {
  for (std::uint32_t p = 2; p <= value; ++p) {
    if (value % p != 0) continue;
    while (value % p == 0) value /= p;
    return value == 1;
  }
  return false;
}

void require_same_field(const PrimeField& a, const PrimeField& b) {
  if (!(a == b)) throw std::invalid_argument("operands live in different fields");
}

}  // namespace

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (!is_prime(q)) {
    if (q > 1 && is_prime_power(q)) {
      throw FieldError("extension fields unsupported in simulator (q = " + std::to_string(q) + ")");
    }
    throw FieldError("field order must be prime, got " + std::to_string(q));
  }
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % q_ == 0) throw std::domain_error("inverse of zero");
  // Fermat: a^(q-2)
  std::uint64_t result = 1, base = a % q_;
  for (std::uint32_t e = q_ - 2; e > 0; e >>= 1) {
    if (e & 1U) result = result * base % q_;
    base = base * base % q_;
  }
  return static_cast<std::uint32_t>(result);
}

FqVector::FqVector(PrimeField field, std::size_t length) : field_(field), entries_(length, 0) {}

FqVector::FqVector(PrimeField field, std::vector<std::uint32_t> entries)
    : field_(field), entries_(std::move(entries)) {
  for (auto& e : entries_) {
    if (e >= field_.order()) throw std::out_of_range("vector entry not reduced mod q");
  }
}

void FqVector::set(std::size_t i, std::uint32_t value) {
  if (value >= field_.order()) throw std::out_of_range("vector entry not reduced mod q");
  entries_.at(i) = value;
}

std::size_t FqVector::hamming_weight() const {
  std::size_t w = 0;
  for (auto e : entries_) w += e != 0;
  return w;
}

FqVector FqVector::operator+(const FqVector& other) const {
  require_same_field(field_, other.field_);
  if (size() != other.size()) throw std::invalid_argument("length mismatch");
  FqVector out(field_, size());
  for (std::size_t i = 0; i < size(); ++i) out.entries_[i] = field_.add(entries_[i], other.entries_[i]);
  return out;
}

FqVector FqVector::operator-(const FqVector& other) const {
  require_same_field(field_, other.field_);
  if (size() != other.size()) throw std::invalid_argument("length mismatch");
  FqVector out(field_, size());
  for (std::size_t i = 0; i < size(); ++i) out.entries_[i] = field_.sub(entries_[i], other.entries_[i]);
  return out;
}

std::string FqVector::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (field_.order() > 10 && i > 0) os << ',';
    os << entries_[i];
  }
  return os.str();
}

FqMatrix::FqMatrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FqMatrix::FqMatrix(PrimeField field, std::size_t rows, std::size_t cols, std::vector<std::uint32_t> row_major)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("matrix data size mismatch");
  for (auto e : data_) {
    if (e >= field_.order()) throw std::out_of_range("matrix entry not reduced mod q");
  }
}

FqMatrix FqMatrix::identity(PrimeField field, std::size_t n) {
  FqMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

FqMatrix FqMatrix::from_rows(PrimeField field, std::size_t cols, const std::vector<FqVector>& rows) {
  FqMatrix m(field, rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_same_field(field, rows[r].field());
    if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
    for (std::size_t c = 0; c < cols; ++c) m.data_[r * cols + c] = rows[r][c];
  }
  return m;
}

void FqMatrix::set(std::size_t r, std::size_t c, std::uint32_t value) {
  if (value >= field_.order()) throw std::out_of_range("matrix entry not reduced mod q");
  data_.at(r * cols_ + c) = value;
}

FqVector FqMatrix::row(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("row index");
  return FqVector(field_, std::vector<std::uint32_t>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_));
}

FqMatrix FqMatrix::transpose() const {
  FqMatrix t(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.data_[c * rows_ + r] = data_[r * cols_ + c];
  return t;
}

FqMatrix FqMatrix::operator*(const FqMatrix& other) const {
  require_same_field(field_, other.field_);
  if (cols_ != other.rows_) throw std::invalid_argument("dimension mismatch in product");
  FqMatrix out(field_, rows_, other.cols_);
  const std::uint64_t q = field_.order();
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < other.cols_; ++c) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < cols_; ++i) acc = (acc + static_cast<std::uint64_t>(at(r, i)) * other.at(i, c)) % q;
      out.data_[r * other.cols_ + c] = static_cast<std::uint32_t>(acc);
    }
  }
  return out;
}

FqVector FqMatrix::apply(const FqVector& v) const {
  require_same_field(field_, v.field());
  if (v.size() != cols_) throw std::invalid_argument("length mismatch in M·vᵀ");
  FqVector out(field_, rows_);
  const std::uint64_t q = field_.order();
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) acc += static_cast<std::uint64_t>(at(r, c)) * v[c];
    out.set(r, static_cast<std::uint32_t>(acc % q));
  }
  return out;
}

FqVector FqMatrix::left_multiply(const FqVector& u) const {
  require_same_field(field_, u.field());
  if (u.size() != rows_) throw std::invalid_argument("length mismatch in u·M");
  std::vector<std::uint64_t> acc(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (u[r] == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c) acc[c] += static_cast<std::uint64_t>(u[r]) * at(r, c);
  }
  std::vector<std::uint32_t> out(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out[c] = static_cast<std::uint32_t>(acc[c] % field_.order());
  return FqVector(field_, std::move(out));
}

bool FqMatrix::is_zero() const {
  for (auto e : data_)
    if (e != 0) return false;
  return true;
}

RrefResult rref(const FqMatrix& m) {
  const PrimeField& f = m.field();
  FqMatrix a = m;
  std::vector<std::size_t> pivots;
  std::size_t lead_row = 0;
  for (std::size_t col = 0; col < a.cols() && lead_row < a.rows(); ++col) {
    std::size_t pivot = lead_row;
    while (pivot < a.rows() && a.at(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != lead_row) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        auto tmp = a.at(pivot, c);
        a.set(pivot, c, a.at(lead_row, c));
        a.set(lead_row, c, tmp);
      }
    }
    const std::uint32_t scale = f.inv(a.at(lead_row, col));
    for (std::size_t c = 0; c < a.cols(); ++c) a.set(lead_row, c, f.mul(a.at(lead_row, c), scale));
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == lead_row) continue;
      const std::uint32_t factor = a.at(r, col);
      if (factor == 0) continue;
      for (std::size_t c = 0; c < a.cols(); ++c)
        a.set(r, c, f.sub(a.at(r, c), f.mul(factor, a.at(lead_row, c))));
    }
    pivots.push_back(col);
    ++lead_row;
  }
  return RrefResult{std::move(a), pivots.size(), std::move(pivots)};
}

std::size_t rank(const FqMatrix& m) { return rref(m).rank; }

FqMatrix kernel_basis(const FqMatrix& m) {
  const PrimeField& f = m.field();
  const std::size_t n = m.cols();
  if (m.rows() == 0) return FqMatrix::identity(f, n);
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : r.pivot_columns) is_pivot[p] = true;
  std::vector<FqVector> basis;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    FqVector v(f, n);
    v.set(free_col, 1);
    for (std::size_t i = 0; i < r.rank; ++i) v.set(r.pivot_columns[i], f.neg(r.reduced.at(i, free_col)));
    basis.push_back(std::move(v));
  }
  return FqMatrix::from_rows(f, n, basis);
}

FqElement inner_product(const FqVector& x, const FqVector& y) {
  require_same_field(x.field(), y.field());
  if (x.size() != y.size()) throw std::invalid_argument("inner product of vectors with different lengths");
  std::uint64_t acc = 0;
  const std::uint64_t q = x.field().order();
  for (std::size_t i = 0; i < x.size(); ++i) acc = (acc + static_cast<std::uint64_t>(x[i]) * y[i]) % q;
  return FqElement{static_cast<std::uint32_t>(acc), x.field().order()};
}

std::complex<double> character(const FqVector& y, const FqVector& x) {
  const FqElement dot = inner_product(x, y);
  if (dot.value == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * dot.value / dot.modulus);
}

FqVector vector_from_index(const PrimeField& field, std::size_t n, std::uint64_t index) {
  std::vector<std::uint32_t> digits(n);
  const std::uint32_t q = field.order();
  for (std::size_t i = n; i-- > 0;) {
    digits[i] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  return FqVector(field, std::move(digits));
}

std::uint64_t index_of(const FqVector& v) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < v.size(); ++i) idx = idx * v.field().order() + v[i];
  return idx;
}

std::uint64_t checked_pow(std::uint64_t base, std::size_t exponent) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > UINT64_MAX / base) throw std::overflow_error("integer power overflows 64 bits");
    result *= base;
  }
  return result;
}

}  // namespace qred
