#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qred/exact.hpp"

namespace qred {

/// One located root of K_t.
struct Root {
  double value = 0.0;
  /// Sign-change bracket from the scan (integer step, or 1/4 step when refined).
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  /// Bisection interval; |value - true root| <= refined_hi - refined_lo.
  double refined_lo = 0.0;
  double refined_hi = 0.0;
  bool exact = false;  // K_t vanishes exactly at `value`
};

struct RootList {
  std::size_t t = 0;
  std::vector<Root> roots;
  /// Scan resolution that found all t sign changes (1 or 4 points per unit).
  std::size_t scan_points_per_unit = 1;

  double min_gap() const;
  double max_gap() const;
};

struct MassResult {
  std::size_t bracket = 0;
  std::size_t u = 0;
  /// K_t(u)^2 mu(u) / ((q-1)^t C(n,t)), mu(j) = (q-1)^j C(n,j) / q^n.
  Rational mass;
  /// 1 / ((q-1) n^5)
  Rational bound;
  bool meets_bound = false;
};

/// Exact Krawtchouk table K_t(x) for t, x in [0, n] with parameter q.
class KrawtchoukContext {
 public:
  KrawtchoukContext(std::uint32_t q, std::size_t n);

  std::uint32_t q() const { return q_; }
  std::size_t n() const { return n_; }

  const BigInt& eval(std::size_t t, std::size_t x) const;

  /// Sum_j (-1)^j C(x,j) C(n-x,t-j) (q-1)^{t-j}, computed without the cache.
  BigInt eval_by_definition(std::size_t t, std::size_t x) const;

  /// D^t · t! · K_t(a/D): exact, same sign as K_t at the rational point a/D.
  BigInt scaled_eval(std::size_t t, const BigInt& a, const BigInt& d) const;

  /// Floating evaluation at real x via the three-term recurrence in the degree.
  double eval_real(std::size_t t, double x) const;

  /// (q-1)(n-x)K_t(x+1) - ((q-1)(n-x)+x-qt)K_t(x) + xK_t(x-1); zero for valid inputs.
  BigInt recurrence_residual(std::size_t t, std::size_t x) const;

  /// Sum_j K_s(j) K_t(j) mu(j).
  Rational orthogonality_check(std::size_t s, std::size_t t) const;

  /// mu(j) = (q-1)^j C(n,j) / q^n
  Rational measure(std::size_t j) const;

  /// Normalized mass K_t(u)^2 mu(u) / ((q-1)^t C(n,t)); equals S_u |f_perp(u)|^2 for the sphere state.
  Rational normalized_mass(std::size_t t, std::size_t u) const;

  RootList roots(std::size_t t, double tolerance = 1e-9) const;

  bool root_spacing_certificate(std::size_t t) const;

  /// Mass maximiser among integers strictly between roots k and k+1 (0-based).
  /// For t = 1 the single bracket is (x_1, n].
  MassResult mass_between_roots(std::size_t t, std::size_t bracket) const;
  MassResult mass_between_roots(std::size_t t, std::size_t bracket, const RootList& roots) const;

  /// CSV: t,root_index,root,gap,u_star,mass with 15 significant digits.
  std::string report_csv(const std::vector<std::size_t>& degrees) const;

 private:
  void check_range(std::size_t t, std::size_t x) const;

  std::uint32_t q_;
  std::size_t n_;
  std::vector<std::vector<BigInt>> binom_;  // C(a, b), a, b <= n
  std::vector<BigInt> qm1_pow_;             // (q-1)^j
  BigInt q_pow_n_;
  std::vector<BigInt> table_;               // row-major (n+1)x(n+1), t major
};

struct KrawtchoukSuiteReport {
  std::uint32_t q = 2;
  std::size_t n = 0;
  bool recurrence_exact = true;
  bool orthogonality_exact = true;
  bool root_counts_ok = true;
  bool spacing_ok = true;
  bool mass_ok = true;
  double min_gap = 0.0;          // over t in [2, floor(n/q)]
  double max_gap = 0.0;
  double min_mass_ratio = 0.0;   // min over brackets of mass / bound
  std::size_t degrees_checked = 0;

  bool passed() const { return recurrence_exact && orthogonality_exact && root_counts_ok && spacing_ok && mass_ok; }
};

/// Exact recurrence and orthogonality for all (t, x), then roots, spacing and bracket masses for t <= floor(n/q).
KrawtchoukSuiteReport run_krawtchouk_suite(std::uint32_t q, std::size_t n);

}  // namespace qred
