#include "qred/kravchuk.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qred {

namespace {

int sign_of(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

double RootList::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < roots.size(); ++i) g = std::min(g, roots[i].value - roots[i - 1].value);
  return g;
}

double RootList::max_gap() const {
  double g = 0.0;
  for (std::size_t i = 1; i < roots.size(); ++i) g = std::max(g, roots[i].value - roots[i - 1].value);
  return g;
}

KrawtchoukContext::KrawtchoukContext(std::uint32_t q, std::size_t n) : q_(q), n_(n) {
  if (q < 2) throw std::invalid_argument("Krawtchouk parameter q must be >= 2");
  binom_.assign(n + 1, std::vector<BigInt>(n + 1, 0));
  for (std::size_t a = 0; a <= n; ++a) {
    binom_[a][0] = 1;
    for (std::size_t b = 1; b <= a; ++b) binom_[a][b] = binom_[a - 1][b - 1] + (b <= a - 1 ? binom_[a - 1][b] : BigInt(0));
  }
  qm1_pow_.resize(n + 1);
  qm1_pow_[0] = 1;
  for (std::size_t j = 1; j <= n; ++j) qm1_pow_[j] = qm1_pow_[j - 1] * (q - 1);
  q_pow_n_ = big_pow(q, n);
  table_.resize((n + 1) * (n + 1));
  for (std::size_t t = 0; t <= n; ++t)
    for (std::size_t x = 0; x <= n; ++x) table_[t * (n + 1) + x] = eval_by_definition(t, x);
}

void KrawtchoukContext::check_range(std::size_t t, std::size_t x) const {
  if (t > n_ || x > n_) throw std::out_of_range("Krawtchouk index outside [0, n]");
}

const BigInt& KrawtchoukContext::eval(std::size_t t, std::size_t x) const {
  check_range(t, x);
  return table_[t * (n_ + 1) + x];
}

BigInt KrawtchoukContext::eval_by_definition(std::size_t t, std::size_t x) const {
  check_range(t, x);
  BigInt sum = 0;
  for (std::size_t j = 0; j <= t; ++j) {
    if (j > x || t - j > n_ - x) continue;
    BigInt term = binom_[x][j] * binom_[n_ - x][t - j] * qm1_pow_[t - j];
    if (j % 2) sum -= term;
    else sum += term;
  }
  return sum;
}

BigInt KrawtchoukContext::scaled_eval(std::size_t t, const BigInt& a, const BigInt& d) const {
  if (t > n_) throw std::out_of_range("Krawtchouk degree outside [0, n]");
  const BigInt nd = BigInt(n_) * d;
  // falling products prod_{i<m}(a - i d) and prod_{i<m}(nd - a - i d)
  std::vector<BigInt> left(t + 1), right(t + 1);
  left[0] = right[0] = 1;
  for (std::size_t m = 1; m <= t; ++m) {
    left[m] = left[m - 1] * (a - BigInt(m - 1) * d);
    right[m] = right[m - 1] * (nd - a - BigInt(m - 1) * d);
  }
  BigInt sum = 0;
  for (std::size_t j = 0; j <= t; ++j) {
    BigInt term = binomial(static_cast<std::int64_t>(t), static_cast<std::int64_t>(j)) * left[j] * right[t - j] *
                  qm1_pow_[t - j];
    if (j % 2) sum -= term;
    else sum += term;
  }
  return sum;
}

double KrawtchoukContext::eval_real(std::size_t t, double x) const {
  const double q = q_, n = static_cast<double>(n_);
  double prev = 1.0;
  if (t == 0) return prev;
  double cur = (q - 1) * n - q * x;
  for (std::size_t s = 1; s < t; ++s) {
    const double sd = static_cast<double>(s);
    const double next = (((n - sd) * (q - 1) + sd - q * x) * cur - (q - 1) * (n - sd + 1) * prev) / (sd + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

BigInt KrawtchoukContext::recurrence_residual(std::size_t t, std::size_t x) const {
  if (x < 1 || x + 1 > n_) throw std::out_of_range("recurrence needs 1 <= x <= n-1");
  const BigInt qm1 = q_ - 1;
  const BigInt nx = BigInt(n_ - x);
  const BigInt mid = qm1 * nx + BigInt(x) - BigInt(q_) * BigInt(t);
  return qm1 * nx * eval(t, x + 1) - mid * eval(t, x) + BigInt(x) * eval(t, x - 1);
}

Rational KrawtchoukContext::measure(std::size_t j) const {
  check_range(0, j);
  return Rational(qm1_pow_[j] * binom_[n_][j], q_pow_n_);
}

Rational KrawtchoukContext::orthogonality_check(std::size_t s, std::size_t t) const {
  check_range(s, t);
  BigInt acc = 0;
  for (std::size_t j = 0; j <= n_; ++j) acc += eval(s, j) * eval(t, j) * qm1_pow_[j] * binom_[n_][j];
  return Rational(acc, q_pow_n_);
}

Rational KrawtchoukContext::normalized_mass(std::size_t t, std::size_t u) const {
  check_range(t, u);
  const BigInt& k = eval(t, u);
  return Rational(k * k * qm1_pow_[u] * binom_[n_][u], q_pow_n_ * qm1_pow_[t] * binom_[n_][t]);
}

RootList KrawtchoukContext::roots(std::size_t t, double tolerance) const {
  if (t < 1 || static_cast<double>(t) > static_cast<double>(n_) * (q_ - 1) / q_)
    throw std::invalid_argument("roots: need 1 <= t <= n(q-1)/q");

  RootList out;
  out.t = t;
  for (std::size_t per_unit : {std::size_t{1}, std::size_t{4}}) {
    out.roots.clear();
    out.scan_points_per_unit = per_unit;
    const BigInt d = per_unit;
    const std::size_t points = n_ * per_unit;
    std::vector<BigInt> values(points + 1);
    for (std::size_t a = 0; a <= points; ++a)
      values[a] = per_unit == 1 ? eval(t, a) : scaled_eval(t, BigInt(a), d);

    for (std::size_t a = 0; a <= points; ++a) {
      const double x = static_cast<double>(a) / per_unit;
      if (values[a] == 0) {
        out.roots.push_back(Root{x, x, x, x, x, true});
        continue;
      }
      if (a == points || values[a + 1] == 0 || sign_of(values[a]) == sign_of(values[a + 1])) continue;

      // Exact bisection on dyadic refinements of (a/D, (a+1)/D).
      BigInt lo = a, hi = a + 1, denom = d;
      BigInt v_lo = values[a], v_hi = values[a + 1];
      const int s_lo = sign_of(v_lo);
      Root root;
      root.bracket_lo = x;
      root.bracket_hi = static_cast<double>(a + 1) / per_unit;
      bool exact = false;
      while (to_double(Rational(hi - lo, denom)) > tolerance) {
        lo *= 2;
        hi *= 2;
        denom *= 2;
        const BigInt mid = lo + 1;
        const BigInt v_mid = scaled_eval(t, mid, denom);
        if (v_mid == 0) {
          lo = hi = mid;
          exact = true;
          break;
        }
        if (sign_of(v_mid) == s_lo) {
          lo = mid;
          v_lo = v_mid;
        } else {
          hi = mid;
          v_hi = v_mid;
        }
      }
      root.refined_lo = to_double(Rational(lo, denom));
      root.refined_hi = to_double(Rational(hi, denom));
      root.exact = exact;
      if (exact) {
        root.value = root.refined_lo;
      } else {
        // Linear interpolation inside the final bracket; both ends at one denominator.
        const BigInt v_lo_c = scaled_eval(t, lo, denom), v_hi_c = scaled_eval(t, hi, denom);
        const double frac = to_double(ratio(v_lo_c, v_lo_c - v_hi_c));
        root.value = root.refined_lo + frac * (root.refined_hi - root.refined_lo);
      }
      out.roots.push_back(root);
    }
    if (out.roots.size() >= t) break;
  }
  if (out.roots.size() != t) {
    throw std::runtime_error("roots: found " + std::to_string(out.roots.size()) + " sign changes for t = " +
                             std::to_string(t) + " after 1/4-step refinement");
  }
  return out;
}

bool KrawtchoukContext::root_spacing_certificate(std::size_t t) const {
  if (t < 1 || t > n_ / q_) throw std::invalid_argument("root spacing needs 1 <= t <= floor(n/q)");
  const RootList r = roots(t);
  return r.roots.size() < 2 || r.min_gap() >= 2.0 - 1e-6;
}

MassResult KrawtchoukContext::mass_between_roots(std::size_t t, std::size_t bracket) const {
  if (t < 1 || t > n_ / q_) throw std::invalid_argument("mass_between_roots needs 1 <= t <= floor(n/q)");
  return mass_between_roots(t, bracket, roots(t));
}

MassResult KrawtchoukContext::mass_between_roots(std::size_t t, std::size_t bracket, const RootList& r) const {
  if (t < 1 || t > n_ / q_) throw std::invalid_argument("mass_between_roots needs 1 <= t <= floor(n/q)");
  const std::size_t brackets = t == 1 ? 1 : t - 1;
  if (bracket >= brackets) throw std::out_of_range("bracket index out of range");
  const double lo = r.roots[bracket].value;
  const double hi = t == 1 ? static_cast<double>(n_) + 0.5 : r.roots[bracket + 1].value;

  MassResult out;
  out.bracket = bracket;
  out.bound = Rational(1, BigInt(q_ - 1) * boost::multiprecision::pow(BigInt(n_), 5));
  bool found = false;
  for (std::size_t u = static_cast<std::size_t>(std::floor(lo)) + 1; static_cast<double>(u) < hi && u <= n_; ++u) {
    if (static_cast<double>(u) <= lo) continue;
    if (r.roots[bracket].exact && static_cast<double>(u) == lo) continue;
    Rational m = normalized_mass(t, u);
    if (!found || m > out.mass) {
      out.mass = m;
      out.u = u;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("mass_between_roots: no integer strictly between consecutive roots");
  out.meets_bound = out.mass >= out.bound;
  return out;
}

std::string KrawtchoukContext::report_csv(const std::vector<std::size_t>& degrees) const {
  std::ostringstream os;
  os << "t,root_index,root,gap,u_star,mass\n";
  for (std::size_t t : degrees) {
    const RootList r = roots(t);
    const bool mass_ok = t <= n_ / q_;
    for (std::size_t i = 0; i < r.roots.size(); ++i) {
      os << t << ',' << i << ',' << format_sig(r.roots[i].value, 15) << ',';
      if (i + 1 < r.roots.size()) os << format_sig(r.roots[i + 1].value - r.roots[i].value, 15);
      os << ',';
      const bool has_bracket = t == 1 ? i == 0 : i + 1 < r.roots.size();
      if (mass_ok && has_bracket) {
        const MassResult m = mass_between_roots(t, i, r);
        os << m.u << ',' << format_sig(to_double(m.mass), 15);
      } else {
        os << ',';
      }
      os << '\n';
    }
  }
  return os.str();
}

KrawtchoukSuiteReport run_krawtchouk_suite(std::uint32_t q, std::size_t n) {
  const KrawtchoukContext kc(q, n);
  KrawtchoukSuiteReport r;
  r.q = q;
  r.n = n;
  for (std::size_t t = 0; t <= n; ++t)
    for (std::size_t x = 1; x + 1 <= n; ++x) r.recurrence_exact = r.recurrence_exact && kc.recurrence_residual(t, x) == 0;
  for (std::size_t s = 0; s <= n; ++s)
    for (std::size_t t = s; t <= n; ++t) {
      const Rational expected = s == t ? Rational(boost::multiprecision::pow(BigInt(q - 1), static_cast<unsigned>(t)) *
                                                 binomial(static_cast<std::int64_t>(n), static_cast<std::int64_t>(t)))
                                       : Rational(0);
      r.orthogonality_exact = r.orthogonality_exact && kc.orthogonality_check(s, t) == expected;
    }
  r.min_gap = std::numeric_limits<double>::infinity();
  r.min_mass_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= n / q; ++t) {
    const RootList roots = kc.roots(t);
    ++r.degrees_checked;
    r.root_counts_ok = r.root_counts_ok && roots.roots.size() == t;
    if (t >= 2) {
      r.min_gap = std::min(r.min_gap, roots.min_gap());
      r.max_gap = std::max(r.max_gap, roots.max_gap());
      r.spacing_ok = r.spacing_ok && roots.min_gap() >= 2.0 - 1e-6;
    }
    const std::size_t brackets = t == 1 ? 1 : t - 1;
    for (std::size_t b = 0; b < brackets; ++b) {
      const MassResult m = kc.mass_between_roots(t, b, roots);
      r.mass_ok = r.mass_ok && m.meets_bound;
      r.min_mass_ratio = std::min(r.min_mass_ratio, to_double(Rational(m.mass / m.bound)));
    }
  }
  return r;
}

}  // namespace qred
