#include "qred/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <iostream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "qred/analytic.hpp"
#include "qred/exact.hpp"
#include "qred/fq.hpp"
#include "qred/kravchuk.hpp"

namespace qred::quantum {

std::uint64_t Register::size() const { return checked_pow(radix, digits); }

std::uint64_t shape_size(const Shape& shape) {
  std::uint64_t s = 1;
  for (const auto& r : shape) {
    const std::uint64_t rs = r.size();
    if (s > std::numeric_limits<std::uint64_t>::max() / rs) throw std::overflow_error("state size overflow");
    s *= rs;
  }
  return s;
}

StateVector::StateVector(Shape shape) : shape_(std::move(shape)), amps_(shape_size(shape_), Amp(0.0)) {
  amps_[0] = 1.0;
}

StateVector::StateVector(Shape shape, std::vector<Amp> amplitudes) : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
  if (amps_.size() != shape_size(shape_)) throw ShapeMismatch("amplitude count does not match register shape");
}

std::uint64_t StateVector::stride(std::size_t r) const {
  if (r >= shape_.size()) throw std::out_of_range("register index");
  std::uint64_t s = 1;
  for (std::size_t i = r + 1; i < shape_.size(); ++i) s *= shape_[i].size();
  return s;
}

std::uint64_t StateVector::register_value(std::uint64_t i, std::size_t r) const {
  return (i / stride(r)) % shape_[r].size();
}

std::uint64_t StateVector::compose(const std::vector<std::uint64_t>& values) const {
  if (values.size() != shape_.size()) throw ShapeMismatch("register value count");
  std::uint64_t idx = 0;
  for (std::size_t r = 0; r < shape_.size(); ++r) {
    if (values[r] >= shape_[r].size()) throw std::out_of_range("register value");
    idx = idx * shape_[r].size() + values[r];
  }
  return idx;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw std::logic_error("cannot normalize the zero vector");
  for (auto& a : amps_) a /= nrm;
}

void StateVector::check_normalized(double tol) const {
  const double nrm = norm();
  if (std::abs(nrm - 1.0) > tol) throw std::logic_error("state norm drifted to " + format_sig(nrm, 15));
}

Amp StateVector::inner(const StateVector& other) const {
  if (shape_ != other.shape_) throw ShapeMismatch("inner product of states with different shapes");
  Amp s = 0.0;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

namespace {

void dft_register(StateVector& state, std::size_t r, bool inverse) {
  const Register reg = state.shape().at(r);
  if (!is_prime(reg.radix)) throw FieldError("QFT needs a prime radix, got " + std::to_string(reg.radix));
  const std::uint32_t q = reg.radix;
  std::vector<Amp> omega(q);
  const double sign = inverse ? -1.0 : 1.0;
  for (std::uint32_t j = 0; j < q; ++j) omega[j] = std::polar(1.0, sign * 2.0 * std::numbers::pi * j / q);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));

  auto& amps = state.amplitudes();
  const std::uint64_t reg_stride = state.stride(r);
  std::vector<Amp> in(q), out(q);
  for (std::size_t d = 0; d < reg.digits; ++d) {
    const std::uint64_t step = reg_stride * checked_pow(q, reg.digits - 1 - d);
    const std::uint64_t block = step * q;
    for (std::uint64_t base = 0; base < amps.size(); base += block) {
      for (std::uint64_t off = 0; off < step; ++off) {
        const std::uint64_t i0 = base + off;
        for (std::uint32_t x = 0; x < q; ++x) in[x] = amps[i0 + x * step];
        for (std::uint32_t y = 0; y < q; ++y) {
          Amp acc = 0.0;
          for (std::uint32_t x = 0; x < q; ++x) acc += omega[(static_cast<std::uint64_t>(x) * y) % q] * in[x];
          out[y] = acc * scale;
        }
        for (std::uint32_t y = 0; y < q; ++y) amps[i0 + y * step] = out[y];
      }
    }
  }
}

}  // namespace

void qft_register(StateVector& state, std::size_t r) { dft_register(state, r, false); }
void inverse_qft_register(StateVector& state, std::size_t r) { dft_register(state, r, true); }

std::size_t digit_weight(std::uint64_t value, const Register& reg) {
  std::size_t w = 0;
  for (std::size_t d = 0; d < reg.digits; ++d) {
    w += value % reg.radix != 0;
    value /= reg.radix;
  }
  return w;
}

RadialErrorDistribution RadialErrorDistribution::sphere(std::uint32_t q, std::size_t n, std::size_t t) {
  if (t > n) throw std::invalid_argument("sphere radius exceeds n");
  std::vector<double> f(n + 1, 0.0);
  f[t] = 1.0 / std::sqrt(to_double(sphere_size(q, n, t)));
  RadialErrorDistribution d(ProfileKind::Sphere, q, n, std::move(f));
  d.t_ = t;
  return d;
}

RadialErrorDistribution RadialErrorDistribution::bernoulli(std::uint32_t q, std::size_t n, double p) {
  if (!(p >= 0 && p <= (q - 1.0) / q)) throw std::domain_error("crossover probability outside [0, (q-1)/q]");
  std::vector<double> f(n + 1);
  for (std::size_t w = 0; w <= n; ++w)
    f[w] = std::sqrt(std::pow(1 - p, static_cast<double>(n - w)) * std::pow(p / (q - 1), static_cast<double>(w)));
  RadialErrorDistribution d(ProfileKind::Bernoulli, q, n, std::move(f));
  d.p_ = p;
  d.t_ = static_cast<std::size_t>(std::lround(p * static_cast<double>(n)));
  return d;
}

RadialErrorDistribution RadialErrorDistribution::custom(std::uint32_t q, std::size_t n, std::vector<double> f) {
  if (f.size() != n + 1) throw std::invalid_argument("profile needs n+1 entries");
  double total = 0.0;
  for (std::size_t w = 0; w <= n; ++w) {
    if (!(f[w] >= 0)) throw std::invalid_argument("profile must be nonnegative");
    total += to_double(sphere_size(q, n, w)) * f[w] * f[w];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("profile is not normalized");
  RadialErrorDistribution d(ProfileKind::Custom, q, n, std::move(f));
  std::size_t best = 0;
  for (std::size_t w = 0; w <= n; ++w)
    if (d.weight_probability(w) > d.weight_probability(best)) best = w;
  d.t_ = best;
  return d;
}

double RadialErrorDistribution::weight_probability(std::size_t w) const {
  return to_double(sphere_size(q_, n_, w)) * f_.at(w) * f_.at(w);
}

double RadialErrorDistribution::overlap_with_ones() const {
  double s = 0.0;
  for (std::size_t w = 0; w <= n_; ++w) s += to_double(sphere_size(q_, n_, w)) * f_[w];
  return s;
}

std::vector<double> RadialErrorDistribution::dual_profile() const {
  std::vector<double> out(n_ + 1);
  switch (kind_) {
    case ProfileKind::Sphere: {
      const KrawtchoukContext kc(q_, n_);
      const BigInt denom = big_pow(q_, n_) * sphere_size(q_, n_, t_);
      for (std::size_t u = 0; u <= n_; ++u) {
        const BigInt& k = kc.eval(t_, u);
        const double mag = std::sqrt(to_double(Rational(k * k, denom)));
        out[u] = k < 0 ? -mag : mag;
      }
      return out;
    }
    case ProfileKind::Bernoulli: {
      const double pp = analytic::bernoulli_dual(q_, p_).p_perp;
      for (std::size_t u = 0; u <= n_; ++u)
        out[u] = std::sqrt(std::pow(1 - pp, static_cast<double>(n_ - u)) * std::pow(pp / (q_ - 1), static_cast<double>(u)));
      return out;
    }
    case ProfileKind::Custom: break;
  }
  throw std::invalid_argument("dual_profile supports sphere and Bernoulli profiles only");
}

StateVector RadialErrorDistribution::embed() const {
  const Register reg{q_, n_};
  std::vector<Amp> amps(reg.size());
  for (std::uint64_t i = 0; i < amps.size(); ++i) amps[i] = f_[digit_weight(i, reg)];
  return StateVector({reg}, std::move(amps));
}

double trace_distance(const StateVector& a, const StateVector& b) {
  // 1 - |<a|b>| = |a - e^{i phi} b|^2 / 2 for unit vectors, which avoids cancelling near 1.
  const Amp ov = a.inner(b);
  const double mag = std::abs(ov);
  const Amp phase = mag > 0 ? ov / mag : Amp(1.0);
  double d = 0.0;
  for (std::uint64_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - phase * b[i]);
  const double gap = std::clamp(d / 2, 0.0, 1.0);
  return std::sqrt(gap * (2.0 - gap));
}

double stat_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ShapeMismatch("distributions have different supports");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

double hellinger(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ShapeMismatch("distributions have different supports");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::sqrt(p[i] * q[i]);
  return std::sqrt(std::max(0.0, 1.0 - s));
}

std::vector<double> measure_weight_distribution(const StateVector& state, std::size_t r) {
  const Register reg = state.shape().at(r);
  std::vector<double> out(reg.digits + 1, 0.0);
  for (std::uint64_t i = 0; i < state.size(); ++i)
    out[digit_weight(state.register_value(i, r), reg)] += std::norm(state[i]);
  return out;
}

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p(state.size());
  for (std::uint64_t i = 0; i < state.size(); ++i) p[i] = std::norm(state[i]);
  return p;
}

double AmplificationPlan::predicted_success(double p_true) const {
  const double theta = std::asin(std::sqrt(std::clamp(alpha * p_true, 0.0, 1.0)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return s * s;
}

AmplificationPlan plan_amplification(double q_est, std::size_t max_iterations) {
  if (!(q_est > 0 && q_est < 1)) throw std::domain_error("q_est must lie in (0, 1)");
  AmplificationPlan plan;
  plan.q_est = q_est;
  for (std::size_t t = 0; t <= max_iterations; ++t) {
    const double rho = std::numbers::pi / (4.0 * static_cast<double>(t) + 2.0);
    const double s = std::sin(rho);
    const double alpha = s * s / q_est;
    if (alpha <= 1.0) {
      plan.alpha = alpha;
      plan.rho = rho;
      plan.iterations = t;
      return plan;
    }
  }
  plan.feasible = false;
  plan.alpha = 1.0;
  plan.rho = std::asin(std::sqrt(q_est));
  plan.iterations = 0;
  plan.warning = "no T <= " + std::to_string(max_iterations) + " closes the rotation; amplification skipped";
  return plan;
}

namespace {

StateVector slice(const Shape& shape, std::vector<Amp> amps) { return StateVector(shape, std::move(amps)); }

}  // namespace

AmplifyResult amplify(const UnitaryBuilder& builder, const std::function<bool(std::uint64_t)>& good, double q_est,
                      std::size_t max_iterations) {
  return amplify(builder, good, plan_amplification(q_est, max_iterations));
}

AmplifyResult amplify(const UnitaryBuilder& builder, const std::function<bool(std::uint64_t)>& good,
                      const AmplificationPlan& plan) {
  if (!plan.feasible) std::cerr << "warning: " << plan.warning << '\n';
  const Shape base_shape = builder.initial.shape();
  const std::uint64_t dim = builder.initial.size();
  const double c = std::sqrt(std::max(0.0, 1.0 - plan.alpha)), s = std::sqrt(plan.alpha);

  StateVector built = builder.initial;
  builder.forward(built);
  StateVector h0 = slice(base_shape, built.amplitudes()), h1 = slice(base_shape, built.amplitudes());
  for (std::uint64_t i = 0; i < dim; ++i) {
    h0[i] *= c;
    h1[i] *= s;
  }

  const auto& init = builder.initial.amplitudes();
  for (std::size_t it = 0; it < plan.iterations; ++it) {
    for (std::uint64_t i = 0; i < dim; ++i)
      if (good(i)) h1[i] = -h1[i];
    builder.inverse(h0);
    builder.inverse(h1);
    for (std::uint64_t i = 0; i < dim; ++i) {
      const Amp a0 = h0[i], a1 = h1[i];
      h0[i] = c * a0 + s * a1;
      h1[i] = -s * a0 + c * a1;
    }
    // 2|init,0><init,0| - I
    Amp proj = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) proj += std::conj(init[i]) * h0[i];
    for (std::uint64_t i = 0; i < dim; ++i) {
      h0[i] = 2.0 * proj * init[i] - h0[i];
      h1[i] = -h1[i];
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
      const Amp a0 = h0[i], a1 = h1[i];
      h0[i] = c * a0 - s * a1;
      h1[i] = s * a0 + c * a1;
    }
    builder.forward(h0);
    builder.forward(h1);
  }

  Shape shape = base_shape;
  shape.push_back(Register{2, 1});
  std::vector<Amp> amps(dim * 2);
  double good_mass = 0.0;
  for (std::uint64_t i = 0; i < dim; ++i) {
    amps[2 * i] = h0[i];
    amps[2 * i + 1] = h1[i];
    if (good(i)) good_mass += std::norm(h1[i]);
  }
  AmplifyResult out{StateVector(std::move(shape), std::move(amps)), plan, good_mass};
  out.state.check_normalized();
  return out;
}

UnitaryBuilder synthetic_toy(double p) {
  if (!(p >= 0 && p <= 1)) throw std::domain_error("toy success probability outside [0, 1]");
  const double c = std::sqrt(1 - p), s = std::sqrt(p);
  auto rotate = [c, s](StateVector& v, double sign) {
    const Amp a0 = v[0], a1 = v[1];
    v[0] = c * a0 - sign * s * a1;
    v[1] = sign * s * a0 + c * a1;
  };
  return UnitaryBuilder{StateVector({Register{2, 1}}), [rotate](StateVector& v) { rotate(v, 1.0); },
                        [rotate](StateVector& v) { rotate(v, -1.0); }};
}

RadialCheck check_sphere_qft(std::uint32_t q, std::size_t n) {
  RadialCheck out;
  const Register reg{q, n};
  for (std::size_t t = 0; t <= n; ++t) {
    const auto dist = RadialErrorDistribution::sphere(q, n, t);
    StateVector s = dist.embed();
    qft_register(s, 0);
    out.max_norm_error = std::max(out.max_norm_error, std::abs(s.norm() - 1.0));
    const auto fperp = dist.dual_profile();
    std::vector<Amp> first(n + 1);
    std::vector<bool> seen(n + 1, false);
    for (std::uint64_t y = 0; y < s.size(); ++y) {
      const std::size_t w = digit_weight(y, reg);
      out.max_profile_deviation = std::max(out.max_profile_deviation, std::abs(s[y] - Amp(fperp[w])));
      if (!seen[w]) {
        first[w] = s[y];
        seen[w] = true;
      }
      out.max_radial_spread = std::max(out.max_radial_spread, std::abs(s[y] - first[w]));
    }
    ++out.states;
  }
  return out;
}

double hellinger_identity_gap(const RadialErrorDistribution& dist) {
  const StateVector pi = dist.embed();
  double sum = 0.0;
  std::vector<double> mu(pi.size()), uniform(pi.size(), 1.0 / static_cast<double>(pi.size()));
  for (std::uint64_t i = 0; i < pi.size(); ++i) {
    sum += pi[i].real();
    mu[i] = std::norm(pi[i]);
  }
  const double lhs = sum * sum / static_cast<double>(pi.size());
  const double h = hellinger(mu, uniform);
  const double one_minus_h2 = 1.0 - h * h;
  return std::abs(lhs - one_minus_h2 * one_minus_h2);
}

namespace {

void put_f64(std::ostream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(buf, 8);
}

double get_f64(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) throw std::runtime_error("truncated state dump");
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | buf[i];
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

}  // namespace

void write_state_dump(std::ostream& os, const StateVector& state, std::uint32_t q, std::size_t n, std::size_t l) {
  nlohmann::json header;
  header["q"] = q;
  header["n"] = n;
  header["l"] = l;
  header["shape"] = nlohmann::json::array();
  for (const auto& r : state.shape()) header["shape"].push_back({r.radix, r.digits});
  os << header.dump() << '\n';
  for (const auto& a : state.amplitudes()) {
    put_f64(os, a.real());
    put_f64(os, a.imag());
  }
}

StateVector read_state_dump(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing state dump header");
  const auto header = nlohmann::json::parse(line);
  Shape shape;
  for (const auto& r : header.at("shape")) shape.push_back(Register{r.at(0).get<std::uint32_t>(), r.at(1).get<std::size_t>()});
  std::vector<Amp> amps(shape_size(shape));
  for (auto& a : amps) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    a = Amp(re, im);
  }
  return StateVector(std::move(shape), std::move(amps));
}

}  // namespace qred::quantum
