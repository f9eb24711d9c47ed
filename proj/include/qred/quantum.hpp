#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qred::quantum {

using Amp = std::complex<double>;

/// A register of `digits` symbols from Z_radix. Zero digits is a trivial register of size 1.
struct Register {
  std::uint32_t radix = 2;
  std::size_t digits = 0;

  std::uint64_t size() const;
  bool operator==(const Register&) const = default;
};

using Shape = std::vector<Register>;

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense amplitudes over a mixed-radix basis. Register 0 is the most significant;
/// inside a register the first digit is the most significant.
class StateVector {
 public:
  /// Basis state |0...0>.
  explicit StateVector(Shape shape);
  StateVector(Shape shape, std::vector<Amp> amplitudes);

  const Shape& shape() const { return shape_; }
  std::uint64_t size() const { return amps_.size(); }
  std::vector<Amp>& amplitudes() { return amps_; }
  const std::vector<Amp>& amplitudes() const { return amps_; }
  Amp& operator[](std::uint64_t i) { return amps_[i]; }
  const Amp& operator[](std::uint64_t i) const { return amps_[i]; }

  /// Index step of one unit in register r.
  std::uint64_t stride(std::size_t r) const;
  /// Value of register r at basis index i.
  std::uint64_t register_value(std::uint64_t i, std::size_t r) const;
  std::uint64_t compose(const std::vector<std::uint64_t>& register_values) const;

  double norm() const;
  void normalize();
  /// Throws std::logic_error when |norm - 1| > tol.
  void check_normalized(double tol = 1e-9) const;

  Amp inner(const StateVector& other) const;  // <this|other>

 private:
  Shape shape_;
  std::vector<Amp> amps_;
};

std::uint64_t shape_size(const Shape& shape);

/// y -> q^{-n/2} sum_x chi_y(x) amp(x) on register r, as n single-coordinate q-point DFTs.
void qft_register(StateVector& state, std::size_t r);
void inverse_qft_register(StateVector& state, std::size_t r);

/// Hamming weight of a register value (digits in base radix).
std::size_t digit_weight(std::uint64_t value, const Register& reg);

enum class ProfileKind { Sphere, Bernoulli, Custom };

/// Radial nonnegative error amplitudes pi_e = f(|e|) on F_q^n.
class RadialErrorDistribution {
 public:
  static RadialErrorDistribution sphere(std::uint32_t q, std::size_t n, std::size_t t);
  static RadialErrorDistribution bernoulli(std::uint32_t q, std::size_t n, double p);
  /// Validates f >= 0 and sum_w S_w f(w)^2 = 1 within 1e-9.
  static RadialErrorDistribution custom(std::uint32_t q, std::size_t n, std::vector<double> f);

  ProfileKind kind() const { return kind_; }
  std::uint32_t q() const { return q_; }
  std::size_t n() const { return n_; }
  std::size_t t() const { return t_; }
  double p() const { return p_; }
  const std::vector<double>& profile() const { return f_; }
  double f(std::size_t w) const { return f_.at(w); }

  /// S_w f(w)^2
  double weight_probability(std::size_t w) const;
  double p_t() const { return weight_probability(t_); }
  /// sum_e pi_e
  double overlap_with_ones() const;

  /// Closed-form f_perp(u), u = 0..n. Sphere: K_t(u)/sqrt(q^n S_t). Bernoulli: (1-p')^{(n-u)/2}(p'/(q-1))^{u/2}.
  std::vector<double> dual_profile() const;

  /// |pi> as a single-register state.
  StateVector embed() const;

 private:
  RadialErrorDistribution(ProfileKind kind, std::uint32_t q, std::size_t n, std::vector<double> f)
      : kind_(kind), q_(q), n_(n), f_(std::move(f)) {}

  ProfileKind kind_;
  std::uint32_t q_;
  std::size_t n_;
  std::size_t t_ = 0;
  double p_ = 0.0;
  std::vector<double> f_;
};

/// sqrt(1 - |<a|b>|^2)
double trace_distance(const StateVector& a, const StateVector& b);
/// (1/2) sum |p - q|
double stat_distance(const std::vector<double>& p, const std::vector<double>& q);
/// sqrt(1 - sum sqrt(p q))
double hellinger(const std::vector<double>& p, const std::vector<double>& q);

/// Probability of each Hamming weight on register r, marginalizing the rest.
std::vector<double> measure_weight_distribution(const StateVector& state, std::size_t r);
std::vector<double> probabilities(const StateVector& state);

struct AmplificationPlan {
  double q_est = 0.0;
  double alpha = 1.0;
  double rho = 0.0;  // arcsin sqrt(alpha q_est) = pi / (4T + 2)
  std::size_t iterations = 0;
  bool feasible = true;
  std::string warning;

  /// sin^2((2T+1) arcsin sqrt(alpha p_true))
  double predicted_success(double p_true) const;
};

/// Scans T = 0, 1, 2, ... and keeps the first T whose alpha = sin^2(pi/(4T+2))/q_est is <= 1.
AmplificationPlan plan_amplification(double q_est, std::size_t max_iterations = 1u << 20);

/// A state preparation W|initial> given as a forward/inverse pair acting in place.
struct UnitaryBuilder {
  StateVector initial;
  std::function<void(StateVector&)> forward;
  std::function<void(StateVector&)> inverse;
};

struct AmplifyResult {
  /// Built-state shape with one trailing ancilla qubit.
  StateVector state;
  AmplificationPlan plan;
  /// Mass on good basis states with ancilla 1.
  double good_probability = 0.0;
};

/// Amplitude amplification with the alpha-rotation ancilla. Good = predicate(base index) and ancilla = 1.
/// Each iteration negates the good part, undoes W R_alpha, reflects about |initial>|0> and redoes W R_alpha.
AmplifyResult amplify(const UnitaryBuilder& builder, const std::function<bool(std::uint64_t)>& good, double q_est,
                      std::size_t max_iterations = 1u << 20);
AmplifyResult amplify(const UnitaryBuilder& builder, const std::function<bool(std::uint64_t)>& good,
                      const AmplificationPlan& plan);

/// One qubit prepared as sqrt(1-p)|0> + sqrt(p)|1>; good = |1>.
UnitaryBuilder synthetic_toy(double p);

struct RadialCheck {
  std::size_t states = 0;
  /// max |QFT(pi)_y - f_perp(|y|)| over all t and y
  double max_profile_deviation = 0.0;
  /// max amplitude spread inside one weight class
  double max_radial_spread = 0.0;
  double max_norm_error = 0.0;
};

/// QFT of the embedded weight-t sphere state for every t in [0, n], against the Krawtchouk profile.
RadialCheck check_sphere_qft(std::uint32_t q, std::size_t n);

/// |(sum_e pi_e)^2 / q^n - (1 - H^2(pi^2, uniform))^2|, both sides summed over all q^n errors.
double hellinger_identity_gap(const RadialErrorDistribution& dist);

/// JSON header line {q, n, l, shape}, then little-endian float64 (re, im) pairs.
void write_state_dump(std::ostream& os, const StateVector& state, std::uint32_t q, std::size_t n, std::size_t l);
StateVector read_state_dump(std::istream& is);

}  // namespace qred::quantum
