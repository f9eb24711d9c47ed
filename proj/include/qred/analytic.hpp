#pragma once

#include <string>
#include <vector>

namespace qred::analytic {

/// h_q(x) = -x log_q(x/(q-1)) - (1-x) log_q(1-x), x in [0, (q-1)/q].
double entropy(double q, double x);
/// Inverse of h_q on [0, (q-1)/q] by bisection, |h_q(x) - y| <= 1e-12.
double entropy_inverse(double q, double y);

/// (sqrt((q-1)(1-tau)) - sqrt(tau))^2 / q, tau in [0, (q-1)/q].
double tau_perp(double q, double tau);

/// (q-1)/q (1 - dim/n)
double omega_easy(double q, double n, double dim);

enum class Verdict { Useful, Easy, Vacuous };
std::string to_string(Verdict v);

struct ParamPoint {
  double q = 2;
  double rate = 0.5;
  double tau = 0.0;
  double tau_perp = 0.0;
  double delta_gv_primal = 0.0;  // h_q^{-1}(1-R)
  double delta_gv_dual = 0.0;    // h_q^{-1}(R)
  double omega_easy_dual = 0.0;  // (q-1)/q R
  Verdict verdict = Verdict::Easy;
};

/// Useful iff delta_gv_dual <= tau_perp < omega_easy_dual.
ParamPoint evaluate_point(double q, double rate, double tau);

struct RateSummary {
  double q = 2;
  double rate = 0.5;
  double tau_star = 0.0;  // delta_gv_primal
  double tau_perp_at_star = 0.0;
  double band_low = 0.0;
  double band_high = 0.0;
  bool any_useful = false;
  Verdict verdict_at_star = Verdict::Easy;
};

struct UsefulnessScan {
  std::vector<ParamPoint> points;
  std::vector<RateSummary> per_rate;
};

/// Rate grid values R and tau grid values; points only for tau <= delta_gv_primal(R).
UsefulnessScan usefulness_scan(double q, const std::vector<double>& rates, const std::vector<double>& taus);

/// start, start+step, ... up to stop (inclusive within 1e-9); index-based to avoid drift.
std::vector<double> grid(double start, double stop, double step);
std::vector<double> default_rate_grid();
std::vector<double> default_tau_grid(double q);

struct BernoulliProfile {
  double q = 2;
  double p = 0.0;
  double p_perp = 0.0;
};

BernoulliProfile bernoulli_dual(double q, double p);

/// log_q(<pi_try|1>^2 / q^{n-k}) = k + n log_q(1 - tau_perp).
double bernoulli_obstruction(double q, double n, double k, double tau);

struct ObstructionScan {
  std::size_t grid_points = 0;
  std::size_t feasible = 0;  // tau meeting (i), (ii), (iii) together
  std::size_t meets_i = 0, meets_ii = 0, meets_iii = 0;
  std::vector<double> feasible_taus;
};

/// Asymptotic conditions per unit length at rate R:
/// (i) tau <= delta_gv_primal, (ii) tau_perp <= omega_easy_dual, (iii) R + log_q(1-tau_perp) < 0.
ObstructionScan bernoulli_obstruction_scan(double q, double rate, double tau_step = 1e-3);

/// alpha = h_q((1-delta) delta_gv) - h_q(delta_gv), delta_gv = h_q^{-1}(1-R).
double gv_lemma_exponent(double q, double rate, double delta);

/// CSV helpers (12 significant digits, header row).
std::string fig1_csv(const UsefulnessScan& scan);
std::string fig2_csv(const UsefulnessScan& scan);

}  // namespace qred::analytic
