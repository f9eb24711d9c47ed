#include "qred/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qred/exact.hpp"

namespace qred::analytic {

namespace {

constexpr double kDomainSlack = 1e-12;

void check_q(double q) {
  if (!(q >= 2)) throw std::domain_error("q must be >= 2");
}

double clamp_to_domain(double q, double x, const char* what) {
  const double top = (q - 1) / q;
  if (!(x >= -kDomainSlack && x <= top + kDomainSlack))
    throw std::domain_error(std::string(what) + " outside [0, (q-1)/q]");
  return std::min(std::max(x, 0.0), top);
}

}  // namespace

double entropy(double q, double x) {
  check_q(q);
  x = clamp_to_domain(q, x, "entropy argument");
  const double lq = std::log(q);
  double h = 0.0;
  if (x > 0) h -= x * std::log(x / (q - 1)) / lq;
  if (x < 1) h -= (1 - x) * std::log1p(-x) / lq;
  return h;
}

double entropy_inverse(double q, double y) {
  check_q(q);
  if (!(y >= -kDomainSlack && y <= 1 + kDomainSlack)) throw std::domain_error("entropy_inverse argument outside [0, 1]");
  y = std::min(std::max(y, 0.0), 1.0);
  double lo = 0.0, hi = (q - 1) / q;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (entropy(q, mid) <= y) lo = mid;
    else hi = mid;
  }
  return std::abs(entropy(q, lo) - y) <= std::abs(entropy(q, hi) - y) ? lo : hi;
}

double tau_perp(double q, double tau) {
  check_q(q);
  tau = clamp_to_domain(q, tau, "tau");
  const double d = std::sqrt((q - 1) * (1 - tau)) - std::sqrt(tau);
  return d * d / q;
}

double omega_easy(double q, double n, double dim) {
  check_q(q);
  if (!(dim >= 0 && dim <= n)) throw std::domain_error("omega_easy needs 0 <= dim <= n");
  return (q - 1) / q * (1 - dim / n);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Useful: return "useful";
    case Verdict::Easy: return "easy";
    case Verdict::Vacuous: return "vacuous";
  }
  return "unknown";
}

ParamPoint evaluate_point(double q, double rate, double tau) {
  if (!(rate > 0 && rate < 1)) throw std::domain_error("rate must lie in (0, 1)");
  ParamPoint p;
  p.q = q;
  p.rate = rate;
  p.tau = tau;
  p.tau_perp = tau_perp(q, tau);
  p.delta_gv_primal = entropy_inverse(q, 1 - rate);
  p.delta_gv_dual = entropy_inverse(q, rate);
  p.omega_easy_dual = omega_easy(q, 1.0, 1.0 - rate);
  if (p.tau_perp >= p.omega_easy_dual) p.verdict = Verdict::Easy;
  else if (p.tau_perp < p.delta_gv_dual) p.verdict = Verdict::Vacuous;
  else p.verdict = Verdict::Useful;
  return p;
}

std::vector<double> grid(double start, double stop, double step) {
  if (!(step > 0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop))
    throw std::invalid_argument("invalid grid");
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) g.push_back(start + static_cast<double>(i) * step);
  return g;
}

std::vector<double> default_rate_grid() { return grid(0.05, 0.95, 0.05); }

std::vector<double> default_tau_grid(double q) { return grid(0.0, (q - 1) / q, 1e-3); }

UsefulnessScan usefulness_scan(double q, const std::vector<double>& rates, const std::vector<double>& taus) {
  UsefulnessScan scan;
  for (double r : rates) {
    const ParamPoint star = evaluate_point(q, r, entropy_inverse(q, 1 - r));
    RateSummary s;
    s.q = q;
    s.rate = r;
    s.tau_star = star.delta_gv_primal;
    s.tau_perp_at_star = star.tau_perp;
    s.band_low = star.delta_gv_dual;
    s.band_high = star.omega_easy_dual;
    s.verdict_at_star = star.verdict;
    for (double tau : taus) {
      if (tau > star.delta_gv_primal) continue;
      ParamPoint p = evaluate_point(q, r, tau);
      s.any_useful = s.any_useful || p.verdict == Verdict::Useful;
      scan.points.push_back(p);
    }
    // tau* itself is rarely a grid node; tau_perp is smallest there.
    s.any_useful = s.any_useful || star.verdict == Verdict::Useful;
    scan.per_rate.push_back(s);
  }
  return scan;
}

BernoulliProfile bernoulli_dual(double q, double p) { return BernoulliProfile{q, p, tau_perp(q, p)}; }

double bernoulli_obstruction(double q, double n, double k, double tau) {
  const double tp = tau_perp(q, tau);
  if (tp >= 1.0) return -std::numeric_limits<double>::infinity();
  return k + n * std::log1p(-tp) / std::log(q);
}

ObstructionScan bernoulli_obstruction_scan(double q, double rate, double tau_step) {
  ObstructionScan out;
  const double delta_gv = entropy_inverse(q, 1 - rate);
  const double omega = omega_easy(q, 1.0, 1.0 - rate);
  for (double tau : grid(0.0, (q - 1) / q, tau_step)) {
    ++out.grid_points;
    const bool c1 = tau <= delta_gv;
    const bool c2 = tau_perp(q, tau) <= omega;
    const bool c3 = bernoulli_obstruction(q, 1.0, rate, tau) < 0.0;
    out.meets_i += c1;
    out.meets_ii += c2;
    out.meets_iii += c3;
    if (c1 && c2 && c3) {
      ++out.feasible;
      out.feasible_taus.push_back(tau);
    }
  }
  return out;
}

double gv_lemma_exponent(double q, double rate, double delta) {
  if (!(delta > 0 && delta < 1)) throw std::domain_error("delta must lie in (0, 1)");
  const double dgv = entropy_inverse(q, 1 - rate);
  return entropy(q, (1 - delta) * dgv) - entropy(q, dgv);
}

std::string fig1_csv(const UsefulnessScan& scan) {
  std::ostringstream os;
  os << "q,R,tau,tau_perp,omega_easy_dual,delta_gv_dual,verdict\n";
  for (const auto& p : scan.points) {
    os << format_sig(p.q, 12) << ',' << format_sig(p.rate, 12) << ',' << format_sig(p.tau, 12) << ','
       << format_sig(p.tau_perp, 12) << ',' << format_sig(p.omega_easy_dual, 12) << ','
       << format_sig(p.delta_gv_dual, 12) << ',' << to_string(p.verdict) << '\n';
  }
  return os.str();
}

std::string fig2_csv(const UsefulnessScan& scan) {
  std::ostringstream os;
  os << "q,R,tau_star,tau_perp_at_star,band_low,band_high,verdict\n";
  for (const auto& s : scan.per_rate) {
    os << format_sig(s.q, 12) << ',' << format_sig(s.rate, 12) << ',' << format_sig(s.tau_star, 12) << ','
       << format_sig(s.tau_perp_at_star, 12) << ',' << format_sig(s.band_low, 12) << ','
       << format_sig(s.band_high, 12) << ',' << to_string(s.verdict_at_star) << '\n';
  }
  return os.str();
}

}  // namespace qred::analytic
