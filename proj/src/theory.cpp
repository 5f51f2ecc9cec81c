#include "dioph/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

#include "dioph/errors.hpp"

namespace dioph::theory {

double zeta(double s) {
  if (!(s > 1.0)) throw PreconditionError("zeta needs s > 1");
  // Euler-Maclaurin with N = 20 and Bernoulli terms through B_16.
  constexpr int N = 20;
  constexpr double bernoulli[] = {1.0 / 6.0,  -1.0 / 30.0,   1.0 / 42.0, -1.0 / 30.0,
                                  5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
  double sum = 0.0;
  for (int k = N - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  const double Nd = N;
  sum += std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double factorial = 2.0;
  double power = std::pow(Nd, -s - 1.0);
  for (int j = 1; j <= 8; ++j) {
    sum += bernoulli[j - 1] / factorial * rising * power;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    factorial *= (2.0 * j + 1) * (2.0 * j + 2);
    power /= Nd * Nd;
  }
  return sum;
}

TheoryConstants constants(const ApproximationProblem& problem, const ZetaFn& zeta_fn) {
  const int d = problem.dimension();
  if (d < 3) throw PreconditionError("theory constants need m + n >= 3 (zeta(m+n-1) has a pole)");
  TheoryConstants c;
  c.C = std::ldexp(problem.theta_product(), problem.m()) * omega_n(problem.norm(), problem.n());
  c.zeta_ratio = 2.0 * zeta_fn(d - 1) / zeta_fn(d) - 1.0;
  c.sigma2 = 2.0 * c.C * c.zeta_ratio;
  c.below_m2 = problem.m() < 2;
  return c;
}

double overlap_length(int s, std::int64_t p, std::int64_t q) {
  if (p < 1 || q < 1) throw PreconditionError("overlap_length needs p, q >= 1");
  const double lp = std::log(static_cast<double>(p));
  const double lq = std::log(static_cast<double>(q));
  return std::max(0.0, std::min(s + 1.0 - lp, 1.0 - lq) - std::max(s - lp, -lq));
}

namespace {

double mean_constant(const ApproximationProblem& problem) {
  return std::ldexp(problem.theta_product(), problem.m()) * omega_n(problem.norm(), problem.n());
}

void check_theta_args(const ApproximationProblem& problem, std::int64_t p_max) {
  if (problem.dimension() < 3) throw PreconditionError("lag covariance needs m + n >= 3");
  if (p_max < 1) throw PreconditionError("p_max must be >= 1");
}

}  // namespace

double theta_infinity(const ApproximationProblem& problem, int s, std::int64_t p_max, const ZetaFn& zeta_fn) {
  check_theta_args(problem, p_max);
  const int d = problem.dimension();
  const double es = std::exp(static_cast<double>(s));
  double sum = 0.0;
  for (std::int64_t q = 1; q <= p_max; ++q) {
    // overlap > 0 requires e^{s-1} q < p < e^{s+1} q
    const double lo = std::max(1.0, std::floor(es * q / std::numbers::e));
    const double hi = std::min(static_cast<double>(p_max), std::ceil(es * q * std::numbers::e));
    if (lo > hi) continue;
    for (auto p = static_cast<std::int64_t>(lo); p <= static_cast<std::int64_t>(hi); ++p) {
      const double ov = overlap_length(s, p, q);
      if (ov > 0.0) sum += std::pow(static_cast<double>(std::max(p, q)), -d) * ov;
    }
  }
  return 2.0 / zeta_fn(d) * mean_constant(problem) * sum;
}

std::vector<double> theta_table(const ApproximationProblem& problem, int s_max, std::int64_t p_max,
                                const ZetaFn& zeta_fn) {
  check_theta_args(problem, p_max);
  const int d = problem.dimension();
  std::vector<double> logs(p_max + 1, 0.0);
  for (std::int64_t k = 1; k <= p_max; ++k) logs[k] = std::log(static_cast<double>(k));
  std::vector<double> acc(2 * s_max + 1, 0.0);
  for (std::int64_t q = 1; q <= p_max; ++q) {
    for (std::int64_t p = 1; p <= p_max; ++p) {
      const double delta = logs[p] - logs[q];
      const double weight = std::pow(static_cast<double>(std::max(p, q)), -d);
      const auto s0 = static_cast<int>(std::floor(delta));
      for (int s = s0; s <= s0 + 1; ++s) {
        if (s < -s_max || s > s_max) continue;
        const double ov = std::max(0.0, std::min(s + 1.0 - logs[p], 1.0 - logs[q]) -
                                            std::max(s - logs[p], -logs[q]));
        if (ov > 0.0) acc[s + s_max] += weight * ov;
      }
    }
  }
  const double scale = 2.0 / zeta_fn(d) * mean_constant(problem);
  for (double& v : acc) v *= scale;
  return acc;
}

double max_power_sum(int k, std::int64_t p_max) {
  // diagonal plus twice the strictly-lower triangle, summed from the small end
  double sum = 0.0;
  for (std::int64_t q = p_max; q >= 1; --q) {
    sum += (2.0 * static_cast<double>(q - 1) + 1.0) * std::pow(static_cast<double>(q), -k);
  }
  return sum;
}

ProfileFunction ProfileFunction::indicator_of(const ApproximationProblem& problem) {
  ProfileFunction f;
  f.radial = [](double r) { return (r >= 1.0 && r < std::numbers::e) ? 1.0 : 0.0; };
  f.g_low = 1.0;
  f.g_high = std::numbers::e;
  for (int i = 0; i < problem.m(); ++i) {
    f.transverse.push_back([](double t) { return std::abs(t) < 1.0 ? 1.0 : 0.0; });
  }
  return f;
}

namespace {

double gauss_pieces(const std::function<double(double)>& g, std::vector<double> cuts) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    total += boost::math::quadrature::gauss<double, 30>::integrate(g, cuts[i], cuts[i + 1]);
  }
  return total;
}

}  // namespace

double pair_integral_quadrature(const ApproximationProblem& problem, const ProfileFunction& f, int s,
                                std::int64_t p, std::int64_t q) {
  const double pd = static_cast<double>(p);
  const double qd = static_cast<double>(q);
  const double es = std::exp(static_cast<double>(s));
  // radial factor: int g(p e^{-s} r) g(q r) dr / r, in v = log r
  const double lo = std::max(std::log(f.g_low * es / pd), std::log(f.g_low / qd));
  const double hi = std::min(std::log(f.g_high * es / pd), std::log(f.g_high / qd));
  if (!(hi > lo)) return 0.0;
  std::vector<double> rcuts{lo, hi};
  for (double b : f.radial_breaks) {
    for (double v : {std::log(b * es / pd), std::log(b / qd)})
      if (v > lo && v < hi) rcuts.push_back(v);
  }
  const double radial = gauss_pieces(
      [&](double v) {
        const double r = std::exp(v);
        return f.radial(pd * r / es) * f.radial(qd * r);
      },
      rcuts);
  double transverse = 1.0;
  const auto& w = problem.weights_double();
  for (int i = 0; i < problem.m(); ++i) {
    const double sp = std::pow(pd, 1.0 + w[i]);
    const double sq = std::pow(qd, 1.0 + w[i]);
    const double reach = std::min(1.0 / sp, 1.0 / sq);
    std::vector<double> cuts{-reach, 0.0, reach};
    for (double b : f.transverse_breaks) {
      for (double t : {b / sp, -b / sp, b / sq, -b / sq})
        if (std::abs(t) < reach) cuts.push_back(t);
    }
    const auto& h = f.transverse[i];
    transverse *= problem.thetas()[i] * gauss_pieces([&](double t) { return h(sp * t) * h(sq * t); }, cuts);
  }
  return omega_n(problem.norm(), problem.n()) * radial * transverse;
}

double theta_infinity_quadrature(const ApproximationProblem& problem, const ProfileFunction& f, int s,
                                 std::int64_t p_max, const ZetaFn& zeta_fn) {
  check_theta_args(problem, p_max);
  const double es = std::exp(static_cast<double>(s));
  const double span = f.g_high / f.g_low;
  double sum = 0.0;
  for (std::int64_t q = 1; q <= p_max; ++q) {
    const double lo = std::max(1.0, std::floor(es * q / span));
    const double hi = std::min(static_cast<double>(p_max), std::ceil(es * q * span));
    if (lo > hi) continue;
    for (auto p = static_cast<std::int64_t>(lo); p <= static_cast<std::int64_t>(hi); ++p) {
      sum += pair_integral_quadrature(problem, f, s, p, q);
    }
  }
  // transverse profiles are even, so the -q term equals the +q term
  return 2.0 / zeta_fn(problem.dimension()) * sum;
}

std::uint64_t n_solutions(std::int64_t q, std::int64_t ell, std::int64_t P) {
  if (q < 1 || ell == 0 || std::abs(ell) > q || P < 1) {
    throw PreconditionError("n_solutions needs q >= 1, 1 <= |ell| <= q, P >= 1");
  }
  const std::int64_t g = std::gcd(q, std::abs(ell));
  return 2 * static_cast<std::uint64_t>((P * g) / q) + 1;
}

std::uint64_t n_solutions_brute(std::int64_t q, std::int64_t ell, std::int64_t P) {
  std::uint64_t count = 0;
  for (std::int64_t p = -P; p <= P; ++p) {
    if ((ell * p) % q == 0) ++count;  // r = ell p / q
  }
  return count;
}

mpz_class divisor_sigma(std::int64_t q, int e) {
  mpz_class total = 0;
  for (std::int64_t d = 1; d * d <= q; ++d) {
    if (q % d != 0) continue;
    mpz_class a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(e));
    total += a;
    if (d * d != q) {
      mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(q / d), static_cast<unsigned long>(e));
      total += b;
    }
  }
  return total;
}

namespace {

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

mpz_class to_mpz(unsigned __int128 v) {
  mpz_class hi = static_cast<unsigned long>(v >> 64);
  mpz_class lo = static_cast<unsigned long>(v & 0xFFFFFFFFFFFFFFFFull);
  mpz_class out = hi;
  out <<= 64;
  return out + lo;
}

unsigned __int128 ipow(std::uint64_t b, int k) {
  unsigned __int128 r = 1;
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}

}  // namespace

DivisorSumReport divisor_sum_check(std::int64_t T, int k, const std::function<std::int64_t(std::int64_t)>& p_of_q) {
  if (T < 2 || T > 10000) throw PreconditionError("divisor_sum_check needs 2 <= T <= 10^4");
  if (k < 1 || k > 3) throw PreconditionError("divisor_sum_check needs 1 <= k <= 3");
  DivisorSumReport report;
  report.T = T;
  report.k = k;
  unsigned __int128 total = 0;
  double c_max = 0.0;
  for (std::int64_t q = 1; q <= T; ++q) {
    const std::int64_t P = p_of_q(q);
    if (P < 1) throw PreconditionError("P(q) must be >= 1");
    c_max = std::max(c_max, static_cast<double>(P) / static_cast<double>(q));
    unsigned __int128 inner = 0;
    for (std::int64_t ell = 1; ell <= q; ++ell) inner += ipow(n_solutions(q, ell, P), k);
    // group ell by d = gcd(q, ell): phi(q/d) values of ell per divisor
    unsigned __int128 by_class = 0;
    for (std::int64_t d = 1; d <= q; ++d) {
      if (q % d != 0) continue;
      by_class += static_cast<unsigned __int128>(euler_phi(q / d)) *
                  ipow(2 * static_cast<std::uint64_t>((P * d) / q) + 1, k);
    }
    if (by_class != inner) report.inner_identity_holds = false;
    const mpz_class sig = mpz_class(static_cast<long>(q)) * divisor_sigma(q, k - 1);
    const double ratio = to_mpz(inner).get_d() / sig.get_d();
    report.max_inner_over_divisor = std::max(report.max_inner_over_divisor, ratio);
    total += inner;
  }
  report.divisor_bound_constant = std::pow(2.0 * c_max + 1.0, k);
  report.divisor_bound_holds = report.max_inner_over_divisor <= report.divisor_bound_constant;
  report.total = to_mpz(total);
  const double Td = static_cast<double>(T);
  report.normalizer = std::pow(Td, k + 1) * (k == 1 ? std::log(Td) : 1.0);
  report.ratio = report.total.get_d() / report.normalizer;
  return report;
}

}  // namespace dioph::theory
