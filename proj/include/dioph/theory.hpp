#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dioph/problem.hpp"

namespace dioph::theory {

// Riemann zeta for real s > 1 by Euler-Maclaurin, absolute error < 1e-12.
double zeta(double s);

using ZetaFn = std::function<double(double)>;

struct TheoryConstants {
  double C = 0.0;           // 2^m prod(theta) omega_n
  double sigma2 = 0.0;      // 2 C (2 zeta(m+n-1) / zeta(m+n) - 1)
  double zeta_ratio = 0.0;  // 2 zeta(m+n-1) / zeta(m+n) - 1
  bool below_m2 = false;    // m = 1: outside the CLT regime, values are still filled in
};

// Throws PreconditionError when m + n < 3.
TheoryConstants constants(const ApproximationProblem& problem, const ZetaFn& zeta_fn = zeta);

// Log-radial overlap of the windows [s - log p, s + 1 - log p] and
// [-log q, 1 - log q].
double overlap_length(int s, std::int64_t p, std::int64_t q);

// Closed-form lag covariance of chi^ o a^s against chi^ under the Haar measure,
// for chi = indicator of Omega_e, truncated to p, q <= p_max.
double theta_infinity(const ApproximationProblem& problem, int s, std::int64_t p_max,
                      const ZetaFn& zeta_fn = zeta);

// theta_infinity for s = -s_max..s_max sharing one pass over (p, q).
std::vector<double> theta_table(const ApproximationProblem& problem, int s_max, std::int64_t p_max,
                                const ZetaFn& zeta_fn = zeta);

// sum_{p, q <= P} max(p, q)^{-k}
double max_power_sum(int k, std::int64_t p_max);

// Profile functions f(x, y) = g(||y||) prod_i h_i(x_i ||y||^{w_i} / theta_i)
// with g supported in [g_low, g_high] and each h_i supported in [-1, 1].
struct ProfileFunction {
  std::function<double(double)> radial;
  double g_low = 1.0;
  double g_high = 2.718281828459045;
  std::vector<std::function<double(double)>> transverse;
  // extra breakpoints inside the supports (discontinuities or kinks)
  std::vector<double> radial_breaks;
  std::vector<double> transverse_breaks;

  static ProfileFunction indicator_of(const ApproximationProblem& problem);
};

// int f(p a^s z) f(q z) dz by one-dimensional Gauss-Legendre quadrature on
// the pieces between breakpoints.
double pair_integral_quadrature(const ApproximationProblem& problem, const ProfileFunction& f, int s,
                                std::int64_t p, std::int64_t q);

// 2 zeta(m+n)^{-1} sum_{p,q <= p_max} pair_integral; slower general path.
double theta_infinity_quadrature(const ApproximationProblem& problem, const ProfileFunction& f, int s,
                                 std::int64_t p_max, const ZetaFn& zeta_fn = zeta);

// #{(p, r) in Z^2 : q r - ell p = 0, |p| <= P} = 2 floor(P gcd(q,|ell|) / q) + 1.
std::uint64_t n_solutions(std::int64_t q, std::int64_t ell, std::int64_t P);
// Same by enumerating p.
std::uint64_t n_solutions_brute(std::int64_t q, std::int64_t ell, std::int64_t P);

struct DivisorSumReport {
  std::int64_t T = 0;
  int k = 0;
  mpz_class total;          // sum_{q<=T} sum_{1<=ell<=q} N(q, ell)^k
  double normalizer = 0.0;  // T^{k+1} (log T)^{nu_k}
  double ratio = 0.0;
  double max_inner_over_divisor = 0.0;  // max_q inner(q) / (q sigma_{k-1}(q))
  double divisor_bound_constant = 0.0;  // (2c + 1)^k with c = max P(q)/q
  bool inner_identity_holds = true;     // gcd-class formula equals direct ell sum, every q
  bool divisor_bound_holds = true;
};

DivisorSumReport divisor_sum_check(std::int64_t T, int k,
                                   const std::function<std::int64_t(std::int64_t)>& p_of_q);

// sum_{d | q} d^e
mpz_class divisor_sigma(std::int64_t q, int e);

}  // namespace dioph::theory
