#include "dioph/reference.hpp"

#include <cmath>
#include <vector>

#include <gmpxx.h>

namespace dioph::reference {

namespace {

// x^b * N^a < theta^b with x = |p + <u_i, q>|, w_i = a / b, N = ||q|| (sup)
// or ||q||^2 with b doubled (Euclidean).
bool satisfies_exact(const ApproximationProblem& problem, const MatrixU& u, int i, std::int64_t p,
               const std::vector<std::int64_t>& q) {
  mpq_class x = static_cast<long>(p);
  for (int j = 0; j < problem.n(); ++j) x += mpq_class(u(i, j)) * static_cast<long>(q[j]);
  x = abs(x);
  mpz_class base = 0;
  unsigned long root = 1;
  if (problem.norm() == Norm::Sup) {
    for (auto v : q) base = std::max(base, mpz_class(static_cast<long>(v < 0 ? -v : v)));
  } else {
    for (auto v : q) base += mpz_class(static_cast<long>(v)) * static_cast<long>(v);
    root = 2;
  }
  const auto b = static_cast<unsigned long>(problem.weights()[i].den()) * root;
  const auto a = static_cast<unsigned long>(problem.weights()[i].num());
  mpq_class lhs = 1, rhs = 1;
  const mpq_class theta(problem.thetas()[i]);
  for (unsigned long k = 0; k < b; ++k) {
    lhs *= x;
    rhs *= theta;
  }
  for (unsigned long k = 0; k < a; ++k) lhs *= base;
  return lhs < rhs;
}

// Decides in double precision when the log margin is clear, else exactly.
bool satisfies(const ApproximationProblem& problem, const MatrixU& u, int i, std::int64_t p,
               const std::vector<std::int64_t>& q, double norm) {
  double c = static_cast<double>(p);
  double magnitude = std::abs(c);
  for (int j = 0; j < problem.n(); ++j) {
    c += u(i, j) * static_cast<double>(q[j]);
    magnitude += std::abs(u(i, j) * static_cast<double>(q[j]));
  }
  const double x = std::abs(c);
  if (x == 0.0) return satisfies_exact(problem, u, i, p, q);
  // rounding in c moves log(x) by at most relative_error; the log terms add ~1e-15
  const double relative_error = 8.0 * (problem.n() + 1) * 1.1102230246251565e-16 * magnitude / x;
  const double margin = std::log(problem.thetas()[i]) - problem.weights_double()[i] * std::log(norm) - std::log(x);
  if (std::abs(margin) > 1e-12 + 2.0 * relative_error) return margin > 0;
  return satisfies_exact(problem, u, i, p, q);
}

}  // namespace

std::uint64_t count_brute_force(const ApproximationProblem& problem, const MatrixU& u, double lo,
                                double hi, Convention convention) {
  const int n = problem.n();
  const int m = problem.m();
  const auto R = static_cast<std::int64_t>(std::ceil(hi));
  std::uint64_t total = 0;
  std::vector<std::int64_t> q(n);
  std::int64_t box = 1;
  for (int j = 0; j < n; ++j) box *= 2 * R + 1;
  for (std::int64_t idx = 0; idx < box; ++idx) {
    std::int64_t rest = idx;
    bool nonzero = false;
    long double sq = 0.0L;
    std::int64_t sup = 0;
    for (int j = n - 1; j >= 0; --j) {
      q[j] = rest % (2 * R + 1) - R;
      rest /= 2 * R + 1;
      nonzero |= q[j] != 0;
      sq += static_cast<long double>(q[j]) * q[j];
      sup = std::max(sup, q[j] < 0 ? -q[j] : q[j]);
    }
    if (!nonzero) continue;
    if (convention == Convention::PositiveQ && q[0] < 1) continue;
    const long double r = problem.norm() == Norm::Sup ? static_cast<long double>(sup) : std::sqrt(sq);
    if (!(r >= lo && r < hi)) continue;
    // every p_i with |p_i + <u_i,q>| < theta_i lies within |<u_i,q>| + theta_i + 1
    std::uint64_t product = 1;
    for (int i = 0; i < m && product != 0; ++i) {
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += u(i, j) * static_cast<double>(q[j]);
      const auto pmin = static_cast<std::int64_t>(std::floor(-c - problem.thetas()[i])) - 1;
      const auto pmax = static_cast<std::int64_t>(std::ceil(-c + problem.thetas()[i])) + 1;
      std::uint64_t hits = 0;
      for (std::int64_t p = pmin; p <= pmax; ++p) hits += satisfies(problem, u, i, p, q, static_cast<double>(r)) ? 1 : 0;
      product *= hits;
    }
    total += product;
  }
  return total;
}

std::uint64_t count_brute_force(const ApproximationProblem& problem, const MatrixU& u, double T,
                                Convention convention) {
  return count_brute_force(problem, u, 1.0, T, convention);
}

}  // namespace dioph::reference
