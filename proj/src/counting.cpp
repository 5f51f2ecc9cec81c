#include "dioph/counting.hpp"

#include <cstdlib>
#include <numbers>

#include <gmpxx.h>

#include "dioph/errors.hpp"

namespace dioph {

std::string to_string(Convention c) { return c == Convention::BothSigns ? "both" : "positive"; }

Convention parse_convention(std::string_view text) {
  if (text == "both" || text == "BothSigns") return Convention::BothSigns;
  if (text == "positive" || text == "PositiveQ") return Convention::PositiveQ;
  throw ValidationError("unknown convention '" + std::string(text) + "' (expected both|positive)");
}

MatrixU::MatrixU(int m, int n, std::vector<double> entries) : m_(m), n_(n), entries_(std::move(entries)) {
  if (m < 1 || n < 1) throw ValidationError("matrix u needs m, n >= 1");
  if (entries_.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n)) {
    throw ValidationError("matrix u has " + std::to_string(entries_.size()) + " entries, expected " +
                          std::to_string(m * n));
  }
  for (double x : entries_) {
    if (!(x >= 0.0 && x < 1.0)) throw ValidationError("matrix u entries must lie in [0, 1)");
  }
}

std::uint64_t enumeration_cap() {
  if (const char* env = std::getenv("DIOPH_CAP")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::uint64_t{1} << 31;
}

namespace {

mpq_class pow_q(const mpq_class& x, unsigned long e) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), e);
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

bool near_integer(double x) {
  return std::abs(x - std::nearbyint(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

}  // namespace

bool exact_inside(const ApproximationProblem& problem, const MatrixU& u, int i, std::int64_t p,
                  std::span<const std::int64_t> q) {
  mpq_class x(mpz_class(static_cast<long>(p)));
  for (int j = 0; j < problem.n(); ++j) x += mpq_class(u(i, j)) * mpq_class(static_cast<long>(q[j]));
  if (x < 0) x = -x;
  if (x == 0) return true;

  const Rational& w = problem.weights()[i];
  const mpq_class theta(problem.thetas()[i]);
  mpz_class norm_base;  // ||q|| for sup, ||q||^2 for Euclidean
  unsigned long root = 1;
  if (problem.norm() == Norm::Sup) {
    std::int64_t best = 0;
    for (auto v : q) best = std::max(best, v < 0 ? -v : v);
    norm_base = static_cast<long>(best);
  } else {
    norm_base = 0;
    for (auto v : q) norm_base += mpz_class(static_cast<long>(v)) * mpz_class(static_cast<long>(v));
    root = 2;
  }
  const auto b = static_cast<unsigned long>(w.den()) * root;
  const auto a = static_cast<unsigned long>(w.num());
  mpz_class norm_pow;
  mpz_pow_ui(norm_pow.get_mpz_t(), norm_base.get_mpz_t(), a);
  // x < theta * N^{-a/b}  <=>  x^b * N^a < theta^b
  return pow_q(x, b) * mpq_class(norm_pow) < pow_q(theta, b);
}

std::int64_t interval_count(const ApproximationProblem& problem, const MatrixU& u, int i,
                            std::span<const std::int64_t> q, double center, double radius) {
  const double lo = -center - radius;
  const double hi = -center + radius;
  const bool lo_amb = near_integer(lo);
  const bool hi_amb = near_integer(hi);
  const auto first = static_cast<std::int64_t>(lo_amb ? std::nearbyint(lo) : std::floor(lo) + 1.0);
  const auto last = static_cast<std::int64_t>(hi_amb ? std::nearbyint(hi) : std::ceil(hi) - 1.0);
  if (last < first) return 0;
  std::int64_t count = last - first + 1;
  if (lo_amb && !exact_inside(problem, u, i, first, q)) --count;
  if (hi_amb && (last != first || !lo_amb) && !exact_inside(problem, u, i, last, q)) --count;
  return count;
}

void fill_radii(const ApproximationProblem& problem, double q_norm, std::span<double> radii) {
  const auto& w = problem.weights_double();
  const auto& t = problem.thetas();
  for (int i = 0; i < problem.m(); ++i) radii[i] = t[i] * std::pow(q_norm, -w[i]);
}

std::uint64_t approximants_at(const ApproximationProblem& problem, const MatrixU& u,
                              std::span<const std::int64_t> q, std::span<const double> radii) {
  std::uint64_t product = 1;
  const int n = problem.n();
  for (int i = 0; i < problem.m(); ++i) {
    double center = 0.0;
    for (int j = 0; j < n; ++j) center += u(i, j) * static_cast<double>(q[j]);
    const auto c = interval_count(problem, u, i, q, center, radii[i]);
    if (c == 0) return 0;
    product *= static_cast<std::uint64_t>(c);
  }
  return product;
}

int block_index(double r) {
  int s = static_cast<int>(std::floor(std::log(r)));
  // guard against log rounding at the edges of a block
  while (s > 0 && r < std::exp(static_cast<double>(s))) --s;
  while (r >= std::exp(static_cast<double>(s + 1))) ++s;
  return s;
}

namespace {

int blocks_for(double T) { return std::max(0, static_cast<int>(std::ceil(std::log(T)))); }

}  // namespace

CountingPlan::CountingPlan(const ApproximationProblem& problem, double T, Convention convention,
                           std::uint64_t cap)
    : problem_(problem), T_(T), convention_(convention), n_blocks_(blocks_for(T)) {
  if (!(T > 1.0)) throw PreconditionError("counting needs T > 1");
  const int m = problem.m();
  std::vector<double> radii(m);
  for_each_q(problem, RadialWindow{1.0, T, true, false}, convention, cap,
             [&](std::span<const std::int64_t> q, double r) {
               qs_.insert(qs_.end(), q.begin(), q.end());
               fill_radii(problem, r, radii);
               radii_.insert(radii_.end(), radii.begin(), radii.end());
               blocks_.push_back(block_index(r));
             });
}

CountResult CountingPlan::count(const MatrixU& u) const {
  const int m = problem_.m();
  const int n = problem_.n();
  if (u.m() != m || u.n() != n) throw ValidationError("matrix u shape does not match the problem");
  CountResult result;
  result.T = T_;
  result.convention = convention_;
  result.per_block.assign(n_blocks_, 0);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto c = approximants_at(problem_, u, {qs_.data() + k * n, static_cast<std::size_t>(n)},
                                   {radii_.data() + k * m, static_cast<std::size_t>(m)});
    result.per_block[blocks_[k]] += c;
    result.total += c;
  }
  return result;
}

CountResult count_direct(const ApproximationProblem& problem, const MatrixU& u, double T,
                         Convention convention, std::uint64_t cap) {
  if (!(T > 1.0)) throw PreconditionError("counting needs T > 1");
  if (u.m() != problem.m() || u.n() != problem.n()) {
    throw ValidationError("matrix u shape does not match the problem");
  }
  CountResult result;
  result.T = T;
  result.convention = convention;
  result.per_block.assign(blocks_for(T), 0);
  std::vector<double> radii(problem.m());
  for_each_q(problem, RadialWindow{1.0, T, true, false}, convention, cap,
             [&](std::span<const std::int64_t> q, double r) {
               fill_radii(problem, r, radii);
               const auto c = approximants_at(problem, u, q, radii);
               result.per_block[block_index(r)] += c;
               result.total += c;
             });
  return result;
}

std::uint64_t count_block(const ApproximationProblem& problem, const MatrixU& u, int s,
                          Convention convention, std::uint64_t cap) {
  if (s < 0) throw PreconditionError("block index must be non-negative");
  if (u.m() != problem.m() || u.n() != problem.n()) {
    throw ValidationError("matrix u shape does not match the problem");
  }
  const RadialWindow window{std::exp(static_cast<double>(s)), std::exp(static_cast<double>(s + 1)), true,
                            false};
  std::uint64_t total = 0;
  std::vector<double> radii(problem.m());
  for_each_q(problem, window, convention, cap, [&](std::span<const std::int64_t> q, double r) {
    fill_radii(problem, r, radii);
    total += approximants_at(problem, u, q, radii);
  });
  return total;
}

double normalize_clt(double count, double T, double C, double /*variance*/) {
  if (!(T > 1.0)) throw PreconditionError("normalization needs T > 1");
  const double logT = std::log(T);
  return (count - C * logT) / std::sqrt(logT);
}

}  // namespace dioph
