#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/problem.hpp"

namespace dioph {

enum class Convention { BothSigns, PositiveQ };

std::string to_string(Convention c);
Convention parse_convention(std::string_view text);

// Row-major m x n matrix with dyadic entries in [0, 1).
class MatrixU {
 public:
  MatrixU(int m, int n, std::vector<double> entries);
  static MatrixU zero(int m, int n) { return MatrixU(m, n, std::vector<double>(m * n, 0.0)); }

  int m() const { return m_; }
  int n() const { return n_; }
  double operator()(int i, int j) const { return entries_[i * n_ + j]; }
  std::span<const double> row(int i) const { return {entries_.data() + i * n_, static_cast<std::size_t>(n_)}; }
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const MatrixU&, const MatrixU&) = default;

 private:
  int m_;
  int n_;
  std::vector<double> entries_;
};

struct CountResult {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> per_block;  // block s covers e^s <= ||q|| < e^{s+1}
  double T = 0.0;
  Convention convention = Convention::BothSigns;
};

// DIOPH_CAP when set, otherwise 2^31 box points per call.
std::uint64_t enumeration_cap();

// Radial window on ||q|| used by every enumeration below.
struct RadialWindow {
  double low = 1.0;
  double high = 0.0;
  bool low_closed = true;
  bool high_closed = false;
  bool contains(double r) const {
    return (low_closed ? r >= low : r > low) && (high_closed ? r <= high : r < high);
  }
};

// Exact test of |p + <u_i, q>| < theta_i ||q||^{-w_i} in rational arithmetic.
bool exact_inside(const ApproximationProblem& problem, const MatrixU& u, int i, std::int64_t p,
                  std::span<const std::int64_t> q);

// #{p in Z : |p + c| < rho} for c = <u_i, q>; boundary cases within a 1e-9
// relative margin are settled by exact_inside.
std::int64_t interval_count(const ApproximationProblem& problem, const MatrixU& u, int i,
                            std::span<const std::int64_t> q, double center, double radius);

// prod_i #{p_i : |p_i + <u_i, q>| < radii[i]}.
std::uint64_t approximants_at(const ApproximationProblem& problem, const MatrixU& u,
                              std::span<const std::int64_t> q, std::span<const double> radii);

// theta_i ||q||^{-w_i}.
void fill_radii(const ApproximationProblem& problem, double q_norm, std::span<double> radii);

// Visits every nonzero q in lexicographic order over the box |q_j| <= high,
// keeping those whose norm lies in the window. Throws CapExceeded before
// visiting anything if the box is larger than the cap.
template <typename Visitor>
void for_each_q(const ApproximationProblem& problem, const RadialWindow& window, Convention convention,
                std::uint64_t cap, Visitor&& visit);

// Precomputed q list for repeated counting against many u.
class CountingPlan {
 public:
  CountingPlan(const ApproximationProblem& problem, double T, Convention convention,
               std::uint64_t cap = enumeration_cap());

  const ApproximationProblem& problem() const { return problem_; }
  double T() const { return T_; }
  Convention convention() const { return convention_; }
  std::size_t size() const { return blocks_.size(); }
  int block_count() const { return n_blocks_; }

  CountResult count(const MatrixU& u) const;

 private:
  ApproximationProblem problem_;
  double T_;
  Convention convention_;
  int n_blocks_ = 0;
  std::vector<std::int64_t> qs_;      // size() x n
  std::vector<double> radii_;         // size() x m
  std::vector<int> blocks_;
};

// Number of solutions with 0 < ||q|| < T.
CountResult count_direct(const ApproximationProblem& problem, const MatrixU& u, double T,
                         Convention convention, std::uint64_t cap = enumeration_cap());

// Restriction to e^s <= ||q|| < e^{s+1}.
std::uint64_t count_block(const ApproximationProblem& problem, const MatrixU& u, int s,
                          Convention convention, std::uint64_t cap = enumeration_cap());

// (count - C log T) / sqrt(log T). variance is carried for the caller only.
double normalize_clt(double count, double T, double C, double variance);

// Index s with e^s <= r < e^{s+1}, r >= 1.
int block_index(double r);

// ---------------------------------------------------------------------------

template <typename Visitor>
void for_each_q(const ApproximationProblem& problem, const RadialWindow& window, Convention convention,
                std::uint64_t cap, Visitor&& visit) {
  const int n = problem.n();
  if (convention == Convention::PositiveQ && n != 1) {
    throw PreconditionError("PositiveQ convention requires n = 1");
  }
  const auto R = static_cast<std::int64_t>(std::floor(window.high));
  const double side = convention == Convention::PositiveQ ? static_cast<double>(R) : 2.0 * R + 1.0;
  if (std::pow(side, n) > static_cast<double>(cap)) {
    throw CapExceeded("enumeration of " + std::to_string(std::pow(side, n)) +
                      " points exceeds cap " + std::to_string(cap) + " (set DIOPH_CAP to raise)");
  }
  if (R < 1) return;
  std::vector<std::int64_t> q(n, -R);
  if (convention == Convention::PositiveQ) q[0] = 1;
  const std::int64_t lo = convention == Convention::PositiveQ ? 1 : -R;
  while (true) {
    bool nonzero = false;
    for (auto v : q) nonzero |= (v != 0);
    if (nonzero) {
      const double r = norm_eval(std::span<const std::int64_t>(q), problem.norm());
      if (window.contains(r)) visit(std::span<const std::int64_t>(q), r);
    }
    int k = n - 1;
    while (k >= 0 && q[k] == R) {
      q[k] = (k == 0 ? lo : -R);
      --k;
    }
    if (k < 0) break;
    ++q[k];
  }
}

}  // namespace dioph
