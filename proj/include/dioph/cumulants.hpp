#pragma once

#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace dioph::cumulants {

// Partition of the ground set {0, ..., size-1}. Blocks are sorted and listed
// in order of their smallest element.
class SetPartition {
 public:
  explicit SetPartition(std::vector<std::vector<int>> blocks);
  // labels[i] = block of element i; any labelling is accepted.
  static SetPartition from_labels(std::span<const int> labels);
  static SetPartition single_block(int size);

  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  int ground_size() const { return ground_; }

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  std::vector<std::vector<int>> blocks_;
  int ground_ = 0;
};

// All partitions of {0..r-1}, 1 <= r <= 10, in restricted-growth order.
std::vector<SetPartition> set_partitions(int r);
std::uint64_t bell_number(int r);

struct Atom {
  mpq_class probability;
  std::vector<mpq_class> values;  // one per observable
};

// Exact finite probability space; probabilities positive and summing to 1.
class FiniteDistribution {
 public:
  explicit FiniteDistribution(std::vector<Atom> atoms);
  const std::vector<Atom>& atoms() const { return atoms_; }
  int observable_count() const { return observables_; }

  // E[prod_{k in positions} phi_{observables[k]}]
  mpq_class moment(std::span<const int> observables, std::span<const int> positions) const;

 private:
  std::vector<Atom> atoms_;
  int observables_ = 0;
};

// sum_P (-1)^{|P|-1} (|P|-1)! prod_{I in P} E[prod_{i in I} phi_i], r <= 8.
mpq_class joint_cumulant(const FiniteDistribution& dist, std::span<const int> observables);

// Moments factor along the blocks of q before the partition sum.
mpq_class conditional_cumulant(const FiniteDistribution& dist, std::span<const int> observables,
                               const SetPartition& q);

// Plug-in cumulant from central moments, r in 2..4; bias O(1/S).
double empirical_cumulant(std::span<const double> samples, int r);

// min{t_i, |t_i - t_j| : i != j}
double separation_D(std::span<const double> t);

// 0 = alpha_0 < beta_1 < alpha_1 = (3+r) beta_1 < beta_2 < ... < beta_{r+1}.
struct LadderParams {
  double gamma = 1.0;
  int r = 1;
  std::vector<double> alpha;  // alpha[0..r]
  std::vector<double> beta;   // beta[1..r+1], beta[0] unused

  using Recursion = std::function<double(double beta_j, int j, int r, double gamma)>;
  // default recursion beta_{j+1} = (3 + r) beta_j + gamma
  static LadderParams make(double gamma, int r, const Recursion& next = {});
  bool valid() const;
};

// Spread and separation on (s_0, ..., s_r) for a partition of {0..r}.
double rho_upper(std::span<const double> s, const SetPartition& q);  // rho^Q
double rho_lower(std::span<const double> s, const SetPartition& q);  // rho_Q

struct PieceLabel {
  bool clustered = false;  // Omega(beta_{r+1}; N)
  int j = -1;              // Omega_Q(alpha_j, beta_{j+1}; N) otherwise
  SetPartition q = SetPartition::single_block(1);
};

// Pieces of the separated/clustered decomposition containing (0, s_1, ..., s_r).
// With all = false only the first match is returned.
std::vector<PieceLabel> classify_tuple(std::span<const int> s, const LadderParams& ladder, bool all = false);

}  // namespace dioph::cumulants
