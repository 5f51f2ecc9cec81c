#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dioph/counting.hpp"
#include "dioph/problem.hpp"

namespace dioph {

// a = diag(e^{w_1}, ..., e^{w_m}, e^{-1}, ..., e^{-1}); the exponents sum to 0.
class DiagonalFlow {
 public:
  explicit DiagonalFlow(const ApproximationProblem& problem);
  explicit DiagonalFlow(std::vector<Rational> exponents);

  const std::vector<Rational>& exponents() const { return exponents_; }
  int dimension() const { return static_cast<int>(exponents_.size()); }
  double factor(int coordinate, int s) const;

 private:
  std::vector<Rational> exponents_;
};

struct Provenance {
  MatrixU u;
  int s = 0;
};

// Columns of basis() generate the lattice.
class UnimodularLattice {
 public:
  // Throws ValidationError unless |det| = 1 within 1e-9 relative.
  static UnimodularLattice from_basis(Eigen::MatrixXd basis);

  int dimension() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const std::optional<Provenance>& provenance() const { return provenance_; }
  const std::optional<DiagonalFlow>& flow() const { return flow_; }

 private:
  friend UnimodularLattice lattice_from_u(const ApproximationProblem&, const MatrixU&);
  friend UnimodularLattice apply_flow(const UnimodularLattice&, const DiagonalFlow&, int);

  Eigen::MatrixXd basis_;
  std::optional<Provenance> provenance_;
  std::optional<DiagonalFlow> flow_;
};

// [[I_m, u], [0, I_n]] Z^{m+n}, provenance (u, 0).
UnimodularLattice lattice_from_u(const ApproximationProblem& problem, const MatrixU& u);

// a^s Lambda for any integer s, including negative.
UnimodularLattice apply_flow(const UnimodularLattice& lattice, const DiagonalFlow& flow, int s);
// Uses the flow attached by lattice_from_u; PreconditionError otherwise.
UnimodularLattice apply_flow(const UnimodularLattice& lattice, int s);

// f^(a^s Lambda_u) via per-q interval counting on the provenance u; the flow
// step is provenance.s + s. PreconditionError without provenance.
std::uint64_t siegel_transform_box(const ApproximationProblem& problem, const WeightedBoxFunction& f,
                                   const UnimodularLattice& lattice, int s,
                                   std::uint64_t cap = enumeration_cap());

// Closed axis box lo <= z <= hi.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Nonzero lattice points in the box, by enumerating integer coordinates over
// the preimage box of the (LLL-reduced) basis.
std::uint64_t siegel_transform_points(const Box& box, const UnimodularLattice& lattice,
                                      std::uint64_t cap = enumeration_cap());

// Nonzero lattice points z in the bounding box with accept(z).
std::uint64_t count_lattice_points(const Box& bounding, const UnimodularLattice& lattice,
                                   const std::function<bool(const Eigen::VectorXd&)>& accept,
                                   std::uint64_t cap = enumeration_cap());

// Lovasz-reduced basis (columns), delta in (1/4, 1).
Eigen::MatrixXd lll_reduce(const Eigen::MatrixXd& basis, double delta = 0.99);

// All nonzero lattice vectors with Euclidean norm <= radius, one of each
// +-pair, via Fincke-Pohst enumeration on the reduced basis.
std::vector<Eigen::VectorXd> short_vectors(const Eigen::MatrixXd& basis, double radius,
                                           std::size_t cap = 2'000'000);

struct AlphaResult {
  double value = 1.0;
  bool certified = true;
  // min_covolume[j-1]: smallest covolume of a j-dimensional rational subspace
  std::vector<double> min_covolume;
};

// sup over rational subspaces V of 1/covol(V cap Lambda). Certified for
// dimension <= 5; beyond that a lower bound from the reduced basis.
AlphaResult alpha(const UnimodularLattice& lattice, std::size_t cap = 2'000'000);

// f^ if alpha <= L, else 0.
double truncated_siegel(const ApproximationProblem& problem, const WeightedBoxFunction& f,
                        const UnimodularLattice& lattice, int s, double L);
double truncated_siegel(const Box& box, const UnimodularLattice& lattice, double L);

nlohmann::json to_json(const UnimodularLattice& lattice);

}  // namespace dioph
