#include "dioph/lattice.hpp"

#include <cmath>

#include "dioph/errors.hpp"

namespace dioph {

DiagonalFlow::DiagonalFlow(const ApproximationProblem& problem) {
  exponents_ = problem.weights();
  for (int j = 0; j < problem.n(); ++j) exponents_.emplace_back(-1);
}

DiagonalFlow::DiagonalFlow(std::vector<Rational> exponents) : exponents_(std::move(exponents)) {
  mpq_class sum = 0;
  for (const auto& e : exponents_) sum += e.to_mpq();
  if (sum != 0) throw ValidationError("flow exponents must sum to zero, got " + sum.get_str());
}

double DiagonalFlow::factor(int coordinate, int s) const {
  return std::exp(exponents_[coordinate].to_double() * s);
}

UnimodularLattice UnimodularLattice::from_basis(Eigen::MatrixXd basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 1) throw ValidationError("basis must be square");
  const double det = basis.determinant();
  if (!(std::abs(std::abs(det) - 1.0) <= 1e-9)) {
    throw ValidationError("basis determinant " + std::to_string(det) + " is not +-1");
  }
  UnimodularLattice lattice;
  lattice.basis_ = std::move(basis);
  return lattice;
}

UnimodularLattice lattice_from_u(const ApproximationProblem& problem, const MatrixU& u) {
  if (u.m() != problem.m() || u.n() != problem.n()) {
    throw ValidationError("matrix u shape does not match the problem");
  }
  const int m = problem.m();
  const int d = problem.dimension();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < problem.n(); ++j) basis(i, m + j) = u(i, j);
  UnimodularLattice lattice;
  lattice.basis_ = std::move(basis);
  lattice.provenance_ = Provenance{u, 0};
  lattice.flow_ = DiagonalFlow(problem);
  return lattice;
}

UnimodularLattice apply_flow(const UnimodularLattice& lattice, const DiagonalFlow& flow, int s) {
  if (flow.dimension() != lattice.dimension()) throw ValidationError("flow dimension mismatch");
  UnimodularLattice out = lattice;
  for (int r = 0; r < lattice.dimension(); ++r) out.basis_.row(r) *= flow.factor(r, s);
  if (out.provenance_) out.provenance_->s += s;
  out.flow_ = flow;
  return out;
}

UnimodularLattice apply_flow(const UnimodularLattice& lattice, int s) {
  if (!lattice.flow()) throw PreconditionError("lattice carries no diagonal flow");
  return apply_flow(lattice, *lattice.flow(), s);
}

std::uint64_t siegel_transform_box(const ApproximationProblem& problem, const WeightedBoxFunction& f,
                                   const UnimodularLattice& lattice, int s, std::uint64_t cap) {
  if (!lattice.provenance()) throw PreconditionError("siegel_transform_box needs a lattice built from u");
  const auto& prov = *lattice.provenance();
  const double scale = std::exp(static_cast<double>(prov.s + s));
  const RadialWindow window{f.upsilon1 * scale, f.upsilon2 * scale, f.low_closed, f.high_closed};
  // thetas of f may differ from the problem's; weights are shared
  ProblemSpec spec = problem.spec();
  spec.thetas = f.thetas;
  const ApproximationProblem shaped = validate(spec);
  std::uint64_t total = 0;
  std::vector<double> radii(problem.m());
  for_each_q(shaped, window, Convention::BothSigns, cap, [&](std::span<const std::int64_t> q, double r) {
    fill_radii(shaped, r, radii);
    total += approximants_at(shaped, prov.u, q, radii);
  });
  return total;
}

std::uint64_t count_lattice_points(const Box& bounding, const UnimodularLattice& lattice,
                                   const std::function<bool(const Eigen::VectorXd&)>& accept,
                                   std::uint64_t cap) {
  const int d = lattice.dimension();
  if (static_cast<int>(bounding.lo.size()) != d || static_cast<int>(bounding.hi.size()) != d) {
    throw ValidationError("box dimension mismatch");
  }
  const Eigen::MatrixXd basis = lll_reduce(lattice.basis());
  const Eigen::MatrixXd inv = basis.inverse();
  Eigen::VectorXd center(d), half(d);
  for (int j = 0; j < d; ++j) {
    center(j) = 0.5 * (bounding.lo[j] + bounding.hi[j]);
    half(j) = 0.5 * (bounding.hi[j] - bounding.lo[j]);
  }
  const Eigen::VectorXd kc = inv * center;
  const Eigen::VectorXd kr = inv.cwiseAbs() * half;
  std::vector<std::int64_t> lo(d), hi(d);
  double points = 1.0;
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<std::int64_t>(std::floor(kc(i) - kr(i) - 1e-9));
    hi[i] = static_cast<std::int64_t>(std::ceil(kc(i) + kr(i) + 1e-9));
    points *= static_cast<double>(hi[i] - lo[i] + 1);
  }
  if (points > static_cast<double>(cap)) {
    throw CapExceeded("lattice point enumeration of " + std::to_string(points) + " coordinates exceeds cap");
  }
  std::vector<std::int64_t> k = lo;
  Eigen::VectorXd coeff(d);
  std::uint64_t count = 0;
  while (true) {
    bool nonzero = false;
    for (int i = 0; i < d; ++i) {
      coeff(i) = static_cast<double>(k[i]);
      nonzero |= k[i] != 0;
    }
    if (nonzero) {
      const Eigen::VectorXd z = basis * coeff;
      if (accept(z)) ++count;
    }
    int i = d - 1;
    while (i >= 0 && k[i] == hi[i]) {
      k[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++k[i];
  }
  return count;
}

std::uint64_t siegel_transform_points(const Box& box, const UnimodularLattice& lattice, std::uint64_t cap) {
  return count_lattice_points(box, lattice, [&](const Eigen::VectorXd& z) {
    for (int j = 0; j < z.size(); ++j)
      if (z(j) < box.lo[j] || z(j) > box.hi[j]) return false;
    return true;
  }, cap);
}

double truncated_siegel(const ApproximationProblem& problem, const WeightedBoxFunction& f,
                        const UnimodularLattice& lattice, int s, double L) {
  if (!(L >= 1.0)) throw PreconditionError("truncation level L must be >= 1");
  const auto shifted = apply_flow(lattice, s);
  if (alpha(shifted).value > L) return 0.0;
  return static_cast<double>(siegel_transform_box(problem, f, lattice, s));
}

double truncated_siegel(const Box& box, const UnimodularLattice& lattice, double L) {
  if (!(L >= 1.0)) throw PreconditionError("truncation level L must be >= 1");
  if (alpha(lattice).value > L) return 0.0;
  return static_cast<double>(siegel_transform_points(box, lattice));
}

nlohmann::json to_json(const UnimodularLattice& lattice) {
  nlohmann::json j;
  const int d = lattice.dimension();
  j["dimension"] = d;
  auto rows = nlohmann::json::array();
  for (int r = 0; r < d; ++r) {
    std::vector<double> row(d);
    for (int c = 0; c < d; ++c) row[c] = lattice.basis()(r, c);
    rows.push_back(row);
  }
  j["basis"] = rows;
  if (const auto& p = lattice.provenance()) {
    j["provenance"] = {{"u", p->u.entries()}, {"m", p->u.m()}, {"n", p->u.n()}, {"s", p->s}};
  }
  return j;
}

}  // namespace dioph
