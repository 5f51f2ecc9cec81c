#include "dioph/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

struct GramSchmidt {
  Eigen::MatrixXd mu;     // mu(j, i) = <b_j, b*_i> / |b*_i|^2, i < j
  Eigen::VectorXd norm2;  // |b*_i|^2
};

GramSchmidt gram_schmidt(const Eigen::MatrixXd& b) {
  const int d = static_cast<int>(b.cols());
  GramSchmidt gs{Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd::Zero(d)};
  Eigen::MatrixXd star = b;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      gs.mu(j, i) = b.col(j).dot(star.col(i)) / gs.norm2(i);
      star.col(j) -= gs.mu(j, i) * star.col(i);
    }
    gs.norm2(j) = star.col(j).squaredNorm();
  }
  return gs;
}

// Hermite constants gamma_j^j for j = 1..5.
constexpr double kHermitePow[] = {1.0, 4.0 / 3.0, 2.0, 4.0, 8.0};

}  // namespace

Eigen::MatrixXd lll_reduce(const Eigen::MatrixXd& basis, double delta) {
  Eigen::MatrixXd b = basis;
  const int d = static_cast<int>(b.cols());
  GramSchmidt gs = gram_schmidt(b);
  int k = 1;
  int guard = 0;
  while (k < d) {
    if (++guard > 100000) break;
    for (int j = k - 1; j >= 0; --j) {
      const double r = std::nearbyint(gs.mu(k, j));
      if (r != 0.0) {
        b.col(k) -= r * b.col(j);
        gs = gram_schmidt(b);
      }
    }
    if (gs.norm2(k) >= (delta - gs.mu(k, k - 1) * gs.mu(k, k - 1)) * gs.norm2(k - 1)) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      gs = gram_schmidt(b);
      k = std::max(k - 1, 1);
    }
  }
  return b;
}

std::vector<Eigen::VectorXd> short_vectors(const Eigen::MatrixXd& basis, double radius, std::size_t cap) {
  const Eigen::MatrixXd b = lll_reduce(basis);
  const int d = static_cast<int>(b.cols());
  const GramSchmidt gs = gram_schmidt(b);
  const double r2 = radius * radius * (1.0 + 1e-12);
  std::vector<Eigen::VectorXd> out;
  std::vector<std::int64_t> x(d, 0);

  // Level i fixes x_i given x_{i+1..d-1}; `top_zero` means every higher
  // coordinate is zero, in which case x_i >= 0 picks one of each +- pair.
  auto recurse = [&](auto&& self, int i, double partial, bool top_zero) -> void {
    double c = 0.0;
    for (int j = i + 1; j < d; ++j) c -= gs.mu(j, i) * static_cast<double>(x[j]);
    const double rem = r2 - partial;
    if (rem < 0.0) return;
    const double w = std::sqrt(rem / gs.norm2(i));
    auto lo = static_cast<std::int64_t>(std::ceil(c - w));
    const auto hi = static_cast<std::int64_t>(std::floor(c + w));
    if (top_zero) lo = std::max<std::int64_t>(lo, 0);
    for (std::int64_t v = lo; v <= hi; ++v) {
      x[i] = v;
      const double t = static_cast<double>(v) - c;
      const double next = partial + t * t * gs.norm2(i);
      if (next > r2) continue;
      if (i == 0) {
        if (top_zero && v == 0) continue;
        Eigen::VectorXd coeff(d);
        for (int j = 0; j < d; ++j) coeff(j) = static_cast<double>(x[j]);
        out.push_back(b * coeff);
        if (out.size() > cap) throw CapExceeded("short vector enumeration exceeds cap");
      } else {
        self(self, i - 1, next, top_zero && v == 0);
      }
    }
    x[i] = 0;
  };
  recurse(recurse, d - 1, 0.0, true);
  return out;
}

namespace {

double gram_sqrt_det(const std::vector<const Eigen::VectorXd*>& vs) {
  const int j = static_cast<int>(vs.size());
  Eigen::MatrixXd g(j, j);
  for (int a = 0; a < j; ++a)
    for (int c = 0; c < j; ++c) g(a, c) = vs[a]->dot(*vs[c]);
  return std::sqrt(std::max(0.0, g.determinant()));
}

// Smallest covolume of a j-dimensional sublattice spanned by members of
// `vecs` (sorted by norm). A Minkowski basis of the optimum satisfies
// prod |b_i| <= gamma_j^{j/2} D, which bounds the search.
double min_covolume(const std::vector<Eigen::VectorXd>& vecs, const std::vector<double>& norms, int j,
                    double best, double hermite) {
  std::vector<const Eigen::VectorXd*> chosen;
  std::vector<Eigen::VectorXd> residual;  // Gram-Schmidt residuals of chosen
  auto recurse = [&](auto&& self, std::size_t start, double norm_product, double covol) -> void {
    const int k = static_cast<int>(chosen.size());
    if (k == j) {
      best = std::min(best, covol);
      return;
    }
    for (std::size_t idx = start; idx < vecs.size(); ++idx) {
      const double nrm = norms[idx];
      if (norm_product * std::pow(nrm, j - k) > hermite * best * (1.0 + 1e-9)) break;
      Eigen::VectorXd r = vecs[idx];
      for (const auto& e : residual) r -= (r.dot(e) / e.squaredNorm()) * e;
      const double rn = r.norm();
      if (rn <= 1e-10 * nrm) continue;  // dependent
      const double next = covol * rn;
      chosen.push_back(&vecs[idx]);
      residual.push_back(r);
      self(self, idx + 1, norm_product * nrm, next);
      chosen.pop_back();
      residual.pop_back();
    }
  };
  recurse(recurse, 0, 1.0, 1.0);
  return best;
}

}  // namespace

AlphaResult alpha(const UnimodularLattice& lattice, std::size_t cap) {
  const int d = lattice.dimension();
  const Eigen::MatrixXd b = lll_reduce(lattice.basis());
  AlphaResult result;
  result.min_covolume.assign(d, 1.0);

  // reduced-basis prefixes give upper bounds on every minimal covolume
  std::vector<double> prefix(d);
  {
    std::vector<const Eigen::VectorXd*> ptrs;
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(d);
    for (int j = 0; j < d; ++j) cols.push_back(b.col(j));
    for (int j = 0; j < d; ++j) {
      ptrs.push_back(&cols[j]);
      prefix[j] = gram_sqrt_det(ptrs);
    }
  }
  if (d > 5) {
    result.certified = false;
    for (int j = 0; j < d; ++j) result.min_covolume[j] = prefix[j];
  } else {
    auto first = short_vectors(b, b.col(0).norm() * (1.0 + 1e-9), cap);
    double lambda1 = b.col(0).norm();
    for (const auto& v : first) lambda1 = std::min(lambda1, v.norm());
    result.min_covolume[0] = lambda1;
    if (d > 2) {
      double radius = 0.0;
      for (int j = 2; j < d; ++j) {
        const double h = std::sqrt(kHermitePow[j - 1]);
        radius = std::max(radius, h * prefix[j - 1] / std::pow(lambda1, j - 1));
      }
      auto vecs = short_vectors(b, radius, cap);
      std::vector<std::size_t> order(vecs.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::vector<double> raw_norms(vecs.size());
      for (std::size_t i = 0; i < vecs.size(); ++i) raw_norms[i] = vecs[i].norm();
      std::sort(order.begin(), order.end(), [&](auto a, auto c) { return raw_norms[a] < raw_norms[c]; });
      std::vector<Eigen::VectorXd> sorted;
      std::vector<double> norms;
      sorted.reserve(vecs.size());
      for (auto i : order) {
        sorted.push_back(std::move(vecs[i]));
        norms.push_back(raw_norms[i]);
      }
      for (int j = 2; j < d; ++j) {
        const double h = std::sqrt(kHermitePow[j - 1]);
        result.min_covolume[j - 1] = min_covolume(sorted, norms, j, prefix[j - 1], h);
      }
    }
  }
  result.value = 1.0;
  for (double c : result.min_covolume) result.value = std::max(result.value, 1.0 / c);
  return result;
}

}  // namespace dioph
