#include "dioph/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dioph/errors.hpp"

namespace dioph::cumulants {

SetPartition::SetPartition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
  std::vector<int> seen;
  for (auto& b : blocks_) {
    if (b.empty()) throw ValidationError("partition has an empty block");
    std::sort(b.begin(), b.end());
    seen.insert(seen.end(), b.begin(), b.end());
  }
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] != static_cast<int>(i)) throw ValidationError("blocks must be disjoint and cover 0..size-1");
  }
  ground_ = static_cast<int>(seen.size());
}

SetPartition SetPartition::from_labels(std::span<const int> labels) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(ids.begin(), ids.end(), labels[i]);
    if (it == ids.end()) {
      ids.push_back(labels[i]);
      blocks.push_back({static_cast<int>(i)});
    } else {
      blocks[it - ids.begin()].push_back(static_cast<int>(i));
    }
  }
  return SetPartition(std::move(blocks));
}

SetPartition SetPartition::single_block(int size) {
  std::vector<int> all(size);
  for (int i = 0; i < size; ++i) all[i] = i;
  return SetPartition({all});
}

std::vector<SetPartition> set_partitions(int r) {
  if (r < 1 || r > 10) throw PreconditionError("set_partitions supports 1 <= r <= 10");
  std::vector<SetPartition> out;
  // restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1])
  std::vector<int> a(r, 0), maxima(r, 0);
  while (true) {
    out.push_back(SetPartition::from_labels(a));
    int i = r - 1;
    while (i > 0 && a[i] == maxima[i - 1] + 1) --i;
    if (i == 0) break;
    ++a[i];
    maxima[i] = std::max(maxima[i - 1], a[i]);
    for (int k = i + 1; k < r; ++k) {
      a[k] = 0;
      maxima[k] = maxima[i];
    }
  }
  return out;
}

std::uint64_t bell_number(int r) {
  // Bell triangle
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i < r; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

FiniteDistribution::FiniteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ValidationError("distribution needs at least one atom");
  mpq_class total = 0;
  observables_ = static_cast<int>(atoms_.front().values.size());
  for (const auto& a : atoms_) {
    if (a.probability <= 0) throw ValidationError("atom probabilities must be positive");
    if (static_cast<int>(a.values.size()) != observables_) {
      throw ValidationError("every atom needs the same number of observables");
    }
    total += a.probability;
  }
  if (total != 1) throw ValidationError("probabilities sum to " + total.get_str() + ", not 1");
}

mpq_class FiniteDistribution::moment(std::span<const int> observables, std::span<const int> positions) const {
  mpq_class acc = 0;
  for (const auto& a : atoms_) {
    mpq_class prod = a.probability;
    for (int k : positions) prod *= a.values[observables[k]];
    acc += prod;
  }
  return acc;
}

namespace {

void check_observables(const FiniteDistribution& dist, std::span<const int> observables) {
  if (observables.empty() || observables.size() > 8) throw PreconditionError("cumulants support 1 <= r <= 8");
  for (int o : observables) {
    if (o < 0 || o >= dist.observable_count()) throw PreconditionError("observable index out of range");
  }
}

mpq_class factorial_sign(std::size_t blocks) {
  // (-1)^{|P|-1} (|P|-1)!
  mpq_class f = 1;
  for (std::size_t k = 2; k < blocks; ++k) f *= static_cast<long>(k);
  return blocks % 2 == 1 ? f : mpq_class(-f);
}

}  // namespace

mpq_class joint_cumulant(const FiniteDistribution& dist, std::span<const int> observables) {
  return conditional_cumulant(dist, observables, SetPartition::single_block(static_cast<int>(observables.size())));
}

mpq_class conditional_cumulant(const FiniteDistribution& dist, std::span<const int> observables,
                               const SetPartition& q) {
  check_observables(dist, observables);
  const int r = static_cast<int>(observables.size());
  if (q.ground_size() != r) throw PreconditionError("conditioning partition must cover the r positions");
  mpq_class total = 0;
  std::vector<int> meet;
  for (const auto& p : set_partitions(r)) {
    mpq_class term = factorial_sign(p.block_count());
    for (const auto& I : p.blocks()) {
      for (const auto& J : q.blocks()) {
        meet.clear();
        std::set_intersection(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(meet));
        if (!meet.empty()) term *= dist.moment(observables, meet);
      }
    }
    total += term;
  }
  return total;
}

double empirical_cumulant(std::span<const double> samples, int r) {
  if (r < 2 || r > 4) throw PreconditionError("empirical cumulants support r in 2..4");
  if (samples.size() < 10) throw PreconditionError("empirical cumulants need at least 10 samples");
  const double S = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= S;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= S;
  m3 /= S;
  m4 /= S;
  switch (r) {
    case 2: return m2;
    case 3: return m3;
    default: return m4 - 3.0 * m2 * m2;
  }
}

double separation_D(std::span<const double> t) {
  if (t.empty()) throw PreconditionError("separation_D needs r >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    best = std::min(best, t[i]);
    for (std::size_t j = i + 1; j < t.size(); ++j) best = std::min(best, std::abs(t[i] - t[j]));
  }
  return best;
}

LadderParams LadderParams::make(double gamma, int r, const Recursion& next) {
  if (!(gamma > 0.0) || r < 1) throw PreconditionError("ladder needs gamma > 0 and r >= 1");
  LadderParams l;
  l.gamma = gamma;
  l.r = r;
  l.alpha.assign(r + 1, 0.0);
  l.beta.assign(r + 2, 0.0);
  l.beta[1] = gamma;
  for (int j = 1; j <= r; ++j) {
    l.alpha[j] = (3.0 + r) * l.beta[j];
    l.beta[j + 1] = next ? next(l.beta[j], j, r, gamma) : (3.0 + r) * l.beta[j] + gamma;
  }
  if (!l.valid()) throw ValidationError("ladder recursion violates 0 = a_0 < b_1 < a_1 < ... < b_{r+1}");
  return l;
}

bool LadderParams::valid() const {
  if (alpha.size() != static_cast<std::size_t>(r + 1) || beta.size() != static_cast<std::size_t>(r + 2)) return false;
  if (alpha[0] != 0.0) return false;
  for (int j = 1; j <= r; ++j) {
    if (!(alpha[j - 1] < beta[j] && beta[j] < alpha[j])) return false;
    if (alpha[j] != (3.0 + r) * beta[j]) return false;
  }
  return alpha[r] < beta[r + 1];
}

double rho_upper(std::span<const double> s, const SetPartition& q) {
  double best = 0.0;
  for (const auto& I : q.blocks()) {
    for (int i : I)
      for (int j : I) best = std::max(best, std::abs(s[i] - s[j]));
  }
  return best;
}

double rho_lower(std::span<const double> s, const SetPartition& q) {
  double best = std::numeric_limits<double>::infinity();
  const auto& b = q.blocks();
  for (std::size_t x = 0; x < b.size(); ++x)
    for (std::size_t y = x + 1; y < b.size(); ++y)
      for (int i : b[x])
        for (int j : b[y]) best = std::min(best, std::abs(s[i] - s[j]));
  return best;
}

std::vector<PieceLabel> classify_tuple(std::span<const int> s, const LadderParams& ladder, bool all) {
  const int r = static_cast<int>(s.size());
  if (r != ladder.r) throw PreconditionError("tuple length must equal the ladder's r");
  std::vector<double> full(r + 1, 0.0);
  for (int i = 0; i < r; ++i) full[i + 1] = s[i];
  std::vector<PieceLabel> labels;

  double spread = 0.0;
  for (int i = 0; i <= r; ++i)
    for (int j = 0; j <= r; ++j) spread = std::max(spread, std::abs(full[i] - full[j]));
  if (spread <= ladder.beta[r + 1]) {
    labels.push_back({true, -1, SetPartition::single_block(r + 1)});
    if (!all) return labels;
  }
  for (int j = 0; j <= r; ++j) {
    for (const auto& q : set_partitions(r + 1)) {
      if (q.block_count() < 2) continue;
      if (rho_upper(full, q) <= ladder.alpha[j] && rho_lower(full, q) > ladder.beta[j + 1]) {
        labels.push_back({false, j, q});
        if (!all) return labels;
      }
    }
  }
  return labels;
}

}  // namespace dioph::cumulants
