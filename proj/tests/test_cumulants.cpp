#include <doctest.h>

#include <random>

#include "dioph/cumulants.hpp"
#include "dioph/errors.hpp"
#include "dioph/selftest.hpp"

using namespace dioph;
using namespace dioph::cumulants;

namespace {

std::vector<int> iota(int r) {
  std::vector<int> v(r);
  for (int i = 0; i < r; ++i) v[i] = i;
  return v;
}

// Product distribution of two independent blocks of observables.
FiniteDistribution product(const FiniteDistribution& a, const FiniteDistribution& b) {
  std::vector<Atom> atoms;
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) {
      Atom z;
      z.probability = x.probability * y.probability;
      z.values = x.values;
      z.values.insert(z.values.end(), y.values.begin(), y.values.end());
      atoms.push_back(std::move(z));
    }
  }
  return FiniteDistribution(std::move(atoms));
}

}  // namespace

TEST_CASE("set partitions are enumerated completely") {
  const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975};
  for (int r = 1; r <= 8; ++r) {
    const auto parts = set_partitions(r);
    CHECK(parts.size() == bell[r]);
    CHECK(bell_number(r) == bell[r]);
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i + 1; j < std::min(parts.size(), i + 20); ++j) CHECK_FALSE(parts[i] == parts[j]);
  }
  CHECK(set_partitions(1).front().block_count() == 1);
  CHECK(set_partitions(3).back().block_count() == 3);
  CHECK_THROWS_AS(set_partitions(0), PreconditionError);
  CHECK_THROWS_AS(SetPartition({{0, 1}, {1}}), ValidationError);
  const int labels[] = {4, 4, 9, 4};
  CHECK(SetPartition::from_labels(labels) == SetPartition({{3, 1, 0}, {2}}));
}

TEST_CASE("cumulants of a Bernoulli variable") {
  // P(X = 1) = 1/3
  const FiniteDistribution d({{mpq_class(1, 3), {mpq_class(1)}}, {mpq_class(2, 3), {mpq_class(0)}}});
  const mpq_class p(1, 3);
  const int one[] = {0}, two[] = {0, 0}, three[] = {0, 0, 0}, four[] = {0, 0, 0, 0};
  CHECK(joint_cumulant(d, one) == p);
  CHECK(joint_cumulant(d, two) == p * (1 - p));
  CHECK(joint_cumulant(d, three) == p * (1 - p) * (1 - 2 * p));
  CHECK(joint_cumulant(d, four) == p * (1 - p) * (1 - 6 * p * (1 - p)));
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(FiniteDistribution({{mpq_class(1, 2), {mpq_class(1)}}}), ValidationError);
  CHECK_THROWS_AS(FiniteDistribution({{mpq_class(0), {mpq_class(1)}}, {mpq_class(1), {mpq_class(0)}}}),
                  ValidationError);
  CHECK_THROWS_AS(FiniteDistribution({{mpq_class(1, 2), {mpq_class(1)}}, {mpq_class(1, 2), {}}}), ValidationError);
}

TEST_CASE("moments are recovered from cumulants") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 1 + trial % 5;
    const auto dist = fixtures::random_distribution(rng, 4, r);
    const auto obs = iota(r);
    mpq_class recon = 0;
    for (const auto& P : set_partitions(r)) {
      mpq_class term = 1;
      for (const auto& block : P.blocks()) {
        std::vector<int> sub;
        for (int i : block) sub.push_back(obs[i]);
        term *= joint_cumulant(dist, sub);
      }
      recon += term;
    }
    CHECK(recon == dist.moment(obs, obs));
  }
}

TEST_CASE("mixed cumulants of independent blocks vanish") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const int ra = 1 + trial % 2, rb = 1 + (trial / 2) % 3;
    const auto d = product(fixtures::random_distribution(rng, 3, ra), fixtures::random_distribution(rng, 3, rb));
    std::vector<int> obs = iota(ra + rb);
    CHECK(joint_cumulant(d, obs) == 0);
    if (ra + rb >= 2) {
      const std::vector<int> mixed{0, ra + rb - 1};
      CHECK(joint_cumulant(d, mixed) == 0);
    }
  }
}

TEST_CASE("conditional cumulants vanish for every partition with two or more blocks") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int r = 2 + trial % 4;
    const auto dist = fixtures::random_distribution(rng, 5, r);
    const auto obs = iota(r);
    for (const auto& q : set_partitions(r)) {
      const auto c = conditional_cumulant(dist, obs, q);
      if (q.block_count() >= 2) CHECK(c == 0);
      else CHECK(c == joint_cumulant(dist, obs));
    }
  }
}

TEST_CASE("repeated observables") {
  // Cum(X, X) is the variance
  const FiniteDistribution d({{mpq_class(1, 4), {mpq_class(2), mpq_class(0)}},
                              {mpq_class(3, 4), {mpq_class(-1), mpq_class(1)}}});
  const int xx[] = {0, 0}, xy[] = {0, 1};
  CHECK(joint_cumulant(d, xx) == mpq_class(27, 16));
  CHECK(joint_cumulant(d, xy) == mpq_class(-9, 16));
}

TEST_CASE("empirical cumulants") {
  std::vector<double> x;
  for (int i = 0; i < 10; ++i) x.push_back(i % 2 == 0 ? 1.0 : -1.0);
  CHECK(empirical_cumulant(x, 2) == doctest::Approx(1.0));
  CHECK(empirical_cumulant(x, 3) == doctest::Approx(0.0));
  CHECK(empirical_cumulant(x, 4) == doctest::Approx(-2.0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  std::vector<double> y(200000);
  for (auto& v : y) v = g(rng);
  CHECK(empirical_cumulant(y, 2) == doctest::Approx(4.0).epsilon(0.02));
  CHECK(std::abs(empirical_cumulant(y, 3)) < 0.2);
  CHECK(std::abs(empirical_cumulant(y, 4)) < 0.8);
  CHECK_THROWS_AS(empirical_cumulant(y, 5), PreconditionError);
  CHECK_THROWS_AS(empirical_cumulant(std::vector<double>(3, 1.0), 2), PreconditionError);
}

TEST_CASE("separation") {
  const double t[] = {5.0, 2.0, 3.5};
  CHECK(separation_D(t) == 1.5);
  const double u[] = {0.5, 9.0};
  CHECK(separation_D(u) == 0.5);
}

TEST_CASE("ladders") {
  const auto l = LadderParams::make(1.0, 3);
  CHECK(l.valid());
  CHECK(l.beta[1] == 1.0);
  CHECK(l.alpha[1] == 6.0);
  CHECK(l.beta[2] == 7.0);
  CHECK(l.alpha[3] == 6.0 * l.beta[3]);
  CHECK_THROWS_AS(LadderParams::make(1.0, 2, [](double b, int, int, double) { return b; }), ValidationError);
  CHECK_THROWS_AS(LadderParams::make(0.0, 2), PreconditionError);
  const auto custom = LadderParams::make(0.5, 2, [](double b, int, int r, double g) { return 2.0 * (3 + r) * b + g; });
  CHECK(custom.valid());
}

TEST_CASE("rho spreads") {
  const double s[] = {0.0, 1.0, 10.0, 12.0};
  const SetPartition q({{0, 1}, {2, 3}});
  CHECK(rho_upper(s, q) == 2.0);
  CHECK(rho_lower(s, q) == 9.0);
}

TEST_CASE("decomposition pieces cover every tuple") {
  for (double gamma : {1.0, 2.0}) {
    for (int r : {2, 3}) {
      const auto ladder = LadderParams::make(gamma, r);
      const int N = r == 2 ? 40 : 25;
      std::vector<int> t(r, 0);
      std::uint64_t uncovered = 0;
      while (true) {
        const auto pieces = classify_tuple(t, ladder);
        uncovered += pieces.empty();
        int k = r - 1;
        while (k >= 0 && t[k] == N - 1) t[k--] = 0;
        if (k < 0) break;
        ++t[k];
      }
      CAPTURE(gamma);
      CAPTURE(r);
      CHECK(uncovered == 0);
    }
  }
}

TEST_CASE("pieces have the stated geometry") {
  const auto ladder = LadderParams::make(1.0, 2);
  const int close[] = {0, 1};
  const auto a = classify_tuple(close, ladder);
  REQUIRE(!a.empty());
  CHECK(a.front().clustered);
  const int far[] = {0, 500};
  const auto b = classify_tuple(far, ladder, true);
  bool separated = false;
  for (const auto& piece : b) {
    if (piece.clustered) continue;
    separated = true;
    const double s[] = {0.0, 0.0, 500.0};
    CHECK(rho_upper(s, piece.q) <= ladder.alpha[piece.j]);
    CHECK(rho_lower(s, piece.q) > ladder.beta[piece.j + 1]);
  }
  CHECK(separated);
}
