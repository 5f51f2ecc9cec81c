#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "dioph/errors.hpp"
#include "dioph/montecarlo.hpp"
#include "dioph/parallel.hpp"
#include "dioph/rng.hpp"

using namespace dioph;

namespace {

ApproximationProblem p21() { return validate({2, 1, {Rational(1, 2), Rational(1, 2)}, {1.0, 1.0}, Norm::Sup}); }

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using P = Philox4x32;
  CHECK(P::generate({0, 0, 0, 0}, {0, 0}) == P::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(P::generate({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == P::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(P::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        P::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("sample_u is reproducible, dyadic and in range") {
  CHECK(sample_u(42, 0, 2, 3) == sample_u(42, 0, 2, 3));
  CHECK_FALSE(sample_u(42, 0, 2, 3) == sample_u(43, 0, 2, 3));
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto u = sample_u(7, i, 3, 2);
    for (double x : u.entries()) {
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      CHECK(std::ldexp(x, 53) == std::floor(std::ldexp(x, 53)));
    }
  }
}

TEST_CASE("a million sample indices give distinct matrices") {
  std::vector<std::pair<double, double>> draws(1000000);
  for (std::uint64_t i = 0; i < draws.size(); ++i) {
    const auto u = sample_u(42, i, 2, 1);
    draws[i] = {u(0, 0), u(1, 0)};
  }
  std::sort(draws.begin(), draws.end());
  CHECK(std::adjacent_find(draws.begin(), draws.end()) == draws.end());
  double mean = 0.0;
  for (const auto& d : draws) mean += d.first;
  CHECK(mean / draws.size() == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("normal cdf against an independent implementation") {
  for (double var : {0.5, 1.0, 27.8}) {
    const boost::math::normal_distribution<double> ref(0.0, std::sqrt(var));
    for (double x = -12.0; x <= 12.0; x += 0.37) {
      CHECK(std::abs(normal_cdf(x, var) - boost::math::cdf(ref, x)) < 1e-12);
    }
    CHECK(normal_cdf(0.0, var) == 0.5);
  }
  CHECK_THROWS_AS(normal_cdf(0.0, 0.0), PreconditionError);
}

TEST_CASE("KS statistic on exact quantiles") {
  for (int S : {10, 100, 1000}) {
    std::vector<double> q(S);
    for (int i = 0; i < S; ++i) q[i] = (i + 0.5) / S;
    const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_statistic(q, uniform) == doctest::Approx(0.5 / S));

    const boost::math::normal_distribution<double> ref(0.0, 2.0);
    std::vector<double> z(S);
    for (int i = 0; i < S; ++i) z[i] = boost::math::quantile(ref, (i + 0.5) / S);
    CHECK(ks_statistic(z, [](double x) { return normal_cdf(x, 4.0); }) == doctest::Approx(0.5 / S).epsilon(1e-6));
  }
}

TEST_CASE("KS against the step function of the same samples is zero") {
  std::vector<double> x{1.0, 2.0, 2.0, 5.0, 7.5};
  auto ecdf = [&](double t) {
    return static_cast<double>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) / x.size();
  };
  CHECK(ks_statistic(x, ecdf) == 0.0);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, ecdf), PreconditionError);
}

TEST_CASE("all-zero samples are degenerate with KS one half") {
  const std::vector<double> zeros(50, 0.0);
  const auto s = summarize(zeros, [](double x) { return normal_cdf(x, 27.8); });
  CHECK(s.variance == 0.0);
  CHECK(s.ks_distance == doctest::Approx(0.5));
  CHECK(clt_status(s, true) == "degenerate");
  CHECK(clt_status(summarize(std::vector<double>{}), true) == "no data");
}

TEST_CASE("summary statistics and Wilson intervals") {
  const std::vector<double> x{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto s = summarize(x);
  CHECK(s.mean == 5.5);
  CHECK(s.variance == doctest::Approx(55.0 / 6.0));
  CHECK(s.stderr_mean == doctest::Approx(std::sqrt(55.0 / 60.0)));
  CHECK(s.cum3 == doctest::Approx(0.0));
  const auto w = wilson_interval(0, 100);
  CHECK(w.low == 0.0);
  CHECK(w.high == doctest::Approx(0.037).epsilon(0.01));
  const auto h = wilson_interval(50, 100);
  CHECK(h.low == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(h.high == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("parallel and serial maps agree") {
  auto fn = [](std::uint64_t i) { return sample_u(1, i, 2, 2).entries()[3]; };
  CHECK(parallel_map<double>(1000, 4, fn) == serial_map<double>(1000, fn));
  CHECK_THROWS_AS(parallel_map<int>(10, 2, [](std::uint64_t i) -> int {
                    if (i == 7) throw CapExceeded("boom");
                    return 0;
                  }),
                  CapExceeded);
}

TEST_CASE("results do not depend on the worker count") {
  ExperimentConfig a(p21());
  a.N = 7;
  a.samples = 60;
  a.trend_N = {4};
  a.workers = 1;
  ExperimentConfig b = a;
  b.workers = 4;
  const auto ra = run_clt(a), rb = run_clt(b);
  CHECK(ra.deltas == rb.deltas);
  CHECK(ra.D == rb.D);
  CHECK(ra.stats.variance == rb.stats.variance);
}

TEST_CASE("LLN table, exact expectation and flags") {
  ExperimentConfig c(p21());
  c.samples = 200;
  c.N_grid = {3, 4, 5};
  const auto r = run_lln(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.C == 8.0);
  // E Delta_{e^N} = 4 sum_{0 < |q| < e^N} 1/|q| = 8 H
  for (const auto& row : r.rows) {
    double h = 0.0;
    for (int q = 1; q < std::exp(row.N); ++q) h += 1.0 / q;
    CHECK(row.expected == doctest::Approx(8.0 * h).epsilon(1e-12));
    CHECK(row.gap == doctest::Approx(std::abs(row.mean - 8.0 * row.N)));
    CHECK(row.gap_expected < 5 * row.stderr_mean + 1e-9);
  }
  CHECK(r.gaps_within.has_value());
  CHECK(r.flat.has_value());

  c.samples = 1;
  const auto one = run_lln(c);
  CHECK_FALSE(one.gaps_within.has_value());
  CHECK_FALSE(one.flat.has_value());

  c.fixed_u = MatrixU::zero(2, 1);
  const auto zero = run_lln(c);
  REQUIRE(zero.gaps_within.has_value());
  CHECK_FALSE(*zero.gaps_within);
  CHECK(zero.rows.back().gap > 10.0);

  c.samples = 0;
  CHECK_THROWS_AS(run_lln(c), PreconditionError);
}

TEST_CASE("CLT run for m = 1 gives data without a verdict") {
  ExperimentConfig c(validate({1, 2, {Rational(2)}, {1.0}, Norm::Sup}));
  c.N = 3;
  c.samples = 20;
  const auto r = run_clt(c);
  CHECK(r.D.size() == 20);
  CHECK_FALSE(r.theory_available);
  CHECK(r.verdicts["status"] == "theory comparison unavailable");
  CHECK_FALSE(r.factor_two.has_value());
}

TEST_CASE("factor-two diagnostic is reported for n = 1") {
  ExperimentConfig c(p21());
  c.N = 6;
  c.samples = 100;
  const auto r = run_clt(c);
  REQUIRE(r.factor_two.has_value());
  CHECK(r.factor_two->sigma_vectors_x4 == doctest::Approx(2.0 * r.factor_two->sigma_forms));
  CHECK(r.factor_two->ratio_forms == doctest::Approx(r.stats.variance / r.theory->sigma2));
  CHECK(r.trend.size() == 2);  // trend_N {4, 8} below N = 6, plus N itself

  c.convention = Convention::PositiveQ;
  const auto pos = run_clt(c);
  // exact sign symmetry: D_positive = D_both / 2
  for (std::size_t i = 0; i < r.D.size(); ++i) CHECK(pos.D[i] == doctest::Approx(r.D[i] / 2.0));
  CHECK(pos.factor_two->empirical_variance == doctest::Approx(r.factor_two->empirical_variance));
}

TEST_CASE("covariance lag symmetry") {
  ExperimentConfig a(p21());
  a.N = 6;
  a.samples = 300;
  a.base_t = 3;
  a.lags = {2};
  ExperimentConfig b = a;
  b.base_t = 5;
  b.lags = {-2};
  const auto ra = run_covariance(a), rb = run_covariance(b);
  CHECK(ra.rows[0].empirical == doctest::Approx(rb.rows[0].empirical).epsilon(1e-12));
  CHECK(ra.rows[0].theory == doctest::Approx(rb.rows[0].theory).epsilon(1e-12));
  CHECK(ra.var_D_prediction == doctest::Approx(variance_chain_prediction(p21(), 6, a.theta_p_max)));
}

TEST_CASE("alpha tail edge cases") {
  ExperimentConfig c(p21());
  c.samples = 300;
  c.L_grid = {1.0, 2.0, 8.0};
  const auto r = run_alpha_tail(c);
  CHECK(r.rows[0].tail == 1.0);
  CHECK(r.rows[0].s == 0);
  CHECK(r.rows[1].s == 3);
  CHECK(r.rows[2].s == 9);
  CHECK(r.rows[2].tail <= r.rows[1].tail);
  CHECK(r.certified);
  for (const auto& row : r.rows) {
    CHECK(row.wilson.low <= row.tail);
    CHECK(row.tail <= row.wilson.high);
  }
  c.L_grid = {0.5};
  CHECK_THROWS_AS(run_alpha_tail(c), PreconditionError);
}

TEST_CASE("Siegel mean over a small sample") {
  ExperimentConfig c(p21());
  c.samples = 1500;
  c.block_steps = {2, 4};
  const auto r = run_siegel_mean(c);
  for (const auto& row : r.rows) {
    CHECK(row.integral == doctest::Approx(8.0));
    CHECK(std::abs(row.mean - row.integral) < 5 * row.stderr_mean);
  }
}
