#include "dioph/selftest.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "dioph/counting.hpp"
#include "dioph/lattice.hpp"
#include "dioph/montecarlo.hpp"
#include "dioph/reference.hpp"
#include "dioph/rng.hpp"

namespace dioph {

bool SelftestReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void SelftestReport::print(std::ostream& out) const {
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.suite << "/" << c.name;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  out << (passed() ? "selftest passed" : "selftest FAILED") << " in " << seconds << " s\n";
}

namespace fixtures {

ApproximationProblem random_problem(std::mt19937_64& rng, int m, int n) {
  ProblemSpec spec;
  spec.m = m;
  spec.n = n;
  spec.norm = (rng() & 1) ? Norm::Sup : Norm::Euclidean;
  // w_i = n * k_i / sum(k), k_i in 1..3
  std::vector<std::int64_t> k(m);
  std::int64_t total = 0;
  for (auto& v : k) total += (v = 1 + static_cast<std::int64_t>(rng() % 3));
  for (auto v : k) spec.weights.emplace_back(n * v, total);
  std::uniform_real_distribution<double> theta(0.3, 2.0);
  for (int i = 0; i < m; ++i) spec.thetas.push_back(theta(rng));
  return validate(spec);
}

cumulants::FiniteDistribution random_distribution(std::mt19937_64& rng, int atoms, int observables) {
  std::vector<std::int64_t> weights(atoms);
  std::int64_t total = 0;
  for (auto& w : weights) total += (w = 1 + static_cast<std::int64_t>(rng() % 5));
  std::vector<cumulants::Atom> out;
  for (int a = 0; a < atoms; ++a) {
    cumulants::Atom atom;
    atom.probability = mpq_class(weights[a], total);
    atom.probability.canonicalize();
    for (int o = 0; o < observables; ++o) {
      mpq_class v(static_cast<long>(rng() % 7) - 3, static_cast<long>(1 + rng() % 4));
      v.canonicalize();
      atom.values.push_back(v);
    }
    out.push_back(std::move(atom));
  }
  return cumulants::FiniteDistribution(std::move(out));
}

}  // namespace fixtures

namespace {

struct Recorder {
  SelftestReport& report;
  void add(std::string suite, std::string name, bool ok, std::string detail = {}) {
    report.checks.push_back({std::move(suite), std::move(name), ok, std::move(detail)});
  }
};

void suite_counting(Recorder& rec) {
  std::mt19937_64 rng(7);
  const std::pair<int, int> shapes[] = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  for (auto [m, n] : shapes) {
    int bad = 0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto problem = fixtures::random_problem(rng, m, n);
      const auto u = sample_u(11, trial, m, n);
      const double T = n == 1 ? 200.0 : 40.0;
      const auto fast = count_direct(problem, u, T, Convention::BothSigns);
      if (fast.total != reference::count_brute_force(problem, u, T, Convention::BothSigns)) ++bad;
    }
    rec.add("counting", "brute_force_equivalence_" + std::to_string(m) + "x" + std::to_string(n), bad == 0,
            std::to_string(bad) + " mismatches");
  }
  const auto problem = validate({2, 1, {Rational(1, 2), Rational(1, 2)}, {1.0, 1.0}, Norm::Sup});
  const auto f = WeightedBoxFunction::omega_e(problem);
  int bad = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = sample_u(13, trial, 2, 1);
    const auto lattice = lattice_from_u(problem, u);
    const auto direct = count_direct(problem, u, std::exp(5.0), Convention::BothSigns);
    std::uint64_t sum = 0;
    for (int s = 0; s < 5; ++s) sum += siegel_transform_box(problem, f, lattice, s);
    if (sum != direct.total) ++bad;
  }
  rec.add("counting", "siegel_tessellation", bad == 0, std::to_string(bad) + " mismatches");
}

void suite_cumulants(Recorder& rec) {
  std::mt19937_64 rng(17);
  int bad = 0, checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int r = 2 + trial % 3;
    const auto dist = fixtures::random_distribution(rng, 5, r);
    std::vector<int> obs(r);
    for (int i = 0; i < r; ++i) obs[i] = i;
    for (const auto& q : cumulants::set_partitions(r)) {
      if (q.block_count() < 2) continue;
      ++checked;
      if (cumulants::conditional_cumulant(dist, obs, q) != 0) ++bad;
    }
  }
  rec.add("cumulants", "conditional_vanishing", bad == 0,
          std::to_string(checked) + " partitions, " + std::to_string(bad) + " nonzero");

  for (double gamma : {1.0, 2.0}) {
    const auto ladder = cumulants::LadderParams::make(gamma, 3);
    int uncovered = 0;
    for (int a = 0; a < 40; ++a)
      for (int b = 0; b < 40; ++b)
        for (int c = 0; c < 40; ++c) {
          const int t[3] = {a, b, c};
          if (cumulants::classify_tuple(t, ladder).empty()) ++uncovered;
        }
    std::ostringstream name;
    name << "covering_gamma_" << gamma;
    rec.add("cumulants", name.str(), uncovered == 0, std::to_string(uncovered) + " uncovered tuples");
  }
}

void suite_divisor(Recorder& rec) {
  int bad = 0;
  for (std::int64_t q = 1; q <= 120; ++q)
    for (std::int64_t ell = 1; ell <= q; ++ell)
      if (theory::n_solutions(q, ell, q) != theory::n_solutions_brute(q, ell, q)) ++bad;
  rec.add("divisor", "n_solutions_closed_form", bad == 0, std::to_string(bad) + " mismatches");
  for (int k = 1; k <= 3; ++k) {
    const auto r = theory::divisor_sum_check(400, k, [](std::int64_t q) { return q; });
    rec.add("divisor", "inner_identity_k" + std::to_string(k), r.inner_identity_holds && r.divisor_bound_holds);
  }
}

void suite_theory(Recorder& rec, const theory::ZetaFn& zeta_fn) {
  // zeta against partial sums with an integral tail bound
  bool zeta_ok = true;
  for (double s : {2.0, 3.0, 4.0, 2.5}) {
    double partial = 0.0;
    const int M = 100000;
    for (int k = 1; k <= M; ++k) partial += std::pow(k, -s);
    const double tail = std::pow(M, 1 - s) / (s - 1) - 0.5 * std::pow(M, -s);
    zeta_ok = zeta_ok && std::abs(zeta_fn(s) - partial - tail) < 1e-9;
  }
  rec.add("theory", "zeta_partial_sums", zeta_ok);

  const std::int64_t P = 2000;
  const int S = static_cast<int>(std::ceil(std::log(static_cast<double>(P)))) + 2;
  const std::pair<int, int> shapes[] = {{2, 1}, {2, 2}};
  for (auto [m, n] : shapes) {
    ProblemSpec spec{m, n, {}, std::vector<double>(m, 1.0), Norm::Sup};
    for (int i = 0; i < m; ++i) spec.weights.emplace_back(n, m);
    const auto problem = validate(spec);
    const auto table = theory::theta_table(problem, S, P, zeta_fn);
    double sum = 0.0;
    for (double v : table) sum += v;
    const double sigma2 = theory::constants(problem, zeta_fn).sigma2;
    const double rel = std::abs(sum - sigma2) / sigma2;
    std::ostringstream detail;
    detail << "relative error " << rel;
    rec.add("theory", "sigma2_identity_" + std::to_string(m) + "x" + std::to_string(n), rel <= 1e-3, detail.str());
  }
}

void suite_rng(Recorder& rec) {
  const auto a = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  const auto b = Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  const bool ok = a == Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8} &&
                  b == Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1};
  rec.add("rng", "philox_known_answers", ok);
}

void suite_statistical(Recorder& rec, int workers) {
  const auto problem = validate({2, 1, {Rational(1, 2), Rational(1, 2)}, {1.0, 1.0}, Norm::Sup});
  ExperimentConfig config(problem);
  config.samples = 2000;
  config.workers = workers;
  config.block_steps = {4};
  const auto mean = run_siegel_mean(config);
  std::ostringstream detail;
  detail << "mean " << mean.rows[0].mean << " +- " << mean.rows[0].stderr_mean << " vs " << mean.rows[0].integral;
  rec.add("statistical", "siegel_mean_s4", mean.passed, detail.str());

  config.samples = 500;
  config.L_grid = {1.0, 2.0};
  const auto tail = run_alpha_tail(config);
  rec.add("statistical", "alpha_tail_small", tail.rows[0].tail == 1.0 && tail.rows[1].within,
          "tail(L=2) = " + std::to_string(tail.rows[1].tail));
}

}  // namespace

SelftestReport run_selftest(const SelftestOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SelftestReport report;
  Recorder rec{report};
  auto guarded = [&](const std::string& suite, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      rec.add(suite, "exception", false, e.what());
    }
  };
  guarded("counting", [&] { suite_counting(rec); });
  guarded("cumulants", [&] { suite_cumulants(rec); });
  guarded("divisor", [&] { suite_divisor(rec); });
  guarded("theory", [&] { suite_theory(rec, options.zeta); });
  guarded("rng", [&] { suite_rng(rec); });
  if (!options.fast) guarded("statistical", [&] { suite_statistical(rec, options.workers); });
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace dioph
