#pragma once

#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dioph/cumulants.hpp"
#include "dioph/problem.hpp"
#include "dioph/theory.hpp"

namespace dioph {

struct SelftestCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  bool fast = false;  // skip the statistical suites
  theory::ZetaFn zeta = theory::zeta;
  int workers = 0;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  double seconds = 0.0;
  bool passed() const;
  void print(std::ostream& out) const;
};

SelftestReport run_selftest(const SelftestOptions& options = {});

// Generators shared by the self-test and the test suite.
namespace fixtures {

// Random (m, n) problem with rational weights summing to n, thetas in [0.3, 2).
ApproximationProblem random_problem(std::mt19937_64& rng, int m, int n);

// Atoms with small rational probabilities and values in {-3..3}/{1..4}.
cumulants::FiniteDistribution random_distribution(std::mt19937_64& rng, int atoms, int observables);

}  // namespace fixtures

}  // namespace dioph
