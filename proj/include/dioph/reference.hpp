#pragma once

// Serial brute-force references. Every (p, q) pair is enumerated explicitly
// and tested in exact rational arithmetic; nothing is shared with the fast
// per-q interval counting in counting.hpp.

#include <cstdint>

#include "dioph/counting.hpp"

namespace dioph::reference {

// |{(p, q) : 0 < ||q|| < T, all inequalities hold}| by explicit p enumeration.
std::uint64_t count_brute_force(const ApproximationProblem& problem, const MatrixU& u, double T,
                                Convention convention);

// Same over the window lo <= ||q|| < hi.
std::uint64_t count_brute_force(const ApproximationProblem& problem, const MatrixU& u, double lo,
                                double hi, Convention convention);

}  // namespace dioph::reference
