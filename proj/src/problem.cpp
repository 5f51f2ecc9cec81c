#include "dioph/problem.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "dioph/errors.hpp"

namespace dioph {

std::string to_string(Norm norm) { return norm == Norm::Sup ? "sup" : "euclidean"; }

Norm parse_norm(std::string_view text) {
  if (text == "sup" || text == "max" || text == "inf") return Norm::Sup;
  if (text == "euclidean" || text == "l2") return Norm::Euclidean;
  throw ValidationError("unknown norm '" + std::string(text) + "' (expected sup|euclidean)");
}

ApproximationProblem validate(const ProblemSpec& spec) {
  if (spec.m < 1) throw ValidationError("m must be >= 1");
  if (spec.n < 1) throw ValidationError("n must be >= 1");
  if (static_cast<int>(spec.weights.size()) != spec.m) {
    throw ValidationError("expected " + std::to_string(spec.m) + " weights, got " +
                          std::to_string(spec.weights.size()));
  }
  if (static_cast<int>(spec.thetas.size()) != spec.m) {
    throw ValidationError("expected " + std::to_string(spec.m) + " thetas, got " +
                          std::to_string(spec.thetas.size()));
  }
  mpq_class sum = 0;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    if (spec.weights[i].num() <= 0) {
      throw ValidationError("weight w_" + std::to_string(i + 1) + " = " + spec.weights[i].str() +
                            " is not positive");
    }
    sum += spec.weights[i].to_mpq();
  }
  if (sum != mpq_class(spec.n)) {
    throw ValidationError("weight sum " + sum.get_str() + " != n = " + std::to_string(spec.n));
  }
  for (std::size_t i = 0; i < spec.thetas.size(); ++i) {
    if (!(spec.thetas[i] > 0.0) || !std::isfinite(spec.thetas[i])) {
      throw ValidationError("theta_" + std::to_string(i + 1) + " is not a positive finite real");
    }
  }
  ApproximationProblem p;
  p.m_ = spec.m;
  p.n_ = spec.n;
  p.norm_ = spec.norm;
  p.weights_ = spec.weights;
  p.thetas_ = spec.thetas;
  for (const auto& w : spec.weights) p.weights_d_.push_back(w.to_double());
  return p;
}

double ApproximationProblem::theta_product() const {
  double prod = 1.0;
  for (double t : thetas_) prod *= t;
  return prod;
}

ProblemSpec ApproximationProblem::spec() const { return {m_, n_, weights_, thetas_, norm_}; }

Annulus::Annulus(double low, double high) : t_low(low), t_high(high) {
  if (!(low >= 0.0) || !(high > low)) throw ValidationError("annulus needs 0 <= t_low < t_high");
}

double Annulus::log_length() const { return std::log(t_high) - std::log(t_low); }

WeightedBoxFunction::WeightedBoxFunction(const ApproximationProblem& problem, double u1, double u2,
                                         bool low_closed_, bool high_closed_)
    : upsilon1(u1),
      upsilon2(u2),
      thetas(problem.thetas()),
      weights(problem.weights_double()),
      low_closed(low_closed_),
      high_closed(high_closed_) {
  if (!(u1 > 0.0) || !(u2 > u1)) throw ValidationError("box function needs 0 < upsilon1 < upsilon2");
}

WeightedBoxFunction WeightedBoxFunction::omega_e(const ApproximationProblem& problem) {
  return WeightedBoxFunction(problem, 1.0, std::numbers::e, true, false);
}

bool WeightedBoxFunction::radial_contains(double r) const {
  const bool lo = low_closed ? r >= upsilon1 : r > upsilon1;
  const bool hi = high_closed ? r <= upsilon2 : r < upsilon2;
  return lo && hi;
}

double norm_eval(std::span<const double> v, Norm norm) {
  if (norm == Norm::Sup) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
  }
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double norm_eval(std::span<const std::int64_t> v, Norm norm) {
  if (norm == Norm::Sup) {
    std::int64_t best = 0;
    for (auto x : v) best = std::max(best, x < 0 ? -x : x);
    return static_cast<double>(best);
  }
  long double acc = 0.0L;
  for (auto x : v) acc += static_cast<long double>(x) * static_cast<long double>(x);
  return static_cast<double>(std::sqrt(acc));
}

double omega_n(Norm norm, int n) {
  if (n < 1) throw ValidationError("omega_n needs n >= 1");
  if (norm == Norm::Sup) return n * std::ldexp(1.0, n);
  if (n == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

using Integrand = std::function<double(const std::vector<double>&)>;

// Composite 30-point Gauss-Legendre on [-1, 0] and [0, 1]; the face
// integrands below are analytic, so this is far below 1e-12.
double integrate(const std::function<double(double)>& g) {
  using boost::math::quadrature::gauss;
  return gauss<double, 30>::integrate(g, -1.0, 0.0) + gauss<double, 30>::integrate(g, 0.0, 1.0);
}

// Integral of g over [-1, 1]^k by nested Gauss-Legendre.
double cube_integral(const Integrand& g, int k, std::vector<double>& x, int depth = 0) {
  if (depth == k) return g(x);
  return integrate(
      [&](double t) {
        x[depth] = t;
        return cube_integral(g, k, x, depth + 1);
      });
}

// Integral of g over the Euclidean sphere S^{n-1}, pulled back to the 2n
// faces of the cube: on the face x_i = +-1, dsigma = |x|_2^{-n} dx'.
double sphere_integral(const std::function<double(const std::vector<double>&)>& g, int n) {
  if (n == 1) return g({1.0}) + g({-1.0});
  double total = 0.0;
  std::vector<double> free(n - 1);
  for (int face = 0; face < n; ++face) {
    for (double sign : {1.0, -1.0}) {
      Integrand on_face = [&](const std::vector<double>& xp) {
        std::vector<double> z(n);
        double r2 = 1.0;
        for (int j = 0, k = 0; j < n; ++j) {
          z[j] = j == face ? sign : xp[k++];
          if (j != face) r2 += z[j] * z[j];
        }
        const double r = std::sqrt(r2);
        for (double& v : z) v /= r;
        return g(z) * std::pow(r, -static_cast<double>(n));
      };
      total += cube_integral(on_face, n - 1, free);
    }
  }
  return total;
}

}  // namespace

double omega_n_quadrature(Norm norm, int n) {
  if (n < 1) throw ValidationError("omega_n needs n >= 1");
  return sphere_integral(
      [&](const std::vector<double>& z) { return std::pow(norm_eval(z, norm), -static_cast<double>(n)); },
      n);
}

double domain_volume(const ApproximationProblem& problem, double T) {
  if (!(T >= 1.0)) throw ValidationError("domain volume needs T >= 1");
  return std::ldexp(problem.theta_product(), problem.m()) * omega_n(problem.norm(), problem.n()) *
         std::log(T);
}

double domain_volume(const ApproximationProblem& problem, const Annulus& band) {
  return std::ldexp(problem.theta_product(), problem.m()) * omega_n(problem.norm(), problem.n()) *
         band.log_length();
}

double box_integral(const ApproximationProblem& problem, const WeightedBoxFunction& f) {
  double prod = 1.0;
  for (double t : f.thetas) prod *= 2.0 * t;
  return prod * omega_n(problem.norm(), problem.n()) * (std::log(f.upsilon2) - std::log(f.upsilon1));
}

nlohmann::json to_json(const ProblemSpec& spec) {
  nlohmann::json j;
  j["m"] = spec.m;
  j["n"] = spec.n;
  j["weights"] = nlohmann::json::array();
  for (const auto& w : spec.weights) j["weights"].push_back(w.str());
  j["thetas"] = spec.thetas;
  j["norm"] = to_string(spec.norm);
  return j;
}

ProblemSpec problem_spec_from_json(const nlohmann::json& j) {
  ProblemSpec spec;
  try {
    spec.m = j.at("m").get<int>();
    spec.n = j.at("n").get<int>();
    for (const auto& w : j.at("weights")) {
      spec.weights.push_back(w.is_string() ? Rational::parse(w.get<std::string>())
                                           : Rational(w.get<std::int64_t>()));
    }
    spec.thetas = j.at("thetas").get<std::vector<double>>();
    if (j.contains("norm")) spec.norm = parse_norm(j.at("norm").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed problem JSON: ") + e.what());
  }
  return spec;
}

}  // namespace dioph
