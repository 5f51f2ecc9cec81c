#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/rational.hpp"

namespace dioph {

enum class Norm { Sup, Euclidean };

std::string to_string(Norm norm);
Norm parse_norm(std::string_view text);

// Unvalidated description, as read from flags or JSON.
struct ProblemSpec {
  int m = 0;
  int n = 0;
  std::vector<Rational> weights;
  std::vector<double> thetas;
  Norm norm = Norm::Sup;

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

// The weighted system |p_i + <u_i, q>| < theta_i ||q||^{-w_i}, i = 1..m.
// Only obtainable through validate(), so every instance satisfies
// sum(w_i) = n exactly and all w_i, theta_i > 0.
class ApproximationProblem {
 public:
  int m() const { return m_; }
  int n() const { return n_; }
  int dimension() const { return m_ + n_; }
  Norm norm() const { return norm_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& weights_double() const { return weights_d_; }

  double theta_product() const;
  ProblemSpec spec() const;

 private:
  friend ApproximationProblem validate(const ProblemSpec& spec);
  ApproximationProblem() = default;

  int m_ = 0;
  int n_ = 0;
  Norm norm_ = Norm::Sup;
  std::vector<Rational> weights_;
  std::vector<double> thetas_;
  std::vector<double> weights_d_;
};

// Throws ValidationError naming the failed invariant.
ApproximationProblem validate(const ProblemSpec& spec);

// Half-open radial band {y : t_low <= ||y|| < t_high}.
struct Annulus {
  double t_low = 1.0;
  double t_high = 0.0;
  Annulus(double low, double high);
  double log_length() const;
};

// Indicator of {(x, y) : u1 <= ||y|| <= u2, |x_i| < theta_i ||y||^{-w_i}}.
// Each radial bound can be open or closed.
struct WeightedBoxFunction {
  double upsilon1 = 1.0;
  double upsilon2 = 0.0;
  std::vector<double> thetas;
  std::vector<double> weights;
  bool low_closed = true;
  bool high_closed = true;

  WeightedBoxFunction(const ApproximationProblem& problem, double u1, double u2,
                      bool low_closed = true, bool high_closed = true);

  // chi_{Omega_e}: 1 <= ||y|| < e.
  static WeightedBoxFunction omega_e(const ApproximationProblem& problem);

  bool radial_contains(double r) const;
};

double norm_eval(std::span<const double> v, Norm norm);
double norm_eval(std::span<const std::int64_t> v, Norm norm);

// omega_n = integral over the Euclidean unit sphere of ||z||^{-n}; for n = 1
// the sphere is {-1, 1} with counting measure.
double omega_n(Norm norm, int n);
// Independent route: quadrature over the sphere parametrised by the cube faces.
double omega_n_quadrature(Norm norm, int n);

// vol(Omega_T) = 2^m prod(theta) omega_n log T.
double domain_volume(const ApproximationProblem& problem, double T);
double domain_volume(const ApproximationProblem& problem, const Annulus& band);
double box_integral(const ApproximationProblem& problem, const WeightedBoxFunction& f);

nlohmann::json to_json(const ProblemSpec& spec);
ProblemSpec problem_spec_from_json(const nlohmann::json& j);

}  // namespace dioph
