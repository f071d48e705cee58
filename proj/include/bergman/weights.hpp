#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

/// Admissible-weight descriptor. Shipped weights are admissible by
/// construction (positive continuous ones trivially, power weights because
/// their reciprocal is locally bounded); arbitrary callables are not
/// accepted.
class Weight;

struct ConstantW {
  double c = 1.0;
};

/// mu(z) = u Re z + v Im z + w0.
struct RealAffineW {
  double u = 0.0;
  double v = 0.0;
  double w0 = 1.0;
};

/// mu_d = K_base^{-d}; base must have a closed-form unweighted kernel.
struct DPowerW {
  int d = 0;
  std::shared_ptr<const Domain> base;
};

struct SumW {
  std::vector<std::pair<double, std::shared_ptr<const Weight>>> terms;
};

struct ProductW {
  std::vector<std::shared_ptr<const Weight>> factors;
};

/// The weight mu ∘ inner^{-1} on the image domain of `inner`.
struct PullbackW {
  MapVariant inner;
  std::shared_ptr<const Weight> base;
};

class Weight {
 public:
  using Node = std::variant<ConstantW, RealAffineW, DPowerW, SumW, ProductW, PullbackW>;

  static Weight constant(double c);
  static Weight real_affine(double u, double v, double w0);
  static Weight dpower(int d, Domain base);
  static Weight sum(std::vector<std::pair<double, Weight>> terms);
  static Weight product(std::vector<Weight> factors);
  static Weight pullback(MapVariant inner, Weight base);

  const Node& node() const { return node_; }

 private:
  explicit Weight(Node node) : node_(std::move(node)) {}
  Node node_;
};

/// mu(z); throws if the result is not strictly positive.
double evaluate(const Weight& mu, Complex z);

/// mu(p) when the weight extends continuously to p (power weights extend by
/// zero); nullopt when no analytic value is available.
std::optional<double> boundary_value(const Weight& mu, Complex p);

/// Analytic upper bound for mu over dom, when one is derivable.
std::optional<double> sup_bound(const Weight& mu, const Domain& dom);

struct AdmissibilityReport {
  double boundary_estimate = 0.0;  ///< extrapolated mu(p)
  double oscillation = 0.0;        ///< spread of successive extrapolants
  double sup_estimate = 0.0;       ///< max over coarse interior grid / declared bound
  double inf_near_p = 0.0;         ///< min over interior samples approaching p
  std::optional<double> declared_boundary_value;
  bool member = false;  ///< in A(D,p): positive continuous extension at p
};

/// Samples mu on interior points approaching p and on a coarse interior
/// grid; report-only (never throws on non-membership).
AdmissibilityReport check_admissible_class(const Weight& mu, const Domain& dom, Complex p,
                                           int samples = 64);

/// lambda with 1/lambda = sum_{i,j} alpha_i alpha_j mu_i(p) / mu_j(p).
double corollary_lambda(const std::vector<double>& alphas,
                        const std::vector<double>& mu_values_at_p);

/// Exact RealAffine form of the weight when it has one (constants, affine
/// weights, their sums, and affine pullbacks of these).
std::optional<RealAffineW> try_linearize(const Weight& mu);

/// Number of angular harmonics of mu about `center` (0 for radial weights,
/// 1 for affine ones); nullopt when the weight is not a trigonometric
/// polynomial in the angle or the centers do not match.
std::optional<int> polar_bandwidth(const Weight& mu, Complex center);

}  // namespace bergman
