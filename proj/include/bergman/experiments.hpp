#pragma once

#include <optional>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/kernels_closed.hpp"
#include "bergman/kernels_numeric.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Numeric pipeline parameters shared by the experiments.
struct NumericParams {
  int basis_degree = 40;
  std::optional<Complex> basis_center;  ///< default: domain-specific choice
  std::optional<int> n_r;               ///< default: grows with the degree
  std::optional<int> n_theta;
  int pixel_resolution = 512;
  int refine_depth = 2;
  std::optional<Rect> pixel_bbox;  ///< shared grid box for pixel quadratures
  bool use_pixel_quadrature = false;
  double spectral_cutoff = 1e-12;
  int threads = 1;
};

/// Quadrature selection for a domain under the given parameters.
Quadrature quadrature_for(const Domain& dom, const NumericParams& params);

/// Points z_j = p + delta_j * (inner normal at p), all strictly interior.
struct BoundarySequence {
  Domain domain;
  Complex p;
  std::vector<double> deltas;
  std::vector<Complex> points;
};

BoundarySequence make_boundary_sequence(const Domain& dom, Complex p,
                                        const std::vector<double>& deltas);

struct RatioReport {
  std::vector<double> deltas;
  std::vector<double> numerators;
  std::vector<double> denominators;
  std::vector<double> ratios;
  double target = 1.0;
  double final_relative_error = 0.0;
  bool trend_monotone = false;
  double fitted_limit = 0.0;  ///< OLS intercept of ratio vs delta, last 4 points
  /// cor12_product only: the ratios the statement's constant would produce.
  std::vector<double> statement_ratios;
};

/// Weighted-to-unweighted kernel ratio along a boundary sequence; the ratio
/// tends to 1 / mu(p). Denominators are closed-form where the domain has a
/// closed-form kernel, numeric otherwise.
RatioReport thm11_ratio(const Domain& dom, const Weight& mu, Complex p,
                        const std::vector<double>& deltas, int alpha, int beta,
                        const NumericParams& params);

struct DeltaPowerReport {
  std::vector<double> deltas;
  std::vector<double> products;  ///< delta^{alpha+beta+2} * K^{alpha,beta}(z_j)
  double lower = 0.0;
  double upper = 0.0;
  bool all_positive = false;
};

DeltaPowerReport delta_power_bound(const Domain& dom, const Weight& mu, Complex p,
                                   const std::vector<double>& deltas, int alpha, int beta,
                                   const NumericParams& params);

/// Sum-of-weights comparison: kernel of sum(alpha_i mu_i) against
/// lambda * sum(alpha_i K_{mu_i}) with the lambda of corollary_lambda.
RatioReport cor12_sum(const Domain& dom, const std::vector<std::pair<double, Weight>>& terms,
                      Complex p, const std::vector<double>& deltas, const NumericParams& params);

/// Product-of-weights comparison with the proof-consistent constant
/// (prod mu_i(p))^{-(n-1)}; statement_ratios carries the alternative.
RatioReport cor12_product(const Domain& dom, const std::vector<Weight>& factors, Complex p,
                          const std::vector<double>& deltas, const NumericParams& params);

/// K_{D,d}(z_j) / ((2d+1) K_D(z_j)^{d+1}); exact identity on the unit disc.
RatioReport dpower_asymptotic(const Domain& dom, int d, Complex p,
                              const std::vector<double>& deltas, const NumericParams& params,
                              bool numeric_numerator = false);

struct ScalingReport {
  std::vector<double> p_js;
  std::vector<double> epsilons;  ///< -psi(p_j) = 1 - p_j^2
  std::vector<double> kernel_values;  ///< numeric K_{D_j, mu_j}(0, 0)
  std::vector<double> numeric_identity_residuals;
  /// Closed-form identity residuals and scaled-disc diagonals (constant
  /// weights only; empty otherwise).
  std::vector<double> closed_identity_residuals;
  std::vector<double> closed_values;
  double target = 0.0;  ///< 1 / (pi * mu(1))
  double final_relative_error = 0.0;
  /// Basis degree actually used at each step (grows as 1/epsilon).
  std::vector<int> degrees;
};

/// Rescales the unit disc about p_j -> 1, builds the pulled-back weight on
/// the scaled disc, computes K_{D_j, mu_j}(0, 0) through the extremal
/// problem, and checks the transformation identity at every step.
ScalingReport scaling_experiment(const std::vector<double>& p_js, const Weight& mu,
                                 const NumericParams& params);

/// sup over the grid of |F_j(z) - z| for the normalized maps of the scaled
/// discs; the grid must be compactly inside the half-plane.
std::vector<double> riemann_convergence(const std::vector<double>& p_js,
                                        const std::vector<Complex>& grid);

struct RamadanovReport {
  std::vector<int> js;
  std::vector<std::pair<Complex, Complex>> probes;
  /// values[j][probe] of K_{H, nu_j}, row-major over js.
  std::vector<std::vector<Complex>> values;
  std::vector<std::vector<double>> deviations;
  std::vector<Complex> limit_values;  ///< K_{H, nu_inf} at the probes
};

/// Shipped family nu_j = nu_inf + (scale/j) Re f(z) on the half-plane,
/// computed by Mobius transport of numeric disc kernels.
RamadanovReport ramadanov_experiment(const std::vector<int>& js, double nu_infinity,
                                     double perturbation_scale,
                                     const std::vector<std::pair<Complex, Complex>>& probes,
                                     const NumericParams& params);

/// K_{D,mu}(z_j) / K_{D∩U,mu}(z_j) for a lens cut U around p; both kernels
/// use pixel quadrature over a shared grid so the monotonicity direction is
/// preserved at the discrete level.
RatioReport localization_experiment(const Domain& dom, const Disc& lens, const Weight& mu,
                                    Complex p, const std::vector<double>& deltas,
                                    const NumericParams& params);

/// OLS intercept at delta = 0 through the last up-to-4 (delta, ratio) pairs.
double fitted_intercept(const std::vector<double>& deltas, const std::vector<double>& ratios);

}  // namespace bergman
