#pragma once

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Tensor Gauss-Legendre in r times trapezoid in theta over a disc.
struct PolarGauss {
  int n_r = 64;
  int n_theta = 128;
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

/// Midpoint rule on the cells of a bounding-box grid; cells that meet the
/// boundary are subdivided refine_depth times. An explicit bbox lets two
/// nested domains share one grid.
struct PixelMidpoint {
  int resolution = 512;
  int refine_depth = 2;
  std::optional<Rect> bbox;
};

using Quadrature = std::variant<PolarGauss, PixelMidpoint>;

/// PolarGauss sized for the given polynomial degree, centered on the disc.
PolarGauss polar_gauss_for(const Domain& dom, int degree);
PolarGauss default_polar(int degree);

struct QuadratureNodes {
  std::vector<Complex> z;
  std::vector<double> w;
};

/// Concrete nodes and weights for the quadrature applied to `dom`. All
/// nodes lie inside the domain and all weights are positive.
QuadratureNodes make_nodes(const Quadrature& quad, const Domain& dom);

/// Gauss-Legendre nodes/weights on [0, 1] (Golub-Welsch).
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Monomials (z - center)^m, 0 <= m <= degree, with center strictly inside
/// the domain. Internally the monomials are rescaled by the domain radius
/// about the center, which changes conditioning but not the spanned space.
struct BasisSpec {
  Complex center{0.0, 0.0};
  int degree = 40;
};

/// max |z - center| over the domain: the internal monomial rescaling.
double basis_scale(const Domain& dom, const BasisSpec& basis);

/// G[m][n] = sum_k w_k e_m(z_k) conj(e_n(z_k)) mu(z_k); Hermitian by
/// construction. Radial/affine weights about the basis center assemble
/// through per-circle harmonic sums; the general path accumulates fixed
/// 1024-node chunks with a pairwise reduction, so results do not depend on
/// the thread count.
Eigen::MatrixXcd assemble_gram(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                               const Quadrature& quad, int threads = 1);

class NumericKernel {
 public:
  NumericKernel(Domain dom, Weight mu, BasisSpec basis, Quadrature quad, double cutoff,
                double scale, int discarded, Eigen::MatrixXcd inverse_gram);

  Complex eval(Complex z, Complex w) const;
  Complex eval_derivative(int alpha, int beta, Complex z, Complex w) const;
  /// K(z, z) as a real number.
  double diag(Complex z) const;

  const Domain& domain() const { return domain_; }
  const Weight& weight() const { return weight_; }
  const BasisSpec& basis() const { return basis_; }
  const Quadrature& quadrature() const { return quadrature_; }
  const Eigen::MatrixXcd& inverse_gram() const { return inverse_gram_; }
  double spectral_cutoff() const { return cutoff_; }
  int discarded_modes() const { return discarded_; }
  double scale() const { return scale_; }

  /// Column vector of (scaled) basis values at z.
  Eigen::VectorXcd basis_vector(Complex z) const;

 private:
  void check_point(Complex z) const;

  Domain domain_;
  Weight weight_;
  BasisSpec basis_;
  Quadrature quadrature_;
  double cutoff_;
  double scale_;
  int discarded_;
  Eigen::MatrixXcd inverse_gram_;
};

/// Assembles the Gram matrix, eigendecomposes it, and pseudo-inverts the
/// spectrum above cutoff * lambda_max. Throws if every eigenvalue falls
/// below the cutoff.
NumericKernel build_kernel(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                           const Quadrature& quad, double cutoff = 1e-12, int threads = 1);

/// Diagonal kernel estimate through the constrained least-squares problem
///   minimize c* G c  subject to  sum_m c_m e_m(z0) = 1,
/// solved with one Lagrange multiplier (bordered system, LU). Returns the
/// reciprocal of the minimum, i.e. the K(z0, z0) estimate.
double extremal_value(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                      const Quadrature& quad, Complex z0, int threads = 1);

/// Relative defect |<K(.,w), K(.,w)>_quad - K(w,w)| / K(w,w) of the
/// reproducing identity under the kernel's own quadrature.
double reproducing_check(const NumericKernel& kernel, Complex w);

}  // namespace bergman
