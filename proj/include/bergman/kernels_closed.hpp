#pragma once

#include <memory>
#include <variant>

#include "bergman/geometry.hpp"

namespace bergman {

/// An exact kernel formula on a model domain, optionally rescaled by a
/// constant weight or transported through a biholomorphism. Immutable.
class ClosedKernel {
 public:
  static ClosedKernel disc_unweighted();
  static ClosedKernel half_plane_unweighted();
  /// K(z,w) = (2d+1)/pi^{d+1} * (1 - z*conj(w))^{-(2d+2)} on the unit disc.
  static ClosedKernel disc_dpower(int d);

  /// K(z,w) evaluated by the exact formula; throws if z or w is outside.
  Complex eval(Complex z, Complex w) const;

  /// d^{alpha+beta} / dz^alpha dwbar^beta of the kernel. Closed form for the
  /// half-plane; termwise differentiation of the monomial series for disc
  /// variants; exact chain rule through affine transports. alpha+beta <= 8.
  Complex eval_derivative(int alpha, int beta, Complex z, Complex w) const;

  /// K(z,z) as a real number.
  double diag(Complex z) const;

  bool in_domain(Complex z) const;

  /// The d of the power weight this kernel carries (0 for unweighted).
  int dpower_degree() const;

  friend ClosedKernel transport(const ClosedKernel& k2, const MapVariant& f, int d);
  friend ClosedKernel constant_weight_scale(const ClosedKernel& k, double c);

 private:
  struct DiscUnweighted {};
  struct HalfPlaneUnweighted {};
  struct DiscDPower {
    int d = 0;
  };
  struct ConstantScaled {
    double c = 1.0;
    std::shared_ptr<const ClosedKernel> base;
  };
  struct Transported {
    MapVariant map;  // D1 -> D2, kernel lives on D1, base on D2
    std::shared_ptr<const ClosedKernel> base;
    int d = 0;
  };
  using Node =
      std::variant<DiscUnweighted, HalfPlaneUnweighted, DiscDPower, ConstantScaled, Transported>;

  explicit ClosedKernel(Node node) : node_(std::move(node)) {}

  Node node_;
};

/// Kernel on D1 with eval(z,w) = f'(z)^{d+1} K2(f(z), f(w)) conj(f'(w))^{d+1}
/// for a biholomorphism f : D1 -> D2. d must match k2's power degree
/// (0 for unweighted kernels).
ClosedKernel transport(const ClosedKernel& k2, const MapVariant& f, int d = 0);

/// Kernel of the measure scaled by c > 0, i.e. all evaluations divided by c.
ClosedKernel constant_weight_scale(const ClosedKernel& k, double c);

/// The unweighted kernel of a closed-form domain (discs, half-plane, affine
/// images of these). Throws for pixel regions and cut domains.
ClosedKernel closed_unweighted_kernel(const Domain& dom);

}  // namespace bergman
