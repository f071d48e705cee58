#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace bergman {

using Complex = std::complex<double>;

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

/// z -> a*z + b with a != 0.
struct AffineMap {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  Complex operator()(Complex z) const { return a * z + b; }
  Complex derivative() const { return a; }
  AffineMap inverse() const;
  /// this(inner(z))
  AffineMap compose(const AffineMap& inner) const;
};

/// z -> (a*z + b) / (c*z + d) with ad - bc != 0.
struct MobiusMap {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  Complex c{0.0, 0.0};
  Complex d{1.0, 0.0};

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  MobiusMap inverse() const;
  /// this(inner(z))
  MobiusMap compose(const MobiusMap& inner) const;
  /// Rescales the coefficient matrix so the largest entry has modulus 1.
  MobiusMap normalized() const;

  static MobiusMap identity();
  static MobiusMap from_affine(const AffineMap& m);
};

using MapVariant = std::variant<AffineMap, MobiusMap>;

Complex apply_map(const MapVariant& f, Complex z);
Complex map_derivative(const MapVariant& f, Complex z);
MapVariant invert_map(const MapVariant& f);
/// outer(inner(z)) collapsed to a single map.
MapVariant compose_maps(const MapVariant& outer, const MapVariant& inner);

struct Domain;

struct UnitDisc {};

struct Disc {
  Complex center{0.0, 0.0};
  double radius = 1.0;
};

/// The half-plane {z : -1 + 2 Re z < 0}, i.e. Re z < 1/2.
struct HalfPlaneH {};

/// Image of `base` under z -> a*z + b.
struct AffineImage {
  std::shared_ptr<const Domain> base;
  AffineMap map;
};

/// Boolean indicator on a resolution x resolution cell grid over bbox.
/// Cell (ix, iy) covers [x0 + ix*dx, x0 + (ix+1)*dx] x [y0 + iy*dy, ...],
/// row-major storage with index iy*resolution + ix.
struct PixelRegion {
  Rect bbox;
  int resolution = 16;
  std::vector<std::uint8_t> inside;

  bool cell(int ix, int iy) const;
  double cell_width() const { return bbox.width() / resolution; }
  double cell_height() const { return bbox.height() / resolution; }
  Complex cell_center(int ix, int iy) const;
};

/// Intersection base ∩ cut; cut restricted to Disc or HalfPlaneH.
struct CutDomain {
  std::shared_ptr<const Domain> base;
  std::shared_ptr<const Domain> cut;
};

struct Domain {
  std::variant<UnitDisc, Disc, HalfPlaneH, AffineImage, PixelRegion, CutDomain> node;

  static Domain unit_disc();
  static Domain disc(Complex center, double radius);
  static Domain half_plane_h();
  static Domain affine_image(Domain base, Complex a, Complex b);
  static Domain pixel_region(PixelRegion region);
  static Domain cut(Domain base, Domain cut);

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&node);
  }
  bool is_bounded() const;
};

bool contains(const Domain& dom, Complex z);

/// Euclidean distance from an interior point to the boundary. Closed form
/// for discs, half-plane and affine images of these; sampled for pixel
/// regions (boundary-cell centers) and cut domains (boundary arcs).
double distance_to_boundary(const Domain& dom, Complex z);

/// Finite bounding box; throws for unbounded domains.
Rect bounding_box(const Domain& dom);

/// Indicator grid over bounding_box(dom): a cell is inside iff its center is.
PixelRegion rasterize(const Domain& dom, int resolution);

/// Points on the boundary, used by sampled distance computations and tests.
std::vector<Complex> boundary_samples(const Domain& dom, int count);

/// Unit inner normal at a boundary point p (exact for closed-form domains,
/// indicator-gradient stencil for pixel regions).
Complex inner_normal(const Domain& dom, Complex p);

/// T(z) = (z - p_j) / (-psi_value); requires psi_value < 0.
AffineMap scaling_map(Complex p_j, double psi_value);

/// |z|^2 - 1, the defining function used for the unit disc.
double disc_defining_function(Complex z);

/// The unique Mobius map F : dj -> HalfPlaneH with F(0) = 0, F'(0) > 0.
/// Requires 0 in the interior of dj.
MobiusMap riemann_map_to_H(const Disc& dj);

std::vector<Complex> rectangle_grid(const Rect& r, int nx, int ny);

/// For each domain in `seq`, the fraction of grid points classified
/// differently by the domain and by `limit`.
std::vector<double> hausdorff_convergence_check(const std::vector<Domain>& seq,
                                                const Domain& limit,
                                                const std::vector<Complex>& grid);

}  // namespace bergman
