#include "bergman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

AffineMap AffineMap::inverse() const {
  return AffineMap{1.0 / a, -b / a};
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
  return AffineMap{a * inner.a, a * inner.b + b};
}

Complex MobiusMap::operator()(Complex z) const {
  return (a * z + b) / (c * z + d);
}

Complex MobiusMap::derivative(Complex z) const {
  const Complex den = c * z + d;
  return (a * d - b * c) / (den * den);
}

MobiusMap MobiusMap::inverse() const {
  return MobiusMap{d, -b, -c, a};
}

MobiusMap MobiusMap::compose(const MobiusMap& inner) const {
  return MobiusMap{a * inner.a + b * inner.c, a * inner.b + b * inner.d,
                   c * inner.a + d * inner.c, c * inner.b + d * inner.d};
}

MobiusMap MobiusMap::normalized() const {
  double m = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (m == 0.0) fail("MobiusMap: zero coefficient matrix");
  return MobiusMap{a / m, b / m, c / m, d / m};
}

MobiusMap MobiusMap::identity() {
  return MobiusMap{Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}};
}

MobiusMap MobiusMap::from_affine(const AffineMap& m) {
  return MobiusMap{m.a, m.b, Complex{0, 0}, Complex{1, 0}};
}

Complex apply_map(const MapVariant& f, Complex z) {
  return std::visit([z](const auto& m) { return m(z); }, f);
}

Complex map_derivative(const MapVariant& f, Complex z) {
  if (const auto* aff = std::get_if<AffineMap>(&f)) return aff->derivative();
  return std::get<MobiusMap>(f).derivative(z);
}

MapVariant invert_map(const MapVariant& f) {
  return std::visit([](const auto& m) -> MapVariant { return m.inverse(); }, f);
}

MapVariant compose_maps(const MapVariant& outer, const MapVariant& inner) {
  if (std::holds_alternative<AffineMap>(outer) && std::holds_alternative<AffineMap>(inner)) {
    return std::get<AffineMap>(outer).compose(std::get<AffineMap>(inner));
  }
  const MobiusMap mo = std::holds_alternative<AffineMap>(outer)
                           ? MobiusMap::from_affine(std::get<AffineMap>(outer))
                           : std::get<MobiusMap>(outer);
  const MobiusMap mi = std::holds_alternative<AffineMap>(inner)
                           ? MobiusMap::from_affine(std::get<AffineMap>(inner))
                           : std::get<MobiusMap>(inner);
  return mo.compose(mi).normalized();
}

bool PixelRegion::cell(int ix, int iy) const {
  if (ix < 0 || iy < 0 || ix >= resolution || iy >= resolution) return false;
  return inside[static_cast<std::size_t>(iy) * resolution + ix] != 0;
}

Complex PixelRegion::cell_center(int ix, int iy) const {
  return Complex{bbox.x0 + (ix + 0.5) * cell_width(), bbox.y0 + (iy + 0.5) * cell_height()};
}

Domain Domain::unit_disc() { return Domain{UnitDisc{}}; }

Domain Domain::disc(Complex center, double radius) {
  if (!finite(center) || !(radius > 0.0)) fail("Disc: radius must be positive and center finite");
  return Domain{Disc{center, radius}};
}

Domain Domain::half_plane_h() { return Domain{HalfPlaneH{}}; }

Domain Domain::affine_image(Domain base, Complex a, Complex b) {
  if (a == Complex{0, 0} || !finite(a) || !finite(b)) fail("AffineImage: need finite a != 0");
  return Domain{AffineImage{std::make_shared<Domain>(std::move(base)), AffineMap{a, b}}};
}

Domain Domain::pixel_region(PixelRegion region) {
  if (region.resolution < 16) fail("PixelRegion: resolution must be >= 16");
  if (region.inside.size() != static_cast<std::size_t>(region.resolution) * region.resolution)
    fail("PixelRegion: indicator size does not match resolution");
  if (std::find(region.inside.begin(), region.inside.end(), 1) == region.inside.end())
    fail("PixelRegion: indicator is empty");
  if (!(region.bbox.width() > 0.0) || !(region.bbox.height() > 0.0))
    fail("PixelRegion: degenerate bounding box");
  return Domain{std::move(region)};
}

Domain Domain::cut(Domain base, Domain cutdom) {
  const bool ok = std::holds_alternative<Disc>(cutdom.node) ||
                  std::holds_alternative<HalfPlaneH>(cutdom.node);
  if (!ok) fail("CutDomain: cut must be a Disc or HalfPlaneH");
  return Domain{CutDomain{std::make_shared<Domain>(std::move(base)),
                          std::make_shared<Domain>(std::move(cutdom))}};
}

bool Domain::is_bounded() const {
  return std::visit(
      [](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc> || std::is_same_v<T, Disc> ||
                      std::is_same_v<T, PixelRegion>) {
          return true;
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          return false;
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          return d.base->is_bounded();
        } else {
          return d.base->is_bounded() || d.cut->is_bounded();
        }
      },
      node);
}

bool contains(const Domain& dom, Complex z) {
  return std::visit(
      [z](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return std::abs(z) < 1.0;
        } else if constexpr (std::is_same_v<T, Disc>) {
          return std::abs(z - d.center) < d.radius;
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          return -1.0 + 2.0 * z.real() < 0.0;
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          return contains(*d.base, d.map.inverse()(z));
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          const int ix = static_cast<int>(std::floor((z.real() - d.bbox.x0) / d.cell_width()));
          const int iy = static_cast<int>(std::floor((z.imag() - d.bbox.y0) / d.cell_height()));
          return d.cell(ix, iy);
        } else {
          return contains(*d.base, z) && contains(*d.cut, z);
        }
      },
      dom.node);
}

namespace {

// Centers of indicator cells that touch the region boundary: inside cells
// with at least one outside 4-neighbour (grid-edge inside cells count).
std::vector<Complex> pixel_boundary_centers(const PixelRegion& pr) {
  std::vector<Complex> out;
  for (int iy = 0; iy < pr.resolution; ++iy) {
    for (int ix = 0; ix < pr.resolution; ++ix) {
      if (!pr.cell(ix, iy)) continue;
      const bool edge = !pr.cell(ix - 1, iy) || !pr.cell(ix + 1, iy) || !pr.cell(ix, iy - 1) ||
                        !pr.cell(ix, iy + 1);
      if (edge) out.push_back(pr.cell_center(ix, iy));
    }
  }
  return out;
}

double min_distance(Complex z, const std::vector<Complex>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& p : pts) best = std::min(best, std::abs(z - p));
  return best;
}

// Membership in the closed set, with an absolute tolerance for points that
// sit exactly on a constituent boundary.
bool closure_contains(const Domain& dom, Complex z, double eps) {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return std::abs(z) <= 1.0 + eps;
        } else if constexpr (std::is_same_v<T, Disc>) {
          return std::abs(z - d.center) <= d.radius + eps;
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          return z.real() <= 0.5 + eps;
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          return closure_contains(*d.base, d.map.inverse()(z), eps / std::abs(d.map.a));
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          return contains(Domain{d}, z);
        } else {
          return closure_contains(*d.base, z, eps) && closure_contains(*d.cut, z, eps);
        }
      },
      dom.node);
}

constexpr int kCutBoundarySamples = 4096;

}  // namespace

double distance_to_boundary(const Domain& dom, Complex z) {
  if (!contains(dom, z)) throw std::domain_error("distance_to_boundary: point outside domain");
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return 1.0 - std::abs(z);
        } else if constexpr (std::is_same_v<T, Disc>) {
          return d.radius - std::abs(z - d.center);
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          return 0.5 - z.real();
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          return std::abs(d.map.a) * distance_to_boundary(*d.base, d.map.inverse()(z));
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          return min_distance(z, pixel_boundary_centers(d));
        } else {
          // Boundary of the intersection: points of each boundary that lie in
          // the closure of the other set.
          const double eps = 1e-12;
          double best = std::numeric_limits<double>::infinity();
          for (Complex s : boundary_samples(*d.base, kCutBoundarySamples)) {
            if (closure_contains(*d.cut, s, eps)) best = std::min(best, std::abs(z - s));
          }
          for (Complex s : boundary_samples(*d.cut, kCutBoundarySamples)) {
            if (closure_contains(*d.base, s, eps)) best = std::min(best, std::abs(z - s));
          }
          return best;
        }
      },
      dom.node);
}

Rect bounding_box(const Domain& dom) {
  return std::visit(
      [&](const auto& d) -> Rect {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return Rect{-1.0, -1.0, 1.0, 1.0};
        } else if constexpr (std::is_same_v<T, Disc>) {
          return Rect{d.center.real() - d.radius, d.center.imag() - d.radius,
                      d.center.real() + d.radius, d.center.imag() + d.radius};
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          throw std::invalid_argument("bounding_box: half-plane is unbounded");
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          const Rect rb = bounding_box(*d.base);
          const Complex corners[4] = {d.map(Complex{rb.x0, rb.y0}), d.map(Complex{rb.x1, rb.y0}),
                                      d.map(Complex{rb.x0, rb.y1}), d.map(Complex{rb.x1, rb.y1})};
          Rect r{corners[0].real(), corners[0].imag(), corners[0].real(), corners[0].imag()};
          for (Complex c : corners) {
            r.x0 = std::min(r.x0, c.real());
            r.y0 = std::min(r.y0, c.imag());
            r.x1 = std::max(r.x1, c.real());
            r.y1 = std::max(r.y1, c.imag());
          }
          return r;
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          return d.bbox;
        } else {
          // Intersect available boxes; a half-plane cut clamps x1 only.
          Rect r = bounding_box(*d.base);
          if (std::holds_alternative<HalfPlaneH>(d.cut->node)) {
            r.x1 = std::min(r.x1, 0.5);
          } else {
            const Rect rc = bounding_box(*d.cut);
            r.x0 = std::max(r.x0, rc.x0);
            r.y0 = std::max(r.y0, rc.y0);
            r.x1 = std::min(r.x1, rc.x1);
            r.y1 = std::min(r.y1, rc.y1);
          }
          if (!(r.width() > 0.0) || !(r.height() > 0.0))
            throw std::invalid_argument("bounding_box: empty intersection");
          return r;
        }
      },
      dom.node);
}

PixelRegion rasterize(const Domain& dom, int resolution) {
  if (resolution < 16) fail("rasterize: resolution must be >= 16");
  PixelRegion pr;
  pr.bbox = bounding_box(dom);
  pr.resolution = resolution;
  pr.inside.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      if (contains(dom, pr.cell_center(ix, iy)))
        pr.inside[static_cast<std::size_t>(iy) * resolution + ix] = 1;
    }
  }
  if (std::find(pr.inside.begin(), pr.inside.end(), 1) == pr.inside.end())
    fail("rasterize: no cell center falls inside the domain");
  return pr;
}

std::vector<Complex> boundary_samples(const Domain& dom, int count) {
  if (count <= 0) fail("boundary_samples: count must be positive");
  return std::visit(
      [&](const auto& d) -> std::vector<Complex> {
        using T = std::decay_t<decltype(d)>;
        std::vector<Complex> out;
        out.reserve(static_cast<std::size_t>(count));
        if constexpr (std::is_same_v<T, UnitDisc>) {
          for (int k = 0; k < count; ++k) {
            const double t = 2.0 * kPi * k / count;
            out.emplace_back(std::cos(t), std::sin(t));
          }
        } else if constexpr (std::is_same_v<T, Disc>) {
          for (int k = 0; k < count; ++k) {
            const double t = 2.0 * kPi * k / count;
            out.push_back(d.center + d.radius * Complex{std::cos(t), std::sin(t)});
          }
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          // A bounded stretch of the line Re z = 1/2.
          for (int k = 0; k < count; ++k) {
            const double y = -8.0 + 16.0 * k / (count - 1 > 0 ? count - 1 : 1);
            out.emplace_back(0.5, y);
          }
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          for (Complex s : boundary_samples(*d.base, count)) out.push_back(d.map(s));
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          out = pixel_boundary_centers(d);
        } else {
          for (Complex s : boundary_samples(*d.base, count)) out.push_back(s);
          for (Complex s : boundary_samples(*d.cut, count)) out.push_back(s);
        }
        return out;
      },
      dom.node);
}

Complex inner_normal(const Domain& dom, Complex p) {
  return std::visit(
      [&](const auto& d) -> Complex {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return -p / std::abs(p);
        } else if constexpr (std::is_same_v<T, Disc>) {
          return -(p - d.center) / std::abs(p - d.center);
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          return Complex{-1.0, 0.0};
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          const Complex n = inner_normal(*d.base, d.map.inverse()(p));
          return d.map.a * n / std::abs(d.map.a * n);
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          // Indicator gradient over a 5-cell stencil around p.
          const int ix = static_cast<int>(std::floor((p.real() - d.bbox.x0) / d.cell_width()));
          const int iy = static_cast<int>(std::floor((p.imag() - d.bbox.y0) / d.cell_height()));
          double gx = 0.0, gy = 0.0;
          for (int s = 1; s <= 2; ++s) {
            gx += (d.cell(ix + s, iy) ? 1.0 : 0.0) - (d.cell(ix - s, iy) ? 1.0 : 0.0);
            gy += (d.cell(ix, iy + s) ? 1.0 : 0.0) - (d.cell(ix, iy - s) ? 1.0 : 0.0);
          }
          const Complex g{gx, gy};
          if (std::abs(g) == 0.0)
            throw std::invalid_argument("inner_normal: indicator gradient vanishes at p");
          return g / std::abs(g);
        } else {
          // Use whichever constituent boundary p sits on.
          const double eps = 1e-9;
          const auto near_boundary = [&](const Domain& part) {
            if (const auto* ud = part.get_if<UnitDisc>()) {
              (void)ud;
              return std::abs(std::abs(p) - 1.0) < eps;
            }
            if (const auto* dc = part.get_if<Disc>())
              return std::abs(std::abs(p - dc->center) - dc->radius) < eps;
            if (part.get_if<HalfPlaneH>()) return std::abs(p.real() - 0.5) < eps;
            return false;
          };
          if (near_boundary(*d.base)) return inner_normal(*d.base, p);
          if (near_boundary(*d.cut)) return inner_normal(*d.cut, p);
          throw std::invalid_argument("inner_normal: p is not on the cut-domain boundary");
        }
      },
      dom.node);
}

AffineMap scaling_map(Complex p_j, double psi_value) {
  if (!(psi_value < 0.0))
    throw std::invalid_argument("scaling_map: psi(p_j) must be negative (strictly interior point)");
  const double s = -psi_value;
  return AffineMap{Complex{1.0 / s, 0.0}, -p_j / s};
}

double disc_defining_function(Complex z) { return std::norm(z) - 1.0; }

MobiusMap riemann_map_to_H(const Disc& dj) {
  if (!(std::abs(dj.center) < dj.radius))
    throw std::invalid_argument("riemann_map_to_H: 0 must be interior to the disc");
  // dj -> unit disc, 0 -> a0.
  const AffineMap g{Complex{1.0 / dj.radius, 0.0}, -dj.center / dj.radius};
  const Complex a0 = g(Complex{0.0, 0.0});
  // Disc automorphism sending a0 to 0.
  const MobiusMap blaschke{Complex{1, 0}, -a0, -std::conj(a0), Complex{1, 0}};
  // phi(z) = z / (1 - z) maps HalfPlaneH onto the unit disc, phi(0) = 0,
  // phi'(0) = 1; its inverse is w / (1 + w).
  const MobiusMap phi{Complex{1, 0}, Complex{0, 0}, Complex{-1, 0}, Complex{1, 0}};
  const MobiusMap phi_inv = phi.inverse();

  MobiusMap h = phi_inv.compose(blaschke.compose(MobiusMap::from_affine(g))).normalized();
  // Correct by the automorphism of HalfPlaneH fixing 0: a disc rotation
  // conjugated through phi, with the angle that makes F'(0) > 0.
  const Complex dh = h.derivative(Complex{0.0, 0.0});
  if (std::abs(dh) == 0.0) throw std::invalid_argument("riemann_map_to_H: degenerate derivative");
  const Complex rot = std::conj(dh) / std::abs(dh);
  const MobiusMap rotation{rot, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}};
  const MobiusMap corrector = phi_inv.compose(rotation.compose(phi));
  return corrector.compose(h).normalized();
}

std::vector<Complex> rectangle_grid(const Rect& r, int nx, int ny) {
  if (nx < 1 || ny < 1) fail("rectangle_grid: need nx, ny >= 1");
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = nx == 1 ? r.x0 : r.x0 + r.width() * i / (nx - 1);
      const double y = ny == 1 ? r.y0 : r.y0 + r.height() * j / (ny - 1);
      out.emplace_back(x, y);
    }
  }
  return out;
}

std::vector<double> hausdorff_convergence_check(const std::vector<Domain>& seq,
                                                const Domain& limit,
                                                const std::vector<Complex>& grid) {
  if (grid.empty()) fail("hausdorff_convergence_check: empty grid");
  std::vector<double> out;
  out.reserve(seq.size());
  for (const Domain& dj : seq) {
    std::size_t mism = 0;
    for (Complex z : grid)
      if (contains(dj, z) != contains(limit, z)) ++mism;
    out.push_back(static_cast<double>(mism) / static_cast<double>(grid.size()));
  }
  return out;
}

}  // namespace bergman
