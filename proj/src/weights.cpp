#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "bergman/kernels_closed.hpp"

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

}  // namespace

Weight Weight::constant(double c) {
  if (!(c > 0.0)) fail("Weight::constant: c must be positive");
  return Weight(Node{ConstantW{c}});
}

Weight Weight::real_affine(double u, double v, double w0) {
  return Weight(Node{RealAffineW{u, v, w0}});
}

Weight Weight::dpower(int d, Domain base) {
  if (d < 0) fail("Weight::dpower: d must be >= 0");
  closed_unweighted_kernel(base);  // rejects domains without a closed form
  return Weight(Node{DPowerW{d, std::make_shared<Domain>(std::move(base))}});
}

Weight Weight::sum(std::vector<std::pair<double, Weight>> terms) {
  if (terms.empty()) fail("Weight::sum: empty term list");
  SumW node;
  for (auto& [alpha, w] : terms) {
    if (!(alpha > 0.0)) fail("Weight::sum: coefficients must be strictly positive");
    node.terms.emplace_back(alpha, std::make_shared<Weight>(std::move(w)));
  }
  return Weight(Node{std::move(node)});
}

Weight Weight::product(std::vector<Weight> factors) {
  if (factors.empty()) fail("Weight::product: empty factor list");
  ProductW node;
  for (auto& w : factors) node.factors.push_back(std::make_shared<Weight>(std::move(w)));
  return Weight(Node{std::move(node)});
}

Weight Weight::pullback(MapVariant inner, Weight base) {
  return Weight(Node{PullbackW{std::move(inner), std::make_shared<Weight>(std::move(base))}});
}

namespace {

double evaluate_node(const Weight::Node& node, Complex z);

double evaluate_impl(const Weight& mu, Complex z) { return evaluate_node(mu.node(), z); }

double evaluate_node(const Weight::Node& node, Complex z) {
  return std::visit(
      [&](const auto& w) -> double {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          return w.c;
        } else if constexpr (std::is_same_v<T, RealAffineW>) {
          return w.u * z.real() + w.v * z.imag() + w.w0;
        } else if constexpr (std::is_same_v<T, DPowerW>) {
          const double k = closed_unweighted_kernel(*w.base).diag(z);
          return std::pow(k, -w.d);
        } else if constexpr (std::is_same_v<T, SumW>) {
          double s = 0.0;
          for (const auto& [alpha, term] : w.terms) s += alpha * evaluate_impl(*term, z);
          return s;
        } else if constexpr (std::is_same_v<T, ProductW>) {
          double p = 1.0;
          for (const auto& f : w.factors) p *= evaluate_impl(*f, z);
          return p;
        } else {
          return evaluate_impl(*w.base, apply_map(invert_map(w.inner), z));
        }
      },
      node);
}

}  // namespace

double evaluate(const Weight& mu, Complex z) {
  const double v = evaluate_impl(mu, z);
  if (!(v > 0.0))
    throw std::invalid_argument("Weight::evaluate: inadmissible weight (nonpositive value)");
  return v;
}

std::optional<double> boundary_value(const Weight& mu, Complex p) {
  return std::visit(
      [&](const auto& w) -> std::optional<double> {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          return w.c;
        } else if constexpr (std::is_same_v<T, RealAffineW>) {
          return w.u * p.real() + w.v * p.imag() + w.w0;
        } else if constexpr (std::is_same_v<T, DPowerW>) {
          // Power weights vanish on the boundary of a bounded base.
          return w.base->is_bounded() ? std::optional<double>(0.0) : std::nullopt;
        } else if constexpr (std::is_same_v<T, SumW>) {
          double s = 0.0;
          for (const auto& [alpha, term] : w.terms) {
            const auto b = boundary_value(*term, p);
            if (!b) return std::nullopt;
            s += alpha * *b;
          }
          return s;
        } else if constexpr (std::is_same_v<T, ProductW>) {
          double prod = 1.0;
          for (const auto& f : w.factors) {
            const auto b = boundary_value(*f, p);
            if (!b) return std::nullopt;
            prod *= *b;
          }
          return prod;
        } else {
          return boundary_value(*w.base, apply_map(invert_map(w.inner), p));
        }
      },
      mu.node());
}

std::optional<double> sup_bound(const Weight& mu, const Domain& dom) {
  return std::visit(
      [&](const auto& w) -> std::optional<double> {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          return w.c;
        } else if constexpr (std::is_same_v<T, RealAffineW>) {
          if (!dom.is_bounded()) return std::nullopt;
          const Rect r = bounding_box(dom);
          double m = -std::numeric_limits<double>::infinity();
          for (double x : {r.x0, r.x1})
            for (double y : {r.y0, r.y1}) m = std::max(m, w.u * x + w.v * y + w.w0);
          return m;
        } else if constexpr (std::is_same_v<T, DPowerW>) {
          // sup K^{-d} = (min K)^{-d}; the diagonal is minimal at the center
          // for discs.
          const Domain& b = *w.base;
          double kmin;
          if (b.get_if<UnitDisc>()) {
            kmin = 1.0 / kPi;
          } else if (const auto* dc = b.get_if<Disc>()) {
            kmin = 1.0 / (kPi * dc->radius * dc->radius);
          } else {
            return std::nullopt;
          }
          return std::pow(kmin, -w.d);
        } else if constexpr (std::is_same_v<T, SumW>) {
          double s = 0.0;
          for (const auto& [alpha, term] : w.terms) {
            const auto b = sup_bound(*term, dom);
            if (!b) return std::nullopt;
            s += alpha * *b;
          }
          return s;
        } else if constexpr (std::is_same_v<T, ProductW>) {
          double prod = 1.0;
          for (const auto& f : w.factors) {
            const auto b = sup_bound(*f, dom);
            if (!b) return std::nullopt;
            prod *= *b;
          }
          return prod;
        } else {
          (void)w;
          return std::nullopt;
        }
      },
      mu.node());
}

AdmissibilityReport check_admissible_class(const Weight& mu, const Domain& dom, Complex p,
                                           int samples) {
  if (samples < 8) fail("check_admissible_class: need at least 8 samples");
  AdmissibilityReport rep;
  rep.declared_boundary_value = boundary_value(mu, p);

  const Complex nu = inner_normal(dom, p);
  const double approach[] = {1e-2, 1e-3, 1e-4};
  double values[3];
  for (int i = 0; i < 3; ++i) values[i] = evaluate_impl(mu, p + approach[i] * nu);

  // Linear extrapolation to delta -> 0 from successive sample pairs; the
  // spread of the extrapolants measures the failure of a continuous limit.
  double extrap[2];
  for (int i = 0; i < 2; ++i) {
    const double d1 = approach[i], d2 = approach[i + 1];
    extrap[i] = values[i + 1] - d2 * (values[i] - values[i + 1]) / (d1 - d2);
  }
  rep.boundary_estimate = extrap[1];
  rep.oscillation = std::abs(extrap[0] - extrap[1]);

  // Coarse interior grid for the sup estimate; near-boundary samples for inf.
  const int n = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(samples))));
  double sup = -std::numeric_limits<double>::infinity();
  if (dom.is_bounded()) {
    const Rect r = bounding_box(dom);
    for (Complex z : rectangle_grid(r, n, n))
      if (contains(dom, z)) sup = std::max(sup, evaluate_impl(mu, z));
  }
  if (const auto declared = sup_bound(mu, dom)) sup = std::max(sup, *declared);
  rep.sup_estimate = sup;

  double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double d = 1e-2 * (i + 1) / samples;
    inf = std::min(inf, evaluate_impl(mu, p + d * nu));
  }
  rep.inf_near_p = inf;

  const double bv = rep.declared_boundary_value.value_or(rep.boundary_estimate);
  rep.member = bv > 1e-9 && rep.oscillation < 1e-6 && rep.inf_near_p > 0.0;
  return rep;
}

double corollary_lambda(const std::vector<double>& alphas,
                        const std::vector<double>& mu_values_at_p) {
  if (alphas.empty() || alphas.size() != mu_values_at_p.size())
    fail("corollary_lambda: lists must be nonempty and of equal length");
  for (double a : alphas)
    if (!(a > 0.0)) fail("corollary_lambda: alphas must be positive");
  for (double m : mu_values_at_p)
    if (!(m > 0.0)) fail("corollary_lambda: boundary values must be positive");
  double inv = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    for (std::size_t j = 0; j < alphas.size(); ++j)
      inv += alphas[i] * alphas[j] * mu_values_at_p[i] / mu_values_at_p[j];
  return 1.0 / inv;
}

std::optional<RealAffineW> try_linearize(const Weight& mu) {
  return std::visit(
      [&](const auto& w) -> std::optional<RealAffineW> {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          return RealAffineW{0.0, 0.0, w.c};
        } else if constexpr (std::is_same_v<T, RealAffineW>) {
          return w;
        } else if constexpr (std::is_same_v<T, SumW>) {
          RealAffineW acc{0.0, 0.0, 0.0};
          for (const auto& [alpha, term] : w.terms) {
            const auto lin = try_linearize(*term);
            if (!lin) return std::nullopt;
            acc.u += alpha * lin->u;
            acc.v += alpha * lin->v;
            acc.w0 += alpha * lin->w0;
          }
          return acc;
        } else if constexpr (std::is_same_v<T, PullbackW>) {
          if (!std::holds_alternative<AffineMap>(w.inner)) return std::nullopt;
          const auto lin = try_linearize(*w.base);
          if (!lin) return std::nullopt;
          // mu'(z) = lin(g(z)) with g the affine inverse alpha*z + beta.
          const AffineMap g = std::get<AffineMap>(w.inner).inverse();
          const double ar = g.a.real(), ai = g.a.imag();
          RealAffineW out;
          out.u = lin->u * ar + lin->v * ai;
          out.v = -lin->u * ai + lin->v * ar;
          out.w0 = lin->u * g.b.real() + lin->v * g.b.imag() + lin->w0;
          return out;
        } else {
          return std::nullopt;
        }
      },
      mu.node());
}

std::optional<int> polar_bandwidth(const Weight& mu, Complex center) {
  if (const auto lin = try_linearize(mu)) {
    return (lin->u == 0.0 && lin->v == 0.0) ? 0 : 1;
  }
  return std::visit(
      [&](const auto& w) -> std::optional<int> {
        using T = std::decay_t<decltype(w)>;
        if constexpr (std::is_same_v<T, DPowerW>) {
          // Radial about the base disc's center.
          const Domain& base = *w.base;
          if (base.get_if<UnitDisc>() && center == Complex{0.0, 0.0}) return 0;
          if (const auto* dc = base.get_if<Disc>())
            if (dc->center == center) return 0;
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, SumW>) {
          int bw = 0;
          for (const auto& [alpha, term] : w.terms) {
            (void)alpha;
            const auto b = polar_bandwidth(*term, center);
            if (!b) return std::nullopt;
            bw = std::max(bw, *b);
          }
          return bw;
        } else if constexpr (std::is_same_v<T, ProductW>) {
          int bw = 0;
          for (const auto& f : w.factors) {
            const auto b = polar_bandwidth(*f, center);
            if (!b) return std::nullopt;
            bw += *b;
          }
          return bw;
        } else {
          return std::nullopt;
        }
      },
      mu.node());
}

}  // namespace bergman
