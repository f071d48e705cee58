#include "bergman/kernels_closed.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDerivativeOrder = 8;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Falling factorial m (m-1) ... (m-k+1).
double falling(int m, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= (m - j);
  return f;
}

Complex ipow(Complex z, int n) {
  Complex r{1.0, 0.0};
  for (int k = 0; k < n; ++k) r *= z;
  return r;
}

// Sum of c_m * falling(m,alpha) * falling(m,beta) * z^{m-alpha} wbar^{m-beta}
// where c_0 = (2d+1)/pi^{d+1} and c_{m+1}/c_m = (m+2d+2)/(m+1). Truncated at
// relative tail 1e-14; with |z w| < 1 the term ratios approach |z w| so the
// geometric tail bound applies.
Complex disc_series_derivative(int d, int alpha, int beta, Complex z, Complex wbar) {
  const double q = std::abs(z) * std::abs(wbar);
  double c = (2.0 * d + 1.0) / std::pow(kPi, d + 1);
  Complex sum{0.0, 0.0};
  const int m0 = std::max(alpha, beta);
  // Advance the coefficient to m0.
  for (int m = 0; m < m0; ++m) c *= static_cast<double>(m + 2 * d + 2) / (m + 1);

  Complex zp = ipow(z, m0 - alpha);
  Complex wp = ipow(wbar, m0 - beta);
  int consecutive_small = 0;
  for (int m = m0; m < 2'000'000; ++m) {
    const double coef = c * falling(m, alpha) * falling(m, beta);
    const Complex term = coef * zp * wp;
    sum += term;
    const double mag = std::abs(term);
    const double scale = std::max(std::abs(sum), 1e-300);
    // Ratio of consecutive terms tends to q < 1 from above; once the term is
    // far below the target the remaining geometric tail is negligible.
    if (mag <= 1e-16 * scale * (1.0 - q)) {
      if (++consecutive_small >= 3) break;
    } else {
      consecutive_small = 0;
    }
    c *= static_cast<double>(m + 2 * d + 2) / (m + 1);
    zp *= z;
    wp *= wbar;
  }
  return sum;
}

}  // namespace

ClosedKernel ClosedKernel::disc_unweighted() { return ClosedKernel(Node{DiscUnweighted{}}); }

ClosedKernel ClosedKernel::half_plane_unweighted() {
  return ClosedKernel(Node{HalfPlaneUnweighted{}});
}

ClosedKernel ClosedKernel::disc_dpower(int d) {
  if (d < 0) throw std::invalid_argument("disc_dpower: d must be >= 0");
  return ClosedKernel(Node{DiscDPower{d}});
}

bool ClosedKernel::in_domain(Complex z) const {
  return std::visit(
      [&](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DiscUnweighted> || std::is_same_v<T, DiscDPower>) {
          return std::abs(z) < 1.0;
        } else if constexpr (std::is_same_v<T, HalfPlaneUnweighted>) {
          return z.real() < 0.5;
        } else if constexpr (std::is_same_v<T, ConstantScaled>) {
          return k.base->in_domain(z);
        } else {
          return k.base->in_domain(apply_map(k.map, z));
        }
      },
      node_);
}

int ClosedKernel::dpower_degree() const {
  return std::visit(
      [](const auto& k) -> int {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DiscDPower>) {
          return k.d;
        } else if constexpr (std::is_same_v<T, ConstantScaled>) {
          return k.base->dpower_degree();
        } else if constexpr (std::is_same_v<T, ClosedKernel::Transported>) {
          return k.d;
        } else {
          return 0;
        }
      },
      node_);
}

Complex ClosedKernel::eval(Complex z, Complex w) const {
  if (!in_domain(z) || !in_domain(w))
    throw std::domain_error("ClosedKernel::eval: point outside the kernel's domain");
  return std::visit(
      [&](const auto& k) -> Complex {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, DiscUnweighted>) {
          const Complex den = 1.0 - z * std::conj(w);
          return 1.0 / (kPi * den * den);
        } else if constexpr (std::is_same_v<T, HalfPlaneUnweighted>) {
          const Complex den = 1.0 - z - std::conj(w);
          return 1.0 / (kPi * den * den);
        } else if constexpr (std::is_same_v<T, DiscDPower>) {
          const Complex den = 1.0 - z * std::conj(w);
          return (2.0 * k.d + 1.0) / std::pow(kPi, k.d + 1) * ipow(1.0 / den, 2 * k.d + 2);
        } else if constexpr (std::is_same_v<T, ConstantScaled>) {
          return k.base->eval(z, w) / k.c;
        } else {
          const Complex jz = ipow(map_derivative(k.map, z), k.d + 1);
          const Complex jw = ipow(map_derivative(k.map, w), k.d + 1);
          return jz * k.base->eval(apply_map(k.map, z), apply_map(k.map, w)) * std::conj(jw);
        }
      },
      node_);
}

Complex ClosedKernel::eval_derivative(int alpha, int beta, Complex z, Complex w) const {
  if (alpha < 0 || beta < 0) throw std::invalid_argument("eval_derivative: negative order");
  if (alpha + beta > kMaxDerivativeOrder)
    throw std::invalid_argument("eval_derivative: alpha + beta exceeds the truncation bound 8");
  if (alpha == 0 && beta == 0) return eval(z, w);
  if (!in_domain(z) || !in_domain(w))
    throw std::domain_error("ClosedKernel::eval_derivative: point outside domain");
  return std::visit(
      [&](const auto& k) -> Complex {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, HalfPlaneUnweighted>) {
          const Complex den = 1.0 - z - std::conj(w);
          return factorial(alpha + beta + 1) / (kPi * ipow(den, alpha + beta + 2));
        } else if constexpr (std::is_same_v<T, DiscUnweighted>) {
          return disc_series_derivative(0, alpha, beta, z, std::conj(w));
        } else if constexpr (std::is_same_v<T, DiscDPower>) {
          return disc_series_derivative(k.d, alpha, beta, z, std::conj(w));
        } else if constexpr (std::is_same_v<T, ConstantScaled>) {
          return k.base->eval_derivative(alpha, beta, z, w) / k.c;
        } else {
          if (!std::holds_alternative<AffineMap>(k.map))
            throw std::invalid_argument(
                "eval_derivative: derivatives of Mobius-transported kernels are not supported");
          const AffineMap& m = std::get<AffineMap>(k.map);
          const Complex a = m.a;
          return ipow(a, k.d + 1 + alpha) * std::conj(ipow(a, k.d + 1 + beta)) *
                 k.base->eval_derivative(alpha, beta, m(z), m(w));
        }
      },
      node_);
}

double ClosedKernel::diag(Complex z) const { return eval(z, z).real(); }

ClosedKernel transport(const ClosedKernel& k2, const MapVariant& f, int d) {
  if (d < 0) throw std::invalid_argument("transport: d must be >= 0");
  if (d != k2.dpower_degree())
    throw std::invalid_argument("transport: d does not match the kernel's power-weight degree");
  return ClosedKernel(
      ClosedKernel::Node{ClosedKernel::Transported{f, std::make_shared<ClosedKernel>(k2), d}});
}

ClosedKernel constant_weight_scale(const ClosedKernel& k, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant_weight_scale: c must be positive");
  return ClosedKernel(
      ClosedKernel::Node{ClosedKernel::ConstantScaled{c, std::make_shared<ClosedKernel>(k)}});
}

ClosedKernel closed_unweighted_kernel(const Domain& dom) {
  if (dom.get_if<UnitDisc>()) return ClosedKernel::disc_unweighted();
  if (dom.get_if<HalfPlaneH>()) return ClosedKernel::half_plane_unweighted();
  if (const auto* d = dom.get_if<Disc>()) {
    // Map the disc onto the unit disc and pull the kernel back.
    const AffineMap to_unit{Complex{1.0 / d->radius, 0.0}, -d->center / d->radius};
    return transport(ClosedKernel::disc_unweighted(), MapVariant{to_unit}, 0);
  }
  if (const auto* ai = dom.get_if<AffineImage>()) {
    const ClosedKernel base = closed_unweighted_kernel(*ai->base);
    return transport(base, MapVariant{ai->map.inverse()}, 0);
  }
  throw std::invalid_argument("closed_unweighted_kernel: no closed form for this domain");
}

}  // namespace bergman
