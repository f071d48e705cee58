#include "bergman/kernels_numeric.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

double falling(int m, int k) {
  double f = 1.0;
  for (int j = 0; j < k; ++j) f *= (m - j);
  return f;
}

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) fail("gauss_legendre_01: need n >= 1");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n with the Chebyshev-like initial guess; symmetric
  // pairs are mirrored. Weights on [-1,1] are 2 / ((1 - x^2) P_n'(x)^2),
  // halved by the map onto [0, 1].
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = 0.5 * (1.0 - x);  // descending x maps to ascending r
    weights[i] = 0.5 * w;
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[n - 1 - i] = 0.5 * w;
  }
}

PolarGauss default_polar(int degree) {
  PolarGauss pg;
  pg.n_r = std::max(64, degree + 24);
  pg.n_theta = std::max(128, 2 * degree + 48);
  return pg;
}

PolarGauss polar_gauss_for(const Domain& dom, int degree) {
  PolarGauss pg = default_polar(degree);
  if (dom.get_if<UnitDisc>()) {
    pg.center = Complex{0.0, 0.0};
    pg.radius = 1.0;
    return pg;
  }
  if (const auto* d = dom.get_if<Disc>()) {
    pg.center = d->center;
    pg.radius = d->radius;
    return pg;
  }
  fail("polar_gauss_for: domain is not a disc");
}

namespace {

void append_pixel_nodes(const Domain& dom, double x0, double y0, double w, double h, int depth,
                        QuadratureNodes& out) {
  int corners_inside = 0;
  const Complex probes[4] = {Complex{x0, y0}, Complex{x0 + w, y0}, Complex{x0, y0 + h},
                             Complex{x0 + w, y0 + h}};
  for (const Complex& p : probes)
    if (contains(dom, p)) ++corners_inside;
  const Complex center{x0 + 0.5 * w, y0 + 0.5 * h};
  const bool center_inside = contains(dom, center);

  if (corners_inside == 4 && center_inside) {
    out.z.push_back(center);
    out.w.push_back(w * h);
    return;
  }
  if (corners_inside == 0 && !center_inside) return;
  if (depth == 0) {
    if (center_inside) {
      out.z.push_back(center);
      out.w.push_back(w * h);
    }
    return;
  }
  const double hw = 0.5 * w, hh = 0.5 * h;
  append_pixel_nodes(dom, x0, y0, hw, hh, depth - 1, out);
  append_pixel_nodes(dom, x0 + hw, y0, hw, hh, depth - 1, out);
  append_pixel_nodes(dom, x0, y0 + hh, hw, hh, depth - 1, out);
  append_pixel_nodes(dom, x0 + hw, y0 + hh, hw, hh, depth - 1, out);
}

}  // namespace

QuadratureNodes make_nodes(const Quadrature& quad, const Domain& dom) {
  QuadratureNodes out;
  if (const auto* pg = std::get_if<PolarGauss>(&quad)) {
    if (pg->n_r < 1 || pg->n_theta < 4) fail("PolarGauss: need n_r >= 1 and n_theta >= 4");
    std::vector<double> rn, rw;
    gauss_legendre_01(pg->n_r, rn, rw);
    const double r2 = pg->radius * pg->radius;
    const double dth = 2.0 * kPi / pg->n_theta;
    out.z.reserve(static_cast<std::size_t>(pg->n_r) * pg->n_theta);
    out.w.reserve(out.z.capacity());
    for (int i = 0; i < pg->n_r; ++i) {
      for (int k = 0; k < pg->n_theta; ++k) {
        const double th = dth * k;
        const Complex z = pg->center + pg->radius * rn[i] * Complex{std::cos(th), std::sin(th)};
        out.z.push_back(z);
        out.w.push_back(r2 * rn[i] * rw[i] * dth);
      }
    }
  } else {
    const auto& pm = std::get<PixelMidpoint>(quad);
    if (pm.resolution < 16 || pm.refine_depth < 0)
      fail("PixelMidpoint: need resolution >= 16 and refine_depth >= 0");
    const Rect r = pm.bbox.value_or(bounding_box(dom));
    const double cw = r.width() / pm.resolution;
    const double ch = r.height() / pm.resolution;
    for (int iy = 0; iy < pm.resolution; ++iy)
      for (int ix = 0; ix < pm.resolution; ++ix)
        append_pixel_nodes(dom, r.x0 + ix * cw, r.y0 + iy * ch, cw, ch, pm.refine_depth, out);
  }
  if (out.z.empty()) fail("make_nodes: quadrature produced no nodes");
  for (std::size_t k = 0; k < out.z.size(); ++k) {
    if (!(out.w[k] > 0.0)) fail("make_nodes: nonpositive node weight");
    if (!contains(dom, out.z[k]))
      fail("make_nodes: node " + std::to_string(k) + " lies outside the domain");
  }
  return out;
}

double basis_scale(const Domain& dom, const BasisSpec& basis) {
  const Complex c = basis.center;
  double s = 0.0;
  if (dom.get_if<UnitDisc>()) {
    s = 1.0 + std::abs(c);
  } else if (const auto* d = dom.get_if<Disc>()) {
    s = d->radius + std::abs(c - d->center);
  } else {
    const Rect r = bounding_box(dom);
    for (double x : {r.x0, r.x1})
      for (double y : {r.y0, r.y1}) s = std::max(s, std::abs(Complex{x, y} - c));
  }
  return std::max(s, 1e-12);
}

namespace {

void fill_basis_vector(Eigen::VectorXcd& v, Complex z, Complex center, double scale, int degree) {
  v.resize(degree + 1);
  const Complex t = (z - center) / scale;
  Complex p{1.0, 0.0};
  for (int m = 0; m <= degree; ++m) {
    v(m) = p;
    p *= t;
  }
}

[[noreturn]] void fail_weight_at(std::size_t index, Complex z) {
  fail("assemble_gram: weight is nonpositive at node " + std::to_string(index) + " = (" +
       std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
}

// Upper band of the Gram matrix: bands[h][m] = G(m, m + h).
struct GramBands {
  int bandwidth = 0;
  std::vector<std::vector<Complex>> bands;
};

// Per-circle harmonic sums: valid when the weight has finitely many angular
// harmonics about the shared basis/quadrature center and n_theta resolves
// degree + bandwidth frequencies.
GramBands assemble_polar_bands(const PolarGauss& pg, const Weight& mu, const BasisSpec& basis,
                               int bandwidth, double scale) {
  const int n = basis.degree + 1;
  std::vector<double> rn, rw;
  gauss_legendre_01(pg.n_r, rn, rw);
  const double dth = 2.0 * kPi / pg.n_theta;
  const double r2 = pg.radius * pg.radius;
  const auto lin = try_linearize(mu);

  GramBands out;
  out.bandwidth = bandwidth;
  out.bands.assign(bandwidth + 1, std::vector<Complex>(n, Complex{0.0, 0.0}));
  std::vector<Complex> harmonics(bandwidth + 1);
  for (int i = 0; i < pg.n_r; ++i) {
    std::fill(harmonics.begin(), harmonics.end(), Complex{0.0, 0.0});
    for (int k = 0; k < pg.n_theta; ++k) {
      const double th = dth * k;
      const Complex z = pg.center + pg.radius * rn[i] * Complex{std::cos(th), std::sin(th)};
      const double m = lin ? lin->u * z.real() + lin->v * z.imag() + lin->w0 : evaluate(mu, z);
      if (!(m > 0.0)) fail_weight_at(static_cast<std::size_t>(i) * pg.n_theta + k, z);
      const Complex e{std::cos(th), -std::sin(th)};
      Complex ph{1.0, 0.0};
      for (int h = 0; h <= bandwidth; ++h) {
        harmonics[h] += m * ph;
        ph *= e;
      }
    }
    const double rho = pg.radius * rn[i] / scale;
    const double node_w = r2 * rn[i] * rw[i] * dth;
    for (int h = 0; h <= bandwidth; ++h) {
      const Complex hval = harmonics[h] * node_w;
      double rp = std::pow(rho, h);
      for (int m = 0; m + h < n; ++m) {
        out.bands[h][m] += hval * rp;
        rp *= rho * rho;
      }
    }
  }
  return out;
}

Eigen::MatrixXcd densify(const GramBands& gb, int n) {
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(n, n);
  for (int h = 0; h <= gb.bandwidth; ++h) {
    for (int m = 0; m + h < n; ++m) {
      gram(m, m + h) = gb.bands[h][m];
      if (h > 0) gram(m + h, m) = std::conj(gb.bands[h][m]);
    }
  }
  return gram;
}

Eigen::SparseMatrix<Complex> sparsify(const GramBands& gb, int n) {
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(n) * (2 * gb.bandwidth + 1));
  for (int h = 0; h <= gb.bandwidth; ++h) {
    for (int m = 0; m + h < n; ++m) {
      trips.emplace_back(m, m + h, gb.bands[h][m]);
      if (h > 0) trips.emplace_back(m + h, m, std::conj(gb.bands[h][m]));
    }
  }
  Eigen::SparseMatrix<Complex> s(n, n);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

std::vector<Eigen::MatrixXcd> pairwise_halve(std::vector<Eigen::MatrixXcd> parts) {
  while (parts.size() > 1) {
    std::vector<Eigen::MatrixXcd> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts;
}

constexpr std::size_t kChunk = 1024;
constexpr std::size_t kChunksPerBlock = 16;

Eigen::MatrixXcd assemble_dense(const QuadratureNodes& nodes, const Weight& mu,
                                const BasisSpec& basis, double scale, int threads) {
  const int n = basis.degree + 1;
  const std::size_t total = nodes.z.size();
  const std::size_t block = kChunk * kChunksPerBlock;
  const std::size_t n_blocks = (total + block - 1) / block;

  std::vector<Eigen::MatrixXcd> partials(n_blocks);
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex error_mutex;

  const auto work = [&]() {
    Eigen::MatrixXcd u(n, kChunk);
    Eigen::VectorXcd col(n);
    for (;;) {
      const std::size_t b = cursor.fetch_add(1);
      if (b >= n_blocks || failed.load()) return;
      try {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(lo + block, total);
        std::vector<Eigen::MatrixXcd> chunk_sums;
        for (std::size_t c0 = lo; c0 < hi; c0 += kChunk) {
          const std::size_t c1 = std::min(c0 + kChunk, hi);
          const int width = static_cast<int>(c1 - c0);
          for (std::size_t k = c0; k < c1; ++k) {
            const Complex z = nodes.z[k];
            const double m = evaluate(mu, z);
            if (!(m > 0.0)) fail_weight_at(k, z);
            fill_basis_vector(col, z, basis.center, scale, basis.degree);
            u.col(static_cast<int>(k - c0)) = col * std::sqrt(nodes.w[k] * m);
          }
          Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
          g.selfadjointView<Eigen::Lower>().rankUpdate(u.leftCols(width));
          chunk_sums.push_back(std::move(g));
        }
        partials[b] = std::move(pairwise_halve(std::move(chunk_sums)).front());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_msg.empty()) error_msg = e.what();
        return;
      }
    }
  };

  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    const int t = std::min<std::size_t>(threads, n_blocks);
    pool.reserve(t);
    for (int i = 0; i < t; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::invalid_argument(error_msg);

  Eigen::MatrixXcd g = pairwise_halve(std::move(partials)).front();
  // rankUpdate filled the lower triangle only.
  return Eigen::MatrixXcd(g.selfadjointView<Eigen::Lower>());
}

bool banded_path_applies(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                         const PolarGauss& pg, int& bandwidth) {
  if (pg.center != basis.center) return false;
  bool matches_domain = false;
  if (dom.get_if<UnitDisc>()) {
    matches_domain = pg.center == Complex{0.0, 0.0} && pg.radius == 1.0;
  } else if (const auto* d = dom.get_if<Disc>()) {
    matches_domain = d->center == pg.center && d->radius == pg.radius;
  }
  if (!matches_domain) return false;
  const auto bw = polar_bandwidth(mu, basis.center);
  if (!bw) return false;
  if (pg.n_theta <= basis.degree + *bw) return false;  // harmonic aliasing
  bandwidth = *bw;
  return true;
}

}  // namespace

Eigen::MatrixXcd assemble_gram(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                               const Quadrature& quad, int threads) {
  if (basis.degree < 0) fail("assemble_gram: basis degree must be >= 0");
  if (!contains(dom, basis.center)) fail("assemble_gram: basis center must lie inside the domain");
  const double scale = basis_scale(dom, basis);

  if (const auto* pg = std::get_if<PolarGauss>(&quad)) {
    int bw = 0;
    if (banded_path_applies(dom, mu, basis, *pg, bw))
      return densify(assemble_polar_bands(*pg, mu, basis, bw, scale), basis.degree + 1);
  }
  const QuadratureNodes nodes = make_nodes(quad, dom);
  return assemble_dense(nodes, mu, basis, scale, threads);
}

NumericKernel::NumericKernel(Domain dom, Weight mu, BasisSpec basis, Quadrature quad, double cutoff,
                             double scale, int discarded, Eigen::MatrixXcd inverse_gram)
    : domain_(std::move(dom)),
      weight_(std::move(mu)),
      basis_(basis),
      quadrature_(quad),
      cutoff_(cutoff),
      scale_(scale),
      discarded_(discarded),
      inverse_gram_(std::move(inverse_gram)) {}

Eigen::VectorXcd NumericKernel::basis_vector(Complex z) const {
  Eigen::VectorXcd v;
  fill_basis_vector(v, z, basis_.center, scale_, basis_.degree);
  return v;
}

void NumericKernel::check_point(Complex z) const {
  if (!contains(domain_, z))
    throw std::domain_error("NumericKernel: evaluation point outside the domain");
  if (const auto* pm = std::get_if<PixelMidpoint>(&quadrature_)) {
    const Rect r = pm->bbox.value_or(bounding_box(domain_));
    const double cell = std::max(r.width(), r.height()) / pm->resolution;
    if (distance_to_boundary(domain_, z) < 2.0 * cell)
      throw std::domain_error(
          "NumericKernel: point closer to the boundary than twice the pixel size");
  }
}

Complex NumericKernel::eval(Complex z, Complex w) const {
  check_point(z);
  check_point(w);
  const Eigen::VectorXcd vz = basis_vector(z);
  const Eigen::VectorXcd vw = basis_vector(w);
  return vw.dot(inverse_gram_ * vz);
}

Complex NumericKernel::eval_derivative(int alpha, int beta, Complex z, Complex w) const {
  if (alpha < 0 || beta < 0) fail("eval_derivative: negative order");
  if (alpha > basis_.degree || beta > basis_.degree)
    fail("eval_derivative: derivative order exceeds the basis degree");
  if (alpha == 0 && beta == 0) return eval(z, w);
  check_point(z);
  check_point(w);
  const int n = basis_.degree + 1;
  Eigen::VectorXcd dz = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd dw = Eigen::VectorXcd::Zero(n);
  const Complex tz = (z - basis_.center) / scale_;
  const Complex tw = (w - basis_.center) / scale_;
  const double sa = std::pow(scale_, alpha);
  const double sb = std::pow(scale_, beta);
  Complex pz{1.0, 0.0};
  Complex pw{1.0, 0.0};
  for (int m = 0; m < n; ++m) {
    if (m >= alpha) {
      dz(m) = falling(m, alpha) * pz / sa;
      pz *= tz;
    }
    if (m >= beta) {
      dw(m) = falling(m, beta) * pw / sb;
      pw *= tw;
    }
  }
  return dw.dot(inverse_gram_ * dz);
}

double NumericKernel::diag(Complex z) const { return eval(z, z).real(); }

NumericKernel build_kernel(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                           const Quadrature& quad, double cutoff, int threads) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) fail("build_kernel: cutoff must lie in (0, 1)");
  Eigen::MatrixXcd gram = assemble_gram(dom, mu, basis, quad, threads);
  gram = 0.5 * (gram + Eigen::MatrixXcd(gram.adjoint()));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success) throw std::runtime_error("build_kernel: eigensolver failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  const double lmax = lam.maxCoeff();
  if (!(lmax > 0.0))
    throw std::invalid_argument("build_kernel: Gram matrix has no positive spectrum");
  const double threshold = cutoff * lmax;

  const int n = basis.degree + 1;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  int discarded = 0;
  for (int i = 0; i < n; ++i) {
    if (lam(i) > threshold)
      inv(i) = 1.0 / lam(i);
    else
      ++discarded;
  }
  if (discarded == n)
    throw std::invalid_argument("build_kernel: all eigenvalues fall below the spectral cutoff");
  Eigen::MatrixXcd a =
      es.eigenvectors() * inv.asDiagonal() * Eigen::MatrixXcd(es.eigenvectors().adjoint());
  a = 0.5 * (a + Eigen::MatrixXcd(a.adjoint()));
  return NumericKernel(dom, mu, basis, quad, cutoff, basis_scale(dom, basis), discarded,
                       std::move(a));
}

double extremal_value(const Domain& dom, const Weight& mu, const BasisSpec& basis,
                      const Quadrature& quad, Complex z0, int threads) {
  if (!contains(dom, z0)) throw std::domain_error("extremal_value: z0 outside the domain");
  const double scale = basis_scale(dom, basis);
  Eigen::VectorXcd v;
  fill_basis_vector(v, z0, basis.center, scale, basis.degree);
  if (v.norm() == 0.0) fail("extremal_value: constraint vector vanishes at z0");

  // Banded Gram matrices at high degree: solve G y = v sparsely; the value
  // v^H G^{-1} v is the same constrained minimum without the dense border.
  if (const auto* pg = std::get_if<PolarGauss>(&quad); pg && basis.degree > 256) {
    int bw = 0;
    if (banded_path_applies(dom, mu, basis, *pg, bw)) {
      const GramBands gb = assemble_polar_bands(*pg, mu, basis, bw, scale);
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>> solver;
      solver.compute(sparsify(gb, basis.degree + 1));
      if (solver.info() != Eigen::Success)
        throw std::runtime_error("extremal_value: banded factorization failed");
      const Eigen::VectorXcd y = solver.solve(v);
      const double value = v.dot(y).real();
      if (!(value > 0.0))
        throw std::runtime_error("extremal_value: degenerate constrained minimum");
      return value;
    }
  }

  const Eigen::MatrixXcd gram = assemble_gram(dom, mu, basis, quad, threads);
  const int n = basis.degree + 1;
  Eigen::MatrixXcd kkt = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  kkt.topLeftCorner(n, n) = 0.5 * (gram + Eigen::MatrixXcd(gram.adjoint()));
  kkt.block(0, n, n, 1) = v;
  kkt.block(n, 0, 1, n) = v.adjoint();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
  rhs(n) = Complex{1.0, 0.0};

  const Eigen::VectorXcd sol = Eigen::PartialPivLU<Eigen::MatrixXcd>(kkt).solve(rhs);
  const double minimum = -sol(n).real();  // multiplier block carries -lambda
  if (!(minimum > 0.0))
    throw std::runtime_error("extremal_value: degenerate constrained minimum");
  return 1.0 / minimum;
}

double reproducing_check(const NumericKernel& kernel, Complex w) {
  const double kww = kernel.diag(w);
  if (kww == 0.0) throw std::invalid_argument("reproducing_check: K(w, w) vanishes");
  const QuadratureNodes nodes = make_nodes(kernel.quadrature(), kernel.domain());
  const Eigen::VectorXcd b = kernel.inverse_gram() * kernel.basis_vector(w);
  Eigen::VectorXcd e(kernel.basis().degree + 1);
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.z.size(); ++k) {
    fill_basis_vector(e, nodes.z[k], kernel.basis().center, kernel.scale(),
                      kernel.basis().degree);
    const Complex val = b.dot(e);
    sum += nodes.w[k] * evaluate(kernel.weight(), nodes.z[k]) * std::norm(val);
  }
  return std::abs(sum - kww) / kww;
}

}  // namespace bergman
