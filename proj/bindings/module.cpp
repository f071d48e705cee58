#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bergman/config.hpp"
#include "bergman/experiments.hpp"
#include "bergman/geometry.hpp"
#include "bergman/kernels_closed.hpp"
#include "bergman/kernels_numeric.hpp"
#include "bergman/report.hpp"
#include "bergman/weights.hpp"

namespace py = pybind11;
using namespace bergman;

namespace {

py::object json_to_py(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      return py::none();
    case nlohmann::json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string:
      return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(json_to_py(e));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it)
        out[py::str(it.key())] = json_to_py(it.value());
      return out;
    }
    default:
      return py::none();
  }
}

py::dict ratio_report_dict(const RatioReport& rep) {
  py::dict d;
  d["deltas"] = rep.deltas;
  d["numerators"] = rep.numerators;
  d["denominators"] = rep.denominators;
  d["ratios"] = rep.ratios;
  d["target"] = rep.target;
  d["final_relative_error"] = rep.final_relative_error;
  d["trend_monotone"] = rep.trend_monotone;
  d["fitted_limit"] = rep.fitted_limit;
  if (!rep.statement_ratios.empty()) d["statement_ratios"] = rep.statement_ratios;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Weighted Bergman kernels on planar domains";
  m.attr("__version__") = bergman::cli::kArtifactVersion;

  py::class_<Rect>(m, "Rect")
      .def(py::init<double, double, double, double>(), py::arg("x0"), py::arg("y0"), py::arg("x1"),
           py::arg("y1"))
      .def_readwrite("x0", &Rect::x0)
      .def_readwrite("y0", &Rect::y0)
      .def_readwrite("x1", &Rect::x1)
      .def_readwrite("y1", &Rect::y1);

  py::class_<AffineMap>(m, "AffineMap")
      .def(py::init<Complex, Complex>(), py::arg("a"), py::arg("b"))
      .def_readonly("a", &AffineMap::a)
      .def_readonly("b", &AffineMap::b)
      .def("__call__", &AffineMap::operator())
      .def("derivative", &AffineMap::derivative)
      .def("inverse", &AffineMap::inverse)
      .def("compose", &AffineMap::compose);

  py::class_<MobiusMap>(m, "MobiusMap")
      .def(py::init<Complex, Complex, Complex, Complex>(), py::arg("a"), py::arg("b"),
           py::arg("c"), py::arg("d"))
      .def_readonly("a", &MobiusMap::a)
      .def_readonly("b", &MobiusMap::b)
      .def_readonly("c", &MobiusMap::c)
      .def_readonly("d", &MobiusMap::d)
      .def("__call__", &MobiusMap::operator())
      .def("derivative", &MobiusMap::derivative)
      .def("inverse", &MobiusMap::inverse)
      .def("compose", &MobiusMap::compose)
      .def_static("identity", &MobiusMap::identity)
      .def_static("from_affine", &MobiusMap::from_affine);

  py::class_<Disc>(m, "Disc")
      .def(py::init<Complex, double>(), py::arg("center"), py::arg("radius"))
      .def_readonly("center", &Disc::center)
      .def_readonly("radius", &Disc::radius);

  py::class_<Domain>(m, "Domain")
      .def_static("unit_disc", &Domain::unit_disc)
      .def_static("disc", &Domain::disc, py::arg("center"), py::arg("radius"))
      .def_static("half_plane_h", &Domain::half_plane_h)
      .def_static("affine_image", &Domain::affine_image, py::arg("base"), py::arg("a"),
                  py::arg("b"))
      .def_static("cut", &Domain::cut, py::arg("base"), py::arg("cut"))
      .def("is_bounded", &Domain::is_bounded);

  m.def("pixel_region",
        [](const Domain& base, int resolution) {
          return Domain::pixel_region(rasterize(base, resolution));
        },
        py::arg("base"), py::arg("resolution"),
        "Rasterize a domain onto its bounding box and wrap it as a pixel region");
  m.def("contains", &contains, py::arg("domain"), py::arg("z"));
  m.def("distance_to_boundary", &distance_to_boundary, py::arg("domain"), py::arg("z"));
  m.def("scaling_map", &scaling_map, py::arg("p_j"), py::arg("psi_value"));
  m.def("disc_defining_function", &disc_defining_function, py::arg("z"));
  m.def("riemann_map_to_H", &riemann_map_to_H, py::arg("disc"));
  m.def("rectangle_grid", &rectangle_grid, py::arg("rect"), py::arg("nx"), py::arg("ny"));
  m.def("hausdorff_convergence_check", &hausdorff_convergence_check, py::arg("seq"),
        py::arg("limit"), py::arg("grid"));

  py::class_<Weight>(m, "Weight")
      .def_static("constant", &Weight::constant, py::arg("c"))
      .def_static("real_affine", &Weight::real_affine, py::arg("u"), py::arg("v"), py::arg("w0"))
      .def_static("dpower", &Weight::dpower, py::arg("d"), py::arg("base"))
      .def_static("sum", &Weight::sum, py::arg("terms"))
      .def_static("product", &Weight::product, py::arg("factors"))
      .def_static(
          "pullback",
          [](const AffineMap& f, const Weight& base) { return Weight::pullback(f, base); },
          py::arg("map"), py::arg("base"))
      .def_static(
          "pullback_mobius",
          [](const MobiusMap& f, const Weight& base) { return Weight::pullback(f, base); },
          py::arg("map"), py::arg("base"));

  m.def("evaluate_weight", &evaluate, py::arg("weight"), py::arg("z"));
  m.def("boundary_value", &boundary_value, py::arg("weight"), py::arg("p"));
  m.def("corollary_lambda", &corollary_lambda, py::arg("alphas"), py::arg("mu_values_at_p"));

  py::class_<AdmissibilityReport>(m, "AdmissibilityReport")
      .def_readonly("boundary_estimate", &AdmissibilityReport::boundary_estimate)
      .def_readonly("oscillation", &AdmissibilityReport::oscillation)
      .def_readonly("sup_estimate", &AdmissibilityReport::sup_estimate)
      .def_readonly("inf_near_p", &AdmissibilityReport::inf_near_p)
      .def_readonly("declared_boundary_value", &AdmissibilityReport::declared_boundary_value)
      .def_readonly("member", &AdmissibilityReport::member);
  m.def("check_admissible_class", &check_admissible_class, py::arg("weight"), py::arg("domain"),
        py::arg("p"), py::arg("samples") = 64);

  py::class_<ClosedKernel>(m, "ClosedKernel")
      .def_static("disc_unweighted", &ClosedKernel::disc_unweighted)
      .def_static("half_plane_unweighted", &ClosedKernel::half_plane_unweighted)
      .def_static("disc_dpower", &ClosedKernel::disc_dpower, py::arg("d"))
      .def("eval", &ClosedKernel::eval, py::arg("z"), py::arg("w"))
      .def("eval_derivative", &ClosedKernel::eval_derivative, py::arg("alpha"), py::arg("beta"),
           py::arg("z"), py::arg("w"))
      .def("diag", &ClosedKernel::diag, py::arg("z"))
      .def("in_domain", &ClosedKernel::in_domain, py::arg("z"))
      .def("dpower_degree", &ClosedKernel::dpower_degree);
  m.def("transport", &transport, py::arg("kernel"), py::arg("map"), py::arg("d") = 0);
  m.def("constant_weight_scale", &constant_weight_scale, py::arg("kernel"), py::arg("c"));
  m.def("closed_unweighted_kernel", &closed_unweighted_kernel, py::arg("domain"));

  py::class_<PolarGauss>(m, "PolarGauss")
      .def(py::init([](int n_r, int n_theta, Complex center, double radius) {
             return PolarGauss{n_r, n_theta, center, radius};
           }),
           py::arg("n_r") = 64, py::arg("n_theta") = 128, py::arg("center") = Complex{0.0, 0.0},
           py::arg("radius") = 1.0)
      .def_readwrite("n_r", &PolarGauss::n_r)
      .def_readwrite("n_theta", &PolarGauss::n_theta)
      .def_readwrite("center", &PolarGauss::center)
      .def_readwrite("radius", &PolarGauss::radius);

  py::class_<PixelMidpoint>(m, "PixelMidpoint")
      .def(py::init([](int resolution, int refine_depth) {
             return PixelMidpoint{resolution, refine_depth, std::nullopt};
           }),
           py::arg("resolution") = 512, py::arg("refine_depth") = 2)
      .def_readwrite("resolution", &PixelMidpoint::resolution)
      .def_readwrite("refine_depth", &PixelMidpoint::refine_depth);

  py::class_<BasisSpec>(m, "BasisSpec")
      .def(py::init([](Complex center, int degree) { return BasisSpec{center, degree}; }),
           py::arg("center") = Complex{0.0, 0.0}, py::arg("degree") = 40)
      .def_readwrite("center", &BasisSpec::center)
      .def_readwrite("degree", &BasisSpec::degree);

  m.def("assemble_gram", &assemble_gram, py::arg("domain"), py::arg("weight"), py::arg("basis"),
        py::arg("quadrature"), py::arg("threads") = 1);

  py::class_<NumericKernel>(m, "NumericKernel")
      .def("eval", &NumericKernel::eval, py::arg("z"), py::arg("w"))
      .def("eval_derivative", &NumericKernel::eval_derivative, py::arg("alpha"), py::arg("beta"),
           py::arg("z"), py::arg("w"))
      .def("diag", &NumericKernel::diag, py::arg("z"))
      .def("discarded_modes", &NumericKernel::discarded_modes)
      .def("inverse_gram", &NumericKernel::inverse_gram);

  m.def("build_kernel", &build_kernel, py::arg("domain"), py::arg("weight"), py::arg("basis"),
        py::arg("quadrature"), py::arg("cutoff") = 1e-12, py::arg("threads") = 1);
  m.def("extremal_value", &extremal_value, py::arg("domain"), py::arg("weight"), py::arg("basis"),
        py::arg("quadrature"), py::arg("z0"), py::arg("threads") = 1);
  m.def("reproducing_check", &reproducing_check, py::arg("kernel"), py::arg("w"));

  py::class_<NumericParams>(m, "NumericParams")
      .def(py::init<>())
      .def_readwrite("basis_degree", &NumericParams::basis_degree)
      .def_readwrite("basis_center", &NumericParams::basis_center)
      .def_readwrite("n_r", &NumericParams::n_r)
      .def_readwrite("n_theta", &NumericParams::n_theta)
      .def_readwrite("pixel_resolution", &NumericParams::pixel_resolution)
      .def_readwrite("refine_depth", &NumericParams::refine_depth)
      .def_readwrite("use_pixel_quadrature", &NumericParams::use_pixel_quadrature)
      .def_readwrite("spectral_cutoff", &NumericParams::spectral_cutoff)
      .def_readwrite("threads", &NumericParams::threads);

  m.def("fitted_intercept", &fitted_intercept, py::arg("deltas"), py::arg("ratios"));
  m.def(
      "thm11_ratio",
      [](const Domain& dom, const Weight& mu, Complex p, const std::vector<double>& deltas,
         int alpha, int beta, const NumericParams& np) {
        return ratio_report_dict(thm11_ratio(dom, mu, p, deltas, alpha, beta, np));
      },
      py::arg("domain"), py::arg("weight"), py::arg("p"), py::arg("deltas"), py::arg("alpha") = 0,
      py::arg("beta") = 0, py::arg("params") = NumericParams{});
  m.def(
      "delta_power_bound",
      [](const Domain& dom, const Weight& mu, Complex p, const std::vector<double>& deltas,
         int alpha, int beta, const NumericParams& np) {
        const DeltaPowerReport rep = delta_power_bound(dom, mu, p, deltas, alpha, beta, np);
        py::dict d;
        d["deltas"] = rep.deltas;
        d["products"] = rep.products;
        d["lower"] = rep.lower;
        d["upper"] = rep.upper;
        d["all_positive"] = rep.all_positive;
        return d;
      },
      py::arg("domain"), py::arg("weight"), py::arg("p"), py::arg("deltas"), py::arg("alpha") = 0,
      py::arg("beta") = 0, py::arg("params") = NumericParams{});
  m.def(
      "cor12_sum",
      [](const Domain& dom, const std::vector<std::pair<double, Weight>>& terms, Complex p,
         const std::vector<double>& deltas, const NumericParams& np) {
        return ratio_report_dict(cor12_sum(dom, terms, p, deltas, np));
      },
      py::arg("domain"), py::arg("terms"), py::arg("p"), py::arg("deltas"),
      py::arg("params") = NumericParams{});
  m.def(
      "cor12_product",
      [](const Domain& dom, const std::vector<Weight>& factors, Complex p,
         const std::vector<double>& deltas, const NumericParams& np) {
        return ratio_report_dict(cor12_product(dom, factors, p, deltas, np));
      },
      py::arg("domain"), py::arg("factors"), py::arg("p"), py::arg("deltas"),
      py::arg("params") = NumericParams{});
  m.def(
      "dpower_asymptotic",
      [](const Domain& dom, int d, Complex p, const std::vector<double>& deltas,
         const NumericParams& np, bool numeric_numerator) {
        return ratio_report_dict(dpower_asymptotic(dom, d, p, deltas, np, numeric_numerator));
      },
      py::arg("domain"), py::arg("d"), py::arg("p"), py::arg("deltas"),
      py::arg("params") = NumericParams{}, py::arg("numeric_numerator") = false);
  m.def(
      "scaling_experiment",
      [](const std::vector<double>& p_js, const Weight& mu, const NumericParams& np) {
        const ScalingReport rep = scaling_experiment(p_js, mu, np);
        py::dict d;
        d["p_js"] = rep.p_js;
        d["epsilons"] = rep.epsilons;
        d["degrees"] = rep.degrees;
        d["kernel_values"] = rep.kernel_values;
        d["numeric_identity_residuals"] = rep.numeric_identity_residuals;
        d["closed_identity_residuals"] = rep.closed_identity_residuals;
        d["closed_values"] = rep.closed_values;
        d["target"] = rep.target;
        d["final_relative_error"] = rep.final_relative_error;
        return d;
      },
      py::arg("p_js"), py::arg("weight"), py::arg("params") = NumericParams{});
  m.def("riemann_convergence", &riemann_convergence, py::arg("p_js"), py::arg("grid"));
  m.def(
      "ramadanov_experiment",
      [](const std::vector<int>& js, double nu_infinity, double perturbation_scale,
         const std::vector<std::pair<Complex, Complex>>& probes, const NumericParams& np) {
        const RamadanovReport rep =
            ramadanov_experiment(js, nu_infinity, perturbation_scale, probes, np);
        py::dict d;
        d["js"] = rep.js;
        d["probes"] = rep.probes;
        d["values"] = rep.values;
        d["deviations"] = rep.deviations;
        d["limit_values"] = rep.limit_values;
        return d;
      },
      py::arg("js"), py::arg("nu_infinity"), py::arg("perturbation_scale"), py::arg("probes"),
      py::arg("params") = NumericParams{});
  m.def(
      "localization_experiment",
      [](const Domain& dom, const Disc& lens, const Weight& mu, Complex p,
         const std::vector<double>& deltas, const NumericParams& np) {
        return ratio_report_dict(localization_experiment(dom, lens, mu, p, deltas, np));
      },
      py::arg("domain"), py::arg("lens"), py::arg("weight"), py::arg("p"), py::arg("deltas"),
      py::arg("params") = NumericParams{});

  m.def(
      "run_config",
      [](const std::string& config_text, int threads) {
        const auto cfg = bergman::cli::parse_config(nlohmann::json::parse(config_text));
        const auto env = bergman::cli::run_experiment(cfg, threads);
        return json_to_py(env.to_json());
      },
      py::arg("config_text"), py::arg("threads") = 1,
      "Run an experiment from a JSON config string and return the report");

  py::register_exception<bergman::cli::ConfigError>(m, "ConfigError");
}
