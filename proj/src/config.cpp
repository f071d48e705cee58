#include "bergman/config.hpp"

#include <algorithm>
#include <cmath>

namespace bergman::cli {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& detail) {
  throw ConfigError("config error: field '" + field + "': " + detail);
}

const json& require(const json& j, const std::string& field) {
  if (!j.contains(field)) bad(field, "missing");
  return j.at(field);
}

double require_number(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_number()) bad(field, "expected a number");
  return v.get<double>();
}

int require_int(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) bad(field, "expected an integer");
  return v.get<int>();
}

std::string require_string(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

Complex parse_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    bad(field, "expected [re, im]");
  return Complex{v[0].get<double>(), v[1].get<double>()};
}

Complex require_complex(const json& j, const std::string& field) {
  return parse_complex(require(j, field), field);
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Thm11: return "thm11";
    case ExperimentKind::DeltaPower: return "delta-power";
    case ExperimentKind::Cor12Sum: return "cor12-sum";
    case ExperimentKind::Cor12Product: return "cor12-product";
    case ExperimentKind::DPower: return "dpower";
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::Riemann: return "riemann";
    case ExperimentKind::Ramadanov: return "ramadanov";
    case ExperimentKind::Localization: return "localization";
    case ExperimentKind::KernelEval: return "kernel-eval";
  }
  throw ConfigError("config error: unknown experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  static const std::pair<const char*, ExperimentKind> table[] = {
      {"thm11", ExperimentKind::Thm11},
      {"delta-power", ExperimentKind::DeltaPower},
      {"cor12-sum", ExperimentKind::Cor12Sum},
      {"cor12-product", ExperimentKind::Cor12Product},
      {"dpower", ExperimentKind::DPower},
      {"scaling", ExperimentKind::Scaling},
      {"riemann", ExperimentKind::Riemann},
      {"ramadanov", ExperimentKind::Ramadanov},
      {"localization", ExperimentKind::Localization},
      {"kernel-eval", ExperimentKind::KernelEval},
  };
  for (const auto& [n, k] : table)
    if (name == n) return k;
  bad("experiment", "unknown experiment '" + name + "'");
}

Domain parse_domain(const json& j) {
  if (!j.is_object()) bad("domain", "expected an object");
  const std::string type = require_string(j, "type");
  if (type == "unit_disc") return Domain::unit_disc();
  if (type == "disc")
    return Domain::disc(require_complex(j, "center"), require_number(j, "radius"));
  if (type == "half_plane_h") return Domain::half_plane_h();
  if (type == "affine_image")
    return Domain::affine_image(parse_domain(require(j, "base")), require_complex(j, "a"),
                                require_complex(j, "b"));
  if (type == "pixel_region") {
    const Domain base = parse_domain(require(j, "base"));
    return Domain::pixel_region(rasterize(base, require_int(j, "resolution")));
  }
  if (type == "cut")
    return Domain::cut(parse_domain(require(j, "base")), parse_domain(require(j, "cut")));
  bad("domain.type", "unknown domain variant '" + type + "'");
}

json serialize_domain(const Domain& dom) {
  return std::visit(
      [&](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) {
          return json{{"type", "unit_disc"}};
        } else if constexpr (std::is_same_v<T, Disc>) {
          return json{{"type", "disc"}, {"center", complex_json(d.center)}, {"radius", d.radius}};
        } else if constexpr (std::is_same_v<T, HalfPlaneH>) {
          return json{{"type", "half_plane_h"}};
        } else if constexpr (std::is_same_v<T, AffineImage>) {
          return json{{"type", "affine_image"},
                      {"base", serialize_domain(*d.base)},
                      {"a", complex_json(d.map.a)},
                      {"b", complex_json(d.map.b)}};
        } else if constexpr (std::is_same_v<T, PixelRegion>) {
          // Rasterized regions do not keep their source; round-trips go
          // through the source domain in configs.
          return json{{"type", "pixel_region"},
                      {"resolution", d.resolution},
                      {"bbox", json::array({d.bbox.x0, d.bbox.y0, d.bbox.x1, d.bbox.y1})}};
        } else {
          return json{{"type", "cut"},
                      {"base", serialize_domain(*d.base)},
                      {"cut", serialize_domain(*d.cut)}};
        }
      },
      dom.node);
}

MapVariant parse_map(const json& j) {
  if (!j.is_object()) bad("map", "expected an object");
  const std::string type = require_string(j, "type");
  if (type == "affine") {
    const Complex a = require_complex(j, "a");
    if (a == Complex{0.0, 0.0}) bad("map.a", "affine coefficient must be nonzero");
    return MapVariant{AffineMap{a, require_complex(j, "b")}};
  }
  if (type == "mobius") {
    const MobiusMap m{require_complex(j, "a"), require_complex(j, "b"), require_complex(j, "c"),
                      require_complex(j, "d")};
    if (m.a * m.d - m.b * m.c == Complex{0.0, 0.0})
      bad("map", "mobius coefficients must satisfy ad - bc != 0");
    return MapVariant{m};
  }
  bad("map.type", "unknown map variant '" + type + "'");
}

json serialize_map(const MapVariant& m) {
  if (const auto* aff = std::get_if<AffineMap>(&m))
    return json{{"type", "affine"}, {"a", complex_json(aff->a)}, {"b", complex_json(aff->b)}};
  const MobiusMap& mm = std::get<MobiusMap>(m);
  return json{{"type", "mobius"},
              {"a", complex_json(mm.a)},
              {"b", complex_json(mm.b)},
              {"c", complex_json(mm.c)},
              {"d", complex_json(mm.d)}};
}

Weight parse_weight(const json& j) {
  if (!j.is_object()) bad("weight", "expected an object");
  const std::string type = require_string(j, "type");
  if (type == "constant") {
    const double c = require_number(j, "c");
    if (!(c > 0.0)) bad("weight.c", "must be positive");
    return Weight::constant(c);
  }
  if (type == "real_affine")
    return Weight::real_affine(require_number(j, "u"), require_number(j, "v"),
                               require_number(j, "w0"));
  if (type == "dpower") {
    const int d = require_int(j, "d");
    if (d < 0) bad("weight.d", "must be >= 0");
    return Weight::dpower(d, parse_domain(require(j, "base")));
  }
  if (type == "sum") {
    const json& terms = require(j, "terms");
    if (!terms.is_array() || terms.empty()) bad("weight.terms", "expected a nonempty array");
    std::vector<std::pair<double, Weight>> parsed;
    for (const json& t : terms) {
      const double alpha = require_number(t, "alpha");
      if (!(alpha > 0.0)) bad("weight.terms.alpha", "must be positive");
      parsed.emplace_back(alpha, parse_weight(require(t, "weight")));
    }
    return Weight::sum(std::move(parsed));
  }
  if (type == "product") {
    const json& factors = require(j, "factors");
    if (!factors.is_array() || factors.empty()) bad("weight.factors", "expected a nonempty array");
    std::vector<Weight> parsed;
    for (const json& f : factors) parsed.push_back(parse_weight(f));
    return Weight::product(std::move(parsed));
  }
  if (type == "pullback")
    return Weight::pullback(parse_map(require(j, "map")), parse_weight(require(j, "base")));
  bad("weight.type", "unknown weight variant '" + type + "'");
}

json serialize_weight(const Weight& w) {
  return std::visit(
      [&](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConstantW>) {
          return json{{"type", "constant"}, {"c", n.c}};
        } else if constexpr (std::is_same_v<T, RealAffineW>) {
          return json{{"type", "real_affine"}, {"u", n.u}, {"v", n.v}, {"w0", n.w0}};
        } else if constexpr (std::is_same_v<T, DPowerW>) {
          return json{{"type", "dpower"}, {"d", n.d}, {"base", serialize_domain(*n.base)}};
        } else if constexpr (std::is_same_v<T, SumW>) {
          json terms = json::array();
          for (const auto& [alpha, term] : n.terms)
            terms.push_back(json{{"alpha", alpha}, {"weight", serialize_weight(*term)}});
          return json{{"type", "sum"}, {"terms", terms}};
        } else if constexpr (std::is_same_v<T, ProductW>) {
          json factors = json::array();
          for (const auto& f : n.factors) factors.push_back(serialize_weight(*f));
          return json{{"type", "product"}, {"factors", factors}};
        } else {
          return json{{"type", "pullback"},
                      {"map", serialize_map(n.inner)},
                      {"base", serialize_weight(*n.base)}};
        }
      },
      w.node());
}

ClosedKernel parse_kernel(const json& j) {
  if (!j.is_object()) bad("kernel", "expected an object");
  const std::string type = require_string(j, "type");
  if (type == "disc_unweighted") return ClosedKernel::disc_unweighted();
  if (type == "half_plane_unweighted") return ClosedKernel::half_plane_unweighted();
  if (type == "disc_dpower") return ClosedKernel::disc_dpower(require_int(j, "d"));
  if (type == "constant_scaled")
    return constant_weight_scale(parse_kernel(require(j, "base")), require_number(j, "c"));
  if (type == "transported") {
    const int d = j.contains("d") ? require_int(j, "d") : 0;
    return transport(parse_kernel(require(j, "base")), parse_map(require(j, "map")), d);
  }
  bad("kernel.type", "unknown kernel variant '" + type + "'");
}

namespace {

NumericParams parse_numeric(const json& j) {
  NumericParams np;
  if (!j.is_object()) bad("numeric", "expected an object");
  if (j.contains("basis_degree")) np.basis_degree = require_int(j, "basis_degree");
  if (np.basis_degree < 0) bad("numeric.basis_degree", "must be >= 0");
  if (j.contains("basis_center")) np.basis_center = require_complex(j, "basis_center");
  if (j.contains("n_r")) np.n_r = require_int(j, "n_r");
  if (j.contains("n_theta")) np.n_theta = require_int(j, "n_theta");
  if (j.contains("pixel_resolution")) np.pixel_resolution = require_int(j, "pixel_resolution");
  if (j.contains("refine_depth")) np.refine_depth = require_int(j, "refine_depth");
  if (j.contains("pixel_quadrature")) {
    if (!j.at("pixel_quadrature").is_boolean()) bad("numeric.pixel_quadrature", "expected a bool");
    np.use_pixel_quadrature = j.at("pixel_quadrature").get<bool>();
  }
  if (j.contains("spectral_cutoff")) {
    np.spectral_cutoff = require_number(j, "spectral_cutoff");
    if (!(np.spectral_cutoff > 0.0 && np.spectral_cutoff < 1.0))
      bad("numeric.spectral_cutoff", "must lie in (0, 1)");
  }
  return np;
}

json serialize_numeric(const NumericParams& np) {
  json j{{"basis_degree", np.basis_degree},
         {"pixel_resolution", np.pixel_resolution},
         {"refine_depth", np.refine_depth},
         {"pixel_quadrature", np.use_pixel_quadrature},
         {"spectral_cutoff", np.spectral_cutoff}};
  if (np.basis_center) j["basis_center"] = complex_json(*np.basis_center);
  if (np.n_r) j["n_r"] = *np.n_r;
  if (np.n_theta) j["n_theta"] = *np.n_theta;
  return j;
}

std::vector<double> parse_decreasing_deltas(const json& j, const std::string& field) {
  const json& v = require(j, field);
  if (!v.is_array() || v.empty()) bad(field, "expected a nonempty array");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) bad(field, "expected numbers");
    out.push_back(e.get<double>());
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0)) bad(field, "entries must be positive");
    if (i > 0 && !(out[i] < out[i - 1])) bad(field, "entries must be strictly decreasing");
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config error: top level must be a JSON object");
  ExperimentConfig cfg;
  if (j.contains("schema")) {
    cfg.schema = require_int(j, "schema");
    if (cfg.schema != 1) bad("schema", "unsupported schema version");
  }
  cfg.experiment = kind_from_name(require_string(j, "experiment"));

  if (j.contains("domain")) {
    cfg.domain = parse_domain(j.at("domain"));
    cfg.domain_spec = j.at("domain");
  }
  if (j.contains("weight")) {
    cfg.weight = parse_weight(j.at("weight"));
    cfg.weight_spec = j.at("weight");
  }
  if (j.contains("p")) cfg.p = require_complex(j, "p");
  if (j.contains("deltas")) cfg.deltas = parse_decreasing_deltas(j, "deltas");
  if (j.contains("alpha")) cfg.alpha = require_int(j, "alpha");
  if (j.contains("beta")) cfg.beta = require_int(j, "beta");
  if (cfg.alpha < 0 || cfg.beta < 0) bad("alpha/beta", "derivative orders must be >= 0");
  if (j.contains("d")) cfg.d = require_int(j, "d");
  if (j.contains("numeric_numerator")) {
    if (!j.at("numeric_numerator").is_boolean()) bad("numeric_numerator", "expected a bool");
    cfg.numeric_numerator = j.at("numeric_numerator").get<bool>();
  }
  if (j.contains("weights")) {
    const json& arr = j.at("weights");
    if (!arr.is_array() || arr.empty()) bad("weights", "expected a nonempty array");
    for (const json& t : arr) {
      if (t.contains("alpha"))
        cfg.weighted_terms.emplace_back(require_number(t, "alpha"),
                                        parse_weight(require(t, "weight")));
      else
        cfg.factors.push_back(parse_weight(t));
    }
    cfg.weights_spec = arr;
  }
  if (j.contains("p_js")) {
    for (const json& e : require(j, "p_js")) {
      if (!e.is_number()) bad("p_js", "expected numbers");
      cfg.p_js.push_back(e.get<double>());
    }
  }
  if (j.contains("js")) {
    for (const json& e : require(j, "js")) {
      if (!e.is_number_integer()) bad("js", "expected integers");
      cfg.js.push_back(e.get<int>());
    }
  }
  if (j.contains("nu_infinity")) cfg.nu_infinity = require_number(j, "nu_infinity");
  if (j.contains("perturbation_scale"))
    cfg.perturbation_scale = require_number(j, "perturbation_scale");
  if (j.contains("probes")) {
    const json& arr = j.at("probes");
    if (!arr.is_array()) bad("probes", "expected an array of [[zre,zim],[wre,wim]] pairs");
    for (const json& pr : arr) {
      if (!pr.is_array() || pr.size() != 2) bad("probes", "each probe is a [z, w] pair");
      cfg.probes.emplace_back(parse_complex(pr[0], "probes.z"), parse_complex(pr[1], "probes.w"));
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    cfg.grid_rect = Rect{require_number(g, "x0"), require_number(g, "y0"),
                         require_number(g, "x1"), require_number(g, "y1")};
    cfg.grid_nx = require_int(g, "nx");
    cfg.grid_ny = require_int(g, "ny");
  }
  if (j.contains("lens")) {
    const json& l = j.at("lens");
    cfg.lens = Disc{require_complex(l, "center"), require_number(l, "radius")};
    if (!(cfg.lens->radius > 0.0)) bad("lens.radius", "must be positive");
  }
  if (j.contains("kernel")) {
    cfg.kernel = parse_kernel(j.at("kernel"));
    cfg.kernel_spec = j.at("kernel");
  }
  if (j.contains("z")) cfg.z = require_complex(j, "z");
  if (j.contains("w")) cfg.w = require_complex(j, "w");
  if (j.contains("expected")) cfg.expected = require_number(j, "expected");
  if (j.contains("numeric")) cfg.numeric = parse_numeric(j.at("numeric"));
  if (j.contains("tolerance")) cfg.tolerance = require_number(j, "tolerance");
  if (j.contains("identity_tolerance"))
    cfg.identity_tolerance = require_number(j, "identity_tolerance");
  if (j.contains("lower_bound")) cfg.lower_bound = require_number(j, "lower_bound");
  if (j.contains("upper_bound")) cfg.upper_bound = require_number(j, "upper_bound");
  if (j.contains("output")) {
    const json& o = j.at("output");
    if (o.contains("format")) {
      cfg.output.format = require_string(o, "format");
      if (cfg.output.format != "json" && cfg.output.format != "csv")
        bad("output.format", "expected 'json' or 'csv'");
    }
    if (o.contains("path")) cfg.output.path = require_string(o, "path");
  }

  // Per-kind required fields, so misconfiguration fails before any work.
  const auto need = [&](bool ok, const std::string& field) {
    if (!ok) bad(field, "required for experiment '" + kind_name(cfg.experiment) + "'");
  };
  switch (cfg.experiment) {
    case ExperimentKind::Thm11:
    case ExperimentKind::DeltaPower:
      need(cfg.domain.has_value(), "domain");
      need(cfg.weight.has_value(), "weight");
      need(cfg.p.has_value(), "p");
      need(!cfg.deltas.empty(), "deltas");
      break;
    case ExperimentKind::Cor12Sum:
      need(cfg.domain.has_value(), "domain");
      need(!cfg.weighted_terms.empty(), "weights (with alpha coefficients)");
      need(cfg.p.has_value(), "p");
      need(!cfg.deltas.empty(), "deltas");
      break;
    case ExperimentKind::Cor12Product:
      need(cfg.domain.has_value(), "domain");
      need(!cfg.factors.empty(), "weights (factor list)");
      need(cfg.p.has_value(), "p");
      need(!cfg.deltas.empty(), "deltas");
      break;
    case ExperimentKind::DPower:
      need(cfg.domain.has_value(), "domain");
      need(cfg.p.has_value(), "p");
      need(!cfg.deltas.empty(), "deltas");
      break;
    case ExperimentKind::Scaling:
      need(cfg.weight.has_value(), "weight");
      need(!cfg.p_js.empty(), "p_js");
      break;
    case ExperimentKind::Riemann:
      need(!cfg.p_js.empty(), "p_js");
      need(cfg.grid_rect.has_value(), "grid");
      break;
    case ExperimentKind::Ramadanov:
      need(!cfg.js.empty(), "js");
      need(!cfg.probes.empty(), "probes");
      break;
    case ExperimentKind::Localization:
      need(cfg.domain.has_value(), "domain");
      need(cfg.lens.has_value(), "lens");
      need(cfg.weight.has_value(), "weight");
      need(cfg.p.has_value(), "p");
      need(!cfg.deltas.empty(), "deltas");
      break;
    case ExperimentKind::KernelEval:
      need(cfg.kernel.has_value(), "kernel");
      need(cfg.z.has_value(), "z");
      need(cfg.w.has_value(), "w");
      break;
  }
  if (cfg.experiment != ExperimentKind::KernelEval) {
    if (cfg.experiment == ExperimentKind::DeltaPower) {
      need(cfg.lower_bound.has_value(), "lower_bound");
      need(cfg.upper_bound.has_value(), "upper_bound");
    } else {
      need(cfg.tolerance.has_value(), "tolerance");
    }
  } else if (cfg.expected.has_value()) {
    need(cfg.tolerance.has_value(), "tolerance");
  }
  return cfg;
}

json serialize_config(const ExperimentConfig& cfg) {
  json j{{"schema", cfg.schema}, {"experiment", kind_name(cfg.experiment)}};
  if (cfg.domain) j["domain"] = cfg.domain_spec.is_null() ? serialize_domain(*cfg.domain)
                                                          : cfg.domain_spec;
  if (cfg.weight)
    j["weight"] = cfg.weight_spec.is_null() ? serialize_weight(*cfg.weight) : cfg.weight_spec;
  if (!cfg.weights_spec.is_null()) {
    j["weights"] = cfg.weights_spec;
  } else if (!cfg.weighted_terms.empty()) {
    json arr = json::array();
    for (const auto& [alpha, w] : cfg.weighted_terms)
      arr.push_back(json{{"alpha", alpha}, {"weight", serialize_weight(w)}});
    j["weights"] = arr;
  } else if (!cfg.factors.empty()) {
    json arr = json::array();
    for (const Weight& w : cfg.factors) arr.push_back(serialize_weight(w));
    j["weights"] = arr;
  }
  if (cfg.p) j["p"] = complex_json(*cfg.p);
  if (!cfg.deltas.empty()) j["deltas"] = cfg.deltas;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["d"] = cfg.d;
  if (cfg.numeric_numerator) j["numeric_numerator"] = true;
  if (!cfg.p_js.empty()) j["p_js"] = cfg.p_js;
  if (!cfg.js.empty()) j["js"] = cfg.js;
  if (cfg.experiment == ExperimentKind::Ramadanov) {
    j["nu_infinity"] = cfg.nu_infinity;
    j["perturbation_scale"] = cfg.perturbation_scale;
  }
  if (!cfg.probes.empty()) {
    json arr = json::array();
    for (const auto& [z, w] : cfg.probes)
      arr.push_back(json::array({complex_json(z), complex_json(w)}));
    j["probes"] = arr;
  }
  if (cfg.grid_rect)
    j["grid"] = json{{"x0", cfg.grid_rect->x0}, {"y0", cfg.grid_rect->y0},
                     {"x1", cfg.grid_rect->x1}, {"y1", cfg.grid_rect->y1},
                     {"nx", cfg.grid_nx},       {"ny", cfg.grid_ny}};
  if (cfg.lens)
    j["lens"] = json{{"center", complex_json(cfg.lens->center)}, {"radius", cfg.lens->radius}};
  if (cfg.kernel) j["kernel"] = cfg.kernel_spec;
  if (cfg.z) j["z"] = complex_json(*cfg.z);
  if (cfg.w) j["w"] = complex_json(*cfg.w);
  if (cfg.expected) j["expected"] = *cfg.expected;
  j["numeric"] = serialize_numeric(cfg.numeric);
  if (cfg.tolerance) j["tolerance"] = *cfg.tolerance;
  if (cfg.identity_tolerance) j["identity_tolerance"] = *cfg.identity_tolerance;
  if (cfg.lower_bound) j["lower_bound"] = *cfg.lower_bound;
  if (cfg.upper_bound) j["upper_bound"] = *cfg.upper_bound;
  json out{{"format", cfg.output.format}};
  if (cfg.output.path) out["path"] = *cfg.output.path;
  j["output"] = out;
  return j;
}

}  // namespace bergman::cli
