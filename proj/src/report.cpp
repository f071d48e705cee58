#include "bergman/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

namespace bergman::cli {

namespace {

json ratio_report_json(const RatioReport& rep) {
  json j{{"kind", "ratio_report"},
         {"deltas", rep.deltas},
         {"numerators", rep.numerators},
         {"denominators", rep.denominators},
         {"ratios", rep.ratios},
         {"target", rep.target},
         {"final_relative_error", rep.final_relative_error},
         {"trend_monotone", rep.trend_monotone},
         {"fitted_limit", rep.fitted_limit}};
  if (!rep.statement_ratios.empty()) j["statement_ratios"] = rep.statement_ratios;
  return j;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

NumericParams params_with_threads(const ExperimentConfig& cfg, int threads) {
  NumericParams np = cfg.numeric;
  np.threads = std::max(1, threads);
  return np;
}

bool ratio_pass(const RatioReport& rep, double tolerance) {
  return std::isfinite(rep.fitted_limit) && std::abs(rep.fitted_limit - rep.target) <= tolerance;
}

}  // namespace

json ReportEnvelope::to_json() const {
  return json{{"schema", kSchemaVersion}, {"version", kArtifactVersion},
              {"experiment", experiment}, {"config", config_echo},
              {"runtime_seconds", runtime_seconds}, {"pass", pass},
              {"payload", payload}};
}

ReportEnvelope run_experiment(const ExperimentConfig& cfg, int threads) {
  ReportEnvelope env;
  env.experiment = kind_name(cfg.experiment);
  env.config_echo = serialize_config(cfg);
  const NumericParams np = params_with_threads(cfg, threads);
  const auto t0 = std::chrono::steady_clock::now();

  switch (cfg.experiment) {
    case ExperimentKind::Thm11: {
      const RatioReport rep =
          thm11_ratio(*cfg.domain, *cfg.weight, *cfg.p, cfg.deltas, cfg.alpha, cfg.beta, np);
      env.payload = ratio_report_json(rep);
      env.pass = ratio_pass(rep, *cfg.tolerance);
      break;
    }
    case ExperimentKind::DeltaPower: {
      const DeltaPowerReport rep =
          delta_power_bound(*cfg.domain, *cfg.weight, *cfg.p, cfg.deltas, cfg.alpha, cfg.beta, np);
      env.payload = json{{"kind", "delta_power"},
                         {"deltas", rep.deltas},
                         {"products", rep.products},
                         {"lower", rep.lower},
                         {"upper", rep.upper},
                         {"all_positive", rep.all_positive}};
      env.pass = rep.all_positive && rep.lower >= *cfg.lower_bound &&
                 rep.upper <= *cfg.upper_bound;
      break;
    }
    case ExperimentKind::Cor12Sum: {
      const RatioReport rep = cor12_sum(*cfg.domain, cfg.weighted_terms, *cfg.p, cfg.deltas, np);
      env.payload = ratio_report_json(rep);
      std::vector<double> alphas, bvs;
      for (const auto& [alpha, w] : cfg.weighted_terms) {
        alphas.push_back(alpha);
        bvs.push_back(*boundary_value(w, *cfg.p));
      }
      env.payload["lambda"] = corollary_lambda(alphas, bvs);
      env.pass = ratio_pass(rep, *cfg.tolerance);
      break;
    }
    case ExperimentKind::Cor12Product: {
      const RatioReport rep = cor12_product(*cfg.domain, cfg.factors, *cfg.p, cfg.deltas, np);
      env.payload = ratio_report_json(rep);
      env.pass = ratio_pass(rep, *cfg.tolerance);
      break;
    }
    case ExperimentKind::DPower: {
      const RatioReport rep =
          dpower_asymptotic(*cfg.domain, cfg.d, *cfg.p, cfg.deltas, np, cfg.numeric_numerator);
      env.payload = ratio_report_json(rep);
      env.pass = ratio_pass(rep, *cfg.tolerance);
      break;
    }
    case ExperimentKind::Scaling: {
      const ScalingReport rep = scaling_experiment(cfg.p_js, *cfg.weight, np);
      env.payload = json{{"kind", "scaling"},
                         {"p_js", rep.p_js},
                         {"epsilons", rep.epsilons},
                         {"degrees", rep.degrees},
                         {"kernel_values", rep.kernel_values},
                         {"numeric_identity_residuals", rep.numeric_identity_residuals},
                         {"target", rep.target},
                         {"final_relative_error", rep.final_relative_error}};
      if (!rep.closed_identity_residuals.empty()) {
        env.payload["closed_identity_residuals"] = rep.closed_identity_residuals;
        env.payload["closed_values"] = rep.closed_values;
      }
      const double id_tol = cfg.identity_tolerance.value_or(1e-9);
      bool ids_ok = true;
      for (double r : rep.numeric_identity_residuals) ids_ok = ids_ok && r <= id_tol;
      for (double r : rep.closed_identity_residuals) ids_ok = ids_ok && r <= id_tol;
      env.pass = ids_ok && rep.final_relative_error <= *cfg.tolerance;
      break;
    }
    case ExperimentKind::Riemann: {
      const std::vector<Complex> grid = rectangle_grid(*cfg.grid_rect, cfg.grid_nx, cfg.grid_ny);
      std::vector<Complex> inside;
      for (Complex zz : grid)
        if (zz.real() < 0.5 - 1e-6) inside.push_back(zz);
      const std::vector<double> sups = riemann_convergence(cfg.p_js, inside);
      env.payload = json{{"kind", "riemann"}, {"p_js", cfg.p_js}, {"sup_deviations", sups}};
      bool decreasing = true;
      for (std::size_t i = 1; i < sups.size(); ++i)
        decreasing = decreasing && sups[i] < sups[i - 1];
      env.pass = decreasing && sups.back() <= *cfg.tolerance;
      break;
    }
    case ExperimentKind::Ramadanov: {
      const RamadanovReport rep =
          ramadanov_experiment(cfg.js, cfg.nu_infinity, cfg.perturbation_scale, cfg.probes, np);
      json values = json::array();
      json deviations = json::array();
      for (std::size_t i = 0; i < rep.values.size(); ++i) {
        json row = json::array();
        for (Complex v : rep.values[i]) row.push_back(complex_json(v));
        values.push_back(row);
        deviations.push_back(rep.deviations[i]);
      }
      json limits = json::array();
      for (Complex v : rep.limit_values) limits.push_back(complex_json(v));
      env.payload = json{{"kind", "ramadanov"}, {"js", rep.js},
                         {"values", values},     {"deviations", deviations},
                         {"limit_values", limits}};
      // Pass: deviation at the first probe decreases and ends within the
      // relative tolerance of the limit value.
      bool decreasing = true;
      for (std::size_t i = 1; i < rep.deviations.size(); ++i)
        decreasing = decreasing && rep.deviations[i][0] < rep.deviations[i - 1][0];
      const double rel =
          rep.deviations.back()[0] / std::abs(rep.limit_values[0]);
      env.pass = decreasing && rel <= *cfg.tolerance;
      break;
    }
    case ExperimentKind::Localization: {
      const RatioReport rep =
          localization_experiment(*cfg.domain, *cfg.lens, *cfg.weight, *cfg.p, cfg.deltas, np);
      env.payload = ratio_report_json(rep);
      bool monotone_dir = true;
      for (double r : rep.ratios) monotone_dir = monotone_dir && r <= 1.0 + 1e-8;
      env.payload["ratios_below_one"] = monotone_dir;
      env.pass = monotone_dir && ratio_pass(rep, *cfg.tolerance);
      break;
    }
    case ExperimentKind::KernelEval: {
      const Complex value = cfg.kernel->eval(*cfg.z, *cfg.w);
      env.payload = json{{"kind", "kernel_eval"},
                         {"z", complex_json(*cfg.z)},
                         {"w", complex_json(*cfg.w)},
                         {"value", complex_json(value)}};
      if (cfg.expected) {
        env.payload["expected"] = *cfg.expected;
        env.pass = std::abs(value - Complex{*cfg.expected, 0.0}) <= *cfg.tolerance;
      } else {
        env.pass = std::isfinite(value.real()) && std::isfinite(value.imag());
      }
      break;
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  env.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
  return env;
}

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void table_rows(const json& payload, std::string& out) {
  const std::string kind = payload.value("kind", "");
  if (kind == "ratio_report" || kind == "delta_power") {
    const auto& deltas = payload.at("deltas");
    if (deltas.empty()) throw std::invalid_argument("emit_plot_table: empty payload");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      double num, den, ratio, target;
      if (kind == "ratio_report") {
        num = payload.at("numerators")[i].get<double>();
        den = payload.at("denominators")[i].get<double>();
        ratio = payload.at("ratios")[i].get<double>();
        target = payload.at("target").get<double>();
      } else {
        num = payload.at("products")[i].get<double>();
        den = 1.0;
        ratio = num;
        target = 0.0;
      }
      out += fmt12(deltas[i].get<double>()) + "," + fmt12(num) + "," + fmt12(den) + "," +
             fmt12(ratio) + "," + fmt12(target) + "\n";
    }
  } else if (kind == "riemann") {
    const auto& pjs = payload.at("p_js");
    if (pjs.empty()) throw std::invalid_argument("emit_plot_table: empty payload");
    for (std::size_t i = 0; i < pjs.size(); ++i) {
      const double sup = payload.at("sup_deviations")[i].get<double>();
      out += fmt12(pjs[i].get<double>()) + "," + fmt12(sup) + ",1," + fmt12(sup) + ",0\n";
    }
  } else if (kind == "ramadanov") {
    const auto& js = payload.at("js");
    if (js.empty()) throw std::invalid_argument("emit_plot_table: empty payload");
    const double target = payload.at("limit_values")[0][0].get<double>();
    for (std::size_t i = 0; i < js.size(); ++i) {
      const double v = payload.at("values")[i][0][0].get<double>();
      out += fmt12(js[i].get<double>()) + "," + fmt12(v) + "," + fmt12(target) + "," +
             fmt12(v / target) + ",1\n";
    }
  } else if (kind == "scaling") {
    const auto& eps = payload.at("epsilons");
    if (eps.empty()) throw std::invalid_argument("emit_plot_table: empty payload");
    const double target = payload.at("target").get<double>();
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double v = payload.at("kernel_values")[i].get<double>();
      out += fmt12(eps[i].get<double>()) + "," + fmt12(v) + "," + fmt12(target) + "," +
             fmt12(v / target) + ",1\n";
    }
  } else if (kind == "kernel_eval") {
    const double re = payload.at("value")[0].get<double>();
    const double target = payload.contains("expected")
                              ? payload.at("expected").get<double>()
                              : std::numeric_limits<double>::quiet_NaN();
    out += "0," + fmt12(re) + ",1," + fmt12(re) + "," + fmt12(target) + "\n";
  } else {
    throw std::invalid_argument("emit_plot_table: payload is not a tabular report");
  }
}

}  // namespace

std::string emit_plot_table(const json& payload) {
  std::string out = "delta,numerator,denominator,ratio,target\n";
  table_rows(payload, out);
  return out;
}

int run(const std::string& config_path, const std::string& out_override,
        const std::string& format_override, int threads) {
  json parsed;
  ExperimentConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file '" << config_path << "'\n";
      return 2;
    }
    in >> parsed;
    cfg = parse_config(parsed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (!format_override.empty()) {
    if (format_override != "json" && format_override != "csv") {
      std::cerr << "error: config error: field 'output.format': expected 'json' or 'csv'\n";
      return 2;
    }
    cfg.output.format = format_override;
  }
  if (!out_override.empty()) cfg.output.path = out_override;

  ReportEnvelope env;
  try {
    env = run_experiment(cfg, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::string body;
  if (cfg.output.format == "csv")
    body = emit_plot_table(env.payload);
  else
    body = env.to_json().dump(2) + "\n";

  if (cfg.output.path) {
    std::ofstream out(*cfg.output.path);
    if (!out) {
      std::cerr << "error: cannot write report to '" << *cfg.output.path << "'\n";
      return 2;
    }
    out << body;
  } else {
    std::cout << body;
  }
  std::cout << (env.pass ? "PASS" : "FAIL") << " " << env.experiment << " ("
            << fmt12(env.runtime_seconds) << " s)\n";
  return env.pass ? 0 : 1;
}

}  // namespace bergman::cli
