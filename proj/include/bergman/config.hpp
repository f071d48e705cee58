#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergman/experiments.hpp"
#include "bergman/geometry.hpp"
#include "bergman/kernels_closed.hpp"
#include "bergman/weights.hpp"

namespace bergman::cli {

using nlohmann::json;

/// Raised for any malformed or incomplete configuration; the message names
/// the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  Thm11,
  DeltaPower,
  Cor12Sum,
  Cor12Product,
  DPower,
  Scaling,
  Riemann,
  Ramadanov,
  Localization,
  KernelEval,
};

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);

struct OutputSpec {
  std::string format = "json";  ///< "json" or "csv"
  std::optional<std::string> path;
};

struct ExperimentConfig {
  int schema = 1;
  ExperimentKind experiment = ExperimentKind::KernelEval;

  std::optional<Domain> domain;
  json domain_spec;  // grammar echo so serialization is lossless
  std::optional<Weight> weight;
  json weight_spec;
  std::vector<std::pair<double, Weight>> weighted_terms;  // cor12-sum
  std::vector<Weight> factors;                            // cor12-product
  json weights_spec;
  std::optional<Complex> p;
  std::vector<double> deltas;
  int alpha = 0;
  int beta = 0;
  int d = 0;
  bool numeric_numerator = false;
  std::vector<double> p_js;
  std::vector<int> js;
  double nu_infinity = 2.0;
  double perturbation_scale = 1.0;
  std::vector<std::pair<Complex, Complex>> probes;
  std::optional<Rect> grid_rect;
  int grid_nx = 0;
  int grid_ny = 0;
  std::optional<Disc> lens;
  std::optional<ClosedKernel> kernel;
  json kernel_spec;  // echo of the kernel grammar for round-trips
  std::optional<Complex> z;
  std::optional<Complex> w;
  std::optional<double> expected;

  NumericParams numeric;
  std::optional<double> tolerance;
  std::optional<double> identity_tolerance;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  OutputSpec output;
};

Domain parse_domain(const json& j);
Weight parse_weight(const json& j);
MapVariant parse_map(const json& j);
ClosedKernel parse_kernel(const json& j);

json serialize_domain(const Domain& dom);
json serialize_weight(const Weight& w);
json serialize_map(const MapVariant& m);

ExperimentConfig parse_config(const json& j);
/// Normalized form; parse_config(serialize_config(c)) reproduces c.
json serialize_config(const ExperimentConfig& cfg);

}  // namespace bergman::cli
