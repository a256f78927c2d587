#pragma once

#include "json.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bsl {

/// One measurement: named parameters and the measured value.
struct Sample {
  std::vector<std::pair<std::string, double>> params;
  double value = 0.0;
};

/// Record of a numerically verified bound or identity.
struct EstimateReport {
  std::string name;
  std::vector<Sample> samples;
  std::optional<double> fitted_exponent;
  std::optional<double> bound_constant;
  bool passed = false;
  double tolerance = 0.0;

  void add(std::vector<std::pair<std::string, double>> params, double value) {
    samples.push_back({std::move(params), value});
  }

  /// {name, samples:[{params, value}], fitted_exponent, bound_constant, passed, tolerance}
  nlohmann::ordered_json json() const;
  std::string to_json() const;
  /// One row per sample: name, then every parameter column, then value.
  std::string to_csv() const;
};

/// Serialises `j` with every floating-point number printed to 17 significant
/// digits and object keys in insertion order; non-finite numbers become null.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bsl
