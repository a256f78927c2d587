#include "bsl/report.hpp"

#include "bsl/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bsl {

namespace {

void write_string(std::ostringstream& os, const std::string& s) {
  // Reuse the library's escaping for strings.
  os << nlohmann::ordered_json(s).dump();
}

void write(std::ostringstream& os, const nlohmann::ordered_json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string pad_end = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << pad_end << "}";
      return;
    }
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[" << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << "," << nl;
        first = false;
        os << pad;
        write(os, v, indent, depth + 1);
      }
      os << nl << pad_end << "]";
      return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        os << format_double(v);
      else
        os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  os << "\n";
  return os.str();
}

nlohmann::ordered_json EstimateReport::json() const {
  nlohmann::ordered_json j;
  j["name"] = name;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.params) p[k] = v;
    arr.push_back({{"params", p}, {"value", s.value}});
  }
  j["samples"] = arr;
  j["fitted_exponent"] = fitted_exponent ? nlohmann::ordered_json(*fitted_exponent) : nlohmann::ordered_json();
  j["bound_constant"] = bound_constant ? nlohmann::ordered_json(*bound_constant) : nlohmann::ordered_json();
  j["passed"] = passed;
  j["tolerance"] = tolerance;
  return j;
}

std::string EstimateReport::to_json() const { return dump_json(json()); }

std::string EstimateReport::to_csv() const {
  std::vector<std::string> cols;
  for (const auto& s : samples)
    for (const auto& [k, v] : s.params)
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  std::ostringstream os;
  os << "name";
  for (const auto& c : cols) os << "," << c;
  os << ",value\n";
  for (const auto& s : samples) {
    os << name;
    for (const auto& c : cols) {
      os << ",";
      for (const auto& [k, v] : s.params)
        if (k == c) {
          os << format_double(v);
          break;
        }
    }
    os << "," << format_double(s.value) << "\n";
  }
  return os.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope fit needs at least two paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bsl
