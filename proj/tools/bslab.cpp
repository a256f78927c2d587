// bslab: command-line driver for the backscattering lab.
//
//   bslab <command> --config <file> --out <dir> [--seed N] [--threads N] [--set section.key=value]...
//
// Exit status: 0 success, 1 a verification report failed, 2 input error,
// 3 numerical non-convergence.

#include "bsl/estimate_lab.hpp"
#include "bsl/forward_solver.hpp"
#include "bsl/potentials.hpp"
#include "bsl/report.hpp"
#include "bsl/sphere.hpp"
#include "bsl/transforms.hpp"
#include "bsl/uniqueness_probe.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace bsl;

namespace {

enum Exit { kOk = 0, kVerification = 1, kInput = 2, kNumerical = 3 };

struct RunConfig {
  std::string command;
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = 0;
  std::vector<std::string> overrides;
};

class InputError : public Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Appends `key = value` to the end of the first `[section]` (the leading
// unnamed section for a bare key). Later assignments win, so the override
// shadows the file's value.
std::string apply_overrides(std::string text, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw InputError("override '" + o + "' is not of the form section.key=value");
    const std::string lhs = o.substr(0, eq), value = o.substr(eq + 1);
    const auto dot = lhs.rfind('.');
    const std::string section = dot == std::string::npos ? "" : lhs.substr(0, dot);
    const std::string key = dot == std::string::npos ? lhs : lhs.substr(dot + 1);
    const std::string line = key + " = " + value + "\n";
    const std::string header = "[" + section + "]";
    if (!text.empty() && text.back() != '\n') text += '\n';
    // Offset of each line start; find the section, then the next header after it.
    std::size_t pos = 0, insert = std::string::npos;
    bool inside = section.empty();
    while (pos < text.size()) {
      const std::size_t eol = text.find('\n', pos);
      const std::size_t next = eol == std::string::npos ? text.size() : eol + 1;
      const std::string l = text.substr(pos, next - pos);
      const auto first = l.find_first_not_of(" \t");
      const bool is_header = first != std::string::npos && l[first] == '[';
      if (inside && is_header) {
        insert = pos;
        break;
      }
      if (!inside && is_header && l.compare(first, header.size(), header) == 0) inside = true;
      pos = next;
    }
    if (insert != std::string::npos)
      text.insert(insert, line);
    else if (inside)
      text += line;
    else
      text += header + "\n" + line;
  }
  return text;
}

kv::Document load_config(const RunConfig& rc) {
  if (rc.config.empty()) throw InputError("--config is required for '" + rc.command + "'");
  return kv::Document::parse(apply_overrides(read_file(rc.config), rc.overrides));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

const kv::Section& section_or_empty(const kv::Document& doc, std::string_view name) {
  static const kv::Section empty;
  const kv::Section* s = doc.first(name);
  return s ? *s : empty;
}

SolveMethod parse_method(const kv::Section& s) {
  const std::string m = s.get_string("method", "auto");
  if (m == "auto") return SolveMethod::Auto;
  if (m == "neumann") return SolveMethod::NeumannSeries;
  if (m == "krylov") return SolveMethod::KrylovIteration;
  const kv::Entry* e = s.find("method");
  throw ParseError("unknown solver method '" + m + "'", e->line, e->value_column);
}

SolverOptions parse_solver(const kv::Section& s) {
  SolverOptions o;
  o.tol = s.get_double("tol", o.tol);
  o.max_iterations = s.get_int("max_iterations", o.max_iterations);
  o.restart = s.get_int("restart", o.restart);
  o.neumann_threshold = s.get_double("neumann_threshold", o.neumann_threshold);
  return o;
}

nlohmann::ordered_json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
nlohmann::ordered_json cplx_json(Complex z) { return {z.real(), z.imag()}; }

std::vector<Vec3> directions(const kv::Section& s, const std::string& key, int default_count) {
  if (s.has(key)) return {s.get_vec3(key).normalized()};
  return fibonacci_sphere(s.get_int(key + "_count", default_count));
}

// ------------------------------------------------------------------ commands

int cmd_forward(const RunConfig& rc, const kv::Document& doc, const fs::path& out) {
  const PotentialSpec q = parse_spec(doc, "potential");
  const auto& s = section_or_empty(doc, "forward");
  const int n = s.get_int("n", 24);
  const double a = s.get_double("a", q.support_radius());
  const double k = s.get_double("k", 1.0);
  const Vec3 alpha = s.get_vec3("alpha", Vec3::UnitZ()).normalized();
  const auto observe = directions(s, "observe", 8);
  const PotentialGrid g = sample_grid(q, n, a);
  const VolumeOperator op(g, ComplexFrequency::from_wavenumber(k));
  const ScatteringField u = solve_scattering(op, alpha, parse_method(s), parse_solver(s));

  AmplitudeTable table;
  for (const auto& b : observe) table.entries.push_back(amplitude(g, u, b));
  std::ostringstream csv;
  table.write_csv(csv);
  write_text(out / "amplitudes.csv", csv.str());

  nlohmann::ordered_json j;
  j["command"] = "forward";
  j["spec_hash"] = spec_hash(q);
  j["n"] = n;
  j["a"] = a;
  j["k"] = k;
  j["alpha"] = vec_json(alpha);
  j["active_cells"] = op.active().size();
  j["iterations"] = u.iterations;
  j["residual"] = u.residual;
  j["spectral_radius_proxy"] = spectral_radius_proxy(op);
  nlohmann::ordered_json amps = nlohmann::ordered_json::array();
  for (const auto& e : table.entries) amps.push_back({{"beta", vec_json(e.beta)}, {"A", cplx_json(e.value)}});
  j["amplitudes"] = amps;
  (void)rc;
  write_text(out / "forward.json", dump_json(j) + "\n");
  return kOk;
}

int cmd_backscatter(const RunConfig&, const kv::Document& doc, const fs::path& out) {
  const PotentialSpec q = parse_spec(doc, "potential");
  const auto& s = section_or_empty(doc, "backscatter");
  const int n = s.get_int("n", 24);
  const double a = s.get_double("a", q.support_radius());
  const auto betas = directions(s, "beta", 8);
  std::vector<ComplexFrequency> ks;
  for (double k : s.get_list("k_list", {0.5, 1.0, 2.0})) ks.push_back(ComplexFrequency::from_wavenumber(k));
  SweepOptions so;
  so.solver = parse_solver(s);
  so.method = parse_method(s);
  so.cache_dir = s.get_string("cache", "on") == "off" ? fs::path() : default_cache_dir();
  const PotentialGrid g = sample_grid(q, n, a);
  const AmplitudeTable table = backscatter_sweep(g, betas, ks, so);
  std::ostringstream csv;
  table.write_csv(csv);
  write_text(out / "backscatter.csv", csv.str());
  nlohmann::ordered_json j;
  j["command"] = "backscatter";
  j["spec_hash"] = spec_hash(q);
  j["n"] = n;
  j["a"] = a;
  j["entries"] = table.entries.size();
  j["partial"] = table.partial();
  j["failures"] = table.failures;
  write_text(out / "backscatter.json", dump_json(j) + "\n");
  for (const auto& f : table.failures) std::cerr << "bslab: " << f << "\n";
  return table.partial() ? kNumerical : kOk;
}

int cmd_radon(const RunConfig& rc, const kv::Document& doc, const fs::path& out) {
  const PotentialSpec q = parse_spec(doc, "potential");
  const auto& s = section_or_empty(doc, "radon");
  const auto betas = directions(s, "beta", 6);
  const int count = s.get_int("count", 101);
  std::vector<RadonProfile> profiles;
  for (const auto& b : betas) profiles.push_back(radon_profile(q, b, count));
  std::ostringstream csv;
  write_radon_csv(csv, profiles);
  write_text(out / "radon.csv", csv.str());

  std::mt19937_64 rng(rc.seed);
  std::vector<Vec3> check;
  for (int i = 0; i < s.get_int("check_count", 8); ++i) check.push_back(random_unit_vector(rng));
  const EstimateReport rep = radon_moment_identity(q, check, s.get_double("tol", 1e-6));
  write_text(out / "radon_moment_identity.json", rep.to_json() + "\n");
  write_text(out / "radon_moment_identity.csv", rep.to_csv());
  return rep.passed ? kOk : kVerification;
}

// Each estimate of the suite becomes one EstimateReport.
std::vector<EstimateReport> estimate_suite(const RunConfig& rc, const kv::Document& doc) {
  const PotentialSpec q = doc.first("potential") ? parse_spec(doc, "potential") : PotentialSpec::poly_bump(4, 1.0, 1.0);
  require_admissible(q, "estimates");
  const auto& s = section_or_empty(doc, "estimates");
  const double a = q.support_radius();
  const double ell = q.smoothness();
  std::mt19937_64 rng(rc.seed);
  std::vector<EstimateReport> reports;

  {  // Radon moments.
    std::vector<Vec3> betas;
    for (int i = 0; i < s.get_int("radon_directions", 8); ++i) betas.push_back(random_unit_vector(rng));
    reports.push_back(radon_moment_identity(q, betas, s.get_double("radon_tol", 1e-6)));
  }
  {  // Decay of the analytic continuation.
    std::vector<std::pair<double, double>> sweep;
    const auto kap = s.get_list("decay_kappa", {5.0, 20.0, 80.0});
    const auto eta = s.get_list("decay_eta", {0.0, 2.0, 8.0});
    for (double k : kap)
      for (double e : eta) sweep.emplace_back(k, e);
    reports.push_back(decay_bound_check(q, sweep));
  }
  {  // B(r) against its closed-form bound.
    EstimateReport r;
    r.name = "b_bound";
    r.tolerance = 0.0;
    r.passed = true;
    std::uniform_real_distribution<double> uk(1.0, 100.0), ue(0.1, 10.0), ur(0.0, 3.0);
    for (int i = 0; i < s.get_int("b_points", 100); ++i) {
      const double kappa = uk(rng), eta = ue(rng), r0 = ur(rng) * kappa;
      const BResult b = b_integral(r0, ComplexFrequency(kappa, eta), ell);
      const double excess = b.numeric - b.bound;
      r.add({{"r", r0}, {"kappa", kappa}, {"eta", eta}, {"numeric", b.numeric}, {"bound", b.bound}}, excess);
      if (!(excess <= 1e-12 * b.bound)) r.passed = false;
    }
    reports.push_back(r);
  }
  {  // J·√γ over octaves of κ along η = ln κ.
    EstimateReport r;
    r.name = "j_decay";
    r.passed = true;
    double prev = std::numeric_limits<double>::infinity();
    for (double k : s.get_list("j_kappa", {10.0, 20.0, 40.0, 80.0})) {
      const ComplexFrequency f(k, std::log(k));
      const double v = j_integral(f, ell) * std::sqrt(f.gamma());
      r.add({{"kappa", k}, {"eta", f.eta()}}, v);
      if (!(v <= prev)) r.passed = false;
      prev = v;
    }
    reports.push_back(r);
  }
  {  // Leading correction term I along η = ln κ.
    EstimateReport r;
    r.name = "i_leading";
    r.passed = true;
    double prev = std::numeric_limits<double>::infinity();
    for (double k : s.get_list("i_kappa", {20.0, 60.0, 180.0})) {
      const double v = i_leading(q, ComplexFrequency(k, std::log(k)));
      r.add({{"kappa", k}, {"eta", std::log(k)}}, v);
      if (!(v < prev)) r.passed = false;
      prev = v;
    }
    reports.push_back(r);
  }
  {  // ‖T²‖ against γ.
    EstimateReport r;
    r.name = "t2_decay";
    T2Options o;
    o.quad_n = s.get_int("t2_quad_n", 10);
    o.seed = rc.seed;
    std::vector<ComplexFrequency> fs;
    for (double g : s.get_list("t2_gamma", {1e2, 1e4, 1e6})) fs.emplace_back(std::sqrt(g), 0.0);
    const auto est = t2_norm_sweep(q, fs, s.get_int("t2_probes", 5), o);
    std::vector<double> gx, vy;
    for (const auto& e : est) {
      r.add({{"gamma", e.gamma}, {"lower_bound", e.lower_bound}}, e.value);
      gx.push_back(e.gamma);
      vy.push_back(e.value);
    }
    r.fitted_exponent = loglog_slope(gx, vy);
    r.tolerance = 0.15;
    r.passed = std::abs(*r.fitted_exponent + 0.5) <= r.tolerance;
    reports.push_back(r);
  }
  {  // Two-focus integral halving as |κ + iη| doubles.
    EstimateReport r;
    r.name = "appendix_decay";
    r.tolerance = 0.3;
    r.passed = true;
    const double base = s.get_double("appendix_zeta", 50.0);
    for (int i = 0; i < s.get_int("appendix_pairs", 3); ++i) {
      const Vec3 x = random_point_in_ball(rng, 0.8 * a), y = random_point_in_ball(rng, 0.8 * a);
      const double v1 = std::abs(appendix_i1(q, x, y, ComplexFrequency(base, 0.0)));
      const double v2 = std::abs(appendix_i1(q, x, y, ComplexFrequency(2.0 * base, 0.0)));
      const double ratio = v2 / v1;
      r.add({{"pair", static_cast<double>(i)}, {"zeta", base}}, ratio);
      if (!(std::abs(ratio - 0.5) <= r.tolerance * 0.5)) r.passed = false;
    }
    reports.push_back(r);
  }
  {  // Level-set frequency growth.
    EstimateReport r;
    r.name = "level_set_growth";
    r.tolerance = 3.0;
    const double P = peak(q).value;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double k : s.get_list("level_kappa", {30.0, 100.0, 300.0, 1000.0})) {
      const LevelSetResult ls = find_eta(q, k, P);
      const double ratio = ls.eta_star / std::log(k);
      r.add({{"kappa", k}, {"eta_star", ls.eta_star}, {"sup_value", ls.sup_value}}, ratio);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    r.bound_constant = hi / lo;
    r.passed = lo > 0.0 && hi / lo < r.tolerance;
    reports.push_back(r);
  }
  return reports;
}

int cmd_estimates(const RunConfig& rc, const kv::Document& doc, const fs::path& out) {
  const auto reports = estimate_suite(rc, doc);
  nlohmann::ordered_json manifest;
  manifest["command"] = "estimates";
  manifest["seed"] = rc.seed;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  bool ok = true;
  for (const auto& r : reports) {
    write_text(out / (r.name + ".json"), r.to_json() + "\n");
    write_text(out / (r.name + ".csv"), r.to_csv());
    list.push_back({{"name", r.name}, {"passed", r.passed}});
    if (!r.passed) {
      ok = false;
      std::cerr << "bslab: estimate '" << r.name << "' failed\n";
    }
  }
  manifest["reports"] = list;
  write_text(out / "estimates.json", dump_json(manifest) + "\n");
  return ok ? kOk : kVerification;
}

int cmd_probe(const RunConfig&, const kv::Document& doc, const fs::path& out) {
  const ProbeScenario sc = parse_scenario(doc);
  const ProbeVerdict v = run_probe(sc);
  write_text(out / "verdict.json", v.to_json() + "\n");
  std::ostringstream csv;
  v.write_level_set_csv(csv);
  write_text(out / "level_set.csv", csv.str());
  std::cout << to_string(v.conclusion) << "\n";
  return v.lemma_holds(sc.tolerances.lemma_rel) ? kOk : kVerification;
}

int cmd_cache_clear(const RunConfig&) {
  const fs::path dir = default_cache_dir();
  std::size_t removed = 0;
  if (fs::exists(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      const std::string name = e.path().filename().string();
      if (e.is_regular_file() && name.rfind("field_", 0) == 0 && e.path().extension() == ".bin") {
        fs::remove(e.path());
        ++removed;
      }
    }
  }
  std::cout << "removed " << removed << " cached field(s) from " << dir.string() << "\n";
  return kOk;
}

int run(const RunConfig& rc) {
  try {
#ifdef _OPENMP
    if (rc.threads > 0) omp_set_num_threads(rc.threads);
#endif
    if (rc.command == "cache-clear") return cmd_cache_clear(rc);
    const kv::Document doc = load_config(rc);
    const fs::path out(rc.out);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw InputError("output directory '" + rc.out + "' is not writable");
    if (rc.command == "forward") return cmd_forward(rc, doc, out);
    if (rc.command == "backscatter") return cmd_backscatter(rc, doc, out);
    if (rc.command == "radon") return cmd_radon(rc, doc, out);
    if (rc.command == "estimates") return cmd_estimates(rc, doc, out);
    if (rc.command == "probe") return cmd_probe(rc, doc, out);
    throw InputError("unknown command '" + rc.command + "'");
  } catch (const ParseError& e) {
    std::cerr << "bslab: error: " << (rc.config.empty() ? "" : rc.config + ":") << e.what() << "\n";
    return kInput;
  } catch (const NotConverged& e) {
    std::cerr << "bslab: error: " << e.what() << " after " << e.iterations() << " iterations (residual "
              << e.residual() << ")\n";
    return kNumerical;
  } catch (const QuadratureNotConverged& e) {
    std::cerr << "bslab: error: " << e.what() << "\n";
    return kNumerical;
  } catch (const RangeError& e) {
    std::cerr << "bslab: error: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "bslab: error: " << e.what() << "\n";
    return kInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "bslab: error: " << e.what() << "\n";
    return kInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backscattering lab: forward solves, transforms, estimates and uniqueness probes"};
  app.require_subcommand(1);
  RunConfig rc;
  for (const char* name : {"forward", "backscatter", "radon", "estimates", "probe", "cache-clear"}) {
    CLI::App* sub = app.add_subcommand(name);
    if (std::string(name) != "cache-clear") {
      sub->add_option("--config", rc.config, "structured-text configuration")->required();
      sub->add_option("--out", rc.out, "output directory");
      sub->add_option("--seed", rc.seed, "seed for randomized choices");
      sub->add_option("--threads", rc.threads, "worker threads (default: all cores)");
      sub->add_option("--set", rc.overrides, "override section.key=value");
    }
    sub->callback([&rc, sub] { rc.command = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  return run(rc);
}
