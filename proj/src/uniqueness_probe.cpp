#include "bsl/uniqueness_probe.hpp"

#include "bsl/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace bsl {

double ProbeScenario::box() const {
  return grid_a > 0.0 ? grid_a : std::max(q1.support_radius(), q2.support_radius());
}

std::vector<double> ProbeScenario::wavenumbers() const {
  if (!k_list.empty()) return k_list;
  const double a = box();
  std::vector<double> ks(12);
  for (int i = 0; i < 12; ++i) ks[static_cast<std::size_t>(i)] = 0.5 * std::pow(16.0, i / 11.0) / a;
  return ks;
}

ProbeScenario parse_scenario(const kv::Document& doc) {
  ProbeScenario sc;
  sc.q1 = parse_spec(doc, "q1");
  sc.q2 = parse_spec(doc, "q2");
  if (const kv::Section* s = doc.first("probe")) {
    sc.beta_count = s->get_int("beta_count", sc.beta_count);
    sc.k_list = s->get_list("k_list", {});
    sc.grid_n = s->get_int("grid_n", sc.grid_n);
    sc.grid_a = s->get_double("grid_a", sc.grid_a);
    sc.kappa_list = s->get_list("kappa_list", {});
    auto& t = sc.tolerances;
    t.solver.tol = s->get_double("tol_solve", t.solver.tol);
    t.solver.max_iterations = s->get_int("max_iterations", t.solver.max_iterations);
    t.solver.restart = s->get_int("restart", t.solver.restart);
    t.solver.neumann_threshold = s->get_double("neumann_threshold", t.solver.neumann_threshold);
    t.lemma_rel = s->get_double("lemma_tol", t.lemma_rel);
    sc.level_set.scan_step = s->get_double("eta_scan_step", sc.level_set.scan_step);
    sc.level_set.rel_tol = s->get_double("eta_rel_tol", sc.level_set.rel_tol);
    sc.level_set.sup.grid_nodes = s->get_int("sup_grid_nodes", sc.level_set.sup.grid_nodes);
    sc.i_leading.grid_nodes = s->get_int("i_grid_nodes", sc.i_leading.grid_nodes);
    sc.i_leading.rel_tol = s->get_double("i_rel_tol", sc.i_leading.rel_tol);
    const std::string method = s->get_string("method", "auto");
    if (method == "auto")
      sc.method = SolveMethod::Auto;
    else if (method == "neumann")
      sc.method = SolveMethod::NeumannSeries;
    else if (method == "krylov")
      sc.method = SolveMethod::KrylovIteration;
    else {
      const kv::Entry* e = s->find("method");
      throw ParseError("unknown solver method '" + method + "'", e->line, e->value_column);
    }
    if (sc.beta_count < 1) throw ParseError("beta_count must be positive", s->line(), 1);
  }
  return sc;
}

ProbeScenario load_scenario(const std::string& path) { return parse_scenario(kv::Document::load(path)); }

// ------------------------------------------------------------------ verdict

const char* to_string(ProbeConclusion c) {
  return c == ProbeConclusion::DataSeparate ? "DataSeparate" : "DataCoincideWithinTol";
}

double ProbeVerdict::max_residual() const {
  double m = 0.0;
  for (const auto& r : orthogonality_residuals) m = std::max(m, r.residual);
  return m;
}

bool ProbeVerdict::lemma_holds(double rel) const { return max_residual() < rel; }

nlohmann::ordered_json ProbeVerdict::json() const {
  using J = nlohmann::ordered_json;
  J j;
  j["conclusion"] = to_string(conclusion);
  j["max_data_gap"] = max_data_gap;
  j["solver_tol"] = solver_tol;
  j["max_orthogonality_residual"] = max_residual();
  J res = J::array();
  for (const auto& r : orthogonality_residuals) {
    res.push_back(J{{"beta", {r.beta.x(), r.beta.y(), r.beta.z()}},
                    {"k", r.k},
                    {"integral", {r.integral.real(), r.integral.imag()}},
                    {"data_side", {r.data_side.real(), r.data_side.imag()}},
                    {"residual", r.residual}});
  }
  j["orthogonality_residuals"] = res;
  J curve = J::array();
  for (const auto& p : level_set_curve) {
    curve.push_back(J{{"kappa", p.level.kappa},
                      {"eta_star", p.level.eta_star},
                      {"sup_value", p.level.sup_value},
                      {"target", p.level.target},
                      {"degenerate", p.level.degenerate},
                      {"i_q1", p.i_q1},
                      {"i_q2", p.i_q2},
                      {"nu_proxy", p.nu_proxy},
                      {"margin", p.margin},
                      {"correction_bound", p.correction_bound}});
  }
  j["level_set_curve"] = curve;
  return j;
}

std::string ProbeVerdict::to_json() const { return dump_json(json()); }

void ProbeVerdict::write_level_set_csv(std::ostream& os) const {
  os << "kappa,eta_star,sup_value,margin\n";
  for (const auto& p : level_set_curve)
    os << format_double(p.level.kappa) << "," << format_double(p.level.eta_star) << ","
       << format_double(p.level.sup_value) << "," << format_double(p.margin) << "\n";
}

// -------------------------------------------------------------------- probe

ProbeVerdict run_probe(const ProbeScenario& sc) {
  require_admissible(sc.q1, "run_probe (q1)");
  require_admissible(sc.q2, "run_probe (q2)");
  const double a = sc.box();
  return run_probe(sc, sample_grid(sc.q1, sc.grid_n, a), sample_grid(sc.q2, sc.grid_n, a));
}

ProbeVerdict run_probe(const ProbeScenario& sc, const PotentialGrid& g1, const PotentialGrid& g2) {
  if (!(g1.geometry() == g2.geometry()) || g1.n() != sc.grid_n || g1.a() != sc.box())
    throw InconsistentGrid("probe grids must share the scenario geometry (n = " + std::to_string(sc.grid_n) +
                           ", a = " + format_double(sc.box()) + ")");
  if (sc.beta_count < 1) throw InvalidArgument("run_probe needs beta_count >= 1");

  ProbeVerdict v;
  v.solver_tol = sc.tolerances.solver.tol;
  const auto betas = fibonacci_sphere(sc.beta_count);
  const GridGeometry& g = g1.geometry();
  const double cell = g.h() * g.h() * g.h();
  const Eigen::VectorXd p = g1.values() - g2.values();

  for (double k : sc.wavenumbers()) {
    const auto freq = ComplexFrequency::from_wavenumber(k);
    const VolumeOperator op1(g1, freq), op2(g2, freq);
    for (const auto& beta : betas) {
      const ScatteringField u1 = solve_scattering(op1, beta, sc.method, sc.tolerances.solver);
      const ScatteringField u2 = solve_scattering(op2, beta, sc.method, sc.tolerances.solver);
      const Complex a1 = amplitude(g1, u1, -beta).value;
      const Complex a2 = amplitude(g2, u2, -beta).value;
      const double gap = std::abs(a1 - a2);
      v.max_data_gap = std::max(v.max_data_gap, gap);

      // u_j = e^{ikβ·x}(1 + ε_j), so u₁u₂ = e^{2ikβ·x}(1 + ε₁ + ε₂ + ε₁ε₂).
      const ScatteringField e1 = to_epsilon(u1), e2 = to_epsilon(u2);
      const Complex kk = freq.k();
      Complex integral = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (p[ii] == 0.0) continue;
        const Complex eps = e1.values[ii] + e2.values[ii] + e1.values[ii] * e2.values[ii];
        integral += std::exp(2.0 * kI * kk * beta.dot(g.point(i))) * (1.0 + eps) * p[ii];
      }
      integral *= cell;
      OrthogonalityResidual r;
      r.beta = beta;
      r.k = k;
      r.integral = integral;
      r.data_side = -4.0 * kPi * (a1 - a2);
      r.residual = std::abs(integral - r.data_side) / std::max(1.0, gap);
      v.orthogonality_residuals.push_back(r);
    }
  }
  v.conclusion = v.max_data_gap > 10.0 * v.solver_tol ? ProbeConclusion::DataSeparate
                                                        : ProbeConclusion::DataCoincideWithinTol;
  if (!sc.kappa_list.empty() && v.conclusion == ProbeConclusion::DataSeparate)
    v.level_set_curve = ptilde_pipeline(sc.q1, sc.q2, sc.kappa_list, sc.level_set, sc.i_leading);
  return v;
}

// ------------------------------------------------------------- p̃ pipeline

std::vector<PipelinePoint> ptilde_pipeline(const PotentialSpec& q1, const PotentialSpec& q2,
                                           std::span<const double> kappa_list, const LevelSetOptions& ls,
                                           const ILeadingOptions& io) {
  const PotentialSpec p = PotentialSpec::difference(q1, q2);
  double sup_norm = 0.0;
  for (const auto& b : p.pieces()) sup_norm = std::max(sup_norm, std::abs(eval_potential(p, b.center)));
  if (p.is_zero() || sup_norm <= 1e-12) throw ZeroDifference("q1 - q2 vanishes; no level set to analyse");
  const double P = peak(p).value;
  const double two_pi_cubed = std::pow(2.0 * kPi, 3);
  std::vector<PipelinePoint> out;
  for (double kappa : kappa_list) {
    PipelinePoint pt;
    pt.level = find_eta(p, kappa, P, ls);
    const double eta = pt.level.eta_star;
    if (eta > 0.0) {
      const ComplexFrequency f(kappa, eta);
      pt.i_q1 = i_leading(q1, f, io);
      pt.i_q2 = i_leading(q2, f, io);
    } else {
      pt.i_q1 = pt.i_q2 = std::numeric_limits<double>::infinity();
    }
    pt.nu_proxy = pt.i_q1 + pt.i_q2;
    pt.margin = P * (1.0 - pt.nu_proxy);
    pt.correction_bound = P * pt.nu_proxy / two_pi_cubed;
    out.push_back(pt);
  }
  return out;
}

}  // namespace bsl
