#pragma once

#include "bsl/estimate_lab.hpp"
#include "bsl/forward_solver.hpp"
#include "bsl/keyvalue.hpp"
#include "bsl/potentials.hpp"
#include "bsl/report.hpp"

#include <ostream>
#include <vector>

namespace bsl {

struct ProbeTolerances {
  SolverOptions solver;      ///< solver.tol is the tolerance the verdict is measured against
  double lemma_rel = 1e-3;   ///< orthogonality residual threshold, relative to max(1, |A₁ − A₂|)
};

/// Two potentials and the sampling plan for their backscattering comparison.
struct ProbeScenario {
  PotentialSpec q1 = PotentialSpec::zero();
  PotentialSpec q2 = PotentialSpec::zero();
  int beta_count = 64;
  std::vector<double> k_list;  ///< physical wavenumbers; empty means 12 log-spaced in [0.5, 8]/a
  int grid_n = 24;
  double grid_a = 0.0;         ///< half-width of the grid box; 0 means the larger support radius
  ProbeTolerances tolerances;
  SolveMethod method = SolveMethod::Auto;
  std::vector<double> kappa_list;  ///< level-set pipeline frequencies (skipped when empty)
  LevelSetOptions level_set;
  ILeadingOptions i_leading;

  double box() const;
  std::vector<double> wavenumbers() const;
};

/// Reads `[probe]`, `[q1]` and `[q2]` (plus `[q1.bump]`/`[q2.bump]` pieces).
ProbeScenario parse_scenario(const kv::Document& doc);
ProbeScenario load_scenario(const std::string& path);

struct OrthogonalityResidual {
  Vec3 beta = Vec3::UnitZ();
  double k = 0.0;
  Complex integral = 0.0;   ///< ∫ e^{2ikβ·x}(1 + ε) p dx
  Complex data_side = 0.0;  ///< −4π(A₁ − A₂)(−β, β, k)
  double residual = 0.0;    ///< |integral − data_side| / max(1, |A₁ − A₂|)
};

/// One κ of the level-set pipeline.
struct PipelinePoint {
  LevelSetResult level;
  double i_q1 = 0.0;
  double i_q2 = 0.0;
  double nu_proxy = 0.0;          ///< I(q₁) + I(q₂) at (κ, η(κ))
  double margin = 0.0;            ///< P·(1 − ν_proxy)
  double correction_bound = 0.0;  ///< P·ν_proxy/(2π)³, the bound on the convolution term
};

enum class ProbeConclusion { DataSeparate, DataCoincideWithinTol };

struct ProbeVerdict {
  double max_data_gap = 0.0;
  double solver_tol = 0.0;
  std::vector<OrthogonalityResidual> orthogonality_residuals;
  std::vector<PipelinePoint> level_set_curve;
  ProbeConclusion conclusion = ProbeConclusion::DataCoincideWithinTol;

  double max_residual() const;
  bool lemma_holds(double rel) const;
  nlohmann::ordered_json json() const;
  std::string to_json() const;
  /// CSV columns kappa,eta_star,sup_value,margin.
  void write_level_set_csv(std::ostream& os) const;
};

const char* to_string(ProbeConclusion c);

/// Solves both scattering problems for every (β, k), compares A₁(−β, β, k) with
/// A₂(−β, β, k), and evaluates the orthogonality integral from the solved fields.
ProbeVerdict run_probe(const ProbeScenario& scenario);
/// Same, on pre-sampled grids. Throws InconsistentGrid unless both grids share
/// the scenario's geometry.
ProbeVerdict run_probe(const ProbeScenario& scenario, const PotentialGrid& g1, const PotentialGrid& g2);

/// Level-set frequencies η(κ) of p = q₁ − q₂ and the leading correction bound at
/// (κ, η(κ)). Throws ZeroDifference if p vanishes.
std::vector<PipelinePoint> ptilde_pipeline(const PotentialSpec& q1, const PotentialSpec& q2,
                                           std::span<const double> kappa_list,
                                           const LevelSetOptions& ls = {}, const ILeadingOptions& io = {});

}  // namespace bsl
