#include "doctest.h"

#include "bsl/forward_solver.hpp"
#include "bsl/sphere.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

using namespace bsl;

namespace {

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

// Images of a generic direction under the symmetry group of the cube; a radial
// potential sampled on the grid looks identical from all of them.
std::vector<Vec3> cube_orbit(const Vec3& v, std::size_t count) {
  std::vector<Vec3> out;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int s = 0; s < 8; ++s) {
      Vec3 w;
      for (int i = 0; i < 3; ++i) w[i] = ((s >> i) & 1 ? -1.0 : 1.0) * v[perm[static_cast<std::size_t>(i)]];
      out.push_back(w.normalized());
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.resize(std::min(count, out.size()));
  return out;
}

}  // namespace

TEST_CASE("zero potential") {
  const auto g = sample_grid(PotentialSpec::zero(), 12, 1.0);
  const auto f = ComplexFrequency::from_wavenumber(1.5);
  const Vec3 alpha = Vec3(1, 1, 0).normalized();
  const auto u = solve_scattering(g, alpha, f);
  CHECK(max_abs(u.values - plane_wave(g.geometry(), alpha, f)) == 0.0);
  CHECK(amplitude(g, u, -alpha).value == Complex(0.0));

  ScatteringField eps = to_epsilon(u);
  eps.values.setConstant(1.0);
  CHECK(max_abs(apply_T(eps, g, KernelParams{f, alpha}).values) == 0.0);

  const Vec3 dirs[] = {Vec3::UnitX(), Vec3::UnitZ()};
  const ComplexFrequency ks[] = {f};
  const auto table = backscatter_sweep(g, dirs, ks);
  for (const auto& e : table.entries) CHECK(e.value == Complex(0.0));
}

TEST_CASE("apply_T") {
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  SUBCASE("static potential at the centre") {
    // ∫ q(y)/(4π|y|) dy = ∫₀¹ r(1 − r²)⁴ dr = 1/10
    const auto g = sample_grid(q, 33, 1.0);
    ScatteringField f;
    f.grid = g.geometry();
    f.variant = FieldVariant::Epsilon;
    f.freq = ComplexFrequency(0, 0);
    f.values = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(f.grid.size()));
    const auto t = apply_T(f, g, KernelParams{ComplexFrequency(0, 0), Vec3::UnitZ()});
    const Complex centre = t.values[static_cast<Eigen::Index>(f.grid.index(16, 16, 16))];
    CHECK(std::abs(centre - 0.1) < 1e-3);
  }
  SUBCASE("linearity") {
    const auto g = sample_grid(q, 14, 1.0);
    const KernelParams p{ComplexFrequency(3.0, 0.5), Vec3(0, 0.6, 0.8)};
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    ScatteringField f, h;
    f.grid = h.grid = g.geometry();
    f.values.resize(static_cast<Eigen::Index>(f.grid.size()));
    h.values.resize(f.values.size());
    for (Eigen::Index i = 0; i < f.values.size(); ++i) {
      f.values[i] = {n01(rng), n01(rng)};
      h.values[i] = {n01(rng), n01(rng)};
    }
    const Complex a(0.3, -1.2), b(2.0, 0.5);
    ScatteringField comb = f;
    comb.values = a * f.values + b * h.values;
    const auto lhs = apply_T(comb, g, p).values;
    const auto rhs = (a * apply_T(f, g, p).values + b * apply_T(h, g, p).values).eval();
    CHECK(max_abs(lhs - rhs) < 1e-13 * max_abs(rhs));

    ScatteringField zero = f;
    zero.values.setZero();
    CHECK(max_abs(apply_T(zero, g, p).values) == 0.0);
  }
  SUBCASE("grid mismatch") {
    ScatteringField f;
    f.grid = GridGeometry{10, 1.0};
    f.values = Eigen::VectorXcd::Zero(1000);
    CHECK_THROWS_AS(apply_T(f, sample_grid(q, 12, 1.0), KernelParams{}), GridMismatch);
  }
}

TEST_CASE("solver contracts") {
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  const auto g = sample_grid(q, 20, 1.0);
  const auto f = ComplexFrequency::from_wavenumber(1.0);
  const VolumeOperator op(g, f);
  const SolverOptions opt;
  const Vec3 alpha = Vec3(1, -2, 2) / 3.0;

  const auto un = solve_scattering(op, alpha, SolveMethod::NeumannSeries, opt);
  const auto uk = solve_scattering(op, alpha, SolveMethod::KrylovIteration, opt);
  CHECK(un.variant == FieldVariant::FullU);
  CHECK(residual(op, un) < opt.tol);
  CHECK(residual(op, uk) < opt.tol);
  CHECK(max_abs(un.values - uk.values) < 10 * opt.tol * max_abs(un.values));

  const auto back = to_full(to_epsilon(un));
  CHECK(max_abs(back.values - un.values) < 1e-14 * max_abs(un.values));

  SUBCASE("complex frequency") {
    const VolumeOperator opc(g, ComplexFrequency(2.0, 1.0));
    CHECK(residual(opc, solve_scattering(opc, alpha, SolveMethod::Auto, opt)) < opt.tol);
  }
  SUBCASE("reciprocity") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 3; ++i) {
      const Vec3 a = random_unit_vector(rng), b = random_unit_vector(rng);
      const Complex ab = amplitude(g, solve_scattering(op, a, SolveMethod::Auto, opt), b).value;
      const Complex ba = amplitude(g, solve_scattering(op, -b, SolveMethod::Auto, opt), -a).value;
      CHECK(std::abs(ab - ba) < 10 * opt.tol);
    }
  }
  SUBCASE("forced Neumann series on a strong potential") {
    const auto strong = sample_grid(PotentialSpec::poly_bump(4, 200, 1), 12, 1.0);
    CHECK_THROWS_AS(solve_scattering(strong, alpha, f, SolveMethod::NeumannSeries), NotConverged);
  }
}

TEST_CASE("weak coupling follows the first Born term") {
  const auto f = ComplexFrequency::from_wavenumber(1.0);
  const Vec3 alpha = Vec3::UnitZ();
  auto born_error = [&](double c, double* rel) {
    const auto g = sample_grid(PotentialSpec::poly_bump(4, c, 1), 16, 1.0);
    const VolumeOperator op(g, f);
    const auto u = solve_scattering(op, alpha, SolveMethod::Auto, SolverOptions{1e-13, 500, 60, 0.8});
    const Eigen::VectorXcd u0 = plane_wave(g.geometry(), alpha, f);
    Eigen::VectorXcd born;
    op.apply(u0, born);  // u − u₀ ≈ −K(q u₀)
    const double err = max_abs(u.values - u0 + born);
    if (rel) *rel = err / max_abs(u.values - u0);
    // The amplitude agrees with −q̃(k(α − β))/(4π) to the same order.
    const Vec3 beta = Vec3(0, 0.6, 0.8);
    const Complex A = amplitude(g, u, beta).value;
    CHECK(std::abs(A - oracle::grid_born(g, beta, alpha, 1.0)) < 2 * c * std::abs(A));
    return err;
  };
  double rel = 0.0;
  const double e1 = born_error(0.01, &rel);
  CHECK(rel < 1e-3);
  const double e2 = born_error(0.005, nullptr);
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("square well against partial waves") {
  const double depth = 1.0, R = 1.0, k = 1.0;
  auto qr = [&](double r) { return r < R ? -depth : 0.0; };
  const auto g = sample_grid(PotentialSpec::square_well(depth, R), 32, R);
  const auto u = solve_scattering(g, Vec3::UnitZ(), ComplexFrequency::from_wavenumber(k));
  // The centre is a cell corner; average the eight surrounding cells.
  Complex centre = 0.0;
  for (int i : {15, 16})
    for (int j : {15, 16})
      for (int l : {15, 16}) centre += u.values[static_cast<Eigen::Index>(g.geometry().index(i, j, l))];
  centre /= 8.0;
  const Complex c_ref = oracle::centre_value(qr, R, k);
  CHECK(std::abs(centre - c_ref) < 0.01 * std::abs(c_ref));

  const Complex fwd = amplitude(g, u, Vec3::UnitZ()).value;
  const Complex f_ref = oracle::partial_wave_amplitude(qr, R, k, 1.0);
  CHECK(std::abs(fwd - f_ref) < 0.01 * std::abs(f_ref));
  const Complex bwd = amplitude(g, u, -Vec3::UnitZ()).value;
  const Complex b_ref = oracle::partial_wave_amplitude(qr, R, k, -1.0);
  CHECK(std::abs(bwd - b_ref) < 0.01 * std::abs(b_ref));
}

TEST_CASE("backscattering sweep") {
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  const auto g = sample_grid(q, 16, 1.0);
  const ComplexFrequency ks[] = {ComplexFrequency::from_wavenumber(1.0), ComplexFrequency::from_wavenumber(2.0)};
  const SweepOptions opt;

  SUBCASE("radial potential gives direction-independent data") {
    const auto dirs = cube_orbit(Vec3(1, 2, 3), 20);
    const auto table = backscatter_sweep(g, dirs, ks, opt);
    REQUIRE(table.entries.size() == 40);
    CHECK_FALSE(table.partial());
    for (std::size_t f = 0; f < 2; ++f) {
      const Complex ref = table.entries[f * 20].value;
      for (std::size_t i = 1; i < 20; ++i) CHECK(std::abs(table.entries[f * 20 + i].value - ref) < opt.solver.tol);
    }
  }
  SUBCASE("distinct bumps separate") {
    const auto g2 = sample_grid(PotentialSpec::poly_bump(4, 1.1, 1), 16, 1.0);
    const auto dirs = fibonacci_sphere(6);
    const auto t1 = backscatter_sweep(g, dirs, ks, opt), t2 = backscatter_sweep(g2, dirs, ks, opt);
    double gap = 0.0;
    for (std::size_t i = 0; i < t1.entries.size(); ++i)
      gap = std::max(gap, std::abs(t1.entries[i].value - t2.entries[i].value));
    CHECK(gap > 10 * opt.solver.tol);
  }
  SUBCASE("cache") {
    const auto dir = std::filesystem::temp_directory_path() / "bsl_test_cache";
    std::filesystem::remove_all(dir);
    SweepOptions cached = opt;
    cached.cache_dir = dir;
    const Vec3 dirs[] = {Vec3(0, 0.6, 0.8), Vec3::UnitX()};
    const auto cold = backscatter_sweep(g, dirs, ks, cached);
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 4);
    const auto warm = backscatter_sweep(g, dirs, ks, cached);
    for (std::size_t i = 0; i < cold.entries.size(); ++i) CHECK(warm.entries[i].value == cold.entries[i].value);
    std::ostringstream a, b;
    cold.write_csv(a);
    warm.write_csv(b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("beta_x,beta_y,beta_z,alpha_x,alpha_y,alpha_z,kappa,eta,re_A,im_A\n", 0) == 0);
    std::filesystem::remove_all(dir);
  }
  SUBCASE("failures are reported per entry") {
    const auto strong = sample_grid(PotentialSpec::poly_bump(4, 200, 1), 12, 1.0);
    SweepOptions neumann = opt;
    neumann.method = SolveMethod::NeumannSeries;
    const Vec3 dirs[] = {Vec3::UnitZ()};
    const auto t = backscatter_sweep(strong, dirs, ks, neumann);
    CHECK(t.partial());
    CHECK(t.failures.size() == 2);
  }
}

TEST_CASE("amplitude difference identity") {
  const auto f = ComplexFrequency::from_wavenumber(1.0);
  const Vec3 beta = Vec3(2, -1, 2) / 3.0, alpha = Vec3(0, 0.8, -0.6);
  SUBCASE("identical potentials") {
    const auto g = sample_grid(PotentialSpec::poly_bump(4, 1, 1), 14, 1.0);
    const auto [lhs, rhs] = amplitude_difference_check(g, g, beta, alpha, f);
    CHECK(lhs == Complex(0.0));
    CHECK(rhs == Complex(0.0));
  }
  SUBCASE("second potential zero") {
    const auto g = sample_grid(PotentialSpec::poly_bump(4, 1, 1), 14, 1.0);
    const auto z = sample_grid(PotentialSpec::zero(), 14, 1.0);
    const auto [lhs, rhs] = amplitude_difference_check(g, z, beta, alpha, f);
    const Complex a = amplitude(g, solve_scattering(g, alpha, f), beta).value;
    CHECK(std::abs(lhs + 4 * kPi * a) < 1e-12 * std::abs(lhs));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
  }
  SUBCASE("distinct bumps at n = 32") {
    const auto q2 = PotentialSpec::sum_of_bumps({Bump{4, 0.8, Vec3(0.2, 0, 0), 0.7}, Bump{4, 0.5, Vec3(-0.3, 0.1, 0), 0.6}});
    const auto g1 = sample_grid(PotentialSpec::poly_bump(4, 1, 1), 32, 1.0);
    const auto g2 = sample_grid(q2, 32, 1.0);
    const auto [lhs, rhs] = amplitude_difference_check(g1, g2, beta, alpha, f);
    CHECK(std::abs(lhs - rhs) < 1e-3 * std::abs(lhs));
  }
  SUBCASE("grid mismatch") {
    CHECK_THROWS_AS(amplitude_difference_check(sample_grid(PotentialSpec::zero(), 10, 1.0),
                                               sample_grid(PotentialSpec::zero(), 12, 1.0), beta, alpha, f),
                    GridMismatch);
  }
}

TEST_CASE("T squared norm") {
  const auto q = PotentialSpec::poly_bump(4, 1, 1);
  CHECK(t2_norm_estimate(PotentialSpec::zero(), ComplexFrequency(10, 0), 5).value == 0.0);
  CHECK_THROWS_AS(t2_norm_estimate(q, ComplexFrequency(10, 0), 4), InvalidArgument);

  const ComplexFrequency fs[] = {ComplexFrequency(std::sqrt(1e3), 0), ComplexFrequency(std::sqrt(2e3), 0),
                                 ComplexFrequency(10, 0), ComplexFrequency(100, 0)};
  const auto est = t2_norm_sweep(q, fs, 5);
  const double ratio = est[1].value / est[0].value;
  CHECK(ratio > 0.8 / std::sqrt(2.0));
  CHECK(ratio < 1.2 / std::sqrt(2.0));
  CHECK(est[3].value < est[2].value);
  for (const auto& e : est) {
    CHECK(e.lower_bound <= e.value);
    CHECK(e.gamma == doctest::Approx(e.freq.gamma()));
  }
}
