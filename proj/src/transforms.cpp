#include "bsl/transforms.hpp"

#include "bsl/sphere.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace bsl {

RadonProfile radon_profile(const PotentialSpec& spec, const Vec3& beta, int count, const quad::Options& opt) {
  if (count < 2) throw InvalidArgument("radon profile needs at least two samples");
  const double a = spec.support_radius();
  RadonProfile p;
  p.beta = beta.normalized();
  p.lambdas.resize(static_cast<std::size_t>(count));
  p.values.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double lam = -a + 2.0 * a * i / (count - 1);
    p.lambdas[static_cast<std::size_t>(i)] = lam;
    p.values[static_cast<std::size_t>(i)] = radon_transform(spec, p.beta, lam, opt);
  }
  return p;
}

void write_radon_csv(std::ostream& os, std::span<const RadonProfile> profiles) {
  os << "beta_x,beta_y,beta_z,lambda,value\n";
  for (const auto& p : profiles)
    for (std::size_t i = 0; i < p.lambdas.size(); ++i)
      os << format_double(p.beta.x()) << "," << format_double(p.beta.y()) << "," << format_double(p.beta.z())
         << "," << format_double(p.lambdas[i]) << "," << format_double(p.values[i]) << "\n";
}

namespace {

// H(ρ) = ∫ f(|y|) g(|x − y|) dy with |x| = ρ, both pieces recentred at the origin.
double radial_convolution(const Bump& f, const Bump& g, double rho, const quad::Options& inner) {
  if (rho < 1e-14) {
    auto integrand = [&](double r) { return r * r * f.profile(r) * g.profile(r); };
    return 4.0 * kPi * quad::integrate(integrand, 0.0, std::min(f.radius, g.radius), inner).value;
  }
  auto shell = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double lo = std::abs(r - rho);
    const double hi = std::min(r + rho, g.radius);
    if (!(hi > lo)) return 0.0;
    auto wg = [&](double w) { return w * g.profile(w); };
    return r * f.profile(r) * quad::integrate(wg, lo, hi, inner).value / rho;
  };
  const double kinks[3] = {rho - g.radius, rho + g.radius, g.radius - rho};
  std::vector<double> interior;
  for (double k : kinks)
    if (k > 0.0 && k < f.radius) interior.push_back(k);
  const auto breaks = quad::make_breaks(0.0, f.radius, interior, f.radius / 2.0);
  return 2.0 * kPi * quad::integrate(shell, breaks, inner).value;
}

}  // namespace

std::pair<Complex, Complex> convolution_theorem_check(const PotentialSpec& f, const PotentialSpec& g,
                                                      const Vec3& xi, const quad::Options& opt) {
  quad::Options inner = opt;
  inner.abs_tol = std::min(opt.abs_tol, 1e-12);
  inner.rel_tol = std::min(opt.rel_tol, 1e-12);
  const double z = xi.norm();
  Complex lhs = 0.0;
  for (const auto& bf : f.pieces()) {
    if (bf.amplitude == 0.0) continue;
    for (const auto& bg : g.pieces()) {
      if (bg.amplitude == 0.0) continue;
      const double reach = bf.radius + bg.radius;
      const double kink = std::abs(bf.radius - bg.radius);
      std::vector<double> interior;
      if (kink > 0.0) interior.push_back(kink);
      double panel = reach / 4.0;
      if (z * reach > kPi) panel = std::min(panel, kPi / z);
      const auto breaks = quad::make_breaks(0.0, reach, interior, panel);
      auto outer = [&](double rho) {
        const double zr = z * rho;
        const double sinc = zr < 1e-4 ? 1.0 - zr * zr / 6.0 : std::sin(zr) / zr;
        return rho * rho * radial_convolution(bf, bg, rho, inner) * sinc;
      };
      const double radial = 4.0 * kPi * quad::integrate(outer, breaks, opt).value;
      lhs += std::exp(kI * xi.dot(bf.center + bg.center)) * radial;
    }
  }
  const CVec3 w = xi.cast<Complex>();
  const Complex rhs = fourier_at(f, w, opt) * fourier_at(g, w, opt);
  return {lhs, rhs};
}

EstimateReport radon_moment_identity(const PotentialSpec& spec, std::span<const Vec3> betas, double tolerance,
                                     const quad::Options& opt) {
  EstimateReport rep;
  rep.name = "radon_moment_identity";
  rep.tolerance = tolerance;
  const double mass = total_mass(spec, opt);
  const double a = spec.support_radius();
  bool ok = true;
  for (const auto& b : betas) {
    const Vec3 beta = b.normalized();
    const auto kinks = radon_breakpoints(spec, beta);
    const auto breaks = quad::make_breaks(-a, a, kinks, a / 2.0);
    auto f = [&](double lam) { return radon_transform(spec, beta, lam, opt); };
    const double lhs = quad::integrate(f, breaks, opt).value;
    const double err = mass != 0.0 ? std::abs(lhs - mass) / std::abs(mass) : std::abs(lhs);
    rep.add({{"beta_x", beta.x()}, {"beta_y", beta.y()}, {"beta_z", beta.z()}}, err);
    ok = ok && err <= tolerance;
  }
  rep.passed = ok;
  return rep;
}

std::pair<Complex, Complex> fourier_slice_identity(const PotentialSpec& spec, const Vec3& beta, double k,
                                                   const quad::Options& opt) {
  const Vec3 b = beta.normalized();
  const CVec3 w = (k * b).cast<Complex>();
  return {fourier_at(spec, w, opt), fourier_via_radon(spec, b, k, 0.0, opt)};
}

std::pair<double, double> radon_reflection_check(const PotentialSpec& spec, const Vec3& beta, double lambda,
                                                 const quad::Options& opt) {
  return {radon_transform(spec, beta, lambda, opt), radon_transform(spec, -beta, -lambda, opt)};
}

Vec3 SpheroidalPoint::z() const { return spheroidal_map(s, t, psi, x, y); }

Vec3 spheroidal_map(double s, double t, double psi, const Vec3& x, const Vec3& y) {
  const Vec3 d = y - x;
  const double dist = d.norm();
  if (dist < 1e-12) throw DegenerateFoci("spheroidal foci coincide (|x - y| < 1e-12)");
  const double ell = 0.5 * dist;
  const Vec3 e1 = d / dist;
  const auto [e2, e3] = complete_frame(e1);
  const double rad = ell * std::sqrt(std::max(0.0, (s * s - 1.0) * (1.0 - t * t)));
  return 0.5 * (x + y) + ell * s * t * e1 + rad * std::cos(psi) * e2 + rad * std::sin(psi) * e3;
}

double spheroidal_jacobian(double s, double t, double ell) { return ell * ell * ell * (s * s - t * t); }

namespace {

// In-place 3D transform of an N³ cube, one axis at a time.
void fft3(Eigen::VectorXcd& data, int N, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
  const std::size_t n = static_cast<std::size_t>(N);
  const std::size_t strides[3] = {1, n, n * n};
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t st = strides[axis];
    for (std::size_t base = 0; base < n * n * n; ++base) {
      if ((base / st) % n != 0) continue;  // visit each line once, from its first element
      for (std::size_t i = 0; i < n; ++i) in[i] = data[static_cast<Eigen::Index>(base + i * st)];
      if (inverse)
        fft.inv(out, in);
      else
        fft.fwd(out, in);
      for (std::size_t i = 0; i < n; ++i) data[static_cast<Eigen::Index>(base + i * st)] = out[i];
    }
  }
}

}  // namespace

Eigen::VectorXcd grid_fourier(const PotentialGrid& grid, int pad) {
  if (pad < 1) throw InvalidArgument("padding factor must be at least 1");
  const int n = grid.n();
  const int N = n * pad;
  Eigen::VectorXcd data = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(N) * N * N);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        data[i + static_cast<Eigen::Index>(N) * (j + static_cast<Eigen::Index>(N) * k)] =
            grid.values()[static_cast<Eigen::Index>(grid.geometry().index(i, j, k))];
  fft3(data, N, false);
  return data;
}

Eigen::VectorXd grid_inverse_fourier(const Eigen::VectorXcd& spectrum, const GridGeometry& g, int pad) {
  const int n = g.n;
  const int N = n * pad;
  if (spectrum.size() != static_cast<Eigen::Index>(N) * N * N)
    throw GridMismatch("spectrum size does not match grid and padding");
  Eigen::VectorXcd data = spectrum;
  fft3(data, N, true);
  Eigen::VectorXd out(static_cast<Eigen::Index>(g.size()));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        out[static_cast<Eigen::Index>(g.index(i, j, k))] =
            data[i + static_cast<Eigen::Index>(N) * (j + static_cast<Eigen::Index>(N) * k)].real();
  return out;
}

}  // namespace bsl
