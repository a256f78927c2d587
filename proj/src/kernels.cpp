#include "bsl/kernels.hpp"

#include "bsl/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace bsl {

Complex free_green(const Vec3& x, const Vec3& y, Complex k) {
  if (k.imag() < 0.0) throw InvalidArgument("free_green requires Im k >= 0");
  const double r = (x - y).norm();
  if (r < 1e-14) throw SingularPoint("free_green evaluated at coincident points");
  return std::exp(kI * k * r) / (4.0 * kPi * r);
}

Complex reduced_kernel(const Vec3& r, const KernelParams& params) {
  const double d = r.norm();
  if (d < 1e-14) throw SingularPoint("reduced_kernel evaluated at r = 0");
  const Complex k = params.freq.k();
  return std::exp(kI * k * (d - params.beta.dot(r))) / (4.0 * kPi * d);
}

Complex reduced_symbol(const Vec3& xi, const KernelParams& params) {
  const double xi2 = xi.squaredNorm();
  const Complex den = xi2 - params.freq.two_k() * params.beta.dot(xi);
  if (std::abs(den) <= 1e-12 * std::max(1.0, xi2))
    throw NearResonance("reduced symbol denominator vanishes (xi on the resonance sphere)");
  return 1.0 / den;
}

// ------------------------------------------------------------ SpheroidalIntegral

SpheroidalIntegral::SpheroidalIntegral(const PotentialSpec& q, const Vec3& x, const Vec3& y, Options opt)
    : q_(&q), x_(x), y_(y), opt_(opt) {
  const Vec3 d = y - x;
  const double dist = d.norm();
  if (dist < 1e-12) throw DegenerateFoci("spheroidal foci coincide (|x - y| < 1e-12)");
  ell_ = 0.5 * dist;
  mid_ = 0.5 * (x + y);
  e1_ = d / dist;
  std::tie(e2_, e3_) = complete_frame(e1_);

  // |x − z| + |z − y| over each piece's ball lies in [max(2ℓ, |x−c|+|y−c|−2R), |x−c|+|y−c|+2R].
  double lo = 1e300, hi = 1.0;
  bool any = false;
  for (const auto& b : q.pieces()) {
    if (b.amplitude == 0.0) continue;
    any = true;
    const double sum = (x - b.center).norm() + (y - b.center).norm();
    lo = std::min(lo, std::max(2.0 * ell_, sum - 2.0 * b.radius) / (2.0 * ell_));
    hi = std::max(hi, (sum + 2.0 * b.radius) / (2.0 * ell_));
  }
  if (!any) lo = hi = 1.0;
  s_lo_ = std::max(1.0, lo);
  s_hi_ = std::max(s_lo_, hi);

  if (opt_.mode == Mode::Tabulated && s_hi_ > s_lo_) {
    const double a = ell_ * s_lo_, b = ell_ * s_hi_;
    const int panels = std::max(4, static_cast<int>(std::ceil((b - a) / 0.05)));
    panel_edges_.resize(static_cast<std::size_t>(panels) + 1);
    for (int p = 0; p <= panels; ++p) panel_edges_[static_cast<std::size_t>(p)] = a + (b - a) * p / panels;
    // Chebyshev points of the second kind: stable barycentric interpolation.
    const int m = opt_.table_nodes;
    ref_nodes_.resize(static_cast<std::size_t>(m));
    bary_.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      ref_nodes_[static_cast<std::size_t>(j)] = -std::cos(kPi * j / (m - 1));
      double w = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == m - 1) w *= 0.5;
      bary_[static_cast<std::size_t>(j)] = w;
    }
    table_.resize(static_cast<std::size_t>(panels * m));
    for (int p = 0; p < panels; ++p) {
      const double c = 0.5 * (panel_edges_[p] + panel_edges_[p + 1]);
      const double h = 0.5 * (panel_edges_[p + 1] - panel_edges_[p]);
      for (int j = 0; j < m; ++j)
        table_[static_cast<std::size_t>(p * m + j)] = q_fixed((c + h * ref_nodes_[static_cast<std::size_t>(j)]) / ell_);
    }
  }
}

double SpheroidalIntegral::q_exact(double s) const {
  if (s < s_lo_ || s > s_hi_) return 0.0;
  const double root_s = std::sqrt(std::max(0.0, s * s - 1.0));
  auto over_t = [&](double psi) {
    const Vec3 dir = std::cos(psi) * e2_ + std::sin(psi) * e3_;
    auto f = [&](double t) {
      const Vec3 z = mid_ + ell_ * s * t * e1_ + ell_ * root_s * std::sqrt(std::max(0.0, 1.0 - t * t)) * dir;
      return eval_potential(*q_, z);
    };
    // The rim t = ±1 is where √(1 − t²) has unbounded slope; split there.
    const double br[5] = {-1.0, -0.9, 0.0, 0.9, 1.0};
    return quad::integrate(f, std::span<const double>(br, 5), opt_.q_opt).value;
  };
  const double br[5] = {0.0, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi};
  return quad::integrate(over_t, std::span<const double>(br, 5), opt_.q_opt).value;
}

double SpheroidalIntegral::q_fixed(double s) const {
  if (s < s_lo_ || s > s_hi_) return 0.0;
  const auto& rt = quad::gauss_legendre(opt_.t_nodes);
  const int np = opt_.psi_nodes;
  const double root_s = std::sqrt(std::max(0.0, s * s - 1.0));
  double total = 0.0;
  // t = cos θ substitution clusters nodes at the rim; ψ uses the periodic trapezoid rule.
  for (std::size_t i = 0; i < rt.nodes.size(); ++i) {
    const double theta = 0.5 * kPi * (rt.nodes[i] + 1.0);
    const double t = std::cos(theta);
    const double wt = 0.5 * kPi * rt.weights[i] * std::sin(theta);
    const Vec3 axial = mid_ + ell_ * s * t * e1_;
    const double rad = ell_ * root_s * std::sin(theta);
    double ring = 0.0;
    for (int j = 0; j < np; ++j) {
      const double psi = 2.0 * kPi * (j + 0.5) / np;
      ring += eval_potential(*q_, axial + rad * (std::cos(psi) * e2_ + std::sin(psi) * e3_));
    }
    total += wt * ring * (2.0 * kPi / np);
  }
  return total;
}

double SpheroidalIntegral::q_table(double sigma) const {
  if (sigma < panel_edges_.front() || sigma > panel_edges_.back()) return 0.0;
  const int panels = static_cast<int>(panel_edges_.size()) - 1;
  const double a = panel_edges_.front(), b = panel_edges_.back();
  int p = static_cast<int>((sigma - a) / (b - a) * panels);
  p = std::clamp(p, 0, panels - 1);
  const double c = 0.5 * (panel_edges_[p] + panel_edges_[p + 1]);
  const double h = 0.5 * (panel_edges_[p + 1] - panel_edges_[p]);
  const double u = (sigma - c) / h;
  const int m = opt_.table_nodes;
  const double* vals = &table_[static_cast<std::size_t>(p * m)];
  double num = 0.0, den = 0.0;
  for (int j = 0; j < m; ++j) {
    const double diff = u - ref_nodes_[static_cast<std::size_t>(j)];
    if (diff == 0.0) return vals[j];
    const double w = bary_[static_cast<std::size_t>(j)] / diff;
    num += w * vals[j];
    den += w;
  }
  return num / den;
}

Complex SpheroidalIntegral::evaluate(Complex zeta) const {
  if (zeta.imag() < 0.0) throw InvalidArgument("spheroidal integral requires Im zeta >= 0");
  if (!(s_hi_ > s_lo_)) return 0.0;
  // In σ = ℓs:  I₁ = ∫ e^{2iζσ} Q(σ/ℓ) dσ over [ℓ s_lo, ℓ s_hi].
  const double a = ell_ * s_lo_, b = ell_ * s_hi_;
  const double kap = std::abs(zeta.real());
  double panel = std::min(0.05, b - a);
  if (kap > 0.0) panel = std::min(panel, kPi / (2.0 * kap));  // half period of e^{2iκσ}
  if (zeta.imag() > 0.0) panel = std::min(panel, 1.0 / zeta.imag());
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
  const auto& rule = quad::gauss_legendre(opt_.panel_nodes);
  const double w = (b - a) / panels;
  Complex total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double sigma = c + 0.5 * w * rule.nodes[i];
      const double qv = opt_.mode == Mode::Tabulated ? q_table(sigma) : q_exact(sigma / ell_);
      total += std::exp(2.0 * kI * zeta * sigma) * qv * (0.5 * w * rule.weights[i]);
    }
  }
  return total;
}

}  // namespace bsl
