#include "bsl/estimate_lab.hpp"

#include "bsl/quadrature.hpp"
#include "bsl/sphere.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace bsl {

namespace {

constexpr double kGrowthCap = 40.0;

void check_growth(double eta, double a) {
  if (std::abs(eta) * a > kGrowthCap)
    throw RangeError("complex frequency growth |eta|·a = " + format_double(std::abs(eta) * a) + " exceeds 40");
}

bool all_centred(const PotentialSpec& p) {
  return std::all_of(p.pieces().begin(), p.pieces().end(),
                     [](const Bump& b) { return b.center.squaredNorm() == 0.0; });
}

Complex sinc(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

}  // namespace

// ------------------------------------------------------------ PtildeEvaluator

PtildeEvaluator::PtildeEvaluator(const PotentialSpec& p, double kappa, double eta_cap)
    : p_(&p), kappa_(kappa), a_(p.support_radius()), radial_(all_centred(p)) {
  panel_ = a_ / 4.0;
  if (kappa > 0.0) panel_ = std::min(panel_, kPi / kappa);
  if (eta_cap > 0.0) panel_ = std::min(panel_, 2.0 / eta_cap);
}

Complex PtildeEvaluator::operator()(const Vec3& beta, double eta) const {
  if (a_ == 0.0) return 0.0;
  const auto kinks = radon_breakpoints(*p_, beta);
  const auto breaks = quad::make_breaks(-a_, a_, kinks, panel_);
  const Complex zc(-eta, kappa_);
  auto f = [&](double lam) -> Complex {
    return std::exp(zc * lam) * radon_transform_closed_form(*p_, beta, lam);
  };
  Complex total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) total += quad::detail::gk15(f, breaks[i], breaks[i + 1]).value;
  return total;
}

// ------------------------------------------------------------------- sup_β

namespace {

// Golden-section maximisation of f on [lo, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    } else {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    }
  }
  return fc < fd ? std::make_pair(d, fd) : std::make_pair(c, fc);
}

}  // namespace

SupResult sup_beta_ptilde(const PtildeEvaluator& ev, double eta, const SupOptions& opt) {
  auto mag = [&](const Vec3& b) { return std::abs(ev(b, eta)); };
  if (ev.radial()) return {mag(Vec3::UnitZ()), Vec3::UnitZ()};

  const auto grid = fibonacci_sphere(opt.grid_nodes);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = mag(grid[i]);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  const int starts = std::min<int>(opt.refine_starts, static_cast<int>(grid.size()));
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

  SupResult best{vals[order[0]], grid[order[0]]};
  const double spacing = std::sqrt(4.0 * kPi / static_cast<double>(grid.size()));
  for (int s = 0; s < starts; ++s) {
    Vec3 beta = grid[order[static_cast<std::size_t>(s)]];
    double value = vals[order[static_cast<std::size_t>(s)]];
    double width = 2.0 * spacing;
    for (int sweep = 0; sweep < opt.refine_sweeps; ++sweep) {
      const auto [e2, e3] = complete_frame(beta);
      for (const Vec3& dir : {e2, e3}) {
        auto along = [&](double th) { return mag((std::cos(th) * beta + std::sin(th) * dir).normalized()); };
        const auto [th, v] = golden_max(along, -width, width, 1e-9);
        if (v > value) {
          value = v;
          beta = (std::cos(th) * beta + std::sin(th) * dir).normalized();
        }
      }
      width *= 0.5;
    }
    if (value > best.value) best = {value, beta};
  }
  return best;
}

SupResult sup_beta_ptilde(const PotentialSpec& p, const ComplexFrequency& freq, const SupOptions& opt) {
  const double a = p.support_radius();
  check_growth(freq.eta(), a);
  const PtildeEvaluator ev(p, freq.kappa(), std::max(freq.eta(), 1.0));
  return sup_beta_ptilde(ev, freq.eta(), opt);
}

// -------------------------------------------------------------------- peak

Complex fourier_fast(const PotentialSpec& q, const CVec3& w) {
  const Complex z = std::sqrt(bilinear_square(w));
  Complex total = 0.0;
  for (const auto& b : q.pieces()) {
    if (b.amplitude == 0.0) continue;
    int n = 24 + static_cast<int>(std::ceil(1.5 * std::abs(z) * b.radius));
    n = std::min(4096, (n + 7) / 8 * 8);
    const auto& rule = quad::gauss_legendre(n);
    const double h = 0.5 * b.radius;
    Complex acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = h * (rule.nodes[i] + 1.0);
      acc += rule.weights[i] * r * r * b.profile(r) * sinc(z * r);
    }
    const Complex phase = std::exp(kI * Complex(w.transpose() * b.center.cast<Complex>()));
    total += phase * 4.0 * kPi * h * acc;
  }
  return total;
}

namespace {

// Nelder–Mead maximisation of f over R³.
template <typename F>
std::pair<Vec3, double> nelder_mead_max(F&& f, const Vec3& start, double step, int max_iter) {
  std::array<Vec3, 4> x{start, start + step * Vec3::UnitX(), start + step * Vec3::UnitY(),
                        start + step * Vec3::UnitZ()};
  std::array<double, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = -f(x[i]);  // minimise −f
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 4> o{0, 1, 2, 3};
    std::sort(o.begin(), o.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::array<Vec3, 4> xs;
    std::array<double, 4> vs;
    for (int i = 0; i < 4; ++i) {
      xs[i] = x[o[i]];
      vs[i] = v[o[i]];
    }
    x = xs;
    v = vs;
    if (std::abs(v[3] - v[0]) <= 1e-14 * (std::abs(v[0]) + 1e-300) && (x[3] - x[0]).norm() < 1e-9) break;
    const Vec3 c = (x[0] + x[1] + x[2]) / 3.0;
    const Vec3 xr = c + (c - x[3]);
    const double vr = -f(xr);
    if (vr < v[0]) {
      const Vec3 xe = c + 2.0 * (c - x[3]);
      const double ve = -f(xe);
      if (ve < vr) {
        x[3] = xe;
        v[3] = ve;
      } else {
        x[3] = xr;
        v[3] = vr;
      }
    } else if (vr < v[2]) {
      x[3] = xr;
      v[3] = vr;
    } else {
      const Vec3 xc = vr < v[3] ? Vec3(c + 0.5 * (xr - c)) : Vec3(c + 0.5 * (x[3] - c));
      const double vc = -f(xc);
      if (vc < std::min(vr, v[3])) {
        x[3] = xc;
        v[3] = vc;
      } else {
        for (int i = 1; i < 4; ++i) {
          x[i] = x[0] + 0.5 * (x[i] - x[0]);
          v[i] = -f(x[i]);
        }
      }
    }
  }
  const auto best = std::min_element(v.begin(), v.end()) - v.begin();
  return {x[static_cast<std::size_t>(best)], -v[static_cast<std::size_t>(best)]};
}

}  // namespace

PeakResult peak(const PotentialSpec& p, int seeds, std::uint64_t seed) {
  const double a = p.support_radius();
  if (a == 0.0 || p.is_zero()) return {};
  auto f = [&](const Vec3& s) { return std::abs(fourier_fast(p, s.cast<Complex>())); };
  std::mt19937_64 rng(seed);
  std::vector<Vec3> starts{Vec3::Zero()};
  for (int i = 0; i < seeds; ++i) starts.push_back(random_point_in_ball(rng, 4.0 * kPi / a));
  PeakResult best;
  for (const auto& s0 : starts) {
    const auto [x, v] = nelder_mead_max(f, s0, 0.5 / a, 600);
    if (v > best.value) best = {v, x};
  }
  return best;
}

// --------------------------------------------------------------- find_eta

LevelSetResult find_eta(const PotentialSpec& p, double kappa, double P, const LevelSetOptions& opt) {
  if (!(P > 0.0)) throw InvalidArgument("find_eta needs a positive target P");
  const double a = p.support_radius();
  const double eta_max = kGrowthCap / a;
  const PtildeEvaluator ev(p, kappa, eta_max);
  LevelSetResult res;
  res.kappa = kappa;
  res.target = P;
  const double tol = opt.rel_tol * P;

  auto sup_at = [&](double eta) { return sup_beta_ptilde(ev, eta, opt.sup); };
  SupResult lo_sup = sup_at(0.0);
  if (lo_sup.value >= P - tol) {
    res.degenerate = true;
    res.sup_value = lo_sup.value;
    res.beta_star = lo_sup.beta;
    return res;
  }
  double lo = 0.0, hi = 0.0;
  SupResult hi_sup;
  for (;;) {
    hi = lo + opt.scan_step;
    check_growth(hi, a);
    hi_sup = sup_at(hi);
    if (hi_sup.value >= P) break;
    lo = hi;
    lo_sup = hi_sup;
  }
  SupResult mid_sup = hi_sup;
  double mid = hi;
  for (int it = 0; it < 200 && std::abs(mid_sup.value - P) > tol; ++it) {
    mid = 0.5 * (lo + hi);
    mid_sup = sup_at(mid);
    if (mid_sup.value >= P)
      hi = mid;
    else
      lo = mid;
  }
  res.eta_star = mid;
  res.sup_value = mid_sup.value;
  res.beta_star = mid_sup.beta;
  return res;
}

std::pair<double, double> reflection_symmetry_check(const PotentialSpec& p, double kappa, double eta,
                                                    const SupOptions& opt) {
  check_growth(eta, p.support_radius());
  const PtildeEvaluator ev(p, kappa, std::max(std::abs(eta), 1.0));
  SupOptions o = opt;
  if (ev.radial()) {
    // Force the full lattice search on both routes so neither relies on symmetry.
    return {std::abs(ev(Vec3::UnitZ(), eta)), std::abs(ev(Vec3::UnitZ(), -eta))};
  }
  return {sup_beta_ptilde(ev, eta, o).value, sup_beta_ptilde(ev, -eta, o).value};
}

// ------------------------------------------------------------ decay bound

EstimateReport decay_bound_check(const PotentialSpec& p, std::span<const std::pair<double, double>> sweep,
                                 const DecayOptions& opt) {
  require_admissible(p, "decay_bound_check");
  EstimateReport rep;
  rep.name = "decay_bound_check";
  const double a = p.support_radius();
  const double ell = p.smoothness();
  rep.tolerance = -ell + 0.5;
  double c = 0.0;
  for (const auto& [kappa, eta] : sweep) {
    const double e = std::abs(eta);
    check_growth(e, a);
    const PtildeEvaluator ev(p, kappa, std::max(e, 1.0));
    const double s = sup_beta_ptilde(ev, eta, opt.sup).value;
    const double ratio = s * std::pow(1.0 + kappa * kappa + e * e, 0.5 * ell) * std::exp(-a * e);
    c = std::max(c, ratio);
    rep.add({{"kappa", kappa}, {"eta", eta}, {"sup_ptilde", s}}, ratio);
  }
  std::vector<double> ks, env;
  const int np = std::max(2, opt.slope_points);
  for (int i = 0; i < np; ++i) {
    const double kappa =
        opt.slope_kappa_min * std::pow(opt.slope_kappa_max / opt.slope_kappa_min, static_cast<double>(i) / (np - 1));
    double e = 0.0;
    for (int j = 0; j < 16; ++j) {
      const double kk = kappa + (kPi / a) * j / 15.0;
      const PtildeEvaluator ev(p, kk, 1.0);
      e = std::max(e, sup_beta_ptilde(ev, 0.0, opt.sup).value);
    }
    ks.push_back(kappa);
    env.push_back(e);
    rep.add({{"kappa", kappa}, {"eta", 0.0}, {"envelope", 1.0}}, e);
  }
  const double slope = loglog_slope(ks, env);
  rep.fitted_exponent = slope;
  rep.bound_constant = c;
  rep.passed = std::isfinite(c) && slope <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------- B and J

BResult b_integral(double r, const ComplexFrequency& freq, double ell) {
  if (r < 0.0) throw InvalidArgument("b_integral requires r >= 0");
  const double kappa = freq.kappa(), eta = freq.eta(), gamma = freq.gamma();
  if (!(gamma > 0.0)) throw InvalidArgument("b_integral requires gamma > 0");
  constexpr double inf = std::numeric_limits<double>::infinity();
  BResult out;
  const double t0 = r * kappa / gamma;
  const double b = eta * r / gamma;

  // Closed-form bound.
  const double um = 1.0 - t0, up = 1.0 + t0;
  const double rm = std::sqrt(um * um + b * b), rp = std::sqrt(up * up + b * b);
  const double num = um >= 0.0 ? um + rm : (b * b) / (rm - um);
  const double den = up > 0.0 ? (b * b) / (rp + up) : rp - up;
  const double prefactor = 1.0 / (std::sqrt(gamma) * std::pow(1.0 + eta * eta + (r - kappa) * (r - kappa), 0.5 * ell));
  out.bound = (den > 0.0 && num > 0.0) ? prefactor * std::abs(std::log(num / den)) : inf;

  if (b == 0.0 && std::abs(t0) <= 1.0) {
    out.numeric = inf;
    out.near_singular = true;
    return out;
  }
  const double shift = r * r * eta * eta / gamma;
  auto f = [&](double t) {
    const double d = t - t0;
    return 1.0 / (std::sqrt(gamma * d * d + shift) * std::pow(1.0 + gamma + r * r - 2.0 * r * kappa * t, 0.5 * ell));
  };
  std::vector<double> interior;
  if (t0 > -1.0 && t0 < 1.0) {
    interior.push_back(t0);
    for (double w = std::max(b, 1e-300); w < 2.0; w *= 10.0) {
      if (t0 - w > -1.0) interior.push_back(t0 - w);
      if (t0 + w < 1.0) interior.push_back(t0 + w);
    }
  }
  const auto breaks = quad::make_breaks(-1.0, 1.0, interior, 0.5);
  quad::Options o{0.0, 1e-11, 20000, true};
  out.numeric = quad::integrate(f, breaks, o).value;
  return out;
}

double j_integral(const ComplexFrequency& freq, double ell) {
  if (!(ell > 2.0)) throw InvalidArgument("j_integral requires ell > 2");
  if (!(freq.eta() > 0.0)) return std::numeric_limits<double>::infinity();
  const double kappa = freq.kappa(), eta = freq.eta();
  const double tail = std::pow(8.0 * kPi * std::pow(2.0, ell) / ((ell - 1.0) * 1e-10), 1.0 / (ell - 1.0));
  const double R = std::max(4.0 * kappa + 10.0, tail);
  std::map<double, double> cache;
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, b_integral(r, freq, ell).numeric).first;
    return r * it->second;
  };
  std::vector<double> interior;
  const double w = 1.0 + eta;
  for (double d : {-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0})
    if (kappa + d * w > 0.0) interior.push_back(kappa + d * w);
  const double t1 = freq.gamma() / std::max(kappa, 1e-300);  // where t₀ = 1
  if (t1 < R) interior.push_back(t1);
  for (double r = std::max(1.0, 2.0 * kappa); r < R; r *= 2.0) interior.push_back(r);
  std::sort(interior.begin(), interior.end());
  std::vector<double> breaks{0.0};
  for (double v : interior)
    if (v > breaks.back() && v < R) breaks.push_back(v);
  breaks.push_back(R);
  quad::Options o{1e-14, 1e-8, 20000, true};
  return 2.0 * kPi * quad::integrate(integrand, breaks, o).value;
}

// ----------------------------------------------------------------------- I

double i_leading(const PotentialSpec& q, const ComplexFrequency& freq, const ILeadingOptions& opt) {
  require_admissible(q, "i_leading");
  if (!(freq.eta() > 0.0)) throw InvalidArgument("i_leading requires eta > 0");
  if (q.is_zero()) return 0.0;
  const double a = q.support_radius();
  check_growth(freq.eta(), a);
  const double kappa = freq.kappa(), eta = freq.eta();
  const Complex zeta = freq.two_k();
  const bool radial = all_centred(q);
  const std::vector<Vec3> betas = radial ? std::vector<Vec3>{Vec3::UnitZ()} : fibonacci_sphere(opt.grid_nodes);

  const double rho_max = std::max(4.0 * kappa, 200.0 / a);
  std::vector<double> rho_breaks{0.0};
  for (double r = 0.25 * (1.0 + eta); r < rho_max; r *= 2.0) rho_breaks.push_back(r);
  rho_breaks.push_back(kappa);
  rho_breaks.push_back(rho_max);
  std::sort(rho_breaks.begin(), rho_breaks.end());
  rho_breaks.erase(std::unique(rho_breaks.begin(), rho_breaks.end()), rho_breaks.end());
  std::vector<double> ub{-1.0, 0.0, 0.9, 0.99};
  for (double d = 1e-3; d > 1e-9; d *= 0.1) ub.push_back(1.0 - d);
  ub.push_back(1.0);

  auto integral = [&](const Vec3& beta, double rel, double floor) {
    const auto [e2, e3] = complete_frame(beta);
    // w' = ρ(uβ + √(1 − u²)(cos φ e₂ + sin φ e₃)), s = κβ − w', q̃ evaluated at w' + iηβ.
    auto point = [&](double rho, double u, double phi) {
      const Vec3 wp = rho * (u * beta + std::sqrt(std::max(0.0, 1.0 - u * u)) * (std::cos(phi) * e2 + std::sin(phi) * e3));
      const Vec3 s = kappa * beta - wp;
      const Complex den = s.squaredNorm() - zeta * beta.dot(s);
      const CVec3 w = wp.cast<Complex>() + kI * eta * beta.cast<Complex>();
      return std::abs(fourier_fast(q, w)) / std::abs(den);
    };
    auto radial_part = [&](double rho) {
      if (rho <= 0.0) return 0.0;
      // Inner errors δ(ρ) contribute ∫ ρ² δ dρ; keep that below the floor.
      const double inner_abs = floor / (rho * rho * rho_max);
      const quad::Options inner{inner_abs, 0.1 * rel, 400, false};
      double v;
      if (radial) {
        v = 2.0 * kPi * quad::integrate([&](double u) { return point(rho, u, 0.0); }, ub, inner).value;
      } else {
        const quad::Options ring{inner_abs / (2.0 * kPi), 0.1 * rel, 200, false};
        const double br[3] = {0.0, kPi, 2.0 * kPi};
        v = quad::integrate(
                [&](double u) {
                  return quad::integrate([&](double phi) { return point(rho, u, phi); },
                                         std::span<const double>(br, 3), ring)
                      .value;
                },
                ub, inner)
                .value;
      }
      return rho * rho * v;
    };
    const quad::Options outer{floor, rel, 2000, false};
    return quad::integrate(radial_part, rho_breaks, outer).value;
  };

  double best = 0.0;
  for (const auto& beta : betas) {
    // A coarse pass fixes the absolute scale, so the accurate pass does not chase
    // round-off in the far tail of |q̃|.
    const double coarse = integral(beta, 1e-3, 0.0);
    best = std::max(best, integral(beta, opt.rel_tol, 0.1 * opt.rel_tol * coarse));
  }
  return best;
}

Complex appendix_i1(const PotentialSpec& q, const Vec3& x, const Vec3& y, const ComplexFrequency& freq) {
  require_admissible(q, "appendix_i1");
  const SpheroidalIntegral si(q, x, y);
  return si.evaluate(freq.two_k());
}

}  // namespace bsl
