#pragma once

#include "bsl/common.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace bsl::quad {

struct Options {
  double abs_tol = 1e-8;
  double rel_tol = 1e-10;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

template <typename T>
struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// Gauss–Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached Gauss–Legendre rule with n points (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

namespace detail {

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename F>
auto gk15(F& f, double a, double b) {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double hl = 0.5 * (b - a);
  const T fc = f(c);
  T k = fc * kWgk[7];
  T g = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = hl * kXgk[j];
    const T s = f(c - dx) + f(c + dx);
    k += s * kWgk[j];
    if (j % 2 == 1) g += s * kWg[j / 2];
  }
  k *= hl;
  g *= hl;
  return Segment<T>{a, b, k, std::abs(k - g)};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) integration over the consecutive
/// intervals defined by `breaks` (sorted). The integrand may be real or complex.
template <typename F>
auto integrate(F&& f, std::span<const double> breaks, const Options& opt = {}) {
  using T = std::decay_t<decltype(f(0.0))>;
  Result<T> out;
  if (breaks.size() < 2) return out;
  std::priority_queue<detail::Segment<T>> heap;
  T total{};
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    auto seg = detail::gk15(f, breaks[i], breaks[i + 1]);
    out.evaluations += 15;
    total += seg.value;
    err += seg.error;
    heap.push(seg);
  }
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (intervals >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {  // interval exhausted at machine precision
      out.converged = false;
      break;
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  T resum{};
  double reerr = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    reerr += heap.top().error;
    heap.pop();
  }
  out.value = resum;
  out.error = reerr;
  if (!out.converged && opt.throw_on_failure)
    throw QuadratureNotConverged("adaptive quadrature exceeded its interval budget (error estimate " +
                                 std::to_string(reerr) + ")");
  return out;
}

template <typename F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
  const double br[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(br, 2), opt);
}

/// Sorted, de-duplicated breakpoints on [a, b]: the given interior points plus a
/// uniform subdivision with panels no longer than `max_panel`.
std::vector<double> make_breaks(double a, double b, std::span<const double> interior,
                                double max_panel);

/// Composite fixed-order Gauss–Legendre rule over `panels` equal panels.
template <typename F>
auto integrate_fixed(F&& f, double a, double b, int panels, const GaussRule& rule) {
  using T = std::decay_t<decltype(f(a))>;
  T total{};
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * w;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      total += f(c + 0.5 * w * rule.nodes[i]) * (0.5 * w * rule.weights[i]);
  }
  return total;
}

}  // namespace bsl::quad
