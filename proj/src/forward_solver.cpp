#include "bsl/forward_solver.hpp"

#include "bsl/sphere.hpp"

#include <Eigen/SparseCore>
#include <unsupported/Eigen/IterativeSolvers>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace bsl {
class ActiveSystem;
}

namespace Eigen::internal {
template <>
struct traits<bsl::ActiveSystem> : public traits<SparseMatrix<std::complex<double>>> {};
}  // namespace Eigen::internal

namespace bsl {

// f ↦ f + K(q·f) on the active cells, as a matrix-free operator for Eigen's GMRES.
class ActiveSystem : public Eigen::EigenBase<ActiveSystem> {
 public:
  using Scalar = Complex;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  explicit ActiveSystem(const VolumeOperator& op) : op_(&op) {}
  Eigen::Index rows() const { return static_cast<Eigen::Index>(op_->active().size()); }
  Eigen::Index cols() const { return rows(); }

  template <typename Rhs>
  Eigen::Product<ActiveSystem, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<ActiveSystem, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(const Eigen::VectorXcd& f, Eigen::VectorXcd& out) const {
    op_->apply_active(f, out);
    out += f;
  }

 private:
  const VolumeOperator* op_;
};

}  // namespace bsl

namespace Eigen::internal {
template <typename Rhs>
struct generic_product_impl<bsl::ActiveSystem, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<bsl::ActiveSystem, Rhs, generic_product_impl<bsl::ActiveSystem, Rhs>> {
  using Scalar = typename Product<bsl::ActiveSystem, Rhs>::Scalar;
  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const bsl::ActiveSystem& lhs, const Rhs& rhs, const Scalar& alpha) {
    Eigen::VectorXcd out;
    lhs.apply(Eigen::VectorXcd(rhs), out);
    dst += alpha * out;
  }
};
}  // namespace Eigen::internal

namespace bsl {

Eigen::VectorXcd plane_wave(const GridGeometry& g, const Vec3& alpha, const ComplexFrequency& freq) {
  const Complex k = freq.k();
  Eigen::VectorXcd u(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) u[static_cast<Eigen::Index>(i)] = std::exp(kI * k * alpha.dot(g.point(i)));
  return u;
}

// ------------------------------------------------------------- VolumeOperator

VolumeOperator::VolumeOperator(const PotentialGrid& q, const ComplexFrequency& freq, std::optional<Vec3> reduced_beta)
    : grid_(q.geometry()), freq_(freq), beta_(reduced_beta), q_(q.values()) {
  const int n = grid_.n;
  const double h = grid_.h();
  const double cell = h * h * h;
  const std::ptrdiff_t m = 2 * n - 1;
  table_re_.resize(static_cast<std::size_t>(m * m * m));
  table_im_.resize(table_re_.size());
  const double R = h * std::cbrt(3.0 / (4.0 * kPi));
  self_weight_ = 0.5 * R * R;
  for (std::ptrdiff_t dk = 0; dk < m; ++dk)
    for (std::ptrdiff_t dj = 0; dj < m; ++dj)
      for (std::ptrdiff_t di = 0; di < m; ++di) {
        const Vec3 r(h * static_cast<double>(di - (n - 1)), h * static_cast<double>(dj - (n - 1)),
                     h * static_cast<double>(dk - (n - 1)));
        const auto idx = static_cast<std::size_t>(di + m * (dj + m * dk));
        const Complex v = (di == n - 1 && dj == n - 1 && dk == n - 1) ? Complex(self_weight_) : cell * kernel(r);
        table_re_[idx] = v.real();
        table_im_[idx] = v.imag();
      }

  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    if (q_[static_cast<Eigen::Index>(idx)] == 0.0) continue;
    const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(idx % n);
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>((idx / n) % n);
    const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(idx / (static_cast<std::size_t>(n) * n));
    const std::ptrdiff_t off = i + m * (j + m * k);
    if (!active_.empty() && active_.back() + 1 == idx && i > 0)
      ++runs_.back().length;
    else
      runs_.push_back({off, active_.size(), 1});
    active_.push_back(idx);
    active_offset_.push_back(off);
  }
}

Complex VolumeOperator::kernel(const Vec3& r) const {
  const double d = r.norm();
  const Complex k = freq_.k();
  const double phase = beta_ ? d - beta_->dot(r) : d;
  return std::exp(kI * k * phase) / (4.0 * kPi * d);
}

void VolumeOperator::accumulate(std::ptrdiff_t base, const double* src_re, const double* src_im,
                                Complex& acc) const {
  double re = 0.0, im = 0.0;
  for (const Run& run : runs_) {
    // Table entries for consecutive cells of a run are consecutive in reverse.
    const double* tr = table_re_.data() + (base - run.offset);
    const double* ti = table_im_.data() + (base - run.offset);
    const double* sr = src_re + run.first;
    const double* si = src_im + run.first;
    const std::ptrdiff_t len = static_cast<std::ptrdiff_t>(run.length);
#pragma omp simd reduction(+ : re, im)
    for (std::ptrdiff_t t = 0; t < len; ++t) {
      re += tr[-t] * sr[t] - ti[-t] * si[t];
      im += tr[-t] * si[t] + ti[-t] * sr[t];
    }
  }
  acc = Complex(re, im);
}

void VolumeOperator::apply(const Eigen::VectorXcd& f, Eigen::VectorXcd& out) const {
  if (f.size() != static_cast<Eigen::Index>(grid_.size())) throw GridMismatch("field size does not match grid");
  const int n = grid_.n;
  const std::ptrdiff_t m = 2 * n - 1;
  const std::size_t na = active_.size();
  std::vector<double> sr(na), si(na);
  for (std::size_t a = 0; a < na; ++a) {
    const auto ia = static_cast<Eigen::Index>(active_[a]);
    const Complex v = q_[ia] * f[ia];
    sr[a] = v.real();
    si[a] = v.imag();
  }
  out.resize(static_cast<Eigen::Index>(grid_.size()));
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(grid_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::ptrdiff_t i = idx % n, j = (idx / n) % n, k = idx / (static_cast<std::ptrdiff_t>(n) * n);
    const std::ptrdiff_t base = (i + n - 1) + m * ((j + n - 1) + m * (k + n - 1));
    Complex acc;
    accumulate(base, sr.data(), si.data(), acc);
    out[idx] = acc;
  }
}

void VolumeOperator::apply_active(const Eigen::VectorXcd& f, Eigen::VectorXcd& out) const {
  const std::size_t na = active_.size();
  if (f.size() != static_cast<Eigen::Index>(na)) throw GridMismatch("active field size does not match operator");
  const int n = grid_.n;
  const std::ptrdiff_t m = 2 * n - 1;
  const std::ptrdiff_t centre = (n - 1) + m * ((n - 1) + m * (n - 1));
  std::vector<double> sr(na), si(na);
  for (std::size_t a = 0; a < na; ++a) {
    const Complex v = q_[static_cast<Eigen::Index>(active_[a])] * f[static_cast<Eigen::Index>(a)];
    sr[a] = v.real();
    si[a] = v.imag();
  }
  out.resize(static_cast<Eigen::Index>(na));
  const std::ptrdiff_t nact = static_cast<std::ptrdiff_t>(na);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nact; ++b) {
    Complex acc;
    accumulate(centre + active_offset_[static_cast<std::size_t>(b)], sr.data(), si.data(), acc);
    out[b] = acc;
  }
}

// ------------------------------------------------------------------ solving

namespace {

void require_same_grid(const GridGeometry& a, const GridGeometry& b) {
  if (!(a == b)) throw GridMismatch("fields and potential live on different grids");
}

Eigen::VectorXcd gather(const Eigen::VectorXcd& full, const std::vector<std::size_t>& idx) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) out[static_cast<Eigen::Index>(a)] = full[static_cast<Eigen::Index>(idx[a])];
  return out;
}

}  // namespace

double spectral_radius_proxy(const VolumeOperator& op, int iterations) {
  if (iterations < 1) iterations = 1;
  const std::size_t na = op.active().size();
  if (na == 0) return 0.0;
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> n01;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(na)), w, w2;
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(n01(rng), n01(rng));
  v.normalize();
  double ratio = 0.0;
  for (int it = 0; it < iterations; ++it) {
    op.apply_active(v, w);
    op.apply_active(w, w2);
    ratio = w2.norm();
    if (ratio == 0.0) return 0.0;
    v = w2 / ratio;
  }
  return std::sqrt(ratio);
}

double VolumeOperator::cached_proxy() const {
  std::call_once(proxy_once_, [this] { proxy_ = spectral_radius_proxy(*this); });
  return proxy_;
}

double residual(const VolumeOperator& op, const ScatteringField& u) {
  require_same_grid(op.grid(), u.grid);
  if (u.variant != FieldVariant::FullU) return residual(op, to_full(u));
  const Eigen::VectorXcd u0 = plane_wave(u.grid, u.alpha, u.freq);
  Eigen::VectorXcd ku;
  op.apply(u.values, ku);
  return (u.values + ku - u0).norm() / u0.norm();
}

ScatteringField solve_scattering(const VolumeOperator& op, const Vec3& alpha, SolveMethod method,
                                 const SolverOptions& opt) {
  if (op.freq().eta() < 0.0) throw InvalidArgument("solver requires Im k >= 0");
  ScatteringField out;
  out.grid = op.grid();
  out.alpha = alpha;
  out.freq = op.freq();
  out.variant = FieldVariant::FullU;
  const Eigen::VectorXcd u0 = plane_wave(out.grid, alpha, out.freq);
  const auto& act = op.active();
  if (act.empty()) {
    out.values = u0;
    return out;
  }
  const Eigen::VectorXcd b = gather(u0, act);
  const double bnorm = b.norm();

  if (method != SolveMethod::KrylovIteration) {
    const double proxy = op.cached_proxy();
    if (method == SolveMethod::NeumannSeries && !(proxy < 1.0))
      throw NotConverged("Neumann series requested but the spectral-radius proxy is " + std::to_string(proxy), 0,
                         proxy);
    if (method == SolveMethod::Auto) method = proxy < opt.neumann_threshold ? SolveMethod::NeumannSeries
                                                                           : SolveMethod::KrylovIteration;
  }

  Eigen::VectorXcd x;
  int iters = 0;
  double res = 0.0;
  if (method == SolveMethod::NeumannSeries) {
    // u_{m+1} = u₀ − K(q·u_m)
    x = b;
    Eigen::VectorXcd kx;
    for (;;) {
      op.apply_active(x, kx);
      res = (x + kx - b).norm() / bnorm;
      if (res < opt.tol) break;
      if (iters >= opt.max_iterations)
        throw NotConverged("Neumann series did not converge", iters, res);
      x = b - kx;
      ++iters;
    }
  } else {
    ActiveSystem sys(op);
    Eigen::GMRES<ActiveSystem, Eigen::IdentityPreconditioner> gmres;
    gmres.set_restart(opt.restart);
    gmres.setMaxIterations(opt.max_iterations);
    // Eigen's criterion is the same relative residual; aim a little lower so the
    // independently recomputed residual clears the tolerance.
    gmres.setTolerance(0.5 * opt.tol);
    gmres.compute(sys);
    x = gmres.solveWithGuess(b, b);
    iters = static_cast<int>(gmres.iterations());
    Eigen::VectorXcd kx;
    op.apply_active(x, kx);
    res = (x + kx - b).norm() / bnorm;
    if (!(res < opt.tol)) throw NotConverged("Krylov iteration did not converge", iters, res);
  }

  // Extend to the whole grid: u = u₀ − K(q·u).
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(u0.size());
  for (std::size_t a = 0; a < act.size(); ++a) full[static_cast<Eigen::Index>(act[a])] = x[static_cast<Eigen::Index>(a)];
  Eigen::VectorXcd kfull;
  op.apply(full, kfull);
  out.values = u0 - kfull;
  for (std::size_t a = 0; a < act.size(); ++a)
    out.values[static_cast<Eigen::Index>(act[a])] = x[static_cast<Eigen::Index>(a)];
  out.iterations = iters;
  out.residual = res;
  return out;
}

ScatteringField solve_scattering(const PotentialGrid& q, const Vec3& alpha, const ComplexFrequency& freq,
                                 SolveMethod method, const SolverOptions& opt) {
  const VolumeOperator op(q, freq);
  return solve_scattering(op, alpha, method, opt);
}

ScatteringField to_epsilon(const ScatteringField& u) {
  if (u.variant == FieldVariant::Epsilon) return u;
  ScatteringField e = u;
  e.variant = FieldVariant::Epsilon;
  e.values = u.values.cwiseQuotient(plane_wave(u.grid, u.alpha, u.freq)).array() - 1.0;
  return e;
}

ScatteringField to_full(const ScatteringField& eps) {
  if (eps.variant == FieldVariant::FullU) return eps;
  ScatteringField u = eps;
  u.variant = FieldVariant::FullU;
  u.values = plane_wave(eps.grid, eps.alpha, eps.freq).cwiseProduct((eps.values.array() + 1.0).matrix());
  return u;
}

ScatteringField apply_T(const ScatteringField& field, const PotentialGrid& q, const KernelParams& params) {
  require_same_grid(field.grid, q.geometry());
  const VolumeOperator op(q, params.freq, params.beta);
  ScatteringField out = field;
  op.apply(field.values, out.values);
  return out;
}

AmplitudeSample amplitude(const PotentialGrid& q, const ScatteringField& u, const Vec3& beta) {
  require_same_grid(q.geometry(), u.grid);
  const ScatteringField full = to_full(u);
  const GridGeometry& g = q.geometry();
  const double cell = g.h() * g.h() * g.h();
  const Complex k = u.freq.k();
  Complex acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double qi = q.values()[static_cast<Eigen::Index>(i)];
    if (qi == 0.0) continue;
    acc += std::exp(-kI * k * beta.dot(g.point(i))) * qi * full.values[static_cast<Eigen::Index>(i)];
  }
  return {beta, u.alpha, u.freq, -acc * cell / (4.0 * kPi)};
}

// ------------------------------------------------------------ sweeps and cache

void AmplitudeTable::write_csv(std::ostream& os) const {
  os << "beta_x,beta_y,beta_z,alpha_x,alpha_y,alpha_z,kappa,eta,re_A,im_A\n";
  for (const auto& e : entries)
    os << format_double(e.beta.x()) << "," << format_double(e.beta.y()) << "," << format_double(e.beta.z()) << ","
       << format_double(e.alpha.x()) << "," << format_double(e.alpha.y()) << "," << format_double(e.alpha.z())
       << "," << format_double(e.freq.kappa()) << "," << format_double(e.freq.eta()) << ","
       << format_double(e.value.real()) << "," << format_double(e.value.imag()) << "\n";
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("BSL_CACHE_DIR"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "bslab";
  return ".bsl_cache";
}

namespace {

std::string grid_digest(const PotentialGrid& q) {
  if (!q.spec_hash().empty()) return q.spec_hash();
  const auto& v = q.values();
  return fnv1a_hex(std::string_view(reinterpret_cast<const char*>(v.data()), static_cast<std::size_t>(v.size()) * sizeof(double)));
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const PotentialGrid& q, const Vec3& alpha,
                                 const ComplexFrequency& f, const SolverOptions& opt) {
  std::ostringstream key;
  auto quant = [](double v) { return std::llround(v * 1e12); };
  key << grid_digest(q) << "|" << q.n() << "|" << format_double(q.a()) << "|" << format_double(f.kappa()) << "|"
      << format_double(f.eta()) << "|" << quant(alpha.x()) << "," << quant(alpha.y()) << "," << quant(alpha.z())
      << "|" << format_double(opt.tol);
  return dir / ("field_" + fnv1a_hex(key.str()) + ".bin");
}

bool read_cached(const std::filesystem::path& p, ScatteringField& u) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "BSF1") return false;
  std::uint64_t size = 0;
  in.read(reinterpret_cast<char*>(&size), sizeof size);
  if (!in || size != u.grid.size()) return false;
  u.values.resize(static_cast<Eigen::Index>(size));
  in.read(reinterpret_cast<char*>(u.values.data()), static_cast<std::streamsize>(size * sizeof(Complex)));
  in.read(reinterpret_cast<char*>(&u.residual), sizeof(double));
  return static_cast<bool>(in);
}

void write_cached(const std::filesystem::path& p, const ScatteringField& u) {
  std::filesystem::create_directories(p.parent_path());
  std::filesystem::path tmp = p;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;  // caching is best effort
    out.write("BSF1", 4);
    const std::uint64_t size = u.grid.size();
    out.write(reinterpret_cast<const char*>(&size), sizeof size);
    out.write(reinterpret_cast<const char*>(u.values.data()), static_cast<std::streamsize>(size * sizeof(Complex)));
    out.write(reinterpret_cast<const char*>(&u.residual), sizeof(double));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace

AmplitudeTable backscatter_sweep(const PotentialGrid& q, std::span<const Vec3> betas,
                                 std::span<const ComplexFrequency> ks, const SweepOptions& opt) {
  AmplitudeTable table;
  for (const auto& f : ks) {
    std::optional<VolumeOperator> op;
    for (const auto& b : betas) {
      const Vec3 beta = b.normalized();
      try {
        ScatteringField u;
        u.grid = q.geometry();
        u.alpha = beta;
        u.freq = f;
        bool hit = false;
        std::filesystem::path path;
        if (!opt.cache_dir.empty()) {
          path = cache_path(opt.cache_dir, q, beta, f, opt.solver);
          hit = read_cached(path, u);
        }
        if (!hit) {
          if (!op) op.emplace(q, f);
          u = solve_scattering(*op, beta, opt.method, opt.solver);
          if (!opt.cache_dir.empty()) write_cached(path, u);
        }
        table.entries.push_back(amplitude(q, u, -beta));
      } catch (const NotConverged& e) {
        table.failures.push_back(std::string(e.what()) + " (kappa=" + format_double(f.kappa()) +
                                 ", eta=" + format_double(f.eta()) + ")");
      }
    }
  }
  return table;
}

std::pair<Complex, Complex> amplitude_difference_check(const PotentialGrid& q1, const PotentialGrid& q2,
                                                       const Vec3& beta, const Vec3& alpha,
                                                       const ComplexFrequency& freq, const SolverOptions& opt) {
  require_same_grid(q1.geometry(), q2.geometry());
  const VolumeOperator op1(q1, freq), op2(q2, freq);
  const auto u1 = solve_scattering(op1, alpha, SolveMethod::Auto, opt);
  const auto u2 = solve_scattering(op2, alpha, SolveMethod::Auto, opt);
  const auto u2m = solve_scattering(op2, -beta, SolveMethod::Auto, opt);
  const Complex lhs = -4.0 * kPi * (amplitude(q1, u1, beta).value - amplitude(q2, u2, beta).value);
  const GridGeometry& g = q1.geometry();
  const double cell = g.h() * g.h() * g.h();
  Complex rhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double p = q1.values()[ii] - q2.values()[ii];
    if (p != 0.0) rhs += p * u1.values[ii] * u2m.values[ii];
  }
  return {lhs, rhs * cell};
}

// ------------------------------------------------------------------ ‖T²‖

std::vector<T2Estimate> t2_norm_sweep(const PotentialSpec& q, std::span<const ComplexFrequency> freqs, int probes,
                                      const T2Options& opt) {
  if (probes < 5) throw InvalidArgument("t2_norm_estimate needs at least 5 probes");
  std::vector<T2Estimate> out(freqs.size());
  for (std::size_t f = 0; f < freqs.size(); ++f) {
    out[f].freq = freqs[f];
    out[f].gamma = freqs[f].gamma();
  }
  if (q.is_zero()) return out;

  const double a = q.support_radius();
  const GridGeometry g{opt.quad_n, a};
  const double cell = g.h() * g.h() * g.h();
  std::vector<Vec3> ys;
  std::vector<double> qs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 y = g.point(i);
    const double v = eval_potential(q, y);
    if (v != 0.0) {
      ys.push_back(y);
      qs.push_back(v);
    }
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::vector<Vec3> xs{Vec3(1e-3, 2e-3, 3e-3)};  // off the cell centres
  // Probe points inside the support of the dominant piece.
  Vec3 centre = Vec3::Zero();
  double rad = a;
  double best = 0.0;
  for (const auto& b : q.pieces())
    if (std::abs(b.amplitude) > best) {
      best = std::abs(b.amplitude);
      centre = b.center;
      rad = b.radius;
    }
  xs[0] += centre;
  while (static_cast<int>(xs.size()) < probes) xs.push_back(centre + random_point_in_ball(rng, 0.5 * rad));

  SpheroidalIntegral::Options so;
  so.mode = SpheroidalIntegral::Mode::Tabulated;
  so.t_nodes = opt.t_nodes;
  so.psi_nodes = opt.psi_nodes;
  for (const auto& x : xs) {
    std::vector<Complex> field(ys.size());
    for (auto& v : field) v = std::polar(1.0, phase(rng));
    std::vector<Complex> probe(freqs.size(), 0.0);
    std::vector<double> row(freqs.size(), 0.0);
    for (std::size_t j = 0; j < ys.size(); ++j) {
      if ((ys[j] - x).norm() < 1e-9) continue;
      const SpheroidalIntegral si(q, x, ys[j], so);
      for (std::size_t f = 0; f < freqs.size(); ++f) {
        const Complex zeta = freqs[f].two_k();
        const Complex modulation = std::exp(-kI * zeta * opt.beta.dot(x - ys[j]));
        const Complex ixy = modulation * si.evaluate(zeta) / (16.0 * kPi * kPi);
        const Complex term = cell * qs[j] * ixy;
        probe[f] += term * field[j];
        row[f] += std::abs(term);
      }
    }
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      out[f].lower_bound = std::max(out[f].lower_bound, std::abs(probe[f]));
      out[f].value = std::max(out[f].value, row[f]);
    }
  }
  return out;
}

T2Estimate t2_norm_estimate(const PotentialSpec& q, const ComplexFrequency& freq, int probes, const T2Options& opt) {
  const ComplexFrequency f[1] = {freq};
  return t2_norm_sweep(q, f, probes, opt).front();
}

}  // namespace bsl
