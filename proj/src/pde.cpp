#include "convac/pde.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "convac/errors.hpp"

namespace convac {

ScalarField2D::ScalarField2D(int N_, double value, double t_) : N(N_), t(t_), v((N_ + 1) * (N_ + 1), value) {
  if (N < 2) throw std::invalid_argument("grid needs N >= 2");
  for (int k = 0; k <= N; ++k) (*this)(0, k) = (*this)(N, k) = (*this)(k, 0) = (*this)(k, N) = -1;
}

double ScalarField2D::max_abs() const {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void validate(const SolverConfig& cfg, const VelocityField& v, int N) {
  double h = 1.0 / N;
  if (!(cfg.eps > 0) || !(cfg.m0 > 0) || !(cfg.T0 >= 0)) throw ConfigError("solver needs eps > 0, m0 > 0, T0 >= 0");
  double vmax = v.max_speed();
  double lim = cfg.eps * h;
  if (vmax > 0) lim = std::min(lim, cfg.cfl * h / vmax);
  if (!(cfg.dt > 0) || cfg.dt > lim * (1 + 1e-12))
    throw CFLViolated("dt = " + std::to_string(cfg.dt) + " exceeds min(CFL h/|v|, eps h) = " + std::to_string(lim));
  double fmax = cfg.f.max_abs_fpp(1.2);
  if (cfg.stab < fmax) throw ConfigError("stabilization below max |f''| on [-1.2, 1.2]");
}

double aligned_dt(const SolverConfig& cfg, const VelocityField& v, int N, int snapshots) {
  double h = 1.0 / N, vmax = v.max_speed();
  double lim = cfg.eps * h;
  if (vmax > 0) lim = std::min(lim, cfg.cfl * h / vmax);
  if (cfg.T0 == 0) return lim;
  int k = std::max(1, snapshots);
  long per = long(std::ceil(cfg.T0 / (k * lim) - 1e-12));
  return cfg.T0 / (double(k) * per);
}

double l2_norm(const ScalarField2D& u) {
  double s = 0;
  for (double x : u.v) s += x * x;
  return std::sqrt(s) * u.h();
}

ScalarField2D well_prepared_initial(const ApproximateSolution& ca, int N, double amp, std::uint64_t seed) {
  if (amp < 0) throw std::invalid_argument("perturbation amplitude must be >= 0");
  ScalarField2D c(N, -1.0, 0.0);
  ApproximateSolution::Slice sl = ca.slice(0);
  double delta = ca.data().opts.delta;
  ScalarField2D bump(N, 0.0, 0.0);
  for (double& x : bump.v) x = 0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  double ac[5], bc[5];
  for (int k = 0; k < 5; ++k) {
    ac[k] = U(rng);
    bc[k] = U(rng);
  }
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) {
      auto L = sl.evaluate(c.x(i, j));
      c(i, j) = L.c;
      if (amp > 0 && L.in_tube && std::abs(L.r) < delta) {
        double q = 1 - (L.r / delta) * (L.r / delta);
        double ang = 0;
        for (int k = 0; k < 5; ++k) ang += ac[k] * std::cos(k * L.s) + bc[k] * std::sin(k * L.s);
        bump(i, j) = q * q * q * ang;
      }
    }
  if (amp > 0) {
    double nb = l2_norm(bump);
    if (nb == 0) throw ResolutionInsufficient("grid too coarse to carry the perturbation");
    double scale = amp * std::pow(ca.eps(), 2.5) / nb;
    for (size_t k = 0; k < c.v.size(); ++k) c.v[k] += scale * bump.v[k];
  }
  return c;
}

double energy(const ScalarField2D& c, double eps, const Potential& f) {
  const int N = c.N;
  const double h = c.h();
  double grad = 0, pot = 0;
  for (int i = 0; i <= N; ++i) {
    double row = 0;
    for (int j = 0; j <= N; ++j) {
      if (i < N) row += std::pow(c(i + 1, j) - c(i, j), 2);
      if (j < N) row += std::pow(c(i, j + 1) - c(i, j), 2);
      pot += f.f(c(i, j));
    }
    grad += row;
  }
  return eps / 2 * grad + h * h * pot / eps;
}

namespace {

// (1 + a) u - b (sum of neighbours - 4u) on the interior; boundary entries of u are 0
void apply_op(const std::vector<double>& u, std::vector<double>& out, int N, double a, double b) {
  const int P = N + 1;
#pragma omp parallel for schedule(static)
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) {
      int k = i * P + j;
      out[k] = (1 + a + 4 * b) * u[k] - b * (u[k - P] + u[k + P] + u[k - 1] + u[k + 1]);
    }
}

// row-partial sums combined in fixed order
double dot_interior(const std::vector<double>& x, const std::vector<double>& y, int N) {
  const int P = N + 1;
  std::vector<double> rows(N + 1, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 1; i < N; ++i) {
    double s = 0;
    for (int j = 1; j < N; ++j) s += x[i * P + j] * y[i * P + j];
    rows[i] = s;
  }
  double s = 0;
  for (double r : rows) s += r;
  return s;
}

double upwind(const ScalarField2D& c, int i, int j, int di, int dj, double vel) {
  const int N = c.N;
  double h = c.h();
  int k = di ? i : j;
  if (vel > 0) {
    if (k >= 2) return (3 * c(i, j) - 4 * c(i - di, j - dj) + c(i - 2 * di, j - 2 * dj)) / (2 * h);
    return (c(i, j) - c(i - di, j - dj)) / h;
  }
  if (vel < 0) {
    if (k <= N - 2) return (-3 * c(i, j) + 4 * c(i + di, j + dj) - c(i + 2 * di, j + 2 * dj)) / (2 * h);
    return (c(i + di, j + dj) - c(i, j)) / h;
  }
  return 0;
}

}  // namespace

ScalarField2D step(const ScalarField2D& c, const VelocityField& v, const SolverConfig& cfg, int* cg_iterations) {
  const int N = c.N, P = N + 1;
  const double h = c.h(), dt = cfg.dt, eps = cfg.eps, m0 = cfg.m0, S = cfg.stab;
  const double a = dt * m0 * S / eps, b = dt * m0 * eps / (h * h);
  // right-hand side on the interior, Dirichlet data moved over
  std::vector<double> rhs(P * P, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) {
      double u = c(i, j);
      Vec2 vx = v(c.x(i, j));
      double adv = vx.x * upwind(c, i, j, 1, 0, vx.x) + vx.y * upwind(c, i, j, 0, 1, vx.y);
      double r = u + dt * (m0 / eps * (S * u - cfg.f.fp(u)) - adv);
      double bd = 0;
      if (i == 1) bd += c(0, j);
      if (i == N - 1) bd += c(N, j);
      if (j == 1) bd += c(i, 0);
      if (j == N - 1) bd += c(i, N);
      rhs[i * P + j] = r + b * bd;
    }
  // conjugate gradients, initial guess c
  std::vector<double> x(P * P, 0.0), r(P * P, 0.0), p(P * P, 0.0), Ap(P * P, 0.0);
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) x[i * P + j] = c(i, j);
  apply_op(x, Ap, N, a, b);
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) r[i * P + j] = rhs[i * P + j] - Ap[i * P + j];
  p = r;
  double rr = dot_interior(r, r, N), bb = dot_interior(rhs, rhs, N);
  double tol2 = cfg.cg_tol * cfg.cg_tol * std::max(bb, 1e-300);
  int it = 0;
  while (rr > tol2) {
    if (++it > cfg.cg_max_iter) throw LinearSolveDiverged("conjugate gradients did not reach the tolerance");
    apply_op(p, Ap, N, a, b);
    double alpha = rr / dot_interior(p, Ap, N);
    for (int i = 1; i < N; ++i)
      for (int j = 1; j < N; ++j) {
        int k = i * P + j;
        x[k] += alpha * p[k];
        r[k] -= alpha * Ap[k];
      }
    double rr1 = dot_interior(r, r, N);
    if (!std::isfinite(rr1)) throw LinearSolveDiverged("non-finite residual in conjugate gradients");
    double beta = rr1 / rr;
    rr = rr1;
    for (int i = 1; i < N; ++i)
      for (int j = 1; j < N; ++j) {
        int k = i * P + j;
        p[k] = r[k] + beta * p[k];
      }
  }
  if (cg_iterations) *cg_iterations += it;
  ScalarField2D out(N, -1.0, c.t + dt);
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) out(i, j) = x[i * P + j];
  return out;
}

Trajectory run(const ScalarField2D& c0, const VelocityField& v, const SolverConfig& cfg,
               const std::vector<double>& snapshot_times) {
  Trajectory tr;
  std::vector<long> at;
  for (double ts : snapshot_times) {
    if (ts < -1e-12 || ts > cfg.T0 + 1e-12) throw std::invalid_argument("snapshot time outside [0, T0]");
    if (ts == 0) {
      at.push_back(0);
      continue;
    }
    validate(cfg, v, c0.N);
    long n = std::lround(ts / cfg.dt);
    if (std::abs(n * cfg.dt - ts) > 1e-9 * std::max(1.0, cfg.T0)) throw GridMismatch("snapshot time not on the step grid");
    at.push_back(n);
  }
  long nsteps = at.empty() ? 0 : *std::max_element(at.begin(), at.end());
  ScalarField2D c = c0;
  tr.max_abs = c.max_abs();
  auto record = [&](long n) {
    for (size_t k = 0; k < at.size(); ++k)
      if (at[k] == n) {
        tr.snapshots.push_back(c);
        tr.snapshots.back().t = snapshot_times[k];
        tr.energy.push_back(energy(c, cfg.eps, cfg.f));
      }
  };
  record(0);
  for (long n = 1; n <= nsteps; ++n) {
    c = step(c, v, cfg, &tr.cg_iterations);
    double m = c.max_abs();
    if (!std::isfinite(m)) throw NonFinite("solution overflowed at step " + std::to_string(n));
    tr.max_abs = std::max(tr.max_abs, m);
    record(n);
  }
  tr.steps = int(nsteps);
  return tr;
}

}  // namespace convac
