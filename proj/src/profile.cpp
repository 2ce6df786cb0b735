#include "convac/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convac/errors.hpp"

namespace convac {

Profile solve_profile(const Potential& f, double L, double h) {
  f.validate();
  if (L < 20 || h > 0.1 || h <= 0) throw std::invalid_argument("solve_profile: need L_rho >= 20 and 0 < h_rho <= 0.1");
  double nint = 2 * L / h;
  long intervals = std::lround(nint);
  if (std::abs(nint - intervals) > 1e-9 || intervals % 2 != 0)
    throw std::invalid_argument("solve_profile: 2 L_rho / h_rho must be an even integer");
  const int N = int(intervals) + 1, c = N / 2;

  Profile p;
  p.f = f;
  p.L = L;
  p.h = h;
  p.rho.resize(N);
  p.theta0.assign(N, 0.0);
  for (int i = 0; i < N; ++i) p.rho[i] = -L + i * h;
  p.rho[c] = 0;

  // first integral theta' = sqrt(2 f(theta)) from theta(0) = 0; past theta = 1/2
  // integrate w = 1 - theta so the tail keeps its relative precision
  const int nsub = std::max(16, int(std::ceil(h / 7.8125e-4)));
  const double k = h / nsub;
  p.theta0_p.assign(N, 0.0);
  p.theta0_pp.assign(N, 0.0);
  auto F = [&](double w) {
    double a, b;
    f.near_one(w, a, b);
    return a;
  };
  double th = 0, w = 1;
  bool tail = false;
  p.theta0_p[c] = f.sqrt2f(0);
  p.theta0_pp[c] = f.fp(0);
  for (int i = c + 1; i < N; ++i) {
    for (int m = 0; m < nsub; ++m) {
      if (!tail) {
        auto rhs = [&](double x) { return f.sqrt2f(x); };
        double k1 = rhs(th), k2 = rhs(th + 0.5 * k * k1), k3 = rhs(th + 0.5 * k * k2), k4 = rhs(th + k * k3);
        th += k / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (th > 0.5) {
          tail = true;
          w = 1 - th;
        }
      } else {
        double k1 = -F(w), k2 = -F(w + 0.5 * k * k1), k3 = -F(w + 0.5 * k * k2), k4 = -F(w + k * k3);
        w += k / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
    }
    if (tail) {
      p.theta0[i] = 1 - w;
      f.near_one(w, p.theta0_p[i], p.theta0_pp[i]);
    } else {
      p.theta0[i] = th;
      p.theta0_p[i] = f.sqrt2f(th);
      p.theta0_pp[i] = f.fp(th);
    }
    p.theta0[2 * c - i] = -p.theta0[i];
    p.theta0_p[2 * c - i] = p.theta0_p[i];
    p.theta0_pp[2 * c - i] = -p.theta0_pp[i];
  }
  p.fpp.resize(N);
  for (int i = 0; i < N; ++i) p.fpp[i] = f.fpp(p.theta0[i]);
  p.alpha = std::sqrt(std::min(f.fpp(-1), f.fpp(1)));
  return p;
}

double integrate(const Profile& prof, const std::vector<double>& u) {
  const int N = prof.size();
  double s = u[0] + u[N - 1];
  for (int i = 1; i < N - 1; ++i) s += (i % 2 ? 4 : 2) * u[i];
  return s * prof.h / 3;
}

double sigma(const Profile& prof) {
  std::vector<double> w(prof.size());
  for (int i = 0; i < prof.size(); ++i) w[i] = prof.theta0_p[i] * prof.theta0_p[i];
  double tail = (w.front() + w.back()) / (2 * prof.alpha);
  return integrate(prof, w) + tail;
}

int detect_parity(const std::vector<double>& u, double tol) {
  const int N = int(u.size());
  double big = 0, odd_def = 0, even_def = 0;
  for (int i = 0; i < N; ++i) {
    big = std::max(big, std::abs(u[i]));
    odd_def = std::max(odd_def, std::abs(u[i] + u[N - 1 - i]));
    even_def = std::max(even_def, std::abs(u[i] - u[N - 1 - i]));
  }
  if (big == 0) return -1;
  if (odd_def <= tol * big) return -1;
  if (even_def <= tol * big) return 1;
  return 0;
}

double decay_constant(const Profile& prof, const std::vector<double>& u, int i, double lo, double hi) {
  const double a = 0.9 * prof.alpha;
  double big = 0;
  for (double v : u) big = std::max(big, std::abs(v));
  double C = 0;
  for (int k = 0; k < prof.size(); ++k) {
    double r = std::abs(prof.rho[k]);
    if (r < lo || r > hi || std::abs(u[k]) <= 1e-13 * big) continue;
    double w = std::pow(1 + r, i) * std::exp(-a * r);
    C = std::max(C, std::abs(u[k]) / w);
  }
  return C;
}

bool verify_decay(const Profile& prof, const std::vector<double>& u, int i) {
  for (double v : u)
    if (!std::isfinite(v)) return false;
  double c_in = decay_constant(prof, u, i, 1, prof.L / 2);
  double c_tail = decay_constant(prof, u, i, prof.L / 2, prof.L - 2);
  return c_tail <= c_in * (1 + 1e-6) || c_tail == 0;
}

namespace {
// Thomas algorithm; throws SingularSystem on a vanishing pivot
std::vector<double> thomas(std::vector<double> lo, std::vector<double> di, std::vector<double> up, std::vector<double> b) {
  const int N = int(di.size());
  double scale = 0;
  for (double v : di) scale = std::max(scale, std::abs(v));
  for (int i = 1; i < N; ++i) {
    if (std::abs(di[i - 1]) < 1e-14 * scale) throw SingularSystem("vanishing pivot in layer solve");
    double m = lo[i] / di[i - 1];
    di[i] -= m * up[i - 1];
    b[i] -= m * b[i - 1];
  }
  if (std::abs(di[N - 1]) < 1e-14 * scale) throw SingularSystem("vanishing pivot in layer solve");
  std::vector<double> x(N);
  x[N - 1] = b[N - 1] / di[N - 1];
  for (int i = N - 2; i >= 0; --i) x[i] = (b[i] - up[i] * x[i + 1]) / di[i];
  for (double v : x)
    if (!std::isfinite(v)) throw SingularSystem("non-finite layer solution");
  return x;
}
}  // namespace

LinearizedSolver::LinearizedSolver(const Profile& prof) : prof_(prof) {
  const int N = prof.size(), c = prof.center();
  const double h = prof.h, h2 = h * h;
  const auto& q = prof.fpp;
  lo_.assign(N, 0.0);
  di_.assign(N, 0.0);
  up_.assign(N, 0.0);
  for (int i = 1; i < N - 1; ++i) {
    lo_[i] = -(1 - h2 * q[i - 1] / 12) / h2;
    di_[i] = (2 + 10 * h2 * q[i] / 12) / h2;
    up_[i] = -(1 - h2 * q[i + 1] / 12) / h2;
  }
  // decaying modes e^{kL rho} at -L and e^{-kR rho} at +L
  double kL = std::sqrt(prof.f.fpp(-1)), kR = std::sqrt(prof.f.fpp(1));
  di_[0] = 1 / h2;
  up_[0] = -std::exp(-kL * h) / h2;
  di_[N - 1] = 1 / h2;
  lo_[N - 1] = -std::exp(-kR * h) / h2;

  // left null vector: A^T psi = 0 except at the center row, psi_c = 1
  std::vector<double> tlo(N, 0.0), tdi = di_, tup(N, 0.0), rhs(N, 0.0);
  for (int i = 1; i < N; ++i) tlo[i] = up_[i - 1];
  for (int i = 0; i < N - 1; ++i) tup[i] = lo_[i + 1];
  tlo[c] = tup[c] = 0;
  tdi[c] = 1;
  rhs[c] = 1;
  psi_ = thomas(tlo, tdi, tup, rhs);
  e_ = apply_B(prof.theta0_p);
  psi_e_ = 0;
  for (int i = 0; i < N; ++i) psi_e_ += psi_[i] * e_[i];
}

std::vector<double> LinearizedSolver::apply_B(const std::vector<double>& g) const {
  const int N = prof_.size();
  std::vector<double> b(N, 0.0);
  for (int i = 1; i < N - 1; ++i) b[i] = (g[i - 1] + 10 * g[i] + g[i + 1]) / 12;
  return b;
}

double LinearizedSolver::compatibility(const std::vector<double>& g) const {
  std::vector<double> w(g.size());
  for (size_t i = 0; i < g.size(); ++i) w[i] = g[i] * prof_.theta0_p[i];
  return integrate(prof_, w);
}

RadialFunction LinearizedSolver::solve(const std::vector<double>& g, int decay_power) const {
  const int N = prof_.size(), c = prof_.center();
  if (int(g.size()) != N) throw std::invalid_argument("solve_linearized: g not on the profile grid");
  double gmax = 0;
  for (double v : g) {
    if (!std::isfinite(v)) throw std::invalid_argument("solve_linearized: non-finite g");
    gmax = std::max(gmax, std::abs(v));
  }
  RadialFunction out;
  out.u.assign(N, 0.0);
  out.parity = -1;
  out.decay_verified = true;
  if (gmax == 0) return out;
  double comp = compatibility(g);
  if (std::abs(comp) > 1e-8 * gmax) throw SolvabilityViolated("int g theta0' = " + std::to_string(comp));
  if (std::max(std::abs(g.front()), std::abs(g.back())) > 1e-10 * gmax)
    throw std::invalid_argument("solve_linearized: g does not decay on the truncated grid");

  std::vector<double> b = apply_B(g);
  double gamma = 0;
  for (int i = 0; i < N; ++i) gamma += psi_[i] * b[i];
  gamma /= psi_e_;
  for (int i = 0; i < N; ++i) b[i] -= gamma * e_[i];
  std::vector<double> lo = lo_, di = di_, up = up_;
  lo[c] = up[c] = 0;
  di[c] = 1;
  b[c] = 0;
  out.u = thomas(lo, di, up, b);
  out.u[c] = 0;
  out.parity = detect_parity(out.u);
  out.decay_verified = verify_decay(prof_, out.u, decay_power);
  return out;
}

std::vector<double> LinearizedSolver::residual(const std::vector<double>& u, const std::vector<double>& g) const {
  const int N = prof_.size();
  std::vector<double> bg = apply_B(g), r(N, 0.0);
  for (int i = 1; i < N - 1; ++i) r[i] = lo_[i] * u[i - 1] + di_[i] * u[i] + up_[i] * u[i + 1] - bg[i];
  return r;
}

RadialFunction solve_linearized(const RadialFunction& g, const Profile& prof) {
  return LinearizedSolver(prof).solve(g.u);
}

std::vector<double> grid_derivative(const std::vector<double>& u, double h) {
  const int N = int(u.size());
  std::vector<double> d(N, 0.0);
  for (int i = 0; i < N; ++i) {
    if (i >= 3 && i < N - 3) {
      d[i] = (-u[i - 3] + 9 * u[i - 2] - 45 * u[i - 1] + 45 * u[i + 1] - 9 * u[i + 2] + u[i + 3]) / (60 * h);
    } else if (i >= 1 && i < N - 1) {
      d[i] = (u[i + 1] - u[i - 1]) / (2 * h);
    } else if (i == 0) {
      d[i] = (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h);
    } else {
      d[i] = (3 * u[N - 1] - 4 * u[N - 2] + u[N - 3]) / (2 * h);
    }
  }
  return d;
}

RadialInterp::RadialInterp(const Profile& prof, std::vector<double> u, std::vector<double> up, std::vector<double> upp)
    : L_(prof.L), h_(prof.h), n_(prof.size()), u_(std::move(u)), up_(std::move(up)), upp_(std::move(upp)) {}

RadialInterp RadialInterp::from_solution(const Profile& prof, const std::vector<double>& u, const std::vector<double>& g) {
  std::vector<double> upp(u.size());
  for (size_t i = 0; i < u.size(); ++i) upp[i] = prof.fpp[i] * u[i] - g[i];
  return RadialInterp(prof, u, grid_derivative(u, prof.h), std::move(upp));
}

RadialInterp RadialInterp::theta0(const Profile& prof) {
  return RadialInterp(prof, prof.theta0, prof.theta0_p, prof.theta0_pp);
}

void RadialInterp::eval(double rho, double out[3]) const {
  if (rho <= -L_) {
    out[0] = u_.front();
    out[1] = out[2] = 0;
    return;
  }
  if (rho >= L_) {
    out[0] = u_.back();
    out[1] = out[2] = 0;
    return;
  }
  double x = (rho + L_) / h_;
  int i = std::min(int(x), n_ - 2);
  double t = x - i, t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  double H[6] = {1 - 10 * t3 + 15 * t4 - 6 * t5,
                 t - 6 * t3 + 8 * t4 - 3 * t5,
                 0.5 * (t2 - 3 * t3 + 3 * t4 - t5),
                 0.5 * (t3 - 2 * t4 + t5),
                 -4 * t3 + 7 * t4 - 3 * t5,
                 10 * t3 - 15 * t4 + 6 * t5};
  double D[6] = {-30 * t2 + 60 * t3 - 30 * t4,
                 1 - 18 * t2 + 32 * t3 - 15 * t4,
                 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4),
                 0.5 * (3 * t2 - 8 * t3 + 5 * t4),
                 -12 * t2 + 28 * t3 - 15 * t4,
                 30 * t2 - 60 * t3 + 30 * t4};
  double DD[6] = {-60 * t + 180 * t2 - 120 * t3,
                  -36 * t + 96 * t2 - 60 * t3,
                  0.5 * (2 - 18 * t + 36 * t2 - 20 * t3),
                  0.5 * (6 * t - 24 * t2 + 20 * t3),
                  -24 * t + 84 * t2 - 60 * t3,
                  60 * t - 180 * t2 + 120 * t3};
  double y[6] = {u_[i], h_ * up_[i], h_ * h_ * upp_[i], h_ * h_ * upp_[i + 1], h_ * up_[i + 1], u_[i + 1]};
  double v = 0, d = 0, dd = 0;
  for (int k = 0; k < 6; ++k) {
    v += H[k] * y[k];
    d += D[k] * y[k];
    dd += DD[k] * y[k];
  }
  out[0] = v;
  out[1] = d / h_;
  out[2] = dd / (h_ * h_);
}

double RadialInterp::operator()(double rho) const {
  double o[3];
  eval(rho, o);
  return o[0];
}

}  // namespace convac
