#include "convac/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convac/errors.hpp"

namespace convac {

ApproximateSolution::ApproximateSolution(std::shared_ptr<const ExpansionData> data, double eps, bool include_c1,
                                         bool include_c2)
    : data_(std::move(data)), eps_(eps), with_c1_(include_c1), with_c2_(include_c2) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("eps must lie in (0, 1]");
}

ApproximateSolution assemble_cA(std::shared_ptr<const ExpansionData> data, double eps, bool include_c1,
                                bool include_c2) {
  return ApproximateSolution(std::move(data), eps, include_c1, include_c2);
}

ApproximateSolution::Slice ApproximateSolution::slice(double t) const {
  const CurveHistory& H = *data_->history;
  int k = H.segment_at(t);
  Slice sl(Chart(H.at(t, k), H.velocity(), data_->opts.delta));
  sl.t_ = t;
  sl.eps_ = eps_;
  sl.delta_ = data_->opts.delta;
  const LayerBasis& B = *data_->basis;
  sl.theta0_ = &B.theta0();
  auto w = time_weights(H, k, t);
  int M = H.M();
  auto blend = [&](auto field) {
    std::vector<double> out(M, 0.0);
    for (auto [n, wn] : w) {
      const std::vector<double>& v = field(data_->node(k, n));
      for (int j = 0; j < M; ++j) out[j] += wn * v[j];
    }
    return TrigSeries(out);
  };
  sl.h1_ = blend([](const NodeFields& F) -> const std::vector<double>& { return F.h1; });
  sl.h2_ = blend([](const NodeFields& F) -> const std::vector<double>& { return F.h2; });
  int km = std::max(sl.h1_.kmax(), sl.h2_.kmax());
  if (with_c1_)
    for (int id : data_->c1_active) {
      sl.c1_.emplace_back(&B.interp(id), blend([id](const NodeFields& F) -> const std::vector<double>& { return F.c1[id]; }));
      km = std::max(km, sl.c1_.back().second.kmax());
    }
  if (with_c2_)
    for (int id : data_->c2_active) {
      sl.c2_.emplace_back(&B.interp(id), blend([id](const NodeFields& F) -> const std::vector<double>& { return F.c2[id]; }));
      km = std::max(km, sl.c2_.back().second.kmax());
    }
  sl.kmax_ = km;
  return sl;
}

double ApproximateSolution::Slice::inner(double rho, const TrigTable& tab) const {
  double c = (*theta0_)(rho), a = 0, b = 0, coef;
  for (const auto& [W, ser] : c1_) {
    ser.eval(tab, &coef, 1);
    a += coef * (*W)(rho);
  }
  for (const auto& [W, ser] : c2_) {
    ser.eval(tab, &coef, 1);
    b += coef * (*W)(rho);
  }
  return c + eps_ * (a + eps_ * b);
}

ApproximateSolution::Slice::Local ApproximateSolution::Slice::evaluate(Vec2 x) const {
  Local out;
  auto tp = chart_.project_within(x, 2 * delta_);
  if (!tp) {
    out.c = far_value(x);
    out.r = out.c * 3 * delta_;
    return out;
  }
  out.r = tp->r;
  out.s = tp->s;
  if (std::abs(tp->r) >= 2 * delta_) {
    out.c = tp->r > 0 ? 1.0 : -1.0;
    return out;
  }
  out.in_tube = true;
  TrigTable tab(tp->s, kmax_);
  double h1, h2;
  h1_.eval(tab, &h1, 1);
  h2_.eval(tab, &h2, 1);
  out.rho = tp->r / eps_ - h1 - eps_ * h2;
  double z = zeta(tp->r, delta_);
  double cin = inner(out.rho, tab);
  out.c = z * cin + (1 - z) * (tp->r > 0 ? 1.0 : -1.0);
  return out;
}

std::optional<double> ApproximateSolution::Slice::rho(Vec2 x) const {
  auto tp = chart_.project_within(x, 2 * delta_);
  if (!tp || !tp->inside_tube) return std::nullopt;
  return tp->r / eps_ - h1_(tp->s) - eps_ * h2_(tp->s);
}

// ---------------------------------------------------------------------------

ResidualGrid residual_grid(double eps, double cells_per_eps, int time_samples, double m0) {
  ResidualGrid g;
  g.N = int(std::ceil(cells_per_eps / eps - 1e-9));
  g.dt_fd = eps / g.N;
  g.time_samples = time_samples;
  g.m0 = m0;
  return g;
}

namespace {

void check_grid(const ApproximateSolution& ca, const ResidualGrid& grid) {
  double h = 1.0 / grid.N, eps = ca.eps();
  if (grid.N <= 4 || h > eps / 8 * (1 + 1e-12))
    throw ResolutionInsufficient("residual grid h = " + std::to_string(h) + " exceeds eps/8");
  if (!(grid.dt_fd > 0) || grid.dt_fd > eps * h * (1 + 1e-12))
    throw ResolutionInsufficient("time difference step exceeds eps h");
  if (grid.time_samples < 1) throw std::invalid_argument("time_samples must be positive");
}

}  // namespace

std::vector<double> residual_field(const ApproximateSolution& ca, const VelocityField& v, const ResidualGrid& grid,
                                   double t, long* evaluations) {
  check_grid(ca, grid);
  const int N = grid.N, P = N + 1;
  const double h = 1.0 / N, eps = ca.eps(), m0 = grid.m0, dt = grid.dt_fd;
  const double delta = ca.data().opts.delta;
  const Potential& f = ca.potential();
  ApproximateSolution::Slice S0 = ca.slice(t), Sm = ca.slice(t - dt), Sp = ca.slice(t + dt);
  const Curve& cv = S0.curve();
  double hs = cv.length() / cv.M();
  // grid values at t; nodes farther than 2 delta from the curve carry +-1
  std::vector<double> c(P * P);
  std::vector<char> near(P * P, 0);
  long evals = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : evals)
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j) {
      Vec2 x{i * h, j * h};
      int m = cv.nearest_marker(x);
      double dm = norm(cv.markers()[m] - x);
      if (dm > 2 * delta + hs) {
        c[i * P + j] = S0.far_value(x);
      } else {
        near[i * P + j] = 1;
        c[i * P + j] = S0(x);
        ++evals;
      }
    }
  std::vector<double> S(P * P, 0.0);
  const double lap_w[5] = {-1, 16, -30, 16, -1}, grad_w[5] = {1, -8, 0, 8, -1};
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : evals)
  for (int i = 2; i <= N - 2; ++i)
    for (int j = 2; j <= N - 2; ++j) {
      bool any = false;
      for (int q = -2; q <= 2 && !any; ++q) any = near[(i + q) * P + j] || near[i * P + j + q];
      if (!any) continue;
      double lap = 0, gx = 0, gy = 0;
      for (int q = -2; q <= 2; ++q) {
        double cx = c[(i + q) * P + j], cy = c[i * P + j + q];
        lap += lap_w[q + 2] * (cx + cy);
        gx += grad_w[q + 2] * cx;
        gy += grad_w[q + 2] * cy;
      }
      lap /= 12 * h * h;
      gx /= 12 * h;
      gy /= 12 * h;
      Vec2 x{i * h, j * h};
      double ct = (Sp(x) - Sm(x)) / (2 * dt);
      evals += 2;
      Vec2 vx = v(x);
      double c0 = c[i * P + j];
      S[i * P + j] = ct + vx.x * gx + vx.y * gy - m0 * (eps * lap - f.fp(c0) / eps);
    }
  for (double s : S)
    if (!std::isfinite(s)) throw NonFinite("non-finite residual sample");
  if (evaluations) *evaluations += evals;
  return S;
}

ResidualReport residual_S(const ApproximateSolution& ca, const VelocityField& v, const ResidualGrid& grid) {
  check_grid(ca, grid);
  const double T0 = ca.data().history->T0(), h = 1.0 / grid.N;
  const int K = grid.time_samples;
  ResidualReport rep;
  double total = 0;
  for (int k = 1; k <= K; ++k) {
    double t = T0 * k / K;
    std::vector<double> S = residual_field(ca, v, grid, t, &rep.evaluations);
    double sq = 0;
    for (double s : S) {
      sq += s * s;
      rep.max_abs = std::max(rep.max_abs, std::abs(s));
    }
    sq *= h * h;
    rep.t.push_back(t);
    rep.norm_t.push_back(std::sqrt(sq));
    total += sq * T0 / K;
  }
  rep.norm_L2 = std::sqrt(total);
  return rep;
}

}  // namespace convac
