#include "convac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "convac/errors.hpp"

namespace convac {

TubeMasks tubular_masks(const Curve& curve, int N, double delta) {
  TubeMasks m;
  m.N = N;
  int P = N + 1;
  m.in1.assign(P * P, 0);
  m.in2.assign(P * P, 0);
  m.tau.assign(P * P, Vec2{});
  m.n.assign(P * P, Vec2{});
  if (!(delta > 0)) return m;
  Chart ch(curve, VelocityField::zero(), delta);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      auto tp = ch.project_within(Vec2{double(i) / N, double(j) / N}, 2 * delta);
      if (!tp || std::abs(tp->r) >= 2 * delta) continue;
      int k = i * P + j;
      m.in2[k] = 1;
      m.in1[k] = std::abs(tp->r) < delta;
      Frame fr = tangent_normal(curve, tp->s);
      m.tau[k] = fr.tau;
      m.n[k] = fr.n;
    }
  return m;
}

namespace {

// trapezoidal weight of node i along one axis
double tw(int i, int N) { return (i == 0 || i == N) ? 0.5 : 1.0; }

// second-order differences, one-sided on the boundary
Vec2 gradient(const ScalarField2D& u, int i, int j) {
  const int N = u.N;
  double h = u.h();
  auto d = [&](int a, int b, int di, int dj, int k) {
    if (k == 0) return (-3 * u(a, b) + 4 * u(a + di, b + dj) - u(a + 2 * di, b + 2 * dj)) / (2 * h);
    if (k == N) return (3 * u(a, b) - 4 * u(a - di, b - dj) + u(a - 2 * di, b - 2 * dj)) / (2 * h);
    return (u(a + di, b + dj) - u(a - di, b - dj)) / (2 * h);
  };
  return {d(i, j, 1, 0, i), d(i, j, 0, 1, j)};
}

std::vector<double> time_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  if (t.size() == 1) {
    w[0] = 1;
    return w;
  }
  for (size_t k = 1; k < t.size(); ++k) w[k] = t[k] - t[k - 1];
  return w;
}

}  // namespace

double l2_trapezoid(const ScalarField2D& u) {
  double s = 0;
  for (int i = 0; i <= u.N; ++i)
    for (int j = 0; j <= u.N; ++j) s += tw(i, u.N) * tw(j, u.N) * u(i, j) * u(i, j);
  return std::sqrt(s) * u.h();
}

ErrorReport error_norms(const std::vector<ScalarField2D>& u, const std::vector<TubeMasks>& masks, double eps) {
  if (u.empty() || u.size() != masks.size()) throw GridMismatch("snapshots and masks differ in number");
  std::vector<double> t;
  for (const auto& f : u) t.push_back(f.t);
  for (size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1])) throw GridMismatch("snapshot times must increase");
  std::vector<double> w = time_weights(t);
  ErrorReport r;
  r.eps = eps;
  double out = 0, tau = 0, in = 0, dn = 0;
  for (size_t k = 0; k < u.size(); ++k) {
    const ScalarField2D& f = u[k];
    const TubeMasks& m = masks[k];
    if (m.N != f.N) throw GridMismatch("mask grid differs from snapshot grid");
    r.norm_linf_l2 = std::max(r.norm_linf_l2, l2_trapezoid(f));
    double h2 = f.h() * f.h(), so = 0, st = 0, si = 0, sn = 0;
    const int P = f.N + 1;
    for (int i = 0; i <= f.N; ++i)
      for (int j = 0; j <= f.N; ++j) {
        Vec2 g = gradient(f, i, j);
        double a = tw(i, f.N) * tw(j, f.N) * h2, g2 = dot(g, g);
        int q = i * P + j;
        if (!m.in1[q]) so += a * g2;
        if (m.in2[q]) {
          double gt = dot(g, m.tau[q]), gn = dot(g, m.n[q]);
          st += a * gt * gt;
          si += a * g2;
          sn += a * gn * gn;
        }
      }
    out += w[k] * so;
    tau += w[k] * st;
    in += w[k] * si;
    dn += w[k] * sn;
  }
  r.norm_grad_out = std::sqrt(eps * out);
  r.norm_tau_in = std::sqrt(eps * tau);
  r.norm_grad_in = eps * std::sqrt(in);
  r.norm_dn_in = eps * std::sqrt(dn);
  return r;
}

ErrorReport error_norms(const Trajectory& tr, const ApproximateSolution& ca) {
  double delta = ca.data().opts.delta, T0 = ca.data().history->T0();
  std::vector<ScalarField2D> u;
  std::vector<TubeMasks> masks;
  for (const auto& c : tr.snapshots) {
    if (c.t < -1e-12 || c.t > T0 + 1e-9) throw GridMismatch("snapshot outside the curve history");
    auto sl = ca.slice(c.t);
    ScalarField2D d = c;
    for (int i = 1; i < c.N; ++i)
      for (int j = 1; j < c.N; ++j) d(i, j) = c(i, j) - sl(c.x(i, j));
    for (int k = 0; k <= c.N; ++k) d(0, k) = d(c.N, k) = d(k, 0) = d(k, c.N) = 0;
    u.push_back(std::move(d));
    masks.push_back(tubular_masks(sl.curve(), c.N, delta));
  }
  return error_norms(u, masks, ca.eps());
}

OrderFit eoc(const std::vector<double>& eps, const std::vector<double>& norms) {
  if (eps.size() != norms.size()) throw DegenerateFit("eps and norm lists differ in length");
  std::set<double> distinct(eps.begin(), eps.end());
  if (distinct.size() < 3 || distinct.size() != eps.size()) throw DegenerateFit("need at least 3 distinct eps values");
  for (double e : norms)
    if (!(e > 0) || !std::isfinite(e)) throw DegenerateFit("norm values must be positive");
  int n = int(eps.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += std::log(eps[i]) / n;
    my += std::log(norms[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    double dx = std::log(eps[i]) - mx;
    sxy += dx * (std::log(norms[i]) - my);
    sxx += dx * dx;
  }
  OrderFit f;
  f.slope = sxy / sxx;
  for (int i = 0; i + 1 < n; ++i) f.pairwise.push_back(std::log(norms[i] / norms[i + 1]) / std::log(eps[i] / eps[i + 1]));
  return f;
}

}  // namespace convac
