#include "convac/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "convac/errors.hpp"

namespace convac {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;

std::vector<double> comp(const std::vector<Vec2>& p, bool y) {
  std::vector<double> out(p.size());
  for (size_t j = 0; j < p.size(); ++j) out[j] = y ? p[j].y : p[j].x;
  return out;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}
}  // namespace

Curve::Curve(double t, std::vector<Vec2> markers)
    : t_(t), markers_(std::move(markers)), fx_(comp(markers_, false)), fy_(comp(markers_, true)) {
  if (markers_.size() < 8) throw CurveDegenerate("curve needs at least 8 markers");
  if (area() <= 0) throw CurveDegenerate("curve must be positively oriented");
}

Curve Curve::circle(Vec2 c, double R, int M, double t) {
  std::vector<Vec2> p(M);
  for (int j = 0; j < M; ++j) {
    double s = node_s(j, M);
    p[j] = {c.x + R * std::cos(s), c.y + R * std::sin(s)};
  }
  return Curve(t, std::move(p));
}

Curve Curve::ellipse(Vec2 c, double a, double b, int M, double t) {
  std::vector<Vec2> p(M);
  for (int j = 0; j < M; ++j) {
    double s = node_s(j, M);
    p[j] = {c.x + a * std::cos(s), c.y + b * std::sin(s)};
  }
  return Curve(t, std::move(p));
}

Curve Curve::fourier(const std::vector<double>& xc, const std::vector<double>& xs, const std::vector<double>& yc,
                     const std::vector<double>& ys, int M, double t) {
  auto series = [](const std::vector<double>& cc, const std::vector<double>& ss, double s) {
    double v = cc.empty() ? 0 : cc[0];
    for (size_t k = 1; k < cc.size(); ++k) v += cc[k] * std::cos(k * s);
    for (size_t k = 1; k < ss.size(); ++k) v += ss[k] * std::sin(k * s);
    return v;
  };
  std::vector<Vec2> p(M);
  for (int j = 0; j < M; ++j) {
    double s = node_s(j, M);
    p[j] = {series(xc, xs, s), series(yc, ys, s)};
  }
  return Curve(t, std::move(p));
}

Curve Curve::with_time(double t) const {
  Curve c = *this;
  c.t_ = t;
  return c;
}

CurveJet Curve::jet(const TrigTable& tab, int nd) const {
  double x[4] = {}, y[4] = {};
  fx_.eval(tab, x, nd + 1 > 4 ? 4 : nd + 1);
  fy_.eval(tab, y, nd + 1 > 4 ? 4 : nd + 1);
  return {{x[0], y[0]}, {x[1], y[1]}, {x[2], y[2]}, {x[3], y[3]}};
}

CurveJet Curve::jet(double s, int nd) const { return jet(TrigTable(s, kmax()), nd); }

double Curve::speed(double s) const { return norm(jet(s, 1).d1); }

double Curve::area() const {
  // (1/2) int (x y' - y x') ds in coefficient space; the Nyquist mode drops out
  double A = 0;
  for (int k = 1; k < (M() + 1) / 2; ++k)
    A += std::numbers::pi * k * (fx_.a(k) * fy_.b(k) - fx_.b(k) * fy_.a(k));
  return A;
}

double Curve::shoelace_area() const {
  double A = 0;
  for (int j = 0; j < M(); ++j) A += cross(markers_[j], markers_[(j + 1) % M()]);
  return 0.5 * A;
}

double Curve::length() const {
  double L = 0;
  for (int j = 0; j < M(); ++j) L += speed(node_s(j, M()));
  return L * two_pi / M();
}

double Curve::spacing_ratio() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int j = 0; j < M(); ++j) {
    double d = norm(markers_[(j + 1) % M()] - markers_[j]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

bool Curve::self_intersects() const {
  const int M = this->M();
  for (int i = 0; i < M; ++i) {
    Vec2 a = markers_[i], b = markers_[(i + 1) % M];
    for (int j = i + 2; j < M; ++j) {
      if (i == 0 && j == M - 1) continue;
      if (segments_cross(a, b, markers_[j], markers_[(j + 1) % M])) return true;
    }
  }
  return false;
}

int Curve::winding(Vec2 x) const {
  int w = 0;
  const int M = this->M();
  for (int j = 0; j < M; ++j) {
    Vec2 a = markers_[j], b = markers_[(j + 1) % M];
    if (a.y <= x.y) {
      if (b.y > x.y && cross(b - a, x - a) > 0) ++w;
    } else if (b.y <= x.y && cross(b - a, x - a) < 0) {
      --w;
    }
  }
  return w;
}

int Curve::nearest_marker(Vec2 x) const {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (int j = 0; j < M(); ++j) {
    Vec2 d = markers_[j] - x;
    double q = d.x * d.x + d.y * d.y;
    if (q < bd) {
      bd = q;
      best = j;
    }
  }
  return best;
}

Curve Curve::reparametrized() const {
  const int M = this->M();
  std::vector<double> g(M);
  for (int j = 0; j < M; ++j) g[j] = speed(node_s(j, M));
  TrigSeries gs(g);
  // l(s) = a0 s + sum (a_k sin ks - b_k (cos ks - 1)) / k
  auto ell = [&](double s, double& dl) {
    TrigTable tab(s, gs.kmax());
    double v = gs.a(0) * s;
    dl = gs.a(0);
    for (int k = 1; k <= gs.kmax(); ++k) {
      v += (gs.a(k) * tab.s[k] - gs.b(k) * (tab.c[k] - 1)) / k;
      dl += gs.a(k) * tab.c[k] + gs.b(k) * tab.s[k];
    }
    return v;
  };
  double L = two_pi * gs.a(0);
  std::vector<Vec2> p(M);
  double s = 0;
  for (int j = 0; j < M; ++j) {
    double target = L * j / M;
    for (int it = 0; it < 50; ++it) {
      double dl;
      double f = ell(s, dl) - target;
      double step = f / dl;
      s -= step;
      if (std::abs(step) < 1e-15) break;
    }
    p[j] = X(s);
  }
  return Curve(t_, std::move(p));
}

Frame tangent_normal(const Curve& c, double s) {
  Vec2 d1 = c.jet(s, 1).d1;
  double g = norm(d1);
  if (g < 1e-12) throw CurveDegenerate("vanishing parameter speed");
  Vec2 tau = d1 / g;
  return {tau, perp(tau)};
}

double curvature(const Curve& c, double s) {
  CurveJet j = c.jet(s, 2);
  double g = norm(j.d1);
  if (g < 1e-12) throw CurveDegenerate("vanishing parameter speed");
  return cross(j.d1, j.d2) / (g * g * g);
}

double normal_velocity(const Curve& c, const VelocityField& v, double s) {
  Frame f = tangent_normal(c, s);
  return dot(f.n, v(c.X(s)));
}

Curve advect_markers(const Curve& c, const VelocityField& v, double dt) {
  std::vector<Vec2> p = c.markers();
  for (auto& x : p) {
    Vec2 k1 = v(x);
    Vec2 k2 = v(x + 0.5 * dt * k1);
    Vec2 k3 = v(x + 0.5 * dt * k2);
    Vec2 k4 = v(x + dt * k3);
    x += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return Curve(c.t() + dt, std::move(p));
}

Curve evolve_curve(const Curve& c, const VelocityField& v, double t1, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("evolve_curve: dt must be positive");
  if (t1 < c.t()) throw std::invalid_argument("evolve_curve: t1 before curve time");
  Curve cur = c;
  int nsteps = int(std::ceil((t1 - c.t()) / dt - 1e-12));
  if (nsteps == 0) return cur.with_time(t1);
  double h = (t1 - c.t()) / nsteps;
  for (int n = 0; n < nsteps; ++n) {
    cur = advect_markers(cur, v, h);
    if (cur.spacing_ratio() > 2) {
      cur = cur.reparametrized();
      if (cur.spacing_ratio() > 2) throw CurveDegenerate("marker spacing could not be restored");
    }
  }
  if (cur.self_intersects()) throw CurveDegenerate("self-intersection detected");
  return cur.with_time(t1);
}

}  // namespace convac
