#include "convac/chart.hpp"

#include <cmath>
#include <numbers>

#include "convac/errors.hpp"

namespace convac {

namespace {
std::vector<double> marker_velocity(const Curve& c, const VelocityField& v, bool y) {
  std::vector<double> out(c.M());
  for (int j = 0; j < c.M(); ++j) {
    Vec2 w = v(c.markers()[j]);
    out[j] = y ? w.y : w.x;
  }
  return out;
}
}  // namespace

Chart::Chart(const Curve& c, const VelocityField& v, double delta)
    : curve_(c), v_(v), delta_(delta), wx_(marker_velocity(c, v, false)), wy_(marker_velocity(c, v, true)), hs_(c.length() / c.M()) {}

Chart::Point Chart::at(double s) const {
  int km = std::max({curve_.kmax(), wx_.kmax(), wy_.kmax()});
  TrigTable tab(s, km);
  CurveJet j = curve_.jet(tab, 2);
  Point p;
  p.X = j.X;
  p.X1 = j.d1;
  p.X2 = j.d2;
  p.g = norm(j.d1);
  if (p.g < 1e-12) throw CurveDegenerate("vanishing parameter speed");
  p.tau = j.d1 / p.g;
  p.n = perp(p.tau);
  p.dg = dot(p.tau, j.d2);
  p.H = cross(j.d1, j.d2) / (p.g * p.g * p.g);
  double wx[2], wy[2];
  wx_.eval(tab, wx, 2);
  wy_.eval(tab, wy, 2);
  p.W = {wx[0], wy[0]};
  p.W1 = {wx[1], wy[1]};
  p.dtau = (p.W1 - dot(p.tau, p.W1) * p.tau) / p.g;
  p.dn = perp(p.dtau);
  return p;
}

Vec2 Chart::position(double r, double s) const {
  Point p = at(s);
  return p.X + r * p.n;
}

std::optional<TubularPoint> Chart::project(Vec2 x) const {
  const int M = curve_.M();
  int j = curve_.nearest_marker(x);
  double d0 = norm(curve_.markers()[j] - x);
  if (d0 > 3 * delta_ + 2 * hs_) return std::nullopt;
  double s = node_s(j, M);
  const double smax = 4 * std::numbers::pi / M;
  bool converged = false;
  for (int it = 0; it < 40; ++it) {
    CurveJet cj = curve_.jet(s, 2);
    Vec2 e = cj.X - x;
    double f = dot(e, cj.d1);
    double fp = dot(cj.d1, cj.d1) + dot(e, cj.d2);
    if (fp <= 0) break;
    double step = std::clamp(f / fp, -smax, smax);
    s -= step;
    if (std::abs(step) * std::sqrt(dot(cj.d1, cj.d1)) < 1e-15) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ProjectionAmbiguous("closest-point iteration did not converge");
  s = wrap_s(s);
  Frame fr = tangent_normal(curve_, s);
  TubularPoint tp;
  tp.s = s;
  tp.r = dot(x - curve_.X(s), fr.n);
  tp.inside_tube = std::abs(tp.r) < 3 * delta_;
  return tp;
}

std::optional<TubularPoint> Chart::project_within(Vec2 x, double rmax) const {
  try {
    return project(x);
  } catch (const ProjectionAmbiguous&) {
    double d0 = norm(curve_.markers()[curve_.nearest_marker(x)] - x);
    if (d0 <= rmax) throw;
    return std::nullopt;
  }
}

TubularPoint Chart::signed_distance(Vec2 x) const {
  auto tp = project(x);
  if (!tp || !tp->inside_tube) throw ProjectionAmbiguous("point outside the 3 delta tube");
  return *tp;
}

Vec2 Chart::grad_S(double r, const Point& p) const {
  double det = p.g * (1 - r * p.H);
  if (det < 1e-12) throw ChartSingular("tubular chart degenerate");
  return p.tau / det;
}

double Chart::dt_S(double r, const Point& p) const { return -dot(grad_S(r, p), p.W + r * p.dn); }

double Chart::advection_speed(double r, const Point& p) const {
  Vec2 gs = grad_S(r, p);
  return dot(gs, v_(p.X + r * p.n) - p.W - r * p.dn);
}

double Chart::lap_S(double r, double s, double h) const {
  Vec2 x0 = position(r, s);
  auto gradS_at = [&](Vec2 x) {
    TubularPoint tp = signed_distance(x);
    return grad_S(tp.r, at(tp.s));
  };
  const double w[6] = {-1, 9, -45, 45, -9, 1};
  const double off[6] = {-3, -2, -1, 1, 2, 3};
  double lap = 0;
  for (int k = 0; k < 6; ++k) {
    lap += w[k] * gradS_at(x0 + Vec2{off[k] * h, 0}).x;
    lap += w[k] * gradS_at(x0 + Vec2{0, off[k] * h}).y;
  }
  return lap / (60 * h);
}

ChartDerivatives Chart::derivatives(double r, double s) const {
  Point p = at(s);
  return {grad_S(r, p), lap_S(r, s, delta_ / 64), dt_S(r, p)};
}

TubularPoint signed_distance(const Curve& c, Vec2 x, double delta) {
  return Chart(c, VelocityField::zero(), delta).signed_distance(x);
}

ChartDerivatives chart_derivatives(const Curve& c, double r, double s, const VelocityField& v, double delta) {
  if (std::abs(r) >= 3 * delta) throw ProjectionAmbiguous("chart derivatives requested outside the tube");
  return Chart(c, v, delta).derivatives(r, s);
}

}  // namespace convac
