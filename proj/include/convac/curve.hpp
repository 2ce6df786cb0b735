#pragma once

#include <optional>
#include <vector>

#include "convac/trig.hpp"
#include "convac/vec2.hpp"
#include "convac/velocity.hpp"

namespace convac {

struct CurveJet {
  Vec2 X, d1, d2, d3;
};

// Closed plane curve X0(., t): T^1 -> R^2 given by M markers at s_j = 2 pi j / M
// and their trigonometric interpolant. Positively oriented, so that
// n = J tau is the interior normal.
class Curve {
 public:
  Curve() = default;
  Curve(double t, std::vector<Vec2> markers);

  static Curve circle(Vec2 center, double R, int M, double t = 0);
  static Curve ellipse(Vec2 center, double a, double b, int M, double t = 0);
  // x(s) = xc[0] + sum_k xc[k] cos(ks) + xs[k] sin(ks), same for y
  static Curve fourier(const std::vector<double>& xc, const std::vector<double>& xs,
                       const std::vector<double>& yc, const std::vector<double>& ys, int M, double t = 0);

  double t() const { return t_; }
  int M() const { return int(markers_.size()); }
  int K() const { return M() / 2; }
  int kmax() const { return std::max(fx_.kmax(), fy_.kmax()); }
  const std::vector<Vec2>& markers() const { return markers_; }
  const TrigSeries& fx() const { return fx_; }
  const TrigSeries& fy() const { return fy_; }

  Curve with_time(double t) const;

  CurveJet jet(double s, int nd = 3) const;
  CurveJet jet(const TrigTable& tab, int nd = 3) const;
  Vec2 X(double s) const { return jet(s, 1).X; }
  double speed(double s) const;

  // area of the interior of the interpolant (exact for trig polynomials)
  double area() const;
  double shoelace_area() const;
  double length() const;
  double spacing_ratio() const;
  bool self_intersects() const;
  // winding number of the marker polygon around x
  int winding(Vec2 x) const;
  int nearest_marker(Vec2 x) const;

  // markers redistributed to equal arc length, s = 0 kept fixed
  Curve reparametrized() const;

 private:
  double t_ = 0;
  std::vector<Vec2> markers_;
  TrigSeries fx_, fy_;
};

struct Frame {
  Vec2 tau, n;
};

Frame tangent_normal(const Curve& c, double s);
double curvature(const Curve& c, double s);
double normal_velocity(const Curve& c, const VelocityField& v, double s);

// RK4 transport of the markers from curve.t() to t1 with step <= dt;
// reparametrizes when the spacing ratio exceeds 2
Curve evolve_curve(const Curve& c, const VelocityField& v, double t1, double dt);
// single RK4 step of the markers, no reparametrization
Curve advect_markers(const Curve& c, const VelocityField& v, double dt);

}  // namespace convac
