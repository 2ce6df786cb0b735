#pragma once

#include <optional>

#include "convac/curve.hpp"
#include "convac/velocity.hpp"

namespace convac {

struct TubularPoint {
  double r = 0;  // signed distance, > 0 in the interior
  double s = 0;  // parameter of the closest point
  bool inside_tube = false;  // |r| < 3 delta
};

struct ChartDerivatives {
  Vec2 gradS;
  double lapS = 0;
  double dtS = 0;
};

// Geometry of one curve at one instant together with the parameter
// velocity dX0/dt (markers move with v).
class Chart {
 public:
  struct Point {
    Vec2 X, X1, X2;
    double g = 0, dg = 0, H = 0;
    Vec2 tau, n;
    Vec2 W, W1;   // dX0/dt and its s-derivative
    Vec2 dtau, dn;  // time derivatives of tau and n at fixed s
  };

  Chart(const Curve& c, const VelocityField& v, double delta);

  const Curve& curve() const { return curve_; }
  const VelocityField& velocity() const { return v_; }
  double delta() const { return delta_; }

  Point at(double s) const;
  Vec2 position(double r, double s) const;

  // closest-point projection; nullopt if x is certainly farther than 3 delta
  std::optional<TubularPoint> project(Vec2 x) const;
  TubularPoint signed_distance(Vec2 x) const;
  // as project, but an ambiguous closest point farther than rmax from every
  // marker counts as outside (focal points of the curve beyond the tube)
  std::optional<TubularPoint> project_within(Vec2 x, double rmax) const;

  Vec2 grad_S(double r, const Point& p) const;
  double dt_S(double r, const Point& p) const;
  // Laplacian of S by 6th-order differences of the closed-form gradient
  double lap_S(double r, double s, double h_fd) const;
  // a = d_t S + v . grad S at X(r, s)
  double advection_speed(double r, const Point& p) const;
  ChartDerivatives derivatives(double r, double s) const;

 private:
  Curve curve_;
  VelocityField v_;
  double delta_;
  TrigSeries wx_, wy_;
  double hs_;  // mean marker spacing
};

TubularPoint signed_distance(const Curve& c, Vec2 x, double delta);
ChartDerivatives chart_derivatives(const Curve& c, double r, double s, const VelocityField& v, double delta);

}  // namespace convac
