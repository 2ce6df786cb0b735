#pragma once

#include <vector>

#include "convac/chart.hpp"
#include "convac/curve.hpp"
#include "convac/velocity.hpp"

namespace convac {

// Interface history on the uniform grid t_n = n dt, n = 0..N. Markers follow v;
// when their spacing ratio exceeds 2 a new segment starts with a reparametrized
// curve. The node shared by two segments is stored in both parametrizations.
class CurveHistory {
 public:
  struct Segment {
    int n0 = 0, n1 = 0;  // node range, inclusive
    std::vector<Curve> curves;
    const Curve& node(int n) const { return curves[n - n0]; }
  };

  CurveHistory(const Curve& c0, const VelocityField& v, double T0, double dt);

  const VelocityField& velocity() const { return v_; }
  double dt() const { return dt_; }
  double T0() const { return T0_; }
  int steps() const { return N_; }
  int M() const { return segs_.front().curves.front().M(); }
  const std::vector<Segment>& segments() const { return segs_; }
  // last segment with n0 <= t / dt
  int segment_at(double t) const;
  const Curve& node(int n) const { return segs_[segment_at(n * dt_)].node(n); }

  // curve at time t in the parametrization of segment k (RK4 from the nearest node below)
  Curve at(double t, int k) const;
  Curve at(double t) const { return at(t, segment_at(t)); }

  // min over nodes and markers of the distance to the boundary of the unit square
  double min_boundary_distance() const;

 private:
  VelocityField v_;
  double T0_, dt_;
  int N_;
  std::vector<Segment> segs_;
};

}  // namespace convac
