#include "convac/history.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convac/errors.hpp"

namespace convac {

CurveHistory::CurveHistory(const Curve& c0, const VelocityField& v, double T0, double dt)
    : v_(v), T0_(T0), dt_(dt) {
  if (!(dt > 0) || T0 < 0) throw std::invalid_argument("CurveHistory: need dt > 0 and T0 >= 0");
  N_ = int(std::lround(T0 / dt));
  if (std::abs(N_ * dt - T0) > 1e-9 * std::max(1.0, T0)) throw std::invalid_argument("CurveHistory: T0 must be a multiple of dt");
  Segment seg;
  seg.curves.push_back(c0.with_time(0));
  Curve cur = seg.curves.back();
  for (int n = 0; n < N_; ++n) {
    Curve next = advect_markers(cur, v, dt).with_time((n + 1) * dt);
    seg.curves.push_back(next);
    seg.n1 = n + 1;
    if (next.spacing_ratio() > 2) {
      Curve re = next.reparametrized();
      if (re.spacing_ratio() > 2 || re.self_intersects()) throw CurveDegenerate("marker spacing could not be restored");
      segs_.push_back(std::move(seg));
      seg = Segment{};
      seg.n0 = seg.n1 = n + 1;
      seg.curves.push_back(re);
      next = re;
    }
    cur = next;
  }
  segs_.push_back(std::move(seg));
  if (segs_.back().curves.back().self_intersects()) throw CurveDegenerate("self-intersection detected");
}

int CurveHistory::segment_at(double t) const {
  int n = int(std::floor(t / dt_ + 1e-9));
  int k = int(segs_.size()) - 1;
  while (k > 0 && segs_[k].n0 > n) --k;
  return k;
}

Curve CurveHistory::at(double t, int k) const {
  const Segment& s = segs_[k];
  int n = int(std::floor(t / dt_ + 1e-9));
  n = std::clamp(n, s.n0, std::max(s.n0, s.n1 - 1));
  double tau = t - n * dt_;
  const Curve& base = s.node(n);
  if (std::abs(tau) < 1e-15) return base.with_time(t);
  return advect_markers(base, v_, tau).with_time(t);
}

double CurveHistory::min_boundary_distance() const {
  double d = 1e300;
  for (const auto& s : segs_)
    for (const auto& c : s.curves)
      for (Vec2 p : c.markers()) d = std::min({d, p.x, p.y, 1 - p.x, 1 - p.y});
  return d;
}

}  // namespace convac
