#include "convac/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "convac/errors.hpp"

namespace convac {

namespace {
constexpr double pi = std::numbers::pi;

// derivatives of sin^2(pi x)
void sin2_derivs(double x, double out[4]) {
  double s = std::sin(pi * x), s2 = std::sin(2 * pi * x), c2 = std::cos(2 * pi * x);
  out[0] = s * s;
  out[1] = pi * s2;
  out[2] = 2 * pi * pi * c2;
  out[3] = -4 * pi * pi * pi * s2;
}
}  // namespace

VelocityField VelocityField::zero() { return {}; }

VelocityField VelocityField::cellular(double amplitude) {
  VelocityField v;
  v.kind_ = Kind::cellular;
  v.name_ = "cellular";
  v.amp_ = amplitude;
  return v;
}

VelocityField VelocityField::rotation(double omega, Vec2 center) {
  VelocityField v;
  v.kind_ = Kind::rotation;
  v.name_ = "rotation";
  v.amp_ = omega;
  v.c_ = center;
  return v;
}

VelocityField VelocityField::shear(double amplitude) {
  VelocityField v;
  v.kind_ = Kind::shear;
  v.name_ = "shear";
  v.amp_ = amplitude;
  return v;
}

VelocityField VelocityField::radial(double a, Vec2 center) {
  VelocityField v;
  v.kind_ = Kind::radial;
  v.name_ = "radial";
  v.amp_ = a;
  v.c_ = center;
  return v;
}

VelocityField VelocityField::by_name(const std::string& name, double amplitude, Vec2 center) {
  if (name == "zero") return zero();
  if (name == "cellular" || name == "sin2") return cellular(amplitude);
  if (name == "rotation") return rotation(amplitude, center);
  if (name == "shear") return shear(amplitude);
  if (name == "radial") return radial(amplitude, center);
  throw ConfigError("unknown velocity field '" + name + "'");
}

void VelocityField::psi_derivs(Vec2 x, double d[4][4]) const {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) d[a][b] = 0;
  switch (kind_) {
    case Kind::zero:
    case Kind::radial:
      return;
    case Kind::cellular: {
      double sx[4], sy[4];
      sin2_derivs(x.x, sx);
      sin2_derivs(x.y, sy);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; a + b < 4; ++b) d[a][b] = amp_ * sx[a] * sy[b];
      return;
    }
    case Kind::rotation: {
      double X = x.x - c_.x, Y = x.y - c_.y;
      d[0][0] = -0.5 * amp_ * (X * X + Y * Y);
      d[1][0] = -amp_ * X;
      d[0][1] = -amp_ * Y;
      d[2][0] = d[0][2] = -amp_;
      return;
    }
    case Kind::shear:
      d[0][0] = 0.5 * amp_ * x.y * x.y;
      d[0][1] = amp_ * x.y;
      d[0][2] = amp_;
      return;
  }
}

double VelocityField::psi(Vec2 x) const {
  double d[4][4];
  psi_derivs(x, d);
  return d[0][0];
}

Vec2 VelocityField::operator()(Vec2 x) const {
  if (kind_ == Kind::radial) return amp_ * (x - c_);
  double d[4][4];
  psi_derivs(x, d);
  return {d[0][1], -d[1][0]};
}

Mat2 VelocityField::grad(Vec2 x) const {
  Mat2 m;
  if (kind_ == Kind::radial) {
    m.a[0][0] = m.a[1][1] = amp_;
    return m;
  }
  double d[4][4];
  psi_derivs(x, d);
  m.a[0][0] = d[1][1];
  m.a[0][1] = d[0][2];
  m.a[1][0] = -d[2][0];
  m.a[1][1] = -d[1][1];
  return m;
}

Tensor2 VelocityField::hess(Vec2 x) const {
  Tensor2 h;
  if (kind_ == Kind::radial) return h;
  double d[4][4];
  psi_derivs(x, d);
  // v_0 = psi_y, v_1 = -psi_x
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      int ax = (j == 0) + (k == 0), ay = (j == 1) + (k == 1);
      h.a[0][j][k] = d[ax][ay + 1];
      h.a[1][j][k] = -d[ax + 1][ay];
    }
  return h;
}

double VelocityField::divergence(Vec2 x) const {
  Mat2 m = grad(x);
  return m.a[0][0] + m.a[1][1];
}

double VelocityField::max_speed() const {
  if (kind_ == Kind::zero) return 0;
  double vmax = 0;
  const int n = 200;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) vmax = std::max(vmax, norm((*this)(Vec2{double(i) / n, double(j) / n})));
  return vmax;
}

}  // namespace convac
