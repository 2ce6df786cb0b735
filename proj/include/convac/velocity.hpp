#pragma once

#include <string>

#include "convac/vec2.hpp"

namespace convac {

// Steady velocity fields. All but `radial` are rotated gradients of a
// stream function, v = (d_y psi, -d_x psi).
class VelocityField {
 public:
  enum class Kind { zero, cellular, rotation, shear, radial };

  static VelocityField zero();
  // psi = A sin^2(pi x) sin^2(pi y)
  static VelocityField cellular(double amplitude);
  // v = omega (-(y - yc), x - xc)
  static VelocityField rotation(double omega, Vec2 center);
  // psi = A y^2 / 2, v = (A y, 0)
  static VelocityField shear(double amplitude);
  // v = a (x - c); not divergence free, geometry tests only
  static VelocityField radial(double a, Vec2 center);

  static VelocityField by_name(const std::string& name, double amplitude, Vec2 center = {0.5, 0.5});

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double amplitude() const { return amp_; }

  double psi(Vec2 x) const;
  Vec2 operator()(Vec2 x) const;
  Mat2 grad(Vec2 x) const;
  Tensor2 hess(Vec2 x) const;
  double divergence(Vec2 x) const;
  // max |v| over the unit square (sampled)
  double max_speed() const;

 private:
  // d[a][b] = d_x^a d_y^b psi, a + b <= 3
  void psi_derivs(Vec2 x, double d[4][4]) const;

  Kind kind_ = Kind::zero;
  std::string name_ = "zero";
  double amp_ = 0;
  Vec2 c_{0.5, 0.5};
};

}  // namespace convac
