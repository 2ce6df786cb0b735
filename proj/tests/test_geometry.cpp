#include <cmath>
#include <numbers>

#include "convac/chart.hpp"
#include "convac/curve.hpp"
#include "convac/errors.hpp"
#include "doctest.h"

using namespace convac;
using std::numbers::pi;

namespace {
const Vec2 C{0.5, 0.5};
const double R = 0.25;
}  // namespace

TEST_CASE("zero field leaves the curve unchanged") {
  Curve c = Curve::circle(C, R, 64);
  Curve d = evolve_curve(c, VelocityField::zero(), 1.0, 1e-2);
  for (int j = 0; j < c.M(); ++j) CHECK(norm(d.markers()[j] - c.markers()[j]) == 0.0);
  CHECK(d.t() == doctest::Approx(1.0));
}

TEST_CASE("rigid rotation rotates every marker by omega t") {
  const double omega = 1.3, t1 = 0.7;
  Curve c = Curve::ellipse(C, 0.3, 0.2, 128);
  Curve d = evolve_curve(c, VelocityField::rotation(omega, C), t1, 1e-3);
  double err = 0;
  for (int j = 0; j < c.M(); ++j) {
    Vec2 p = c.markers()[j] - C;
    double a = omega * t1;
    Vec2 q = C + Vec2{std::cos(a) * p.x - std::sin(a) * p.y, std::sin(a) * p.x + std::cos(a) * p.y};
    err = std::max(err, norm(d.markers()[j] - q));
  }
  CHECK(err <= 1e-8);
}

TEST_CASE("enclosed area is conserved by the cellular field") {
  Curve c = Curve::circle(C, R, 256);
  Curve d = evolve_curve(c, VelocityField::cellular(0.02), 0.5, 1e-3);
  double A0 = pi * R * R;
  CHECK(std::abs(c.area() - A0) / A0 <= 1e-12);
  CHECK(std::abs(d.area() - A0) / A0 <= 1e-6);
}

TEST_CASE("strong cellular flow triggers reparametrization and keeps area") {
  Curve c = Curve::circle(C, 0.2, 128);
  Curve d = evolve_curve(c, VelocityField::cellular(0.5), 0.5, 1e-3);
  CHECK(advect_markers(c, VelocityField::cellular(0.5), 0.5).spacing_ratio() > 2.0);
  CHECK(d.spacing_ratio() <= 2.0);
  CHECK(std::abs(d.area() - c.area()) / c.area() <= 1e-6);
}

TEST_CASE("reparametrization keeps the geometric curve") {
  Curve c = Curve::fourier({0.5, 0.2, 0.0, 0.03}, {0, 0, 0.02}, {0.5, 0.0, 0.01}, {0, 0.15, 0, 0.02}, 256);
  Curve d = c.reparametrized();
  CHECK(d.spacing_ratio() < 1.01);
  CHECK(d.area() == doctest::Approx(c.area()).epsilon(1e-12));
  Chart ch(c, VelocityField::zero(), 0.05);
  double worst = 0;
  for (Vec2 p : d.markers()) worst = std::max(worst, std::abs(ch.signed_distance(p).r));
  CHECK(worst <= 1e-12);
}

TEST_CASE("tangent and normal of the counterclockwise circle") {
  Curve c = Curve::circle(C, R, 64);
  Frame f0 = tangent_normal(c, 0.0);  // point (0.75, 0.5)
  CHECK(f0.n.x == doctest::Approx(-1.0));
  CHECK(std::abs(f0.n.y) < 1e-14);
  Frame f1 = tangent_normal(c, pi / 2);  // point (0.5, 0.75)
  CHECK(f1.tau.x == doctest::Approx(-1.0));
  CHECK(f1.n.y == doctest::Approx(-1.0));
  for (double s : {0.1, 1.7, 4.2}) {
    Frame f = tangent_normal(c, s);
    CHECK(norm(f.tau) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(dot(f.tau, f.n)) < 1e-15);
  }
}

TEST_CASE("curvature oracles") {
  Curve c = Curve::circle(C, R, 256);
  double err = 0;
  for (int j = 0; j < 50; ++j) err = std::max(err, std::abs(curvature(c, 0.1257 * j) - 4.0));
  CHECK(err <= 1e-8);
  Curve big = Curve::circle(C, 1e3, 256);
  CHECK(std::abs(curvature(big, 0.3)) <= 1.001e-3);
  Curve e = Curve::ellipse(C, 0.3, 0.2, 256);
  CHECK(std::abs(curvature(e, 0.0) - 0.3 / 0.04) <= 1e-8);
}

TEST_CASE("normal velocity") {
  Curve c = Curve::circle(C, R, 128);
  CHECK(normal_velocity(c, VelocityField::zero(), 0.4) == 0.0);
  for (double s : {0.0, 1.0, 2.5}) {
    CHECK(std::abs(normal_velocity(c, VelocityField::rotation(2.0, C), s)) < 1e-14);
    CHECK(normal_velocity(c, VelocityField::radial(0.7, C), s) == doctest::Approx(-0.7 * R));
  }
}

TEST_CASE("signed distance examples") {
  Curve c = Curve::circle(C, R, 256);
  CHECK_THROWS_AS(signed_distance(c, Vec2{0.5, 0.5}, 0.05), ProjectionAmbiguous);
  TubularPoint tp = signed_distance(c, Vec2{0.6, 0.5}, 0.06);
  CHECK(tp.r == doctest::Approx(0.15).epsilon(1e-13));
  CHECK(std::min(tp.s, 2 * pi - tp.s) < 1e-12);
  for (double s : {0.3, 2.0, 5.9}) {
    TubularPoint q = signed_distance(c, c.X(s), 0.05);
    CHECK(std::abs(q.r) <= 1e-12);
  }
  TubularPoint out = signed_distance(c, Vec2{0.5, 0.83}, 0.05);
  CHECK(out.r == doctest::Approx(-0.08));
}

TEST_CASE("closest-point reconstruction and unit gradient of d") {
  Curve c = Curve::fourier({0.5, 0.2, 0.0, 0.03}, {0, 0, 0.02}, {0.5, 0.0, 0.01}, {0, 0.15, 0, 0.02}, 256);
  const double delta = 0.03;
  Chart ch(c, VelocityField::zero(), delta);
  double rec = 0, grad = 0;
  const double h = 1e-4;
  for (int j = 0; j < 40; ++j) {
    double s = 0.157 * j;
    for (double r : {-0.06, -0.02, 0.0, 0.03, 0.07}) {
      Vec2 x = ch.position(r, s);
      TubularPoint tp = ch.signed_distance(x);
      Chart::Point p = ch.at(tp.s);
      rec = std::max(rec, norm(p.X + tp.r * p.n - x));
      auto d = [&](Vec2 y) { return ch.signed_distance(y).r; };
      double gx = (-d(x + Vec2{2 * h, 0}) + 8 * d(x + Vec2{h, 0}) - 8 * d(x - Vec2{h, 0}) + d(x - Vec2{2 * h, 0})) / (12 * h);
      double gy = (-d(x + Vec2{0, 2 * h}) + 8 * d(x + Vec2{0, h}) - 8 * d(x - Vec2{0, h}) + d(x - Vec2{0, 2 * h})) / (12 * h);
      grad = std::max(grad, std::abs(std::hypot(gx, gy) - 1));
    }
  }
  CHECK(rec <= 1e-10);
  CHECK(grad <= 1e-6);
}

TEST_CASE("Laplacian of d on the curve is -H") {
  Curve c = Curve::ellipse(C, 0.3, 0.2, 256);
  Chart ch(c, VelocityField::zero(), 0.05);
  const double h = 1e-3;
  double err = 0;
  for (int j = 0; j < 24; ++j) {
    double s = 0.2618 * j;
    Vec2 x = c.X(s);
    auto d = [&](Vec2 y) { return ch.signed_distance(y).r; };
    double lap = 0;
    const double w[5] = {-1, 16, -30, 16, -1};
    for (int k = 0; k < 5; ++k) {
      lap += w[k] * d(x + Vec2{(k - 2) * h, 0});
      lap += w[k] * d(x + Vec2{0, (k - 2) * h});
    }
    lap /= 12 * h * h;
    err = std::max(err, std::abs(lap + curvature(c, s)));
  }
  CHECK(err <= 1e-4);
}

TEST_CASE("chart derivatives") {
  Curve c = Curve::circle(C, R, 256);
  Chart ch(c, VelocityField::zero(), 0.05);
  for (double r : {-0.1, 0.0, 0.07}) {
    for (double s : {0.2, 3.0}) {
      ChartDerivatives cd = ch.derivatives(r, s);
      CHECK(norm(cd.gradS) * (R - r) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(cd.dtS == 0.0);
      CHECK(std::abs(cd.lapS) < 1e-8);  // arc-length circle: S is the polar angle
    }
  }
}

namespace {
// closed-form oracle: Delta S = -[g'(1-rH) - g r H_s] / (g^3 (1-rH)^3), H_s by differences
double lap_S_oracle(const Chart& ch, double r, double s) {
  const Curve& c = ch.curve();
  Chart::Point p = ch.at(s);
  double hs = 1e-4;
  double Hs = (-curvature(c, s + 2 * hs) + 8 * curvature(c, s + hs) - 8 * curvature(c, s - hs) +
               curvature(c, s - 2 * hs)) / (12 * hs);
  double q = 1 - r * p.H;
  return -(p.dg * q - p.g * r * Hs) / (p.g * p.g * p.g * q * q * q);
}
}  // namespace

TEST_CASE("Laplacian of S: differences against the closed form") {
  const double delta = 0.05;
  VelocityField v = VelocityField::cellular(0.02);
  Curve ref = evolve_curve(Curve::circle(C, R, 256), v, 0.25, 1e-3);
  Chart ch(ref, v, delta);
  double worst_orth = 0, worst_ref = 0;
  for (int j = 0; j < 16; ++j) {
    double s = 0.39 * j;
    Chart::Point p = ch.at(s);
    worst_orth = std::max(worst_orth, std::abs(dot(ch.grad_S(0, p), p.n)));
    for (double r : {-0.08, 0.0, 0.08}) worst_ref = std::max(worst_ref, std::abs(ch.derivatives(r, s).lapS - lap_S_oracle(ch, r, s)));
  }
  CHECK(worst_orth <= 1e-10);
  CHECK(worst_ref <= 1e-8);

  // strongly curved, far from arc length: sixth-order convergence of the stencil
  Curve e = Curve::fourier({0.5, 0.2, 0.0, 0.03}, {0, 0, 0.02}, {0.5, 0.0, 0.01}, {0, 0.15, 0, 0.02}, 256);
  Chart che(e, v, 0.03);
  double e1 = 0, e2 = 0;
  for (int j = 0; j < 16; ++j) {
    double s = 0.39 * j;
    for (double r : {-0.05, 0.0, 0.04}) {
      double o = lap_S_oracle(che, r, s);
      e1 = std::max(e1, std::abs(che.lap_S(r, s, 0.03 / 32) - o) / (1 + std::abs(o)));
      e2 = std::max(e2, std::abs(che.lap_S(r, s, 0.03 / 64) - o) / (1 + std::abs(o)));
    }
  }
  MESSAGE("relative Delta S error " << e1 << " -> " << e2);
  CHECK(e2 <= 1e-7);
  CHECK(std::log2(e1 / e2) > 5);
}

TEST_CASE("time derivative of d along an evolving curve is -V") {
  Curve c = Curve::fourier({0.5, 0.2, 0.0, 0.03}, {0, 0, 0.02}, {0.5, 0.0, 0.01}, {0, 0.15, 0, 0.02}, 256);
  VelocityField v = VelocityField::cellular(0.5);
  const double delta = 0.03;
  Chart ch(c, v, delta);
  auto defect = [&](double dt) {
    Curve c1 = advect_markers(c, v, dt);
    Chart ch1(c1, v, delta);
    double worst = 0;
    for (int j = 0; j < 12; ++j) {
      Vec2 x = ch.position(0.02 * ((j % 3) - 1), 0.5 * j);
      TubularPoint tp = ch.signed_distance(x);
      double dd = (ch1.signed_distance(x).r - tp.r) / dt;
      worst = std::max(worst, std::abs(dd + normal_velocity(c, v, tp.s)));
    }
    return worst;
  };
  double e1 = defect(1e-3), e2 = defect(5e-4);
  CHECK(e1 < 1e-2);
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("rotating markers: parameter time derivative") {
  const double omega = 2.0;
  Curve c = Curve::circle(C, R, 128);
  Chart ch(c, VelocityField::rotation(omega, C), 0.05);
  for (double r : {-0.05, 0.0, 0.05}) {
    Chart::Point p = ch.at(1.1);
    CHECK(ch.dt_S(r, p) == doctest::Approx(-omega).epsilon(1e-12));
    CHECK(std::abs(ch.advection_speed(r, p)) < 1e-12);
  }
}
