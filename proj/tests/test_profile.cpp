#include <cmath>
#include <numbers>

#include "convac/errors.hpp"
#include "convac/profile.hpp"
#include "doctest.h"

using namespace convac;

namespace {
const Profile& quartic_profile() {
  static Profile p = solve_profile(Potential::quartic());
  return p;
}

double max_abs(const std::vector<double>& u) {
  double m = 0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

// -u'' + f''(theta0) u - g with an eighth-order difference stencil, independent of the solver
double ode_defect(const Profile& p, const std::vector<double>& u, const std::vector<double>& g, double margin) {
  const double w[9] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  double worst = 0;
  for (int i = 4; i < p.size() - 4; ++i) {
    if (std::abs(p.rho[i]) > p.L - margin) continue;
    double d2 = 0;
    for (int k = 0; k < 9; ++k) d2 += w[k] * u[i + k - 4];
    d2 /= p.h * p.h;
    worst = std::max(worst, std::abs(-d2 + p.fpp[i] * u[i] - g[i]));
  }
  return worst;
}
}  // namespace

TEST_CASE("quartic profile is tanh(rho/sqrt2)") {
  const Profile& p = quartic_profile();
  double err = 0;
  for (int i = 0; i < p.size(); ++i) err = std::max(err, std::abs(p.theta0[i] - std::tanh(p.rho[i] / std::sqrt(2.0))));
  MESSAGE("tanh error " << err);
  CHECK(err <= 1e-8);
  CHECK(p.theta0[p.center()] == 0.0);
  CHECK(p.alpha == doctest::Approx(std::sqrt(2.0)));
  // 1 - tanh(x) = 2 e^{-2x} / (1 + e^{-2x}): the bound is sharp, allow one ulp of 1
  bool tail_ok = true;
  for (int i = 0; i < p.size(); ++i)
    if (p.rho[i] >= 5) tail_ok = tail_ok && std::abs(p.theta0[i] - 1) <= 2 * std::exp(-std::sqrt(2.0) * p.rho[i]) + 1.2e-16;
  CHECK(tail_ok);
  bool increasing = true;
  for (int i = 1; i < p.size(); ++i) increasing = increasing && p.theta0[i] >= p.theta0[i - 1];
  CHECK(increasing);
}

TEST_CASE("profile ODE residual at interior nodes") {
  const Profile& p = quartic_profile();
  std::vector<double> zero(p.size(), 0.0);
  // theta0'' - f'(theta0) = 0 tested on the samples with an eighth-order stencil
  std::vector<double> neg(p.size());
  for (int i = 0; i < p.size(); ++i) neg[i] = p.theta0[i];
  const double w[9] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  double worst = 0;
  for (int i = 4; i < p.size() - 4; ++i) {
    double d2 = 0;
    for (int k = 0; k < 9; ++k) d2 += w[k] * p.theta0[i + k - 4];
    d2 /= p.h * p.h;
    worst = std::max(worst, std::abs(-d2 + p.f.fp(p.theta0[i])));
  }
  MESSAGE("profile ODE residual " << worst);
  CHECK(worst <= 1e-10);
}

TEST_CASE("sigma") {
  const Profile& p = quartic_profile();
  double s = sigma(p);
  CHECK(std::abs(s - 2 * std::sqrt(2.0) / 3) <= 1e-8);
  Profile p20 = solve_profile(Potential::quartic(), 20, 0.0125);
  CHECK(std::abs(sigma(p20) - s) <= 1e-12);
}

TEST_CASE("invalid potentials") {
  CHECK_THROWS_AS(solve_profile(Potential::double_well({0.25, -0.25})), PotentialInvalid);
  CHECK_THROWS_AS(solve_profile(Potential::polynomial({0.25, 0, -0.5, 0.1, 0.25})), PotentialInvalid);
  CHECK_THROWS_AS(solve_profile(Potential::polynomial({0.3, 0, -0.5, 0, 0.25})), PotentialInvalid);
  CHECK_NOTHROW(solve_profile(Potential::double_well({0.25, 0.1})));
}

TEST_CASE("kernel identity of the discrete operator") {
  const Profile& p = quartic_profile();
  LinearizedSolver L(p);
  std::vector<double> zero(p.size(), 0.0);
  double r = max_abs(L.residual(p.theta0_p, zero));
  MESSAGE("kernel residual " << r);
  CHECK(r <= 1e-8);
}

TEST_CASE("L(rho theta0') = -2 theta0''") {
  const Profile& p = quartic_profile();
  LinearizedSolver L(p);
  RadialFunction u = L.solve(p.theta0_pp);
  double err = 0;
  for (int i = 0; i < p.size(); ++i)
    if (std::abs(p.rho[i]) <= p.L - 2) err = std::max(err, std::abs(u.u[i] + 0.5 * p.rho[i] * p.theta0_p[i]));
  MESSAGE("identity error " << err);
  CHECK(err <= 1e-6);
  CHECK(u.parity == -1);
  CHECK(u.decay_verified);
  CHECK(ode_defect(p, u.u, p.theta0_pp, 2) <= 1e-6);
}

TEST_CASE("solvability and trivial data") {
  const Profile& p = quartic_profile();
  LinearizedSolver L(p);
  CHECK_THROWS_AS(L.solve(p.theta0_p), SolvabilityViolated);
  RadialFunction z = L.solve(std::vector<double>(p.size(), 0.0));
  CHECK(max_abs(z.u) == 0.0);
}

TEST_CASE("parity transport and u(0) = 0") {
  const Profile& p = quartic_profile();
  LinearizedSolver L(p);
  std::vector<double> g_odd(p.size()), g_even(p.size());
  double pi2 = 0, s = sigma(p);
  std::vector<double> w(p.size());
  for (int i = 0; i < p.size(); ++i) w[i] = p.rho[i] * p.rho[i] * p.theta0_p[i] * p.theta0_p[i];
  pi2 = integrate(p, w) / s;
  for (int i = 0; i < p.size(); ++i) {
    g_odd[i] = p.rho[i] * p.theta0_p[i];
    g_even[i] = (p.rho[i] * p.rho[i] - pi2) * p.theta0_p[i];
  }
  RadialFunction uo = L.solve(g_odd), ue = L.solve(g_even, 2);
  CHECK(uo.parity == -1);
  CHECK(ue.parity == 1);
  CHECK(uo.u[p.center()] == 0.0);
  CHECK(ue.u[p.center()] == 0.0);
  CHECK(uo.decay_verified);
  CHECK(ue.decay_verified);
  CHECK(ode_defect(p, uo.u, g_odd, 2) <= 1e-6);
  CHECK(ode_defect(p, ue.u, g_even, 2) <= 1e-6);
  // compatibility integrals of the odd c1 data vanish
  std::vector<double> a(p.size()), b(p.size());
  for (int i = 0; i < p.size(); ++i) {
    a[i] = p.theta0_pp[i] * p.theta0_p[i];
    b[i] = p.rho[i] * p.theta0_p[i] * p.theta0_p[i];
  }
  CHECK(std::abs(integrate(p, a)) <= 1e-14);
  CHECK(std::abs(integrate(p, b)) <= 1e-14);
}

TEST_CASE("decay envelope constant is stable under domain doubling") {
  Profile p40 = solve_profile(Potential::quartic(), 40, 0.0125);
  Profile p80 = solve_profile(Potential::quartic(), 80, 0.0125);
  auto envelope = [](const Profile& p) {
    std::vector<double> g(p.size());
    for (int i = 0; i < p.size(); ++i) g[i] = -p.rho[i] * p.theta0_p[i];
    RadialFunction u = LinearizedSolver(p).solve(g);
    CHECK(u.decay_verified);
    return decay_constant(p, u.u, 1, 1, p.L - 2);
  };
  double c40 = envelope(p40), c80 = envelope(p80);
  CHECK(c80 == doctest::Approx(c40).epsilon(1e-6));
}

TEST_CASE("quintic Hermite interpolation of theta0") {
  const Profile& p = quartic_profile();
  RadialInterp th = RadialInterp::theta0(p);
  double e0 = 0, e1 = 0, e2 = 0;
  for (int k = 0; k < 997; ++k) {
    double rho = -9.3 + 0.0187 * k;
    double o[3];
    th.eval(rho, o);
    double t = std::tanh(rho / std::sqrt(2.0)), sech2 = 1 - t * t;
    e0 = std::max(e0, std::abs(o[0] - t));
    e1 = std::max(e1, std::abs(o[1] - sech2 / std::sqrt(2.0)));
    e2 = std::max(e2, std::abs(o[2] + t * sech2));
  }
  CHECK(e0 <= 1e-9);
  CHECK(e1 <= 1e-8);
  CHECK(e2 <= 1e-6);
}
