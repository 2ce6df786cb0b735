#pragma once

#include <vector>

#include "convac/potential.hpp"

namespace convac {

struct Profile {
  Potential f;
  double L = 0, h = 0;
  std::vector<double> rho, theta0, theta0_p, theta0_pp;
  std::vector<double> fpp;  // f''(theta0) on the grid
  double alpha = 0;         // decay rate min sqrt f''(+-1)

  int size() const { return int(rho.size()); }
  int center() const { return size() / 2; }
};

struct RadialFunction {
  std::vector<double> u;
  int parity = 0;  // +1 even, -1 odd, 0 neither
  bool decay_verified = false;
};

Profile solve_profile(const Potential& f, double L_rho = 40, double h_rho = 0.0125);

// composite Simpson over the profile grid
double integrate(const Profile& prof, const std::vector<double>& u);
double sigma(const Profile& prof);
int detect_parity(const std::vector<double>& u, double tol = 1e-10);
// tail bound |u| <= C (1 + |rho|)^i e^{-a |rho|} with a = 0.9 alpha, C set on
// 1 <= |rho| <= L/2 and checked on the outer half above roundoff level
bool verify_decay(const Profile& prof, const std::vector<double>& u, int i);
double decay_constant(const Profile& prof, const std::vector<double>& u, int i, double rho_lo, double rho_hi);

// Numerov discretization of  L u = -u'' + f''(theta0) u = g  with the decaying
// exponential mode imposed at both ends and u(0) = 0.
class LinearizedSolver {
 public:
  explicit LinearizedSolver(const Profile& prof);

  const Profile& profile() const { return prof_; }
  // compatibility integral int g theta0'
  double compatibility(const std::vector<double>& g) const;
  RadialFunction solve(const std::vector<double>& g, int decay_power = 1) const;
  // interior rows of (A u - B g), the discrete ODE residual
  std::vector<double> residual(const std::vector<double>& u, const std::vector<double>& g) const;

 private:
  Profile prof_;
  std::vector<double> lo_, di_, up_;  // tridiagonal A (row i: lo_[i] u_{i-1} + di_[i] u_i + up_[i] u_{i+1})
  std::vector<double> psi_;           // discrete left null vector
  std::vector<double> e_;             // B theta0'
  double psi_e_ = 0;
  std::vector<double> apply_B(const std::vector<double>& g) const;
};

RadialFunction solve_linearized(const RadialFunction& g, const Profile& prof);

// C^2 quintic Hermite interpolant of (u, u', u'') samples on the profile grid;
// constant extension beyond the grid
class RadialInterp {
 public:
  RadialInterp() = default;
  RadialInterp(const Profile& prof, std::vector<double> u, std::vector<double> up, std::vector<double> upp);
  // from a solution of L u = g: u' by differences, u'' = f''(theta0) u - g
  static RadialInterp from_solution(const Profile& prof, const std::vector<double>& u, const std::vector<double>& g);
  static RadialInterp theta0(const Profile& prof);

  // out = {u, u', u''} at rho
  void eval(double rho, double out[3]) const;
  double operator()(double rho) const;
  const std::vector<double>& values() const { return u_; }

 private:
  double L_ = 0, h_ = 0;
  int n_ = 0;
  std::vector<double> u_, up_, upp_;
};

// sixth-order differences on the uniform grid (one-sided near the ends)
std::vector<double> grid_derivative(const std::vector<double>& u, double h);

}  // namespace convac
