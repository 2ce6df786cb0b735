#pragma once

#include <string>
#include <vector>

#include "convac/approx.hpp"
#include "convac/pde.hpp"

namespace convac {

struct TubeMasks {
  int N = 0;
  std::vector<char> in1, in2;  // Gamma(delta), Gamma(2 delta)
  std::vector<Vec2> tau, n;    // tau(S(x)), n(S(x)) inside Gamma(2 delta)
};

TubeMasks tubular_masks(const Curve& curve, int N, double delta);

struct ErrorReport {
  double eps = 0;
  double norm_linf_l2 = 0;   // max_t |u(t)|_{L2}
  double norm_grad_out = 0;  // eps^{1/2} |grad u|_{L2} off Gamma(delta)
  double norm_tau_in = 0;    // eps^{1/2} |grad_tau u|_{L2} on Gamma(2 delta)
  double norm_grad_in = 0;   // eps |grad u|_{L2} on Gamma(2 delta)
  double norm_dn_in = 0;     // eps |d_n u|_{L2} on Gamma(2 delta)
};

// trapezoidal L2 norm over the unit square
double l2_trapezoid(const ScalarField2D& u);

// u_k = c_eps - c_A at snapshot k; times right-endpoint weighted, a single
// snapshot gets weight 1
ErrorReport error_norms(const std::vector<ScalarField2D>& u, const std::vector<TubeMasks>& masks, double eps);
ErrorReport error_norms(const Trajectory& tr, const ApproximateSolution& ca);

struct OrderFit {
  double slope = 0;
  std::vector<double> pairwise;  // log(e_i / e_{i+1}) / log(eps_i / eps_{i+1})
};

OrderFit eoc(const std::vector<double>& eps, const std::vector<double>& norms);

}  // namespace convac
