#pragma once

#include <vector>

#include "convac/approx.hpp"

namespace convac {

struct SpectralReport {
  double eps = 0, t = 0;
  double lambda_min = 0;
  int iterations = 0;     // Lanczos steps in total
  double residual = 0;    // |A x - lambda x| / (scale |x|), scale = max(|lambda|, max|q|)
  double rayleigh = 0;    // Rayleigh quotient of the returned vector
  std::vector<double> vector;  // interior nodes, row-major (N-1)^2
};

struct SpectralOptions {
  int krylov = 60;
  int max_restarts = 60;
  double tol = 1e-9;
  unsigned long seed = 12345;
};

// smallest eigenvalue of eps (-Lap_h) + diag(q) with homogeneous Dirichlet data on
// the N x N grid; q holds the interior nodal values, row-major
SpectralReport min_eigenvalue(int N, double eps, const std::vector<double>& q, const SpectralOptions& opts = {});

// q = f''(c_A(., t)) / eps
SpectralReport min_rayleigh(const ApproximateSolution& ca, double t, int N, const SpectralOptions& opts = {});

}  // namespace convac
