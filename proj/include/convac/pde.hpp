#pragma once

#include <cstdint>
#include <vector>

#include "convac/approx.hpp"
#include "convac/potential.hpp"
#include "convac/velocity.hpp"

namespace convac {

// nodal values on the uniform grid x_i = i/N, i = 0..N (both directions);
// the boundary ring holds the Dirichlet value -1
struct ScalarField2D {
  int N = 0;
  double t = 0;
  std::vector<double> v;

  ScalarField2D() = default;
  ScalarField2D(int N, double value, double t = 0);
  double h() const { return 1.0 / N; }
  int stride() const { return N + 1; }
  double& operator()(int i, int j) { return v[i * (N + 1) + j]; }
  double operator()(int i, int j) const { return v[i * (N + 1) + j]; }
  Vec2 x(int i, int j) const { return {i * h(), j * h()}; }
  double max_abs() const;
};

struct SolverConfig {
  double eps = 0.1, m0 = 1, dt = 0, T0 = 0.25;
  double stab = 3.32;  // S_stab >= max |f''| on [-1.2, 1.2]
  double cfl = 0.5;
  Potential f = Potential::quartic();
  double cg_tol = 1e-10;
  int cg_max_iter = 5000;
};

// throws CFLViolated / ConfigError when dt or stab violate the solver invariants
void validate(const SolverConfig& cfg, const VelocityField& v, int N);
// largest dt <= min(cfl h / |v|, eps h) with T0 an integer multiple of steps_per_snapshot * dt
double aligned_dt(const SolverConfig& cfg, const VelocityField& v, int N, int snapshots);

// c_A(., 0) on the grid plus a seeded smooth bump supported in the delta tube
// with discrete L2 norm amp * eps^2.5
ScalarField2D well_prepared_initial(const ApproximateSolution& ca, int N, double perturbation_amp,
                                    std::uint64_t seed = 20240617);

// discrete L2 norm sqrt(sum h^2 u^2) over all nodes
double l2_norm(const ScalarField2D& u);
double energy(const ScalarField2D& c, double eps, const Potential& f);

// one linearly stabilized IMEX step
ScalarField2D step(const ScalarField2D& c, const VelocityField& v, const SolverConfig& cfg, int* cg_iterations = nullptr);

struct Trajectory {
  std::vector<ScalarField2D> snapshots;
  std::vector<double> energy;  // per snapshot
  double max_abs = 0;          // over all steps
  int steps = 0, cg_iterations = 0;
};

Trajectory run(const ScalarField2D& c0, const VelocityField& v, const SolverConfig& cfg,
               const std::vector<double>& snapshot_times);

}  // namespace convac
