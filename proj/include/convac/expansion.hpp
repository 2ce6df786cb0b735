#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "convac/chart.hpp"
#include "convac/history.hpp"
#include "convac/profile.hpp"

namespace convac {

// consistent: layer balances re-derived order by order (default);
// literal: the c1/c2/g equations exactly as displayed in the source derivation
enum class ExpansionVariant { consistent, literal };
// consistent: D_t h2 + v.grad h2 - kappa1 h2 = m0 Lap h1 - g; literal: reaction term cancelled
enum class H2Variant { consistent, literal };

ExpansionVariant parse_expansion_variant(const std::string& s);
H2Variant parse_h2_variant(const std::string& s);

struct ExpansionOptions {
  double m0 = 1;
  double delta = 0.05;
  ExpansionVariant variant = ExpansionVariant::consistent;
  H2Variant h2_variant = H2Variant::consistent;
  bool flat_surrogate = false;  // curvature terms dropped (h1 forcing and Lap d in b)
  double transport_tol = 1e-8;
  double elimination_tol = 1e-6;
};

// cutoff: 1 on [-delta, delta], 0 off [-2 delta, 2 delta], C^infinity in between
double zeta(double r, double delta);
double zeta_prime(double r, double delta);

// kappa1 = n . (grad v n), kappa2 = 1/2 n . grad^2 v [n, n] at X0(s); the chart's
// own parameter velocity supplies V
std::pair<double, double> compute_kappas(const Chart& chart, const VelocityField& v, double s, double tol = 1e-8);
std::pair<double, double> compute_kappas(const Curve& curve, const VelocityField& v, double s);
// derivative of kappa1 along the particle paths of v at X0(s)
double kappa1_dot(const Chart::Point& p, const VelocityField& v);

// Scalars entering the layer equations at one (s, t)
struct LayerScalars {
  double h1 = 0, kappa1 = 0, kappa2 = 0, b = 0, grad_h1_sq = 0, kappa1_dot = 0, m0 = 1;
};

// Universal radial functions W = L^{-1}(P - pi theta0'), pi = int P theta0' / sigma
class LayerBasis {
 public:
  enum Id { Ub, P1, P2, P3, P4, P5, P6, P7, P8, P9, count };
  explicit LayerBasis(const Profile& prof);

  const Profile& profile() const { return solver_.profile(); }
  const LinearizedSolver& solver() const { return solver_; }
  double sigma() const { return sigma_; }
  double pi(int k) const { return pi_[k]; }
  const std::vector<double>& rhs(int k) const { return rhs_[k]; }
  const RadialFunction& solution(int k) const { return sol_[k]; }
  const RadialInterp& interp(int k) const { return interp_[k]; }
  const RadialInterp& theta0() const { return theta0_; }
  static const char* name(int k);

 private:
  LinearizedSolver solver_;
  double sigma_;
  std::array<double, count> pi_{};
  std::array<std::vector<double>, count> rhs_;
  std::array<RadialFunction, count> sol_;
  std::array<RadialInterp, count> interp_;
  RadialInterp theta0_;
};

struct LayerCoefficients {
  std::array<double, LayerBasis::count> c1{}, c2{};
  double g = 0;
};

// c1 = sum c1[k] W_k, c2 = sum c2[k] W_k and the compatibility constant g
LayerCoefficients layer_coefficients(const LayerBasis& basis, const LayerScalars& q, ExpansionVariant variant);

// direct single solves (no basis), used as an independent route
RadialFunction solve_c1(const Profile& prof, double grad_h1_sq, double kappa1, double m0 = 1);
// dc1 is the derivative of c1 along the interface flow at fixed rho
double compute_g(const Profile& prof, const RadialFunction& c1, const RadialFunction& dc1, const LayerScalars& q,
                 ExpansionVariant variant = ExpansionVariant::literal);
std::vector<double> c2_rhs(const Profile& prof, double g, const RadialFunction& c1, const RadialFunction& dc1,
                           const LayerScalars& q, ExpansionVariant variant);
RadialFunction solve_c2(const Profile& prof, double g, const RadialFunction& c1, const RadialFunction& dc1,
                        const LayerScalars& q, ExpansionVariant variant = ExpansionVariant::literal);

// Values on the s-grid per history segment and node: v[seg][n - n0][j]
struct NodeTable {
  std::vector<std::vector<std::vector<double>>> v;
  const std::vector<double>& at(int seg, int n, const CurveHistory& h) const { return v[seg][n - h.segments()[seg].n0]; }
};

struct NodeFields {
  std::vector<double> h1, h2, kappa1, kappa2, H, a, b, g, grad_h1_sq, lap_h1, kappa1_dot, dt_h1, F0;
  std::array<std::vector<double>, LayerBasis::count> c1, c2;
};

struct ExpansionData {
  std::shared_ptr<const CurveHistory> history;
  std::shared_ptr<const LayerBasis> basis;
  ExpansionOptions opts;
  std::vector<std::vector<NodeFields>> nodes;  // [seg][n - n0]
  std::vector<int> c1_active, c2_active;       // basis ids with nonzero coefficients

  const NodeFields& node(int seg, int n) const { return nodes[seg][n - history->segments()[seg].n0]; }
  // max |F(0)| seen while eliminating the O(1) layer term
  double max_F0 = 0;
};

// advection-reaction equation y_t + a y_s - k y = q on T^1 along the history,
// characteristics traced with RK4, periodic cubic interpolation at the feet
struct TransportCoefficients {
  NodeTable a, k, q;                     // at nodes
  std::vector<std::vector<double>> a_mid, k_mid, q_mid;  // at t_{n+1/2}, n = 0..N-1
};
NodeTable solve_transport(const CurveHistory& hist, const TransportCoefficients& c);

// cubic Lagrange weights in t over the nodes of one segment, as (node, weight)
std::vector<std::pair<int, double>> time_weights(const CurveHistory& hist, int seg, double t);

NodeTable solve_h1(const CurveHistory& hist, const ExpansionOptions& opts);
std::shared_ptr<ExpansionData> build_expansion(std::shared_ptr<const CurveHistory> hist,
                                               std::shared_ptr<const LayerBasis> basis, const ExpansionOptions& opts);
// b at node time t_n and arbitrary s, from a built expansion
double compute_b(const ExpansionData& data, int seg, int n, double s);

}  // namespace convac
