#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "convac/expansion.hpp"

namespace convac {

// c_A = zeta(d) c_in + (1 - zeta(d)) sign(d) with
// c_in = theta0(rho) + eps c1(rho, s, t) + eps^2 c2(rho, s, t), rho = d/eps - h1 - eps h2
class ApproximateSolution {
 public:
  ApproximateSolution(std::shared_ptr<const ExpansionData> data, double eps, bool include_c1 = true,
                      bool include_c2 = true);

  // all data frozen at one instant; cheap to evaluate, immutable
  class Slice {
   public:
    struct Local {
      double r = 0, s = 0, rho = 0, c = 0;
      bool in_tube = false;  // |r| < 2 delta
    };
    double t() const { return t_; }
    const Curve& curve() const { return chart_.curve(); }
    const Chart& chart() const { return chart_; }
    Local evaluate(Vec2 x) const;
    double operator()(Vec2 x) const { return evaluate(x).c; }
    // rho_eps(x, t) where the chart is defined
    std::optional<double> rho(Vec2 x) const;
    // far-field value +-1 of the region containing x
    double far_value(Vec2 x) const { return chart_.curve().winding(x) != 0 ? 1.0 : -1.0; }

   private:
    friend class ApproximateSolution;
    Slice(Chart chart) : chart_(std::move(chart)) {}
    double t_ = 0, eps_ = 0, delta_ = 0;
    Chart chart_;
    int kmax_ = 0;
    TrigSeries h1_, h2_;
    std::vector<std::pair<const RadialInterp*, TrigSeries>> c1_, c2_;
    const RadialInterp* theta0_ = nullptr;
    double inner(double rho, const TrigTable& tab) const;
  };

  double eps() const { return eps_; }
  const ExpansionData& data() const { return *data_; }
  const Potential& potential() const { return data_->basis->profile().f; }
  Slice slice(double t) const;
  double operator()(Vec2 x, double t) const { return slice(t)(x); }

 private:
  std::shared_ptr<const ExpansionData> data_;
  double eps_;
  bool with_c1_, with_c2_;
};

ApproximateSolution assemble_cA(std::shared_ptr<const ExpansionData> data, double eps, bool include_c1 = true,
                                bool include_c2 = true);

struct ResidualGrid {
  int N = 0;               // cells per side of the unit square
  double dt_fd = 0;        // time step of the central difference in t
  int time_samples = 50;   // right-endpoint quadrature nodes k T0 / K
  double m0 = 1;
};

// grid rule: N = ceil(cells_per_eps / eps), dt_fd = eps h
ResidualGrid residual_grid(double eps, double cells_per_eps, int time_samples, double m0 = 1);

struct ResidualReport {
  double norm_L2 = 0;            // space-time L2 norm over the unit square x (0, T0)
  double max_abs = 0;
  std::vector<double> t, norm_t;  // L2(Omega) norm per time sample
  long evaluations = 0;
};

// S = d_t c_A + v . grad c_A - m0 (eps Lap c_A - f'(c_A) / eps) by fourth-order
// central differences in x and second-order in t, at one instant
std::vector<double> residual_field(const ApproximateSolution& ca, const VelocityField& v, const ResidualGrid& grid,
                                   double t, long* evaluations = nullptr);
ResidualReport residual_S(const ApproximateSolution& ca, const VelocityField& v, const ResidualGrid& grid);

}  // namespace convac
