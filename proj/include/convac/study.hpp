#pragma once

#include <memory>
#include <string>
#include <vector>

#include "convac/approx.hpp"
#include "convac/config.hpp"
#include "convac/metrics.hpp"
#include "convac/pde.hpp"
#include "convac/spectral.hpp"

namespace convac {

struct ProfileSummary {
  double sigma = 0, alpha = 0;
  double ode_residual = 0;     // -theta0'' + f'(theta0) with an eighth-order stencil
  double kernel_residual = 0;  // discrete L theta0'
  double identity_error = 0;   // L^{-1}(-2 theta0'') + rho theta0' / 2
  bool monotone = false, decay_ok = false;
  bool ok() const {
    return monotone && decay_ok && ode_residual <= 1e-8 && kernel_residual <= 1e-8 && identity_error <= 1e-6;
  }
};
ProfileSummary profile_summary(const Profile& p);
std::string profile_csv(const Profile& p);

// everything shared by the eps cases of one configuration
struct Pipeline {
  StudyConfig cfg;
  VelocityField v;
  std::shared_ptr<const LayerBasis> basis;
  std::shared_ptr<const CurveHistory> history;
  std::shared_ptr<const ExpansionData> data;

  ApproximateSolution approx(double eps) const;
  int grid_cells(double eps) const;
};

// validates cfg, evolves the curve (dry run for the 3 delta margin) and builds the expansion
Pipeline build_pipeline(const StudyConfig& cfg);

struct ResidualStudy {
  std::vector<double> eps;
  std::vector<ResidualReport> reports;
  OrderFit fit;
};
ResidualStudy residual_study(const Pipeline& p);

struct SolveCase {
  double eps = 0, amp = 0, dt = 0;
  int N = 0;
  Trajectory trajectory;
  ErrorReport errors;
};
SolveCase solve_case(const Pipeline& p, double eps, double amp);

struct ErrorStudy {
  double amp = 0;
  std::vector<ErrorReport> reports;
  // norm_linf_l2, norm_grad_out, norm_tau_in, norm_grad_in, norm_dn_in
  std::vector<std::string> names;
  std::vector<OrderFit> fits;
  std::vector<bool> judged;  // the dn norm is reported only
};
ErrorStudy error_study(const Pipeline& p, double amp);

struct SpectralStudy {
  std::vector<SpectralReport> reports;  // eps-major, then time
  std::vector<double> eps;
  std::vector<double> envelope;  // max over t of -lambda_min per eps
  double C_L = 0;                // max(0, max envelope)
  std::vector<double> allowed;   // growth cap for envelope[i + 1]
  bool uniform = false;
};
SpectralStudy spectral_study(const Pipeline& p);
// -lambda_min may grow by at most `growth` per eps halving where it is positive
void judge_spectral(SpectralStudy& s, double growth);

std::string residual_csv(const ResidualStudy& r);
std::string errors_csv(const std::vector<ErrorStudy>& e);
std::string eoc_csv(const ResidualStudy* r, const std::vector<ErrorStudy>& e);
std::string spectral_csv(const SpectralStudy& s);

// write to a temporary sibling and rename over the target
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace convac
