#pragma once

#include <string>
#include <vector>

#include "convac/curve.hpp"
#include "convac/expansion.hpp"
#include "convac/potential.hpp"
#include "convac/velocity.hpp"

namespace convac {

struct CurveSpec {
  std::string kind = "circle";  // circle | ellipse | fourier
  Vec2 center{0.5, 0.5};
  double radius = 0.25;
  double a = 0.3, b = 0.2;  // ellipse semi-axes
  std::vector<double> xc, xs, yc, ys;  // fourier coefficients
  int markers = 256;
};

struct StudyConfig {
  double domain_size = 1;
  CurveSpec curve;
  std::string velocity = "cellular";
  double velocity_amplitude = 0.02;
  std::string potential = "quartic";
  std::vector<double> potential_q;  // factored form f = (1 - c^2)^2 q(c^2)
  double profile_L = 40, profile_h = 0.0125;

  double delta = 0.05;
  double m0 = 1;
  double T0 = 0.25;
  double history_dt = 1e-3;
  std::string expansion_variant = "consistent";
  std::string h2_rhs_variant = "consistent";
  bool include_c1 = true, include_c2 = true;

  std::vector<double> eps{0.12, 0.08, 0.0533, 0.0356};
  double cells_per_eps = 8;
  std::string dt_rule = "aligned";  // aligned | fixed
  double dt = 0;                    // used when dt_rule = fixed
  int snapshots = 50;
  std::vector<double> perturbation_amp{0, 1};
  unsigned long long seed = 20240617;
  double stab = 3.32, cfl = 0.5, cg_tol = 1e-10;

  int residual_time_samples = 50;
  std::vector<double> spectral_times{0, 0.5, 1};  // fractions of T0

  double order_min = 2.2;
  double spectral_growth = 0.1;  // per eps halving

  std::string out_dir = "out";

  Potential make_potential() const;
  VelocityField make_velocity() const;
  Curve make_curve() const;
  ExpansionOptions expansion_options() const;
};

// flat INI with one section per module; unknown keys are rejected
StudyConfig load_config(const std::string& path);
StudyConfig parse_config(const std::string& text);
std::string to_ini(const StudyConfig& cfg);
// throws ConfigError / ResolutionInsufficient
void validate(const StudyConfig& cfg);
std::vector<double> parse_list(const std::string& s);

}  // namespace convac
