#include "convac/study.hpp"

#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>

#include "convac/errors.hpp"

namespace convac {

ProfileSummary profile_summary(const Profile& p) {
  ProfileSummary r;
  r.sigma = sigma(p);
  r.alpha = p.alpha;
  const double w[9] = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560};
  for (int i = 4; i < p.size() - 4; ++i) {
    double d2 = 0;
    for (int k = 0; k < 9; ++k) d2 += w[k] * p.theta0[i + k - 4];
    r.ode_residual = std::max(r.ode_residual, std::abs(-d2 / (p.h * p.h) + p.f.fp(p.theta0[i])));
  }
  LinearizedSolver L(p);
  for (double x : L.residual(p.theta0_p, std::vector<double>(p.size(), 0.0)))
    r.kernel_residual = std::max(r.kernel_residual, std::abs(x));
  RadialFunction u = L.solve(p.theta0_pp);
  for (int i = 0; i < p.size(); ++i)
    if (std::abs(p.rho[i]) <= p.L - 2)
      r.identity_error = std::max(r.identity_error, std::abs(u.u[i] + 0.5 * p.rho[i] * p.theta0_p[i]));
  r.monotone = true;
  for (int i = 1; i < p.size(); ++i) r.monotone = r.monotone && p.theta0[i] >= p.theta0[i - 1];
  r.decay_ok = verify_decay(p, p.theta0_p, 0) && u.decay_verified;
  return r;
}

std::string profile_csv(const Profile& p) {
  std::string out = "rho,theta0,theta0_p,theta0_pp\n";
  for (int i = 0; i < p.size(); ++i)
    out += fmt::format("{:.6f},{:.16e},{:.16e},{:.16e}\n", p.rho[i], p.theta0[i], p.theta0_p[i], p.theta0_pp[i]);
  return out;
}

ApproximateSolution Pipeline::approx(double eps) const {
  return ApproximateSolution(data, eps, cfg.include_c1, cfg.include_c2);
}

int Pipeline::grid_cells(double eps) const { return int(std::ceil(cfg.cells_per_eps / eps - 1e-9)); }

Pipeline build_pipeline(const StudyConfig& cfg) {
  validate(cfg);
  Pipeline p;
  p.cfg = cfg;
  p.v = cfg.make_velocity();
  p.basis = std::make_shared<const LayerBasis>(solve_profile(cfg.make_potential(), cfg.profile_L, cfg.profile_h));
  p.history = std::make_shared<const CurveHistory>(cfg.make_curve(), p.v, cfg.T0, cfg.history_dt);
  double margin = p.history->min_boundary_distance();
  if (!(margin > 3 * cfg.delta))
    throw ConfigError(fmt::format("curve comes within {:.4g} of the boundary, need more than 3 delta = {:.4g}", margin,
                                  3 * cfg.delta));
  p.data = build_expansion(p.history, p.basis, cfg.expansion_options());
  return p;
}

ResidualStudy residual_study(const Pipeline& p) {
  ResidualStudy r;
  std::vector<double> norms;
  for (double eps : p.cfg.eps) {
    auto ca = p.approx(eps);
    auto grid = residual_grid(eps, p.cfg.cells_per_eps, p.cfg.residual_time_samples, p.cfg.m0);
    r.eps.push_back(eps);
    r.reports.push_back(residual_S(ca, p.v, grid));
    norms.push_back(r.reports.back().norm_L2);
  }
  r.fit = eoc(r.eps, norms);
  return r;
}

SolveCase solve_case(const Pipeline& p, double eps, double amp) {
  SolveCase sc;
  sc.eps = eps;
  sc.amp = amp;
  sc.N = p.grid_cells(eps);
  auto ca = p.approx(eps);
  SolverConfig scfg;
  scfg.eps = eps;
  scfg.m0 = p.cfg.m0;
  scfg.T0 = p.cfg.T0;
  scfg.stab = p.cfg.stab;
  scfg.cfl = p.cfg.cfl;
  scfg.cg_tol = p.cfg.cg_tol;
  scfg.f = p.cfg.make_potential();
  scfg.dt = p.cfg.dt_rule == "fixed" ? p.cfg.dt : aligned_dt(scfg, p.v, sc.N, p.cfg.snapshots);
  sc.dt = scfg.dt;
  std::vector<double> times;
  for (int k = 0; k <= p.cfg.snapshots; ++k) times.push_back(p.cfg.T0 * k / p.cfg.snapshots);
  sc.trajectory = run(well_prepared_initial(ca, sc.N, amp, p.cfg.seed), p.v, scfg, times);
  sc.errors = error_norms(sc.trajectory, ca);
  return sc;
}

ErrorStudy error_study(const Pipeline& p, double amp) {
  ErrorStudy e;
  e.amp = amp;
  for (double eps : p.cfg.eps) e.reports.push_back(solve_case(p, eps, amp).errors);
  e.names = {"norm_linf_l2", "norm_grad_out", "norm_tau_in", "norm_grad_in", "norm_dn_in"};
  e.judged = {true, true, true, true, false};
  std::vector<double> cols[5];
  for (const auto& r : e.reports) {
    cols[0].push_back(r.norm_linf_l2);
    cols[1].push_back(r.norm_grad_out);
    cols[2].push_back(r.norm_tau_in);
    cols[3].push_back(r.norm_grad_in);
    cols[4].push_back(r.norm_dn_in);
  }
  for (auto& c : cols) e.fits.push_back(eoc(p.cfg.eps, c));
  return e;
}

void judge_spectral(SpectralStudy& s, double growth) {
  s.C_L = 0;
  for (double e : s.envelope) s.C_L = std::max(s.C_L, e);
  s.allowed.clear();
  s.uniform = true;
  for (size_t i = 0; i + 1 < s.envelope.size(); ++i) {
    double halvings = std::log2(s.eps[i] / s.eps[i + 1]);
    double cap = std::max(s.envelope[i], 0.0) * std::pow(1 + growth, halvings);
    s.allowed.push_back(cap);
    if (s.envelope[i + 1] > 0 && s.envelope[i + 1] > cap) s.uniform = false;
  }
}

SpectralStudy spectral_study(const Pipeline& p) {
  SpectralStudy s;
  for (double eps : p.cfg.eps) {
    auto ca = p.approx(eps);
    double env = -1e300;
    for (double f : p.cfg.spectral_times) {
      s.reports.push_back(min_rayleigh(ca, f * p.cfg.T0, p.grid_cells(eps)));
      env = std::max(env, -s.reports.back().lambda_min);
    }
    s.eps.push_back(eps);
    s.envelope.push_back(env);
  }
  judge_spectral(s, p.cfg.spectral_growth);
  return s;
}

std::string residual_csv(const ResidualStudy& r) {
  std::string out = "eps,norm_L2\n";
  for (size_t i = 0; i < r.eps.size(); ++i) out += fmt::format("{},{:.10e}\n", r.eps[i], r.reports[i].norm_L2);
  return out;
}

std::string errors_csv(const std::vector<ErrorStudy>& es) {
  std::string out = "amp,eps,norm_linf_l2,norm_grad_out,norm_tau_in,norm_grad_in,norm_dn_in\n";
  for (const auto& e : es)
    for (const auto& r : e.reports)
      out += fmt::format("{},{},{:.10e},{:.10e},{:.10e},{:.10e},{:.10e}\n", e.amp, r.eps, r.norm_linf_l2,
                         r.norm_grad_out, r.norm_tau_in, r.norm_grad_in, r.norm_dn_in);
  return out;
}

std::string eoc_csv(const ResidualStudy* r, const std::vector<ErrorStudy>& es) {
  auto row = [](const std::string& name, const OrderFit& f) {
    std::string s = fmt::format("{},{:.6f}", name, f.slope);
    for (double q : f.pairwise) s += fmt::format(",{:.6f}", q);
    return s + "\n";
  };
  size_t np = r ? r->fit.pairwise.size() : es.empty() ? 0 : es.front().fits.front().pairwise.size();
  std::string out = "norm,slope";
  for (size_t i = 0; i < np; ++i) out += fmt::format(",pairwise_{}", i + 1);
  out += "\n";
  if (r) out += row("residual_L2", r->fit);
  for (const auto& e : es)
    for (size_t k = 0; k < e.fits.size(); ++k) out += row(fmt::format("amp{}/{}", e.amp, e.names[k]), e.fits[k]);
  return out;
}

std::string spectral_csv(const SpectralStudy& s) {
  std::string out = "eps,t,lambda_min\n";
  for (const auto& r : s.reports) out += fmt::format("{},{},{:.10e}\n", r.eps, r.t, r.lambda_min);
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace convac
