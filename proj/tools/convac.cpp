#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fmt/format.h>
#include <omp.h>

#include "convac/errors.hpp"
#include "convac/study.hpp"

using namespace convac;

namespace {

constexpr int kOk = 0, kFail = 2, kUsage = 64, kInternal = 70;

struct Options {
  std::string config, out, eps_override;
  int threads = 0;
};

std::string out_path(const StudyConfig& cfg, const std::string& name) { return cfg.out_dir + "/" + name; }

int cmd_print_config(const StudyConfig& cfg) {
  fmt::print("{}", to_ini(cfg));
  return kOk;
}

int cmd_profile(const StudyConfig& cfg) {
  Profile p = solve_profile(cfg.make_potential(), cfg.profile_L, cfg.profile_h);
  auto s = profile_summary(p);
  write_file_atomic(out_path(cfg, "profile.csv"), profile_csv(p));
  fmt::print("potential        {}\n", p.f.name());
  fmt::print("sigma            {:.12f}\n", s.sigma);
  fmt::print("alpha            {:.12f}\n", s.alpha);
  fmt::print("ode residual     {:.3e}\n", s.ode_residual);
  fmt::print("kernel residual  {:.3e}\n", s.kernel_residual);
  fmt::print("identity error   {:.3e}\n", s.identity_error);
  fmt::print("monotone         {}\n", s.monotone);
  fmt::print("decay verified   {}\n", s.decay_ok);
  fmt::print("profile invariants {}\n", s.ok() ? "PASS" : "FAIL");
  return s.ok() ? kOk : kFail;
}

int cmd_expansion(const StudyConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  const auto& hist = *p.history;
  const auto& data = *p.data;
  const int M = hist.M();
  struct Field {
    const char* name;
    std::vector<double> NodeFields::*member;
  };
  const Field fields[] = {{"h1", &NodeFields::h1},         {"h2", &NodeFields::h2}, {"kappa1", &NodeFields::kappa1},
                          {"kappa2", &NodeFields::kappa2}, {"b", &NodeFields::b},   {"g", &NodeFields::g}};
  for (const auto& f : fields) {
    std::string out = "t,s,value\n";
    for (int n = 0; n <= hist.steps(); ++n) {
      const auto& node = data.node(hist.segment_at(n * hist.dt()), n);
      for (int j = 0; j < M; ++j)
        out += fmt::format("{:.6f},{:.8f},{:.12e}\n", n * hist.dt(), 2 * M_PI * j / M, (node.*f.member)[j]);
    }
    write_file_atomic(out_path(cfg, fmt::format("{}.csv", f.name)), out);
  }
  // correctors on a coarse (t, s, rho) lattice
  const int t_stride = std::max(1, hist.steps() / 10), s_stride = std::max(1, M / 32);
  for (int order = 1; order <= 2; ++order) {
    const auto& active = order == 1 ? data.c1_active : data.c2_active;
    std::string out = "t,s,rho,value\n";
    for (int n = 0; n <= hist.steps(); n += t_stride) {
      const auto& node = data.node(hist.segment_at(n * hist.dt()), n);
      for (int j = 0; j < M; j += s_stride)
        for (int r = -32; r <= 32; ++r) {
          double rho = 0.25 * r, val = 0;
          for (int k : active) val += (order == 1 ? node.c1 : node.c2)[k][j] * p.basis->interp(k)(rho);
          out += fmt::format("{:.6f},{:.8f},{:.2f},{:.12e}\n", n * hist.dt(), 2 * M_PI * j / M, rho, val);
        }
    }
    write_file_atomic(out_path(cfg, fmt::format("c{}.csv", order)), out);
  }
  fmt::print("segments         {}\n", hist.segments().size());
  fmt::print("time nodes       {}\n", hist.steps() + 1);
  fmt::print("max |F(0)|       {:.3e}\n", data.max_F0);
  fmt::print("sigma            {:.12f}\n", p.basis->sigma());
  return kOk;
}

int cmd_residual(const StudyConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  auto r = residual_study(p);
  write_file_atomic(out_path(cfg, "residual.csv"), residual_csv(r));
  write_file_atomic(out_path(cfg, "eoc.csv"), eoc_csv(&r, {}));
  for (size_t i = 0; i < r.eps.size(); ++i) fmt::print("eps {:<8} |S| {:.6e}\n", r.eps[i], r.reports[i].norm_L2);
  bool ok = r.fit.slope >= cfg.order_min;
  fmt::print("residual order {:.3f} (required >= {}) {}\n", r.fit.slope, cfg.order_min, ok ? "PASS" : "FAIL");
  return ok ? kOk : kFail;
}

int cmd_solve(const StudyConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  ErrorStudy e;
  e.amp = cfg.perturbation_amp.front();
  for (double eps : cfg.eps) {
    auto sc = solve_case(p, eps, e.amp);
    std::string dir = fmt::format("solve/eps_{}", eps);
    std::string index = "k,t,file,energy\n";
    for (size_t k = 0; k < sc.trajectory.snapshots.size(); ++k) {
      const auto& c = sc.trajectory.snapshots[k];
      std::string out = "i,j,value\n";
      for (int i = 0; i <= c.N; ++i)
        for (int j = 0; j <= c.N; ++j) out += fmt::format("{},{},{:.12e}\n", i, j, c(i, j));
      std::string name = fmt::format("snap_{:04d}.csv", k);
      write_file_atomic(out_path(cfg, dir + "/" + name), out);
      index += fmt::format("{},{:.10f},{},{:.12e}\n", k, c.t, name, sc.trajectory.energy[k]);
    }
    write_file_atomic(out_path(cfg, dir + "/index.csv"), index);
    fmt::print("eps {:<8} N {:<5} dt {:.4e} steps {:<6} max|c| {:.6f} |c-cA|_LinfL2 {:.6e}\n", eps, sc.N, sc.dt,
               sc.trajectory.steps, sc.trajectory.max_abs, sc.errors.norm_linf_l2);
    e.reports.push_back(sc.errors);
  }
  write_file_atomic(out_path(cfg, "errors.csv"), errors_csv({e}));
  return kOk;
}

bool print_spectral(const StudyConfig& cfg, const SpectralStudy& s) {
  for (const auto& r : s.reports) fmt::print("eps {:<8} t {:<8} lambda_min {:+.6e}\n", r.eps, r.t, r.lambda_min);
  fmt::print("C_L {:.6f}; spectral uniformity (growth <= {}% per halving) {}\n", s.C_L, 100 * cfg.spectral_growth,
             s.uniform ? "PASS" : "FAIL");
  return s.uniform;
}

int cmd_spectrum(const StudyConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  auto s = spectral_study(p);
  write_file_atomic(out_path(cfg, "spectral.csv"), spectral_csv(s));
  return print_spectral(cfg, s) ? kOk : kFail;
}

int cmd_study(const StudyConfig& cfg) {
  Pipeline p = build_pipeline(cfg);
  std::vector<std::string> failed;
  auto r = residual_study(p);
  write_file_atomic(out_path(cfg, "residual.csv"), residual_csv(r));
  fmt::print("residual order {:.3f}\n", r.fit.slope);
  if (r.fit.slope < cfg.order_min) failed.push_back("residual_order");
  std::vector<ErrorStudy> es;
  for (double amp : cfg.perturbation_amp) {
    es.push_back(error_study(p, amp));
    const auto& e = es.back();
    for (size_t k = 0; k < e.fits.size(); ++k) {
      fmt::print("amp {} {:<14} order {:.3f}\n", amp, e.names[k], e.fits[k].slope);
      if (e.judged[k] && e.fits[k].slope < cfg.order_min) failed.push_back(fmt::format("error_order(amp={}, {})", amp, e.names[k]));
    }
  }
  write_file_atomic(out_path(cfg, "errors.csv"), errors_csv(es));
  write_file_atomic(out_path(cfg, "eoc.csv"), eoc_csv(&r, es));
  auto s = spectral_study(p);
  write_file_atomic(out_path(cfg, "spectral.csv"), spectral_csv(s));
  if (!print_spectral(cfg, s)) failed.push_back("spectral_uniformity");
  if (failed.empty()) {
    fmt::print("study PASS\n");
    return kOk;
  }
  fmt::print("study FAIL: first failing criterion {}", failed.front());
  if (failed.size() > 1) fmt::print(" ({} failing in total)", failed.size());
  fmt::print("\n");
  return kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convective Allen-Cahn verification"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "INI configuration file");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--eps-override", o.eps_override, "comma separated eps list");
  app.add_option("--threads", o.threads, "OpenMP threads")->check(CLI::PositiveNumber);
  const char* names[] = {"profile", "expansion", "residual", "solve", "spectrum", "study", "print-config"};
  for (const char* n : names) app.add_subcommand(n)->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    StudyConfig cfg = o.config.empty() ? StudyConfig{} : load_config(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (!o.eps_override.empty()) cfg.eps = parse_list(o.eps_override);
    if (o.threads > 0) omp_set_num_threads(o.threads);
    if (cmd == "print-config") return cmd_print_config(cfg);
    if (cmd == "profile") return cmd_profile(cfg);
    validate(cfg);
    if (cmd == "expansion") return cmd_expansion(cfg);
    if (cmd == "residual") return cmd_residual(cfg);
    if (cmd == "solve") return cmd_solve(cfg);
    if (cmd == "spectrum") return cmd_spectrum(cfg);
    return cmd_study(cfg);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const Error& e) {
    fmt::print(stderr, "{}: {}\n", e.kind(), e.what());
    return kFail;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kInternal;
  }
}
