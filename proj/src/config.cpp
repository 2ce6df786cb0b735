#include "convac/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <functional>
#include <map>
#include <sstream>

#include "convac/errors.hpp"

namespace convac {

namespace {

namespace pt = boost::property_tree;

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt::format("{}", v[i]);
  return s;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    size_t pos = 0;
    double x = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(x)) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: not a number: '{}'", key, s));
  }
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, s));
}

struct Key {
  std::string name;
  std::function<void(StudyConfig&, const std::string&)> set;
  std::function<std::string(const StudyConfig&)> get;
};

#define NUM(path, field)                                                                  \
  Key{path, [](StudyConfig& c, const std::string& s) { c.field = to_double(path, s); }, \
      [](const StudyConfig& c) { return fmt::format("{}", c.field); }}
#define INT(path, field)                                                                             \
  Key{path, [](StudyConfig& c, const std::string& s) { c.field = int(std::lround(to_double(path, s))); }, \
      [](const StudyConfig& c) { return fmt::format("{}", c.field); }}
#define STR(path, field) \
  Key{path, [](StudyConfig& c, const std::string& s) { c.field = s; }, [](const StudyConfig& c) { return c.field; }}
#define LIST(path, field)                                                                   \
  Key{path, [](StudyConfig& c, const std::string& s) { c.field = parse_list(s); },         \
      [](const StudyConfig& c) { return fmt_list(c.field); }}
#define BOOL(path, field)                                                               \
  Key{path, [](StudyConfig& c, const std::string& s) { c.field = to_bool(path, s); }, \
      [](const StudyConfig& c) { return std::string(c.field ? "true" : "false"); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> k{
      NUM("domain.size", domain_size),
      STR("curve.kind", curve.kind),
      NUM("curve.center_x", curve.center.x),
      NUM("curve.center_y", curve.center.y),
      NUM("curve.radius", curve.radius),
      NUM("curve.a", curve.a),
      NUM("curve.b", curve.b),
      LIST("curve.xc", curve.xc),
      LIST("curve.xs", curve.xs),
      LIST("curve.yc", curve.yc),
      LIST("curve.ys", curve.ys),
      INT("curve.markers", curve.markers),
      STR("velocity.name", velocity),
      NUM("velocity.amplitude", velocity_amplitude),
      STR("potential.name", potential),
      LIST("potential.q", potential_q),
      NUM("profile.L", profile_L),
      NUM("profile.h", profile_h),
      NUM("expansion.delta", delta),
      NUM("expansion.m0", m0),
      NUM("expansion.T0", T0),
      NUM("expansion.dt", history_dt),
      STR("expansion.variant", expansion_variant),
      STR("expansion.h2_rhs_variant", h2_rhs_variant),
      BOOL("expansion.include_c1", include_c1),
      BOOL("expansion.include_c2", include_c2),
      LIST("study.eps", eps),
      NUM("study.cells_per_eps", cells_per_eps),
      NUM("study.order_min", order_min),
      NUM("study.spectral_growth", spectral_growth),
      STR("solver.dt_rule", dt_rule),
      NUM("solver.dt", dt),
      INT("solver.snapshots", snapshots),
      LIST("solver.perturbation_amp", perturbation_amp),
      NUM("solver.seed", seed),
      NUM("solver.stab", stab),
      NUM("solver.cfl", cfl),
      NUM("solver.cg_tol", cg_tol),
      INT("residual.time_samples", residual_time_samples),
      LIST("spectral.times", spectral_times),
      STR("output.dir", out_dir),
  };
  return k;
}

#undef NUM
#undef INT
#undef STR
#undef LIST
#undef BOOL

StudyConfig from_ptree(const pt::ptree& tree) {
  StudyConfig cfg;
  std::map<std::string, const Key*> index;
  for (const auto& k : keys()) index[k.name] = &k;
  for (const auto& [section, sub] : tree) {
    if (sub.empty() && !sub.data().empty()) throw ConfigError(fmt::format("key '{}' outside a section", section));
    for (const auto& [key, val] : sub) {
      std::string name = section + "." + key;
      auto it = index.find(name);
      if (it == index.end()) throw ConfigError(fmt::format("unknown key '{}'", name));
      it->second->set(cfg, val.data());
    }
  }
  return cfg;
}

}  // namespace

std::vector<double> parse_list(const std::string& s) {
  std::string t = s;
  for (char& ch : t)
    if (ch == ',') ch = ' ';
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double("list", tok));
  return out;
}

StudyConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return from_ptree(tree);
}

StudyConfig load_config(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError(fmt::format("config file not found: {}", path));
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return from_ptree(tree);
}

std::string to_ini(const StudyConfig& cfg) {
  std::string out, section;
  for (const auto& k : keys()) {
    auto dot = k.name.find('.');
    std::string sec = k.name.substr(0, dot);
    if (sec != section) {
      out += fmt::format("{}[{}]\n", section.empty() ? "" : "\n", sec);
      section = sec;
    }
    out += fmt::format("{} = {}\n", k.name.substr(dot + 1), k.get(cfg));
  }
  return out;
}

Potential StudyConfig::make_potential() const {
  if (potential == "quartic") return Potential::quartic();
  if (potential == "double_well") {
    if (potential_q.empty()) throw ConfigError("potential.q is required for double_well");
    return Potential::double_well(potential_q);
  }
  if (potential == "polynomial") return Potential::polynomial(potential_q);
  throw ConfigError(fmt::format("unknown potential '{}'", potential));
}

VelocityField StudyConfig::make_velocity() const {
  return VelocityField::by_name(velocity, velocity_amplitude, curve.center);
}

Curve StudyConfig::make_curve() const {
  if (curve.markers < 8 || curve.markers % 2) throw ConfigError("curve.markers must be even and >= 8");
  if (curve.kind == "circle") return Curve::circle(curve.center, curve.radius, curve.markers);
  if (curve.kind == "ellipse") return Curve::ellipse(curve.center, curve.a, curve.b, curve.markers);
  if (curve.kind == "fourier") {
    if (curve.xc.empty() || curve.yc.empty()) throw ConfigError("curve.xc and curve.yc are required for fourier");
    return Curve::fourier(curve.xc, curve.xs, curve.yc, curve.ys, curve.markers);
  }
  throw ConfigError(fmt::format("unknown curve kind '{}'", curve.kind));
}

ExpansionOptions StudyConfig::expansion_options() const {
  ExpansionOptions o;
  o.m0 = m0;
  o.delta = delta;
  o.variant = parse_expansion_variant(expansion_variant);
  o.h2_variant = parse_h2_variant(h2_rhs_variant);
  return o;
}

void validate(const StudyConfig& cfg) {
  if (cfg.domain_size != 1) throw ConfigError("only the unit square is supported (domain.size = 1)");
  if (cfg.eps.empty()) throw ConfigError("study.eps is empty");
  for (double e : cfg.eps)
    if (!(e > 0 && e <= 0.2)) throw ConfigError(fmt::format("eps {} outside (0, 0.2]", e));
  for (size_t i = 0; i + 1 < cfg.eps.size(); ++i)
    if (!(cfg.eps[i + 1] < cfg.eps[i])) throw ConfigError("study.eps must be strictly decreasing");
  if (cfg.eps.size() > 2) {
    double q0 = cfg.eps[0] / cfg.eps[1];
    for (size_t i = 1; i + 1 < cfg.eps.size(); ++i)
      if (std::abs(cfg.eps[i] / cfg.eps[i + 1] / q0 - 1) > 0.01) throw ConfigError("study.eps is not geometric");
  }
  if (cfg.cells_per_eps < 8)
    throw ResolutionInsufficient(fmt::format("grid rule {} cells per eps is below 8", cfg.cells_per_eps));
  if (!(cfg.delta > 0 && cfg.T0 >= 0 && cfg.m0 > 0 && cfg.history_dt > 0)) throw ConfigError("expansion parameters out of range");
  if (cfg.snapshots < 1 || cfg.residual_time_samples < 1) throw ConfigError("snapshot counts must be positive");
  if (cfg.dt_rule != "aligned" && cfg.dt_rule != "fixed") throw ConfigError("solver.dt_rule must be aligned or fixed");
  if (cfg.dt_rule == "fixed" && !(cfg.dt > 0)) throw ConfigError("solver.dt must be positive for dt_rule = fixed");
  if (cfg.perturbation_amp.empty()) throw ConfigError("solver.perturbation_amp is empty");
  for (double f : cfg.spectral_times)
    if (f < 0 || f > 1) throw ConfigError("spectral.times are fractions of T0 in [0, 1]");
  cfg.make_potential().validate();
  cfg.make_velocity();
  cfg.expansion_options();
  cfg.make_curve();
}

}  // namespace convac
