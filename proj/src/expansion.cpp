#include "convac/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "convac/errors.hpp"

namespace convac {

ExpansionVariant parse_expansion_variant(const std::string& s) {
  if (s == "consistent") return ExpansionVariant::consistent;
  if (s == "literal") return ExpansionVariant::literal;
  throw ConfigError("unknown expansion variant '" + s + "'");
}

H2Variant parse_h2_variant(const std::string& s) {
  if (s == "consistent") return H2Variant::consistent;
  if (s == "literal") return H2Variant::literal;
  throw ConfigError("unknown h2_rhs_variant '" + s + "'");
}

namespace {

double step_fn(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double a = std::exp(-1 / x), b = std::exp(-1 / (1 - x));
  return a / (a + b);
}

double step_fn_prime(double x) {
  if (x <= 0 || x >= 1) return 0;
  // step = 1 / (1 + e^u), u = 1/x - 1/(1-x)
  double u = 1 / x - 1 / (1 - x);
  double du = -1 / (x * x) - 1 / ((1 - x) * (1 - x));
  double c = std::cosh(u / 2);
  return -du / (4 * c * c);
}

// weights of the Lagrange interpolant (deriv 0) or its derivative (deriv 1) at x
std::vector<double> lagrange_weights(const std::vector<double>& nodes, double x, int deriv) {
  int m = int(nodes.size());
  std::vector<double> w(m, 0.0);
  for (int i = 0; i < m; ++i) {
    if (deriv == 0) {
      double p = 1;
      for (int l = 0; l < m; ++l)
        if (l != i) p *= (x - nodes[l]) / (nodes[i] - nodes[l]);
      w[i] = p;
    } else {
      double sum = 0;
      for (int q = 0; q < m; ++q) {
        if (q == i) continue;
        double p = 1 / (nodes[i] - nodes[q]);
        for (int l = 0; l < m; ++l)
          if (l != i && l != q) p *= (x - nodes[l]) / (nodes[i] - nodes[l]);
        sum += p;
      }
      w[i] = sum;
    }
  }
  return w;
}

// m consecutive node indices from [lo, hi] centred on x (in node units) as well as possible
std::vector<int> stencil(double x, int lo, int hi, int m) {
  m = std::min(m, hi - lo + 1);
  int start = int(std::floor(x)) - (m - 1) / 2;
  start = std::clamp(start, lo, hi - m + 1);
  std::vector<int> out(m);
  for (int i = 0; i < m; ++i) out[i] = start + i;
  return out;
}

double periodic_cubic(const std::vector<double>& y, double s) {
  int M = int(y.size());
  double u = wrap_s(s) / (2 * std::numbers::pi) * M;
  int j = int(std::floor(u));
  double f = u - j;
  auto at = [&](int k) { return y[((k % M) + M) % M]; };
  double ym = at(j - 1), y0 = at(j), y1 = at(j + 1), y2 = at(j + 2);
  return -f * (f - 1) * (f - 2) / 6 * ym + (f + 1) * (f - 1) * (f - 2) / 2 * y0 - (f + 1) * f * (f - 2) / 2 * y1 +
         (f + 1) * f * (f - 1) / 6 * y2;
}

// samples on the s-grid with a trigonometric interpolant built on first off-grid use
class GridField {
 public:
  explicit GridField(const std::vector<double>& v) : v_(&v) {}
  double operator()(double s) const {
    int M = int(v_->size());
    double u = wrap_s(s) / (2 * std::numbers::pi) * M;
    int j = int(std::lround(u));
    if (std::abs(u - j) < 1e-11) return (*v_)[j % M];
    if (!ser_) ser_.emplace(*v_);
    return (*ser_)(s);
  }

 private:
  const std::vector<double>* v_;
  mutable std::optional<TrigSeries> ser_;
};

struct Geometry {
  std::vector<double> a, kappa1, kappa2, H, g, kappa1_dot, lapS0;
};

Geometry sample_geometry(const Curve& c, const VelocityField& v, double delta, bool full, double tol) {
  Chart ch(c, v, delta);
  int M = c.M();
  Geometry G;
  G.a.resize(M);
  G.kappa1.resize(M);
  G.H.resize(M);
  if (full) {
    G.kappa2.resize(M);
    G.g.resize(M);
    G.kappa1_dot.resize(M);
    G.lapS0.resize(M);
  }
  for (int j = 0; j < M; ++j) {
    double s = node_s(j, M);
    Chart::Point p = ch.at(s);
    auto [k1, k2] = compute_kappas(ch, v, s, tol);
    G.a[j] = ch.advection_speed(0, p);
    G.kappa1[j] = k1;
    G.H[j] = p.H;
    if (full) {
      G.kappa2[j] = k2;
      G.g[j] = p.g;
      G.kappa1_dot[j] = kappa1_dot(p, v);
      G.lapS0[j] = ch.lap_S(0, s, delta / 64);
    }
  }
  return G;
}

double b_from_chart(const Chart& ch, const Chart::Point& p, double h1, double h1s, double dth1, double kappa1,
                    const ExpansionOptions& o, double* F0) {
  auto F = [&](double r) {
    double lapd = o.flat_surrogate ? 0.0 : -p.H / (1 - r * p.H);
    return h1 * kappa1 - dth1 - ch.advection_speed(r, p) * h1s - o.m0 * lapd;
  };
  double f0 = F(0);
  if (F0) *F0 = f0;
  if (!(std::abs(f0) <= o.elimination_tol))
    throw EliminationFailed("O(1) layer coefficient does not vanish on the interface: |F(0)| = " + std::to_string(f0));
  double k = o.delta / 64;
  return (F(-2 * k) - 8 * F(-k) + 8 * F(k) - F(2 * k)) / (12 * k);
}

}  // namespace

double zeta(double r, double delta) { return step_fn((2 * delta - std::abs(r)) / delta); }

double zeta_prime(double r, double delta) {
  double x = (2 * delta - std::abs(r)) / delta;
  return -(r < 0 ? -1.0 : 1.0) * step_fn_prime(x) / delta;
}

std::pair<double, double> compute_kappas(const Chart& chart, const VelocityField& v, double s, double tol) {
  Chart::Point p = chart.at(s);
  Vec2 vx = v(p.X);
  double mismatch = -dot(p.n, p.W) + dot(p.n, vx);
  if (!(std::abs(mismatch) <= tol))
    throw TransportViolated("interface normal velocity differs from n.v by " + std::to_string(mismatch));
  double k1 = dot(p.n, v.grad(p.X) * p.n);
  double k2 = 0.5 * dot(p.n, v.hess(p.X).apply(p.n, p.n));
  return {k1, k2};
}

std::pair<double, double> compute_kappas(const Curve& curve, const VelocityField& v, double s) {
  return compute_kappas(Chart(curve, v, 1.0), v, s);
}

double kappa1_dot(const Chart::Point& p, const VelocityField& v) {
  Mat2 A = v.grad(p.X);
  Vec2 vx = v(p.X);
  double nAt = dot(p.n, A * p.tau), tAn = dot(p.tau, A * p.n);
  return -nAt * tAn - nAt * nAt + dot(p.n, v.hess(p.X).apply(p.n, vx));
}

// ---------------------------------------------------------------------------

const char* LayerBasis::name(int k) {
  static const char* names[count] = {"Ub", "P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9"};
  return names[k];
}

LayerBasis::LayerBasis(const Profile& prof)
    : solver_(prof), sigma_(convac::sigma(prof)), theta0_(RadialInterp::theta0(prof)) {
  const Profile& P = solver_.profile();
  int N = P.size();
  auto make = [&](int k, std::vector<double> rhs, int decay) {
    std::vector<double> w(N), g(N);
    for (int i = 0; i < N; ++i) w[i] = rhs[i] * P.theta0_p[i];
    pi_[k] = integrate(P, w) / sigma_;
    for (int i = 0; i < N; ++i) g[i] = rhs[i] - pi_[k] * P.theta0_p[i];
    sol_[k] = solver_.solve(g, decay);
    interp_[k] = RadialInterp::from_solution(P, sol_[k].u, g);
    rhs_[k] = std::move(rhs);
  };
  std::vector<double> r(N);
  for (int i = 0; i < N; ++i) r[i] = -P.rho[i] * P.theta0_p[i];
  make(Ub, r, 1);
  for (int i = 0; i < N; ++i) r[i] = P.rho[i] * P.theta0_p[i];
  make(P1, r, 2);
  for (int i = 0; i < N; ++i) r[i] = P.rho[i] * P.rho[i] * P.theta0_p[i];
  make(P2, r, 2);
  make(P3, P.theta0_pp, 1);
  std::vector<double> dUb = grid_derivative(sol_[Ub].u, P.h);
  std::vector<double> dW3 = grid_derivative(sol_[P3].u, P.h);
  for (int i = 0; i < N; ++i) r[i] = P.rho[i] * dUb[i];
  make(P4, r, 2);
  make(P5, sol_[Ub].u, 2);
  for (int i = 0; i < N; ++i) r[i] = 0.5 * P.f.fppp(P.theta0[i]) * sol_[Ub].u[i] * sol_[Ub].u[i];
  make(P6, r, 2);
  for (int i = 0; i < N; ++i) r[i] = P.rho[i] * dW3[i];
  make(P7, r, 2);
  make(P8, dW3, 2);
  make(P9, dUb, 2);
}

LayerCoefficients layer_coefficients(const LayerBasis& basis, const LayerScalars& q, ExpansionVariant variant) {
  LayerCoefficients c;
  double m0 = q.m0, k1 = q.kappa1;
  c.c1[LayerBasis::Ub] = k1 / m0;
  c.c2[LayerBasis::P1] = -(2 * q.kappa2 * q.h1 + q.b) / m0;
  c.c2[LayerBasis::P2] = -q.kappa2 / m0;
  if (variant == ExpansionVariant::consistent) {
    c.c2[LayerBasis::P3] = q.grad_h1_sq;
    c.c2[LayerBasis::P4] = -k1 * k1 / (m0 * m0);
    c.c2[LayerBasis::P5] = -q.kappa1_dot / (m0 * m0);
    c.c2[LayerBasis::P6] = -k1 * k1 / (m0 * m0);
  } else {
    c.c1[LayerBasis::P3] = q.grad_h1_sq;
    c.c2[LayerBasis::P7] = -k1 * q.grad_h1_sq / m0;
    c.c2[LayerBasis::P8] = -q.h1 * k1 * q.grad_h1_sq / m0;
    c.c2[LayerBasis::P4] = -k1 * k1 / (m0 * m0);
    c.c2[LayerBasis::P9] = -q.h1 * k1 * k1 / (m0 * m0);
  }
  double s = 0;
  for (int k = 0; k < LayerBasis::count; ++k) s += c.c2[k] * basis.pi(k);
  c.g = m0 * s - q.kappa2 * q.h1 * q.h1 - q.h1 * q.b;
  return c;
}

// ---------------------------------------------------------------------------

RadialFunction solve_c1(const Profile& prof, double grad_h1_sq, double kappa1, double m0) {
  if (!std::isfinite(grad_h1_sq) || !std::isfinite(kappa1)) throw NonFinite("solve_c1: non-finite coefficient");
  int N = prof.size();
  std::vector<double> g(N);
  for (int i = 0; i < N; ++i) g[i] = grad_h1_sq * prof.theta0_pp[i] - kappa1 / m0 * prof.rho[i] * prof.theta0_p[i];
  return LinearizedSolver(prof).solve(g, 1);
}

namespace {

// right-hand side of the c2 equation without the -g theta0'/m0 term
std::vector<double> c2_forcing(const Profile& prof, const RadialFunction& c1, const RadialFunction& dc1,
                               const LayerScalars& q, ExpansionVariant variant) {
  int N = prof.size();
  std::vector<double> dc = grid_derivative(c1.u, prof.h), R(N);
  for (int i = 0; i < N; ++i) {
    double rho = prof.rho[i], z = rho + q.h1;
    double lin = -(q.kappa2 * z * z + z * q.b) * prof.theta0_p[i];
    if (variant == ExpansionVariant::literal) {
      R[i] = (lin - z * q.kappa1 * dc[i]) / q.m0;
    } else {
      double d = dc1.u.empty() ? 0.0 : dc1.u[i];
      R[i] = (lin - rho * q.kappa1 * dc[i] - d - 0.5 * q.m0 * prof.f.fppp(prof.theta0[i]) * c1.u[i] * c1.u[i]) / q.m0 +
             q.grad_h1_sq * prof.theta0_pp[i];
    }
  }
  return R;
}

}  // namespace

double compute_g(const Profile& prof, const RadialFunction& c1, const RadialFunction& dc1, const LayerScalars& q,
                 ExpansionVariant variant) {
  std::vector<double> R = c2_forcing(prof, c1, dc1, q, variant);
  for (int i = 0; i < prof.size(); ++i) R[i] *= prof.theta0_p[i];
  return q.m0 * integrate(prof, R) / sigma(prof);
}

std::vector<double> c2_rhs(const Profile& prof, double g, const RadialFunction& c1, const RadialFunction& dc1,
                           const LayerScalars& q, ExpansionVariant variant) {
  std::vector<double> R = c2_forcing(prof, c1, dc1, q, variant);
  for (int i = 0; i < prof.size(); ++i) R[i] -= g / q.m0 * prof.theta0_p[i];
  return R;
}

RadialFunction solve_c2(const Profile& prof, double g, const RadialFunction& c1, const RadialFunction& dc1,
                        const LayerScalars& q, ExpansionVariant variant) {
  return LinearizedSolver(prof).solve(c2_rhs(prof, g, c1, dc1, q, variant), 2);
}

// ---------------------------------------------------------------------------

NodeTable solve_transport(const CurveHistory& hist, const TransportCoefficients& c) {
  const auto& segs = hist.segments();
  int M = hist.M();
  double dt = hist.dt(), ds = 2 * std::numbers::pi / M;
  NodeTable y;
  y.v.resize(segs.size());
  std::vector<double> cur(M, 0.0);
  for (size_t k = 0; k < segs.size(); ++k) {
    const auto& S = segs[k];
    if (k > 0) {
      // same node, new parametrization: y_new(j) = y_old(s_old(X_new(s_j)))
      Chart old(segs[k - 1].node(S.n0), hist.velocity(), 1.0);
      TrigSeries ty(cur);
      const auto& X = S.node(S.n0).markers();
      std::vector<double> next(M);
      for (int j = 0; j < M; ++j) next[j] = ty(old.signed_distance(X[j]).s);
      cur = std::move(next);
    }
    y.v[k].push_back(cur);
    for (int n = S.n0; n < S.n1; ++n) {
      const auto &a0v = c.a.at(int(k), n, hist), &a1v = c.a.at(int(k), n + 1, hist);
      double amax = 0;
      for (int j = 0; j < M; ++j)
        amax = std::max({amax, std::abs(a0v[j]), std::abs(a1v[j]), std::abs(c.a_mid[n][j])});
      if (amax * dt / ds > 4) throw CFLViolated("characteristic speed too large: |a| dt / ds = " + std::to_string(amax * dt / ds));
      GridField A0(a0v), A1(a1v), Am(c.a_mid[n]);
      GridField K0(c.k.at(int(k), n, hist)), K1(c.k.at(int(k), n + 1, hist)), Km(c.k_mid[n]);
      GridField Q0(c.q.at(int(k), n, hist)), Q1(c.q.at(int(k), n + 1, hist)), Qm(c.q_mid[n]);
      std::vector<double> next(M);
      for (int j = 0; j < M; ++j) {
        double s1 = node_s(j, M);
        double b1 = A1(s1), b2 = Am(s1 - 0.5 * dt * b1), b3 = Am(s1 - 0.5 * dt * b2), b4 = A0(s1 - dt * b3);
        double s0 = s1 - dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
        double y0 = periodic_cubic(cur, s0);
        double ds1 = A0(s0), dy1 = K0(s0) * y0 + Q0(s0);
        double sa = s0 + 0.5 * dt * ds1, ya = y0 + 0.5 * dt * dy1;
        double ds2 = Am(sa), dy2 = Km(sa) * ya + Qm(sa);
        double sb = s0 + 0.5 * dt * ds2, yb = y0 + 0.5 * dt * dy2;
        double dy3 = Km(sb) * yb + Qm(sb), ds3 = Am(sb);
        double sc = s0 + dt * ds3, yc = y0 + dt * dy3;
        double dy4 = K1(sc) * yc + Q1(sc);
        next[j] = y0 + dt / 6 * (dy1 + 2 * dy2 + 2 * dy3 + dy4);
      }
      cur = std::move(next);
      y.v[k].push_back(cur);
    }
  }
  return y;
}

namespace {

struct HistoryGeometry {
  std::vector<std::vector<Geometry>> nodes;  // [seg][n - n0]
  std::vector<Geometry> mid;                 // per step
};

HistoryGeometry history_geometry(const CurveHistory& hist, const ExpansionOptions& o, bool full) {
  HistoryGeometry G;
  const auto& segs = hist.segments();
  const VelocityField& v = hist.velocity();
  G.nodes.resize(segs.size());
  G.mid.resize(hist.steps());
  for (size_t k = 0; k < segs.size(); ++k) {
    const auto& S = segs[k];
    for (int n = S.n0; n <= S.n1; ++n) G.nodes[k].push_back(sample_geometry(S.node(n), v, o.delta, full, o.transport_tol));
    for (int n = S.n0; n < S.n1; ++n)
      G.mid[n] = sample_geometry(hist.at((n + 0.5) * hist.dt(), int(k)), v, o.delta, false, o.transport_tol);
  }
  return G;
}

TransportCoefficients h1_coefficients(const CurveHistory& hist, const HistoryGeometry& G, const ExpansionOptions& o) {
  TransportCoefficients c;
  auto q_of = [&](const Geometry& g) {
    std::vector<double> q(g.H.size(), 0.0);
    if (!o.flat_surrogate)
      for (size_t j = 0; j < q.size(); ++j) q[j] = o.m0 * g.H[j];
    return q;
  };
  for (size_t k = 0; k < G.nodes.size(); ++k) {
    c.a.v.emplace_back();
    c.k.v.emplace_back();
    c.q.v.emplace_back();
    for (const auto& g : G.nodes[k]) {
      c.a.v[k].push_back(g.a);
      c.k.v[k].push_back(g.kappa1);
      c.q.v[k].push_back(q_of(g));
    }
  }
  for (const auto& g : G.mid) {
    c.a_mid.push_back(g.a);
    c.k_mid.push_back(g.kappa1);
    c.q_mid.push_back(q_of(g));
  }
  (void)hist;
  return c;
}

}  // namespace

std::vector<std::pair<int, double>> time_weights(const CurveHistory& hist, int seg, double t) {
  const auto& S = hist.segments()[seg];
  double x = t / hist.dt();
  std::vector<int> st = stencil(x, S.n0, S.n1, 4);
  std::vector<double> nodes(st.begin(), st.end());
  std::vector<double> w = lagrange_weights(nodes, x, 0);
  std::vector<std::pair<int, double>> out;
  for (size_t i = 0; i < st.size(); ++i) out.emplace_back(st[i], w[i]);
  return out;
}

NodeTable solve_h1(const CurveHistory& hist, const ExpansionOptions& opts) {
  HistoryGeometry G = history_geometry(hist, opts, false);
  return solve_transport(hist, h1_coefficients(hist, G, opts));
}

std::shared_ptr<ExpansionData> build_expansion(std::shared_ptr<const CurveHistory> hist,
                                               std::shared_ptr<const LayerBasis> basis, const ExpansionOptions& o) {
  auto data = std::make_shared<ExpansionData>();
  data->history = hist;
  data->basis = basis;
  data->opts = o;
  if (o.variant == ExpansionVariant::consistent) {
    data->c1_active = {LayerBasis::Ub};
    data->c2_active = {LayerBasis::P1, LayerBasis::P2, LayerBasis::P3, LayerBasis::P4, LayerBasis::P5, LayerBasis::P6};
  } else {
    data->c1_active = {LayerBasis::Ub, LayerBasis::P3};
    data->c2_active = {LayerBasis::P1, LayerBasis::P2, LayerBasis::P7, LayerBasis::P8, LayerBasis::P4, LayerBasis::P9};
  }

  const CurveHistory& H = *hist;
  const auto& segs = H.segments();
  const VelocityField& v = H.velocity();
  int M = H.M();
  double dt = H.dt();

  HistoryGeometry G = history_geometry(H, o, true);
  TransportCoefficients c1c = h1_coefficients(H, G, o);
  NodeTable h1 = solve_transport(H, c1c);

  data->nodes.resize(segs.size());
  for (size_t k = 0; k < segs.size(); ++k) {
    const auto& S = segs[k];
    for (int n = S.n0; n <= S.n1; ++n) {
      const Geometry& g = G.nodes[k][n - S.n0];
      NodeFields F;
      F.h1 = h1.v[k][n - S.n0];
      F.kappa1 = g.kappa1;
      F.kappa2 = g.kappa2;
      F.H = g.H;
      F.a = g.a;
      F.kappa1_dot = g.kappa1_dot;
      // time derivative of h1 at fixed s from the nodes of this segment
      F.dt_h1.assign(M, 0.0);
      std::vector<int> st = stencil(n, S.n0, S.n1, 5);
      TrigSeries th(F.h1);
      std::vector<double> h1s = th.derivative_samples(1), h1ss = th.derivative_samples(2);
      if (st.size() >= 2) {
        std::vector<double> off;
        for (int m : st) off.push_back((m - n) * dt);
        std::vector<double> w = lagrange_weights(off, 0, 1);
        for (size_t i = 0; i < st.size(); ++i) {
          const auto& hv = h1.v[k][st[i] - S.n0];
          for (int j = 0; j < M; ++j) F.dt_h1[j] += w[i] * hv[j];
        }
      } else {
        for (int j = 0; j < M; ++j)
          F.dt_h1[j] = c1c.q.v[k][0][j] + g.kappa1[j] * F.h1[j] - g.a[j] * h1s[j];
      }
      Chart ch(S.node(n), v, o.delta);
      F.b.resize(M);
      F.F0.resize(M);
      F.grad_h1_sq.resize(M);
      F.lap_h1.resize(M);
      F.g.resize(M);
      for (auto& c : F.c1) c.assign(M, 0.0);
      for (auto& c : F.c2) c.assign(M, 0.0);
      for (int j = 0; j < M; ++j) {
        Chart::Point p = ch.at(node_s(j, M));
        F.b[j] = b_from_chart(ch, p, F.h1[j], h1s[j], F.dt_h1[j], g.kappa1[j], o, &F.F0[j]);
        data->max_F0 = std::max(data->max_F0, std::abs(F.F0[j]));
        F.grad_h1_sq[j] = (h1s[j] / g.g[j]) * (h1s[j] / g.g[j]);
        F.lap_h1[j] = h1ss[j] / (g.g[j] * g.g[j]) + g.lapS0[j] * h1s[j];
        LayerScalars q{F.h1[j], g.kappa1[j], g.kappa2[j], F.b[j], F.grad_h1_sq[j], g.kappa1_dot[j], o.m0};
        LayerCoefficients lc = layer_coefficients(*basis, q, o.variant);
        for (int b = 0; b < LayerBasis::count; ++b) {
          F.c1[b][j] = lc.c1[b];
          F.c2[b][j] = lc.c2[b];
        }
        F.g[j] = lc.g;
      }
      data->nodes[k].push_back(std::move(F));
    }
  }

  // h2: same characteristics, forcing m0 Lap_G h1 - g
  TransportCoefficients c2c;
  c2c.a = c1c.a;
  c2c.a_mid = c1c.a_mid;
  bool react = o.h2_variant == H2Variant::consistent;
  for (size_t k = 0; k < segs.size(); ++k) {
    c2c.k.v.emplace_back();
    c2c.q.v.emplace_back();
    for (const auto& F : data->nodes[k]) {
      c2c.k.v[k].push_back(react ? F.kappa1 : std::vector<double>(M, 0.0));
      std::vector<double> q(M);
      for (int j = 0; j < M; ++j) q[j] = o.m0 * F.lap_h1[j] - F.g[j];
      c2c.q.v[k].push_back(std::move(q));
    }
  }
  c2c.k_mid.resize(H.steps());
  c2c.q_mid.resize(H.steps());
  for (size_t k = 0; k < segs.size(); ++k) {
    const auto& S = segs[k];
    for (int n = S.n0; n < S.n1; ++n) {
      c2c.k_mid[n] = react ? c1c.k_mid[n] : std::vector<double>(M, 0.0);
      std::vector<int> st = stencil(n + 0.5, S.n0, S.n1, 4);
      std::vector<double> nodes;
      for (int m : st) nodes.push_back(m);
      std::vector<double> w = lagrange_weights(nodes, n + 0.5, 0);
      std::vector<double> q(M, 0.0);
      for (size_t i = 0; i < st.size(); ++i) {
        const auto& qv = c2c.q.v[k][st[i] - S.n0];
        for (int j = 0; j < M; ++j) q[j] += w[i] * qv[j];
      }
      c2c.q_mid[n] = std::move(q);
    }
  }
  NodeTable h2 = solve_transport(H, c2c);
  for (size_t k = 0; k < segs.size(); ++k)
    for (size_t i = 0; i < data->nodes[k].size(); ++i) data->nodes[k][i].h2 = h2.v[k][i];
  return data;
}

double compute_b(const ExpansionData& data, int seg, int n, double s) {
  const CurveHistory& H = *data.history;
  const NodeFields& F = data.node(seg, n);
  Chart ch(H.segments()[seg].node(n), H.velocity(), data.opts.delta);
  Chart::Point p = ch.at(s);
  double h1[2], dth1 = TrigSeries(F.dt_h1)(s);
  TrigSeries(F.h1).eval(s, h1, 2);
  double k1 = compute_kappas(ch, H.velocity(), s, data.opts.transport_tol).first;
  return b_from_chart(ch, p, h1[0], h1[1], dth1, k1, data.opts, nullptr);
}

}  // namespace convac
