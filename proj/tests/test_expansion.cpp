#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <string>

#include "convac/errors.hpp"
#include "convac/expansion.hpp"
#include "doctest.h"

using namespace convac;
using std::numbers::pi;

namespace {
const Vec2 C{0.5, 0.5};
const double R = 0.25, T0 = 0.25, DT = 1e-3, DELTA = 0.05;

const Profile& prof() {
  static Profile p = solve_profile(Potential::quartic());
  return p;
}

std::shared_ptr<const LayerBasis> basis() {
  static auto b = std::make_shared<const LayerBasis>(prof());
  return b;
}

std::shared_ptr<const CurveHistory> history(const VelocityField& v, int M = 256) {
  return std::make_shared<const CurveHistory>(Curve::circle(C, R, M), v, T0, DT);
}

std::shared_ptr<ExpansionData> reference_build() {
  static auto d = build_expansion(history(VelocityField::cellular(0.02)), basis(), ExpansionOptions{});
  return d;
}

// n . v(X0 + r n) as a function of r
double normal_flux(const Chart& ch, const VelocityField& v, double s, double r) {
  Chart::Point p = ch.at(s);
  return dot(p.n, v(p.X + r * p.n));
}
}  // namespace

TEST_CASE("cutoff zeta: plateau, support and slope bound") {
  const double d = DELTA;
  double worst = 0;
  bool ok = true;
  for (int i = -4000; i <= 4000; ++i) {
    double r = 3 * d * i / 4000.0;
    double z = zeta(r, d);
    if (std::abs(r) <= d) ok = ok && z == 1.0;
    if (std::abs(r) >= 2 * d) ok = ok && z == 0.0;
    ok = ok && z >= 0 && z <= 1;
    double slope = -r * zeta_prime(r, d);
    ok = ok && slope >= 0;
    worst = std::max(worst, slope);
  }
  CHECK(ok);
  CHECK(worst <= 4.0);
  // derivative against differences
  for (double r : {-0.07, -0.061, 0.055, 0.083}) {
    double k = 1e-6;
    CHECK(zeta_prime(r, d) == doctest::Approx((zeta(r + k, d) - zeta(r - k, d)) / (2 * k)).epsilon(1e-6));
  }
}

TEST_CASE("kappas: zero field, linear shear and the reference field") {
  Curve c = Curve::circle(C, R, 256);
  for (double s : {0.0, 1.0, 4.0}) {
    auto [k1, k2] = compute_kappas(c, VelocityField::zero(), s);
    CHECK(k1 == 0.0);
    CHECK(k2 == 0.0);
    auto [a1, a2] = compute_kappas(c, VelocityField::shear(0.7), s);
    CHECK(a2 == 0.0);
    (void)a1;
  }
  VelocityField v = VelocityField::cellular(0.02);
  Chart ch(c, v, DELTA);
  double h = DELTA / 64, err = 0;
  for (int j = 0; j < 64; ++j) {
    double s = node_s(j * 4, 256);
    auto F = [&](double r) { return normal_flux(ch, v, s, r); };
    double fd = (F(-2 * h) - 8 * F(-h) + 8 * F(h) - F(2 * h)) / (12 * h);
    err = std::max(err, std::abs(fd - compute_kappas(ch, v, s).first));
  }
  CHECK(err <= 1e-7);
}

TEST_CASE("kappas reject a parametrization moving against the field") {
  Curve c = Curve::ellipse(C, 0.3, 0.2, 128);
  Chart moving(c, VelocityField::cellular(0.02), DELTA);
  CHECK_THROWS_AS(compute_kappas(moving, VelocityField::zero(), 0.3), TransportViolated);
}

TEST_CASE("kappa1 rate along particle paths matches differences of the history") {
  VelocityField v = VelocityField::cellular(0.5);
  CurveHistory H(Curve::ellipse(C, 0.25, 0.18, 256), v, 0.02, 1e-3);
  int n = 10;
  Chart ch(H.node(n), v, DELTA);
  double err = 0;
  for (int j = 0; j < 256; j += 16) {
    double s = node_s(j, 256);
    auto k1 = [&](int m) { return compute_kappas(Chart(H.node(m), v, DELTA), v, s).first; };
    double fd = (k1(n - 2) - 8 * k1(n - 1) + 8 * k1(n + 1) - k1(n + 2)) / (12 * H.dt());
    err = std::max(err, std::abs(fd - kappa1_dot(ch.at(s), v)));
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("curve history: nodes, segments and intermediate times") {
  VelocityField v = VelocityField::cellular(0.02);
  CurveHistory H(Curve::circle(C, R, 128), v, T0, DT);
  CHECK(H.steps() == 250);
  CHECK(H.segments().size() == 1);
  Curve mid = H.at(0.1005);
  Curve ref = evolve_curve(H.node(100), v, 0.1005, DT);
  double err = 0;
  for (int j = 0; j < 128; ++j) err = std::max(err, norm(mid.markers()[j] - ref.markers()[j]));
  CHECK(err <= 1e-14);
  CHECK(H.min_boundary_distance() > 0.2);

  CurveHistory S(Curve::circle({0.4, 0.45}, 0.15, 128), VelocityField::cellular(0.5), 0.4, 1e-3);
  REQUIRE(S.segments().size() > 1);
  for (size_t k = 1; k < S.segments().size(); ++k) {
    const auto& a = S.segments()[k - 1];
    const auto& b = S.segments()[k];
    CHECK(a.n1 == b.n0);
    CHECK(b.node(b.n0).spacing_ratio() < a.node(a.n1).spacing_ratio());
    CHECK(std::abs(b.node(b.n0).area() - a.node(a.n1).area()) < 1e-9);
  }
  CHECK_THROWS(CurveHistory(Curve::circle(C, R, 64), v, 0.25, 0.003));
}

TEST_CASE("h1 on the static circle is t/R") {
  auto H = history(VelocityField::zero(), 128);
  NodeTable h1 = solve_h1(*H, ExpansionOptions{});
  double err = 0;
  for (int n = 0; n <= H->steps(); ++n)
    for (double y : h1.at(0, n, *H)) err = std::max(err, std::abs(y - n * DT / R));
  CHECK(err <= 1e-8);
  for (double y : h1.at(0, 0, *H)) CHECK(y == 0.0);
}

TEST_CASE("h1 without forcing vanishes; flat surrogate gives b = 0") {
  auto H = history(VelocityField::zero(), 64);
  ExpansionOptions o;
  o.flat_surrogate = true;
  NodeTable h1 = solve_h1(*H, o);
  for (int n = 0; n <= H->steps(); n += 25)
    for (double y : h1.at(0, n, *H)) CHECK(y == 0.0);
  auto data = build_expansion(H, basis(), o);
  double bmax = 0;
  for (const auto& F : data->nodes[0])
    for (double b : F.b) bmax = std::max(bmax, std::abs(b));
  CHECK(bmax == 0.0);
}

TEST_CASE("h1 for a rigidly rotating circle is t/R for every s") {
  auto H = history(VelocityField::rotation(2.0, C), 128);
  NodeTable h1 = solve_h1(*H, ExpansionOptions{});
  double err = 0;
  for (int n = 0; n <= H->steps(); ++n)
    for (double y : h1.at(0, n, *H)) err = std::max(err, std::abs(y - n * DT / R));
  CHECK(err <= 1e-8);
}

TEST_CASE("h1 is carried across reparametrizations") {
  VelocityField v = VelocityField::cellular(0.5);
  auto H = std::make_shared<const CurveHistory>(Curve::circle({0.4, 0.45}, 0.15, 128), v, 0.4, 1e-3);
  REQUIRE(H->segments().size() > 1);
  NodeTable h1 = solve_h1(*H, ExpansionOptions{});
  // across a segment boundary the two copies describe the same function on the curve
  const auto& segs = H->segments();
  for (size_t k = 1; k < segs.size(); ++k) {
    int n = segs[k].n0;
    Chart old(segs[k - 1].node(n), v, DELTA);
    TrigSeries yo(h1.at(int(k) - 1, n, *H));
    const auto& yn = h1.at(int(k), n, *H);
    double err = 0;
    for (int j = 0; j < 128; j += 8) err = std::max(err, std::abs(yn[j] - yo(old.signed_distance(segs[k].node(n).markers()[j]).s)));
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("b on the static circle is 1/R^2") {
  auto data = build_expansion(history(VelocityField::zero(), 128), basis(), ExpansionOptions{});
  double err = 0;
  for (const auto& F : data->nodes[0])
    for (double b : F.b) err = std::max(err, std::abs(b - 1 / (R * R)));
  CHECK(err <= 1e-6);
  CHECK(compute_b(*data, 0, 100, 0.37) == doctest::Approx(16).epsilon(1e-8));
  CHECK(data->max_F0 <= 1e-10);
}

TEST_CASE("b for the reference field against a sixth-order oracle") {
  auto data = reference_build();
  const CurveHistory& H = *data->history;
  const VelocityField& v = H.velocity();
  double err = 0;
  for (int n : {1, 60, 125, 250}) {
    const NodeFields& F = data->node(0, n);
    Chart ch(H.node(n), v, DELTA);
    TrigSeries th(F.h1);
    std::vector<double> h1s = th.derivative_samples(1);
    for (int j = 0; j < 256; j += 8) {
      Chart::Point p = ch.at(node_s(j, 256));
      double k1 = dot(p.n, v.grad(p.X) * p.n);
      auto Fr = [&](double r) {
        double q = 1 - r * p.H;
        Vec2 gs = p.tau / (p.g * q);
        double a = dot(gs, v(p.X + r * p.n) - p.W - r * p.dn);
        return F.h1[j] * k1 - F.dt_h1[j] - a * h1s[j] + p.H / q;
      };
      double k = DELTA / 64;
      double fd = (-Fr(-3 * k) + 9 * Fr(-2 * k) - 45 * Fr(-k) + 45 * Fr(k) - 9 * Fr(2 * k) + Fr(3 * k)) / (60 * k);
      err = std::max(err, std::abs(fd - F.b[j]));
    }
  }
  CHECK(err <= 1e-5);
  CHECK(data->max_F0 <= 1e-6);
}

TEST_CASE("solve_c1 examples") {
  const Profile& P = prof();
  RadialFunction z = solve_c1(P, 0, 0);
  for (double u : z.u) CHECK(u == 0.0);

  RadialFunction c1 = solve_c1(P, 0, 1);
  CHECK(c1.parity == -1);
  CHECK(std::abs(c1.u[P.center()]) <= 1e-10);
  CHECK(c1.decay_verified);
  // dense-grid oracle at h/4
  Profile fine = solve_profile(Potential::quartic(), P.L, P.h / 4);
  RadialFunction cf = solve_c1(fine, 0, 1);
  double err = 0;
  for (int i = 0; i < P.size(); ++i) err = std::max(err, std::abs(c1.u[i] - cf.u[4 * i]));
  CHECK(err <= 1e-6);

  RadialFunction c3 = solve_c1(P, 1, 0);
  double e3 = 0;
  for (int i = 0; i < P.size(); ++i) e3 = std::max(e3, std::abs(c3.u[i] + 0.5 * P.rho[i] * P.theta0_p[i]));
  CHECK(e3 <= 1e-6);
}

TEST_CASE("compute_g examples") {
  const Profile& P = prof();
  RadialFunction none;
  RadialFunction zero{std::vector<double>(P.size(), 0.0), 1, true};
  LayerScalars q;
  CHECK(compute_g(P, zero, none, q) == 0.0);
  q.kappa2 = 1;
  CHECK(compute_g(P, zero, none, q) == doctest::Approx(-(pi * pi - 6) / 6).epsilon(1e-8));
  q.kappa2 = 0;
  q.b = 1;
  CHECK(std::abs(compute_g(P, zero, none, q)) <= 1e-12);
}

TEST_CASE("solve_c2: zero data, compatibility and re-substitution") {
  const Profile& P = prof();
  RadialFunction none;
  RadialFunction zero{std::vector<double>(P.size(), 0.0), 1, true};
  LayerScalars q;
  RadialFunction z = solve_c2(P, 0, zero, none, q);
  for (double u : z.u) CHECK(u == 0.0);

  q.kappa2 = 1;
  double g = compute_g(P, zero, none, q);
  std::vector<double> rhs = c2_rhs(P, g, zero, none, q, ExpansionVariant::literal);
  LinearizedSolver L(P);
  CHECK(std::abs(L.compatibility(rhs)) <= 1e-8);
  RadialFunction c2 = solve_c2(P, g, zero, none, q);
  CHECK(std::abs(c2.u[P.center()]) <= 1e-10);
  CHECK(c2.decay_verified);
  double res = 0;
  for (double r : L.residual(c2.u, rhs)) res = std::max(res, std::abs(r));
  CHECK(res <= 1e-6);

  // general data, both variants
  q = LayerScalars{0.3, -0.7, 1.1, 5.0, 0.4, 2.0, 1.0};
  for (auto var : {ExpansionVariant::literal, ExpansionVariant::consistent}) {
    double gsq = var == ExpansionVariant::literal ? q.grad_h1_sq : 0.0;
    RadialFunction c1 = solve_c1(P, gsq, q.kappa1, q.m0);
    RadialFunction dc1 = solve_c1(P, 0, q.kappa1_dot, q.m0);
    double gg = compute_g(P, c1, dc1, q, var);
    RadialFunction c = solve_c2(P, gg, c1, dc1, q, var);
    CHECK(std::abs(L.compatibility(c2_rhs(P, gg, c1, dc1, q, var))) <= 1e-8);
    CHECK(std::abs(c.u[P.center()]) <= 1e-10);
  }
}

TEST_CASE("basis coefficients reproduce the direct solves") {
  const Profile& P = prof();
  const LayerBasis& B = *basis();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 4; ++trial) {
    LayerScalars q{U(rng), U(rng), U(rng), 10 * U(rng), std::abs(U(rng)), U(rng), trial % 2 ? 1.0 : 0.5};
    for (auto var : {ExpansionVariant::literal, ExpansionVariant::consistent}) {
      LayerCoefficients lc = layer_coefficients(B, q, var);
      double gsq = var == ExpansionVariant::literal ? q.grad_h1_sq : 0.0;
      RadialFunction c1 = solve_c1(P, gsq, q.kappa1, q.m0);
      RadialFunction dc1 = solve_c1(P, 0, q.kappa1_dot, q.m0);
      double g = compute_g(P, c1, dc1, q, var);
      RadialFunction c2 = solve_c2(P, g, c1, dc1, q, var);
      CHECK(lc.g == doctest::Approx(g).epsilon(1e-7).scale(1));
      double e1 = 0, e2 = 0, m2 = 0;
      for (int i = 0; i < P.size(); ++i) {
        double b1 = 0, b2 = 0;
        for (int k = 0; k < LayerBasis::count; ++k) {
          b1 += lc.c1[k] * B.solution(k).u[i];
          b2 += lc.c2[k] * B.solution(k).u[i];
        }
        e1 = std::max(e1, std::abs(b1 - c1.u[i]));
        e2 = std::max(e2, std::abs(b2 - c2.u[i]));
        m2 = std::max(m2, std::abs(c2.u[i]));
      }
      CHECK(e1 <= 1e-9);
      CHECK(e2 <= 1e-6 * std::max(1.0, m2));
    }
  }
}

TEST_CASE("basis functions vanish at rho = 0 and decay") {
  const LayerBasis& B = *basis();
  for (int k = 0; k < LayerBasis::count; ++k) {
    std::string nm = LayerBasis::name(k);
    CAPTURE(nm);
    CHECK(std::abs(B.solution(k).u[B.profile().center()]) <= 1e-10);
    CHECK(B.solution(k).decay_verified);
  }
  CHECK(std::abs(B.pi(LayerBasis::P2) - (pi * pi - 6) / 6) <= 1e-8);
}

TEST_CASE("h2 on the static circle integrates -g") {
  auto data = build_expansion(history(VelocityField::zero(), 64), basis(), ExpansionOptions{});
  double err = 0;
  for (int n = 0; n <= data->history->steps(); ++n) {
    const NodeFields& F = data->node(0, n);
    double t = n * DT;
    for (int j = 0; j < 64; ++j) {
      // g = -h1 b, h1 = t/R, b = 1/R^2
      CHECK(std::abs(F.g[j] + t / (R * R * R)) <= 1e-6);
      err = std::max(err, std::abs(F.h2[j] - t * t / (2 * R * R * R)));
    }
  }
  CHECK(err <= 1e-8);
  for (double y : data->node(0, 0).h2) CHECK(y == 0.0);
}

TEST_CASE("rotating circle: h2 constant in s") {
  auto data = build_expansion(history(VelocityField::rotation(2.0, C), 128), basis(), ExpansionOptions{});
  double spread = 0;
  for (const auto& F : data->nodes[0]) {
    auto [lo, hi] = std::minmax_element(F.h2.begin(), F.h2.end());
    spread = std::max(spread, *hi - *lo);
  }
  CHECK(spread <= 1e-8);
}

TEST_CASE("compatibility of the assembled c2 data at every node") {
  auto data = reference_build();
  const LayerBasis& B = *basis();
  const Profile& P = B.profile();
  std::array<double, LayerBasis::count> ip{};
  for (int k = 0; k < LayerBasis::count; ++k) {
    std::vector<double> w(P.size());
    for (int i = 0; i < P.size(); ++i) w[i] = B.rhs(k)[i] * P.theta0_p[i];
    ip[k] = integrate(P, w);
  }
  double worst = 0;
  for (const auto& seg : data->nodes)
    for (const auto& F : seg)
      for (int j = 0; j < 256; ++j) {
        double s = -(F.g[j] + F.kappa2[j] * F.h1[j] * F.h1[j] + F.h1[j] * F.b[j]) * B.sigma();
        for (int k : data->c2_active) s += F.c2[k][j] * ip[k];
        worst = std::max(worst, std::abs(s));
      }
  CHECK(worst <= 1e-8);
  for (double y : data->node(0, 0).h1) CHECK(y == 0.0);
  for (double y : data->node(0, 0).h2) CHECK(y == 0.0);
}
