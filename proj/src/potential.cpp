#include "convac/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "convac/errors.hpp"

namespace convac {

namespace {
std::vector<double> deriv(const std::vector<double>& a) {
  std::vector<double> d;
  for (size_t k = 1; k < a.size(); ++k) d.push_back(k * a[k]);
  if (d.empty()) d.push_back(0);
  return d;
}
}  // namespace

double Potential::horner(const std::vector<double>& a, double c) {
  double v = 0;
  for (size_t k = a.size(); k-- > 0;) v = v * c + a[k];
  return v;
}

Potential Potential::polynomial(const std::vector<double>& coeffs) {
  Potential p;
  p.name_ = "polynomial";
  p.a_ = coeffs.empty() ? std::vector<double>{0} : coeffs;
  p.d1_ = deriv(p.a_);
  p.d2_ = deriv(p.d1_);
  p.d3_ = deriv(p.d2_);
  return p;
}

Potential Potential::double_well(const std::vector<double>& q) {
  // (1 - 2 c^2 + c^4) * sum_j q_j c^{2j}
  std::vector<double> a(2 * q.size() + 5, 0.0);
  const double w[3] = {1, -2, 1};
  for (size_t j = 0; j < q.size(); ++j)
    for (int i = 0; i < 3; ++i) a[2 * j + 2 * i] += w[i] * q[j];
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  Potential p = polynomial(a);
  p.name_ = "double_well";
  p.q_ = q;
  return p;
}

Potential Potential::quartic() {
  Potential p = double_well({0.25});
  p.name_ = "quartic";
  return p;
}

double Potential::sqrt2f(double c) const {
  if (!q_.empty()) {
    double qv = 0, c2 = c * c;
    for (size_t j = q_.size(); j-- > 0;) qv = qv * c2 + q_[j];
    return std::abs((1 - c) * (1 + c)) * std::sqrt(2 * std::max(qv, 0.0));
  }
  return std::sqrt(2 * std::max(f(c), 0.0));
}

void Potential::near_one(double w, double& s2f, double& fpv) const {
  double c = 1 - w;
  if (q_.empty()) {
    s2f = sqrt2f(c);
    fpv = fp(c);
    return;
  }
  // f = p^2 q(c^2), p = 1 - c^2 = w (2 - w)
  double p = w * (2 - w), c2 = c * c, qv = 0, dq = 0;
  for (size_t j = q_.size(); j-- > 0;) qv = qv * c2 + q_[j];
  for (size_t j = q_.size(); j-- > 1;) dq = dq * c2 + j * q_[j];
  s2f = p * std::sqrt(2 * std::max(qv, 0.0));
  fpv = -4 * c * p * qv + 2 * c * p * p * dq;
}

double Potential::max_abs_fpp(double m) const {
  double best = 0;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) best = std::max(best, std::abs(fpp(-m + 2 * m * i / n)));
  return best;
}

void Potential::validate() const {
  double scale = 0;
  for (double v : a_) scale += std::abs(v);
  auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << "potential '" << name_ << "': " << why;
    throw PotentialInvalid(os.str());
  };
  if (std::abs(f(1)) > 1e-12 * scale || std::abs(f(-1)) > 1e-12 * scale) fail("f(+-1) != 0");
  if (std::abs(fp(1)) > 1e-12 * scale || std::abs(fp(-1)) > 1e-12 * scale) fail("f'(+-1) != 0");
  if (!(fpp(1) > 0) || !(fpp(-1) > 0)) fail("f''(+-1) <= 0");
  const int n = 2000;
  for (int i = 1; i < n; ++i) {
    double c = -1 + 2.0 * i / n;
    if (std::abs(f(c) - f(-c)) > 1e-12 * scale) fail("f is not even");
    if (!(f(c) > 0)) fail("f is not positive on (-1,1)");
  }
}

}  // namespace convac
