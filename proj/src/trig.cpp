#include "convac/trig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace convac {

namespace {
constexpr double two_pi = 2 * std::numbers::pi;
}

double wrap_s(double s) {
  double w = std::fmod(s, two_pi);
  if (w < 0) w += two_pi;
  if (w >= two_pi) w -= two_pi;
  return w;
}

TrigTable::TrigTable(double s, int kmax_) : kmax(kmax_), c(kmax_ + 1), s(kmax_ + 1) {
  c[0] = 1;
  this->s[0] = 0;
  if (kmax_ == 0) return;
  double c1 = std::cos(s), s1 = std::sin(s);
  c[1] = c1;
  this->s[1] = s1;
  // re-seed every 16 steps to bound the drift of the rotation recurrence
  for (int k = 2; k <= kmax_; ++k) {
    if (k % 16 == 0) {
      c[k] = std::cos(k * s);
      this->s[k] = std::sin(k * s);
    } else {
      c[k] = c[k - 1] * c1 - this->s[k - 1] * s1;
      this->s[k] = this->s[k - 1] * c1 + c[k - 1] * s1;
    }
  }
}

TrigSeries::TrigSeries(const std::vector<double>& u) : M_(int(u.size())) {
  const int M = M_, K = M / 2;
  a_.assign(K + 1, 0.0);
  b_.assign(K + 1, 0.0);
  std::vector<double> cs(M), sn(M);
  for (int j = 0; j < M; ++j) {
    cs[j] = std::cos(two_pi * j / M);
    sn[j] = std::sin(two_pi * j / M);
  }
  for (int k = 0; k <= K; ++k) {
    double sa = 0, sb = 0;
    for (int j = 0; j < M; ++j) {
      int idx = int((long long)k * j % M);
      sa += u[j] * cs[idx];
      sb += u[j] * sn[idx];
    }
    double w = (k == 0 || (M % 2 == 0 && k == K)) ? 1.0 / M : 2.0 / M;
    a_[k] = w * sa;
    b_[k] = w * sb;
  }
  if (M % 2 == 0) b_[K] = 0;
  double big = 0;
  for (int k = 1; k <= K; ++k) big = std::max({big, std::abs(a_[k]), std::abs(b_[k])});
  kmax_ = K;
  while (kmax_ > 0 && std::abs(a_[kmax_]) <= 1e-15 * big && std::abs(b_[kmax_]) <= 1e-15 * big) --kmax_;
}

void TrigSeries::eval(const TrigTable& tab, double* out, int nd) const {
  for (int d = 0; d < nd; ++d) out[d] = 0;
  out[0] = a_[0];
  for (int k = 1; k <= kmax_; ++k) {
    double ck = tab.c[k], sk = tab.s[k], ak = a_[k], bk = b_[k];
    double f = ak * ck + bk * sk;   // value
    double fp = bk * ck - ak * sk;  // derivative / k
    out[0] += f;
    if (nd > 1) out[1] += k * fp;
    if (nd > 2) out[2] -= double(k) * k * f;
    if (nd > 3) out[3] -= double(k) * k * k * fp;
  }
}

void TrigSeries::eval(double s, double* out, int nd) const { eval(TrigTable(s, kmax_), out, nd); }

double TrigSeries::operator()(double s) const {
  double v;
  eval(s, &v, 1);
  return v;
}

std::vector<double> TrigSeries::derivative_samples(int d) const {
  std::vector<double> out(M_);
  double buf[4];
  for (int j = 0; j < M_; ++j) {
    eval(node_s(j, M_), buf, d + 1);
    out[j] = buf[d];
  }
  return out;
}

}  // namespace convac
