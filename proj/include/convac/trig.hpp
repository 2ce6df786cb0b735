#pragma once

#include <vector>

namespace convac {

// cos(ks), sin(ks) for k = 0..kmax
struct TrigTable {
  int kmax = 0;
  std::vector<double> c, s;
  TrigTable() = default;
  TrigTable(double s, int kmax);
};

// Real trigonometric interpolant of M equispaced samples on [0, 2pi):
//   u(s) = a0 + sum_{k=1}^{K} a_k cos(ks) + b_k sin(ks),  K = M/2,
// with the Nyquist cosine halved. Coefficients below 1e-15 of the
// largest one are truncated from the top (kmax).
class TrigSeries {
 public:
  TrigSeries() = default;
  explicit TrigSeries(const std::vector<double>& samples);

  int M() const { return M_; }
  int kmax() const { return kmax_; }
  double a(int k) const { return a_[k]; }
  double b(int k) const { return b_[k]; }

  double operator()(double s) const;
  // out[d] = d^d u / ds^d, d = 0..nd-1 (nd <= 4)
  void eval(const TrigTable& tab, double* out, int nd) const;
  void eval(double s, double* out, int nd) const;
  // samples of the derivative of order d at the nodes
  std::vector<double> derivative_samples(int d) const;
  // integral over one period divided by 2pi
  double mean() const { return a_.empty() ? 0 : a_[0]; }

 private:
  int M_ = 0, kmax_ = 0;
  std::vector<double> a_, b_;
};

inline double node_s(int j, int M) { return 6.283185307179586476925286766559 * j / M; }

// wrap into [0, 2pi)
double wrap_s(double s);

}  // namespace convac
