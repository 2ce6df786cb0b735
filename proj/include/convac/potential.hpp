#pragma once

#include <string>
#include <vector>

namespace convac {

// Polynomial double-well potential. Built either from the factored form
// f(c) = (1 - c^2)^2 q(c^2), which keeps sqrt(2 f) accurate near the wells,
// or from raw monomial coefficients (used to exercise validation).
class Potential {
 public:
  static Potential quartic();
  static Potential double_well(const std::vector<double>& q);
  static Potential polynomial(const std::vector<double>& coeffs);

  const std::string& name() const { return name_; }
  double f(double c) const { return horner(a_, c); }
  double fp(double c) const { return horner(d1_, c); }
  double fpp(double c) const { return horner(d2_, c); }
  double fppp(double c) const { return horner(d3_, c); }
  double sqrt2f(double c) const;
  // sqrt(2 f) and f' at c = 1 - w, accurate for small w
  void near_one(double w, double& sqrt2f_out, double& fp_out) const;
  // max |f''| on [-m, m] (sampled)
  double max_abs_fpp(double m) const;

  // throws PotentialInvalid unless f(c) = f(-c) > 0 on (-1,1), f'(+-1) = 0, f''(+-1) > 0
  void validate() const;

 private:
  static double horner(const std::vector<double>& a, double c);

  std::string name_;
  std::vector<double> a_, d1_, d2_, d3_;
  std::vector<double> q_;  // nonempty for the factored form
};

}  // namespace convac
