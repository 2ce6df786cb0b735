#include "convac/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>

#include "convac/errors.hpp"

namespace convac {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

SpMat assemble(int N, double eps, const std::vector<double>& q, double shift) {
  const int n = N - 1;
  const double w = eps * N * N;
  std::vector<Eigen::Triplet<double>> T;
  T.reserve(5 * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = i * n + j;
      T.emplace_back(k, k, 4 * w + q[k] - shift);
      if (i > 0) T.emplace_back(k, k - n, -w);
      if (i < n - 1) T.emplace_back(k, k + n, -w);
      if (j > 0) T.emplace_back(k, k - 1, -w);
      if (j < n - 1) T.emplace_back(k, k + 1, -w);
    }
  SpMat A(n * n, n * n);
  A.setFromTriplets(T.begin(), T.end());
  return A;
}

}  // namespace

SpectralReport min_eigenvalue(int N, double eps, const std::vector<double>& q, const SpectralOptions& opts) {
  const int n = N - 1, dim = n * n;
  if (N < 3 || int(q.size()) != dim) throw GridMismatch("potential does not match the grid");
  double qmax = 0;
  for (double x : q) {
    if (!std::isfinite(x)) throw NonFinite("non-finite potential");
    qmax = std::max(qmax, std::abs(x));
  }
  const double shift = -2 * std::max(qmax, eps);
  SpMat A = assemble(N, eps, q, 0.0);
  SpMat As = assemble(N, eps, q, shift);
  Eigen::SimplicialLDLT<SpMat> ldlt(As);
  if (ldlt.info() != Eigen::Success) throw EigenIterationStalled("factorization of the shifted operator failed");

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  Vec x(dim);
  for (int k = 0; k < dim; ++k) x[k] = U(rng);
  x.normalize();

  SpectralReport rep;
  rep.eps = eps;
  const int m = std::min(opts.krylov, dim);
  for (int restart = 0; restart <= opts.max_restarts; ++restart) {
    Eigen::MatrixXd V(dim, m + 1);
    std::vector<double> alpha, beta;
    V.col(0) = x;
    int steps = 0;
    for (int j = 0; j < m; ++j) {
      Vec w = ldlt.solve(V.col(j));
      double a = w.dot(V.col(j));
      alpha.push_back(a);
      // full reorthogonalization, twice
      for (int pass = 0; pass < 2; ++pass) {
        Vec c = V.leftCols(j + 1).transpose() * w;
        w -= V.leftCols(j + 1) * c;
      }
      ++steps;
      double b = w.norm();
      if (b <= 1e-14 * std::abs(a) || j == m - 1) break;
      beta.push_back(b);
      V.col(j + 1) = w / b;
    }
    rep.iterations += steps;
    int k = int(alpha.size());
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      Tm(i, i) = alpha[i];
      if (i + 1 < k) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
    // largest eigenvalue of the inverse is the one closest to the shift
    Vec y = es.eigenvectors().col(k - 1);
    x = V.leftCols(k) * y;
    x.normalize();
    Vec Ax = A * x;
    double lam = x.dot(Ax);
    double scale = std::max(std::abs(lam), std::max(qmax, eps));
    double res = (Ax - lam * x).norm() / scale;
    rep.lambda_min = lam;
    rep.rayleigh = lam;
    rep.residual = res;
    if (res <= opts.tol) {
      rep.vector.assign(x.data(), x.data() + dim);
      return rep;
    }
  }
  throw EigenIterationStalled("shift-invert Lanczos did not converge: residual " + std::to_string(rep.residual));
}

SpectralReport min_rayleigh(const ApproximateSolution& ca, double t, int N, const SpectralOptions& opts) {
  double eps = ca.eps();
  if (1.0 / N > eps / 8 * (1 + 1e-12)) throw ResolutionInsufficient("spectral grid h exceeds eps/8");
  const int n = N - 1;
  auto sl = ca.slice(t);
  const Potential& f = ca.potential();
  std::vector<double> q(n * n);
  for (int i = 1; i < N; ++i)
    for (int j = 1; j < N; ++j) q[(i - 1) * n + (j - 1)] = f.fpp(sl(Vec2{double(i) / N, double(j) / N})) / eps;
  SpectralReport rep = min_eigenvalue(N, eps, q, opts);
  rep.t = t;
  return rep;
}

}  // namespace convac
