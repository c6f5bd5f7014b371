#pragma once

// Reference computations written independently of the library code paths:
// plain loops over indices, closed-form small cases and finite differences.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

struct Term {
  int i, k, j, l;
  double c;
};

/// Σ c · x_i x_k y_j y_l straight from the monomial list.
inline double poly(const std::vector<Term>& terms, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (const Term& t : terms) s += t.c * x[t.i] * x[t.k] * y[t.j] * y[t.l];
  return s;
}

/// Σ_{ijkl} a_{ijkl} x_i y_j x_k y_l for a tensor stored as raw(i·n + j, k·n + l).
inline double tensor(const Eigen::MatrixXd& raw, int m, int n, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l) s += raw(i * n + j, k * n + l) * x[i] * y[j] * x[k] * y[l];
  return s;
}

/// (xᵀx)·yᵀ diag(d) y + ((1ᵀx)² − xᵀx)·yᵀAy + (xᵀx)·yᵀBy.
inline double xsym(const Eigen::VectorXd& d, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double xx = x.squaredNorm();
  const double sx = x.sum();
  return xx * y.dot(d.asDiagonal() * y) + (sx * sx - xx) * y.dot(a * y) + xx * y.dot(b * y);
}

/// M assembled entry by entry: block (i,k) = δ_ik Q + (R − Q)/m.
inline Eigen::MatrixXd m_matrix(const Eigen::MatrixXd& q, const Eigen::MatrixXd& r, int m) {
  const auto n = q.rows();
  Eigen::MatrixXd out(m * n, m * n);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          out(i * n + j, k * n + l) = (i == k ? q(j, l) : 0.0) + (r(j, l) - q(j, l)) / m;
  return out;
}

/// Eigenvalues of [[a, b], [b, c]], descending.
inline std::pair<double, double> eig2(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  return {mean + rad, mean - rad};
}

/// Central-difference gradient of f at v.
template <typename F>
Eigen::VectorXd gradient(F f, Eigen::VectorXd v, double h = 1e-6) {
  Eigen::VectorXd g(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double old = v[i];
    v[i] = old + h;
    const double up = f(v);
    v[i] = old - h;
    const double down = f(v);
    v[i] = old;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

/// Rank by full SVD, independent of the library's eigen-based count.
inline int svd_rank(const Eigen::MatrixXd& s, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
  const auto& sv = svd.singularValues();
  const double cut = rel * std::max(1.0, sv.size() ? sv[0] : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv[i] > cut;
  return r;
}

inline Eigen::VectorXd unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = g(rng);
  return v.normalized();
}

inline Eigen::MatrixXd sym(std::mt19937_64& rng, int dim, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd s(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) s(i, j) = s(j, i) = u(rng);
  return s;
}

}  // namespace oracle
