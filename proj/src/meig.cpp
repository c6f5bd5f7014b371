#include "biquad/meig.hpp"

#include "biquad/error.hpp"
#include "biquad/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace biquad {

namespace {

void check_dims(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != p.m() || y.size() != p.n()) {
    throw InvalidInput("contraction: expected x in R^" + std::to_string(p.m()) + " and y in R^" +
                       std::to_string(p.n()));
  }
}

void sign_normalize(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0) v = -v;
}

/// Eigenvector of the extreme eigenvalue. With a (numerically) repeated
/// extreme eigenvalue, the projection of `current` onto its eigenspace keeps
/// the iteration from jumping around inside it.
Eigen::VectorXd extreme_vector(const Eigen::MatrixXd& s, const Eigen::VectorXd& current, bool top) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  const Eigen::VectorXd& vals = solver.eigenvalues();
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const Eigen::Index dim = vals.size();
  const double gap = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  Eigen::Index first = top ? dim - 1 : 0;
  Eigen::Index last = first;
  if (top) {
    while (first > 0 && vals[dim - 1] - vals[first - 1] <= gap) --first;
  } else {
    while (last + 1 < dim && vals[last + 1] - vals[0] <= gap) ++last;
  }
  const Eigen::MatrixXd basis = vecs.middleCols(first, last - first + 1);
  Eigen::VectorXd v = basis * (basis.transpose() * current);
  if (v.norm() < 1e-8) v = vecs.col(top ? dim - 1 : 0);
  return v.normalized();
}

MEigenpair make_pair(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  MEigenpair out;
  out.x = x;
  out.y = y;
  out.lambda = evaluate(p, x, y);
  out.residual_x = (contract_x(p, x, y) - out.lambda * x).norm();
  out.residual_y = (contract_y(p, x, y) - out.lambda * y).norm();
  return out;
}

bool same_pair(const MEigenpair& a, const MEigenpair& b, double tol) {
  return std::abs(a.lambda - b.lambda) <= tol && std::abs(a.x.dot(b.x)) >= 1.0 - tol &&
         std::abs(a.y.dot(b.y)) >= 1.0 - tol;
}

}  // namespace

Eigen::VectorXd contract_x(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_dims(p, x, y);
  const Eigen::VectorXd g = p.gram() * kron(x, y);
  Eigen::VectorXd out(p.m());
  for (int i = 0; i < p.m(); ++i) out[i] = g.segment(i * p.n(), p.n()).dot(y);
  return out;
}

Eigen::VectorXd contract_y(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_dims(p, x, y);
  const Eigen::VectorXd g = p.gram() * kron(x, y);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p.n());
  for (int i = 0; i < p.m(); ++i) out += x[i] * g.segment(i * p.n(), p.n());
  return out;
}

Eigen::MatrixXd x_matrix(const BiquadraticForm& p, const Eigen::VectorXd& y) {
  if (y.size() != p.n()) throw InvalidInput("x_matrix: y has the wrong dimension");
  const int m = p.m();
  const int n = p.n();
  Eigen::MatrixXd out(m, m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) out(i, k) = y.dot(p.gram().block(i * n, k * n, n, n) * y);
  }
  return out;
}

Eigen::MatrixXd y_matrix(const BiquadraticForm& p, const Eigen::VectorXd& x) {
  if (x.size() != p.m()) throw InvalidInput("y_matrix: x has the wrong dimension");
  const int m = p.m();
  const int n = p.n();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) out += (x[i] * x[k]) * p.gram().block(i * n, k * n, n, n);
  }
  return out;
}

MEigResult meig_solve(const BiquadraticForm& p, const MEigOptions& opts) {
  if (p.m() > opts.max_dimension || p.n() > opts.max_dimension) {
    throw InvalidInput("meig_solve: dimensions exceed the cap of " + std::to_string(opts.max_dimension));
  }
  if (opts.restarts < 1) throw InvalidInput("meig_solve: restarts must be positive");
  const double bound = opts.tol * std::max(1.0, p.gram().cwiseAbs().maxCoeff());

  Rng rng(opts.seed);
  MEigResult result;
  std::vector<MEigenpair> found;
  for (int r = 0; r < opts.restarts; ++r) {
    const Eigen::VectorXd x0 = random_unit(rng, p.m());
    const Eigen::VectorXd y0 = random_unit(rng, p.n());
    for (const bool top : {true, false}) {
      Eigen::VectorXd x = x0;
      Eigen::VectorXd y = y0;
      bool converged = false;
      for (int it = 0; it < opts.max_iterations && !converged; ++it) {
        x = extreme_vector(x_matrix(p, y), x, top);
        y = extreme_vector(y_matrix(p, x), y, top);
        const MEigenpair pair = make_pair(p, x, y);
        converged = pair.residual_x <= bound && pair.residual_y <= bound;
      }
      if (!converged) {
        ++result.discarded_starts;
        continue;
      }
      sign_normalize(x);
      sign_normalize(y);
      found.push_back(make_pair(p, x, y));
    }
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const MEigenpair& a, const MEigenpair& b) { return a.lambda < b.lambda; });
  for (MEigenpair& pair : found) {
    const bool duplicate = std::any_of(result.pairs.begin(), result.pairs.end(), [&](const MEigenpair& q) {
      return same_pair(q, pair, opts.dedup_tol);
    });
    if (!duplicate) result.pairs.push_back(std::move(pair));
  }
  return result;
}

SampleCheck psd_sample_check(const BiquadraticForm& p, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("psd_sample_check: samples must be positive");
  Rng rng(seed);
  SampleCheck best;
  best.min_value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x = random_unit(rng, p.m());
    Eigen::VectorXd y = random_unit(rng, p.n());
    const double v = evaluate(p, x, y);
    if (v < best.min_value) best = {v, std::move(x), std::move(y)};
  }
  Eigen::VectorXd x = best.x;
  Eigen::VectorXd y = best.y;
  for (int step = 0; step < kPolishSteps; ++step) {
    x = extreme_vector(x_matrix(p, y), x, false);
    y = extreme_vector(y_matrix(p, x), y, false);
    const double v = evaluate(p, x, y);
    if (v < best.min_value) best = {v, x, y};
  }
  return best;
}

}  // namespace biquad
