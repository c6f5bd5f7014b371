#include "biquad/random.hpp"

namespace biquad {

Eigen::VectorXd random_normal(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd random_unit(Rng& rng, Eigen::Index dim) {
  Eigen::VectorXd v = random_normal(rng, dim);
  double norm = v.norm();
  while (norm == 0.0) {
    v = random_normal(rng, dim);
    norm = v.norm();
  }
  return v / norm;
}

Eigen::MatrixXd random_uniform(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
  std::uniform_real_distribution<double> uniform(lo, hi);
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = uniform(rng);
  }
  return out;
}

}  // namespace biquad
