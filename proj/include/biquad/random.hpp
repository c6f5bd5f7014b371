#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace biquad {

using Rng = std::mt19937_64;

/// Uniform point on the unit sphere in R^dim (dim ≥ 1).
Eigen::VectorXd random_unit(Rng& rng, Eigen::Index dim);
/// i.i.d. standard normal vector.
Eigen::VectorXd random_normal(Rng& rng, Eigen::Index dim);
/// i.i.d. uniform [lo, hi] matrix.
Eigen::MatrixXd random_uniform(Rng& rng, Eigen::Index rows, Eigen::Index cols, double lo, double hi);

}  // namespace biquad
