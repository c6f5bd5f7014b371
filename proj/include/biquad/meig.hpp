#pragma once

// M-eigenpairs of a biquadratic tensor: unit x, y and λ with
//   (A·yxy)_i = Σ a_{ijkl} y_j x_k y_l = λ x_i
//   (Ax·xy)_j = Σ a_{ijkl} x_i x_k y_l = λ y_j
// and then λ = P(x, y). The solver is a heuristic oracle used for
// cross-checks; it can miss eigenpairs.

#include "biquad/forms.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace biquad {

struct MEigenpair {
  double lambda = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double residual_x = 0.0;  // ‖A·yxy − λx‖
  double residual_y = 0.0;  // ‖Ax·xy − λy‖
};

Eigen::VectorXd contract_x(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
Eigen::VectorXd contract_y(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// G(y)_{ik} = Σ a_{ijkl} y_j y_l, so that xᵀG(y)x = P(x, y).
Eigen::MatrixXd x_matrix(const BiquadraticForm& p, const Eigen::VectorXd& y);
/// H(x)_{jl} = Σ a_{ijkl} x_i x_k, so that yᵀH(x)y = P(x, y).
Eigen::MatrixXd y_matrix(const BiquadraticForm& p, const Eigen::VectorXd& x);

struct MEigOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  double tol = 1e-10;  // residual bound, relative to max(1, max |a_ijkl|)
  int max_iterations = 5000;
  int max_dimension = 8;
  double dedup_tol = 1e-6;
};

struct MEigResult {
  std::vector<MEigenpair> pairs;  // sorted by λ ascending
  int discarded_starts = 0;       // runs that did not reach the residual bound
};

/// Alternating block eigensteps from `restarts` seeded starts, each run once
/// towards a maximum and once towards a minimum. Pairs are deduplicated over
/// λ and the sign orbit (±x, ±y), and reported with the largest-magnitude
/// entry of x and of y positive. The smallest λ found is only an upper bound
/// on the smallest M-eigenvalue. Throws InvalidInput when m or n exceeds
/// max_dimension.
MEigResult meig_solve(const BiquadraticForm& p, const MEigOptions& opts = {});

struct SampleCheck {
  double min_value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

inline constexpr int kPolishSteps = 20;

/// Minimum of P over `samples` seeded unit pairs, then polished by alternating
/// smallest-eigenvector steps from the best sample.
SampleCheck psd_sample_check(const BiquadraticForm& p, int samples, std::uint64_t seed = 0);

}  // namespace biquad
