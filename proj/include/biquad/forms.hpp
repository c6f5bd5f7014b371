#pragma once

// Biquadratic forms P(x, y) = Σ a_{ijkl} x_i y_j x_k y_l, x ∈ R^m, y ∈ R^n.
//
// The tensor is held in its unique symmetric representative
//   a_{ijkl} = a_{kjil} = a_{klij}  (hence also a_{ilkj}),
// laid out as the mn×mn matrix with row (i·n + j) and column (k·n + l), so
// that P(x, y) = zᵀ G z for z = x ⊗ y. Indices are 0-based in code and
// 1-based in files.

#include "biquad/error.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace biquad {

/// Coefficient of the monomial x_i x_k y_j y_l in the polynomial.
/// Canonical when i ≤ k and j ≤ l.
struct MonomialTerm {
  int i = 0;
  int k = 0;
  int j = 0;
  int l = 0;
  double coefficient = 0.0;

  bool operator==(const MonomialTerm&) const = default;
};

/// Number of ordered index tuples (i,j,k,l) producing the monomial x_i x_k y_j y_l.
inline int monomial_multiplicity(int i, int k, int j, int l) { return (i == k ? 1 : 2) * (j == l ? 1 : 2); }

class BiquadraticForm {
 public:
  static BiquadraticForm zero(int m, int n);
  /// Average of an arbitrary tensor over its symmetry orbit. `raw` is the
  /// mn×mn matrix with raw(i·n + j, k·n + l) = a_{ijkl}.
  static BiquadraticForm symmetrize(int m, int n, const Eigen::MatrixXd& raw);
  /// Polynomial from monomial coefficients. Terms in any index order are
  /// accepted and duplicates are summed.
  static BiquadraticForm from_terms(int m, int n, std::span<const MonomialTerm> terms);

  int m() const { return m_; }
  int n() const { return n_; }
  double at(int i, int j, int k, int l) const { return gram_(i * n_ + j, k * n_ + l); }
  /// The symmetric mn×mn matrix of tensor entries.
  const Eigen::MatrixXd& gram() const { return gram_; }

  /// Nonzero monomial coefficients in canonical order (i, k, j, l ascending).
  std::vector<MonomialTerm> terms() const;
  /// Largest absolute monomial coefficient.
  double max_abs_coefficient() const;

  BiquadraticForm scaled(double s) const;

  bool operator==(const BiquadraticForm& other) const {
    return m_ == other.m_ && n_ == other.n_ && gram_ == other.gram_;
  }

 private:
  BiquadraticForm(int m, int n, Eigen::MatrixXd gram) : m_(m), n_(n), gram_(std::move(gram)) {}

  int m_ = 0;
  int n_ = 0;
  Eigen::MatrixXd gram_;
};

/// Σ_p (xᵀ W_p y)². Factor p is stored as column p of an mn×r matrix holding
/// W_p row-major, i.e. the vector w_p with f_p(x, y) = w_pᵀ (x ⊗ y).
class SOSDecomposition {
 public:
  SOSDecomposition(int m, int n);
  SOSDecomposition(int m, int n, Eigen::MatrixXd columns);
  static SOSDecomposition from_factors(int m, int n, std::span<const Eigen::MatrixXd> factors);

  int m() const { return m_; }
  int n() const { return n_; }
  Eigen::Index size() const { return columns_.cols(); }
  const Eigen::MatrixXd& columns() const { return columns_; }
  /// W_p as an m×n matrix.
  Eigen::MatrixXd factor(Eigen::Index p) const;
  /// Σ w_p w_pᵀ.
  Eigen::MatrixXd gram() const;
  /// Factors of the same squares read as forms in (y, x): W_p ↦ W_pᵀ.
  SOSDecomposition transposed() const;

 private:
  int m_;
  int n_;
  Eigen::MatrixXd columns_;
};

Eigen::VectorXd kron(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

double evaluate(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double evaluate_sos(const SOSDecomposition& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct VerifyResult {
  bool passed = false;
  double max_residual = 0.0;
  double threshold = 0.0;
};

inline constexpr int kDefaultVerifySamples = 1000;

/// Compares P and the decomposition at `samples` seeded points (x, y) on the
/// unit spheres; passes iff max |P − Σ f_p²| ≤ 1e−8·(1 + max |coefficient|).
VerifyResult verify_sos(const BiquadraticForm& p, const SOSDecomposition& d,
                        int samples = kDefaultVerifySamples, std::uint64_t seed = 0);

/// P'(y, x) = P(x, y), an n×m form.
BiquadraticForm transpose_xy(const BiquadraticForm& p);

}  // namespace biquad
