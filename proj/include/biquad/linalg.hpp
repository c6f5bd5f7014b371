#pragma once

#include "biquad/error.hpp"

#include <Eigen/Dense>

#include <vector>

namespace biquad {

/// Relative thresholds shared by every numerical decision in the library.
/// Scales are max(1, |λ|_max) of the matrix under test.
struct Tolerances {
  double eps_rank = 1e-9;   // |λ| > eps_rank·scale counts toward rank
  double eps_psd = 1e-9;    // λ_min ≥ −eps_psd·scale passes as PSD
  double tol_recon = 1e-9;  // ‖U Λ Uᵀ − S‖_F ≤ tol_recon·‖S‖_F
  double tol_orth = 1e-9;   // ‖UᵀU − I‖_F ≤ tol_orth

  /// Defaults, with eps_rank and eps_psd replaced by BIQUAD_TOL when set.
  static Tolerances from_env();
  /// Copy with eps_rank = eps_psd = eps. Throws InvalidInput unless eps > 0.
  Tolerances with_eps(double eps) const;
  void validate() const;
};

/// Symmetric dense matrix. The upper triangle of the constructor argument is
/// authoritative; the lower triangle is mirrored from it.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& upper);

  static SymMatrix identity(Eigen::Index order);
  static SymMatrix zero(Eigen::Index order);

  Eigen::Index order() const { return data_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }
  const Eigen::MatrixXd& matrix() const { return data_; }

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator*(double s) const;

 private:
  Eigen::MatrixXd data_;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // column p belongs to eigenvalues[p]
};

SpectralDecomposition sym_eig(const SymMatrix& s);

/// max(1, max |λ|): the scale the relative tolerances are measured against.
double spectral_scale(const Eigen::VectorXd& eigenvalues);

/// Count of |λ| > eps_rank·scale. `scale` defaults to spectral_scale(eigenvalues).
int count_rank(const Eigen::VectorXd& eigenvalues, const Tolerances& tol, double scale = -1.0);
int numerical_rank(const SymMatrix& s, const Tolerances& tol);

struct PsdCheck {
  bool psd = false;
  double min_eigenvalue = 0.0;
  Eigen::VectorXd witness;  // unit eigenvector of λ_min when !psd
};

PsdCheck is_psd(const SymMatrix& s, const Tolerances& tol);

/// Vectors w_p = √λ_p u_p (columns, eigenvalue-descending) with S ≈ Σ w_p w_pᵀ.
/// Throws NotPSD with the λ_min eigenvector when S fails is_psd.
Eigen::MatrixXd psd_factor(const SymMatrix& s, const Tolerances& tol);
/// Same, from an already computed decomposition of S.
Eigen::MatrixXd psd_factor(const SpectralDecomposition& eig, const Tolerances& tol);

}  // namespace biquad
