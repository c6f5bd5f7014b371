#pragma once

// x-symmetric biquadratic forms (invariant under any permutation of x):
//
//   P(x, y) = Σ_i Σ_j d_j x_i² y_j² + Σ_{i≠k} Σ_{j,l} a_{jl} x_i x_k y_j y_l
//             + Σ_i Σ_{j≠l} b_{jl} x_i² y_j y_l
//           = (xᵀx)·yᵀ(D + B − A)y + (1ᵀx)²·yᵀAy,   D = diag(d).
//
// Sums run over ordered pairs, so the polynomial coefficients are
//   x_i² y_j²       → d_j
//   x_i² y_j y_l    → 2 b_{jl}          (j < l)
//   x_i x_k y_j²    → 2 a_{jj}          (i < k)
//   x_i x_k y_j y_l → 4 a_{jl}          (i < k, j < l)
// and the symmetric tensor, as an mn×mn matrix, is I_m ⊗ (D + B − A) + 1 1ᵀ ⊗ A.
// The form is monic when d = 1; then Q = I + B − A and R = I + B + (m−1)A
// decide positive semidefiniteness and give the block structure
// (Uᵀ ⊗ I) M (U ⊗ I) = diag(R, Q, …, Q) for U = [1/√m, Helmert basis of 1^⊥].

#include "biquad/error.hpp"
#include "biquad/forms.hpp"
#include "biquad/linalg.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace biquad {

struct XSymmetricData {
  int m = 1;
  Eigen::VectorXd d;  // length n
  SymMatrix a;        // n×n
  SymMatrix b;        // n×n, zero diagonal

  int n() const { return static_cast<int>(d.size()); }
  bool monic() const { return (d.array() == 1.0).all(); }
  /// Throws InvalidInput on inconsistent sizes, m < 1 or a nonzero diagonal in B.
  void validate() const;

  static XSymmetricData monic_from(int m, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
};

struct QRPair {
  SymMatrix q;  // I + B − A
  SymMatrix r;  // I + B + (m−1)A
};

QRPair qr_pair(const XSymmetricData& x);

enum class Verdict { PSD, NotPSD };

struct PSDCertificate {
  Verdict verdict = Verdict::PSD;
  Eigen::VectorXd q_eigs;  // descending
  Eigen::VectorXd r_eigs;  // descending
  std::optional<FormWitness> witness;
};

/// Tolerance for coefficient-pattern matching in detect_x_symmetric, relative to 1 + max |a_{ijkl}|.
inline constexpr double kDetectTol = 1e-12;

std::optional<XSymmetricData> detect_x_symmetric(const BiquadraticForm& p, double tol = kDetectTol);
BiquadraticForm reconstruct(const XSymmetricData& x);

/// PSD iff Q ⪰ 0 and R ⪰ 0 (only R when m = 1). A NotPSD certificate carries
/// an (x, y) with P(x, y) < 0 that has been checked by direct evaluation.
PSDCertificate check_psd_monic(const XSymmetricData& x, const Tolerances& tol = {});

/// m×m orthogonal matrix: column 0 is 1/√m, column k (k ≥ 1) is the Helmert
/// vector (1, …, 1, −k, 0, …, 0)/√(k(k+1)) with k leading ones.
Eigen::MatrixXd helmert_basis(int m);

/// M = I_m ⊗ Q + (1/m)(1 1ᵀ) ⊗ (R − Q), the mn×mn Gram matrix of a monic form.
SymMatrix assemble_m(const XSymmetricData& x);

/// (Uᵀ ⊗ I_n) M (U ⊗ I_n) for the Helmert U.
Eigen::MatrixXd block_diagonalize(const Eigen::MatrixXd& m_matrix, int m, int n);

/// Forms M, factors it spectrally and reshapes each factor.
SOSDecomposition sos_decompose_naive(const XSymmetricData& x, const Tolerances& tol = {});
/// Factors from the spectra of Q and R only: R-factors first, then
/// Q-factors by eigenvalue descending and Helmert index.
SOSDecomposition sos_decompose_structured(const XSymmetricData& x, const Tolerances& tol = {});

/// rank(R) + (m−1)·rank(Q), with both ranks measured against the scale of M.
int rank_bound(const XSymmetricData& x, const Tolerances& tol = {});

struct MonicReduction {
  std::optional<XSymmetricData> monic;  // absent when no y-variable survives
  Eigen::VectorXd scaling;              // √d_j for active j, 0 for dropped j
  std::vector<int> active;              // original indices of the surviving y-variables
};

struct ReductionFailure {
  std::string reason;
  FormWitness witness;  // P(x, y) < 0 in the original variables
};

using Reduction = std::variant<MonicReduction, ReductionFailure>;

/// Relative cut below which a diagonal weight d_j is treated as zero.
inline constexpr double kZeroDiagonalRel = 1e-12;

Reduction reduce_general(const XSymmetricData& x, const Tolerances& tol = {});

/// Decomposition of a possibly non-monic x-symmetric form in its original variables.
/// Throws NotPSD with a form witness when the form is not PSD.
SOSDecomposition sos_decompose_general(const XSymmetricData& x, const Tolerances& tol = {});

/// Full analysis of a possibly non-monic form: reduction then the monic check,
/// with any witness lifted back to the original variables.
struct GeneralPsdResult {
  Verdict verdict = Verdict::PSD;
  std::optional<PSDCertificate> monic_certificate;  // absent when the reduction failed or nothing is active
  std::optional<MonicReduction> reduction;
  std::optional<FormWitness> witness;
  std::string reason;
};

GeneralPsdResult check_psd_general(const XSymmetricData& x, const Tolerances& tol = {});

}  // namespace biquad
