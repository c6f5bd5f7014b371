#include "biquad/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdlib>
#include <string>

namespace biquad {

Tolerances Tolerances::from_env() {
  Tolerances tol;
  if (const char* env = std::getenv("BIQUAD_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double eps = std::strtod(env, &end);
    if (end == env || *end != '\0') throw InvalidInput("BIQUAD_TOL is not a number: " + std::string(env));
    tol = tol.with_eps(eps);
  }
  return tol;
}

Tolerances Tolerances::with_eps(double eps) const {
  Tolerances out = *this;
  out.eps_rank = eps;
  out.eps_psd = eps;
  out.validate();
  return out;
}

void Tolerances::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(eps_rank) || !positive(eps_psd) || !positive(tol_recon) || !positive(tol_orth)) {
    throw InvalidInput("tolerances must be finite and strictly positive");
  }
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& upper) {
  if (upper.rows() != upper.cols() || upper.rows() < 1) {
    throw InvalidInput("SymMatrix needs a non-empty square matrix");
  }
  data_ = upper.triangularView<Eigen::Upper>();
  data_.triangularView<Eigen::StrictlyLower>() = upper.transpose().triangularView<Eigen::StrictlyLower>();
}

SymMatrix SymMatrix::identity(Eigen::Index order) {
  return SymMatrix(Eigen::MatrixXd::Identity(order, order));
}

SymMatrix SymMatrix::zero(Eigen::Index order) { return SymMatrix(Eigen::MatrixXd::Zero(order, order)); }

SymMatrix SymMatrix::operator+(const SymMatrix& other) const { return SymMatrix(data_ + other.data_); }
SymMatrix SymMatrix::operator-(const SymMatrix& other) const { return SymMatrix(data_ - other.data_); }
SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(data_ * s); }

SpectralDecomposition sym_eig(const SymMatrix& s) {
  if (!s.matrix().allFinite()) throw InvalidInput("sym_eig: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw InvalidInput("sym_eig: eigensolver did not converge");

  const Eigen::Index n = s.order();
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  // Sign convention: the largest-magnitude entry of each eigenvector is positive.
  for (Eigen::Index p = 0; p < n; ++p) {
    Eigen::Index arg = 0;
    out.eigenvectors.col(p).cwiseAbs().maxCoeff(&arg);
    if (out.eigenvectors(arg, p) < 0.0) out.eigenvectors.col(p) *= -1.0;
  }
  return out;
}

double spectral_scale(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return 1.0;
  return std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
}

int count_rank(const Eigen::VectorXd& eigenvalues, const Tolerances& tol, double scale) {
  if (scale <= 0.0) scale = spectral_scale(eigenvalues);
  const double cutoff = tol.eps_rank * scale;
  int rank = 0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues[i]) > cutoff) ++rank;
  }
  return rank;
}

int numerical_rank(const SymMatrix& s, const Tolerances& tol) {
  if (!s.matrix().allFinite()) throw InvalidInput("numerical_rank: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.matrix(), Eigen::EigenvaluesOnly);
  return count_rank(solver.eigenvalues(), tol);
}

PsdCheck is_psd(const SymMatrix& s, const Tolerances& tol) {
  const SpectralDecomposition eig = sym_eig(s);
  const Eigen::Index last = eig.eigenvalues.size() - 1;
  PsdCheck out;
  out.min_eigenvalue = eig.eigenvalues[last];
  out.psd = out.min_eigenvalue >= -tol.eps_psd * spectral_scale(eig.eigenvalues);
  if (!out.psd) out.witness = eig.eigenvectors.col(last);
  return out;
}

Eigen::MatrixXd psd_factor(const SpectralDecomposition& eig, const Tolerances& tol) {
  const double scale = spectral_scale(eig.eigenvalues);
  const Eigen::Index n = eig.eigenvalues.size();
  if (eig.eigenvalues[n - 1] < -tol.eps_psd * scale) {
    throw NotPSD("psd_factor: matrix is not positive semidefinite", Eigen::VectorXd(eig.eigenvectors.col(n - 1)));
  }
  const double cutoff = tol.eps_rank * scale;
  Eigen::Index count = 0;
  while (count < n && eig.eigenvalues[count] > cutoff) ++count;
  Eigen::MatrixXd w(n, count);
  for (Eigen::Index p = 0; p < count; ++p) {
    w.col(p) = std::sqrt(eig.eigenvalues[p]) * eig.eigenvectors.col(p);
  }
  return w;
}

Eigen::MatrixXd psd_factor(const SymMatrix& s, const Tolerances& tol) { return psd_factor(sym_eig(s), tol); }

}  // namespace biquad
