#include "biquad/partsym.hpp"

#include "biquad/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biquad {

namespace {

Eigen::MatrixXd diag_block(const XSymmetricData& x) {
  Eigen::MatrixXd block = x.b.matrix();
  block.diagonal() = x.d;
  return block;
}

struct QRSpectra {
  SpectralDecomposition q;
  SpectralDecomposition r;
  double scale = 1.0;  // max(1, |λ| over both), the spectral scale of M
};

QRSpectra qr_spectra(const XSymmetricData& x) {
  const QRPair qr = qr_pair(x);
  QRSpectra out{sym_eig(qr.q), sym_eig(qr.r), 1.0};
  out.scale = std::max(spectral_scale(out.q.eigenvalues), spectral_scale(out.r.eigenvalues));
  return out;
}

bool passes_psd(const Eigen::VectorXd& eigs, const Tolerances& tol) {
  return eigs[eigs.size() - 1] >= -tol.eps_psd * spectral_scale(eigs);
}

int count_positive(const Eigen::VectorXd& eigs, double cutoff) {
  int count = 0;
  while (count < eigs.size() && eigs[count] > cutoff) ++count;
  return count;
}

void require_monic(const XSymmetricData& x, const char* who) {
  x.validate();
  if (!x.monic()) throw InvalidInput(std::string(who) + ": form is not monic (use reduce_general first)");
}

FormWitness make_witness(const BiquadraticForm& p, Eigen::VectorXd x, Eigen::VectorXd y) {
  x.normalize();
  y.normalize();
  const double value = evaluate(p, x, y);
  return {std::move(x), std::move(y), value};
}

PSDCertificate certify(const XSymmetricData& x, const QRSpectra& spectra, const Tolerances& tol) {
  PSDCertificate cert;
  cert.q_eigs = spectra.q.eigenvalues;
  cert.r_eigs = spectra.r.eigenvalues;
  const bool q_ok = x.m == 1 || passes_psd(cert.q_eigs, tol);
  const bool r_ok = passes_psd(cert.r_eigs, tol);
  if (q_ok && r_ok) return cert;

  cert.verdict = Verdict::NotPSD;
  const BiquadraticForm form = reconstruct(x);
  Eigen::VectorXd wx = Eigen::VectorXd::Zero(x.m);
  Eigen::VectorXd wy;
  if (!q_ok) {
    // Any unit x ⊥ 1 reduces P to yᵀQy.
    wx[0] = 1.0;
    wx[1] = -1.0;
    wy = spectra.q.eigenvectors.col(spectra.q.eigenvectors.cols() - 1);
  } else {
    // x = 1/√m reduces P to yᵀRy.
    wx.setOnes();
    wy = spectra.r.eigenvectors.col(spectra.r.eigenvectors.cols() - 1);
  }
  cert.witness = make_witness(form, wx, wy);
  if (!(cert.witness->value < 0.0)) {
    throw std::logic_error("check_psd_monic: eigenvector witness does not evaluate negative");
  }
  return cert;
}

}  // namespace

void XSymmetricData::validate() const {
  const Eigen::Index n = d.size();
  if (m < 1) throw InvalidInput("x-symmetric data: m must be positive");
  if (n < 1) throw InvalidInput("x-symmetric data: d must be non-empty");
  if (a.order() != n || b.order() != n) throw InvalidInput("x-symmetric data: A and B must be n×n");
  if (!d.allFinite() || !a.matrix().allFinite() || !b.matrix().allFinite()) {
    throw InvalidInput("x-symmetric data: non-finite coefficient");
  }
  if ((b.matrix().diagonal().array() != 0.0).any()) throw InvalidInput("x-symmetric data: B must have zero diagonal");
}

XSymmetricData XSymmetricData::monic_from(int m, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  XSymmetricData x{m, Eigen::VectorXd::Ones(a.rows()), SymMatrix(a), SymMatrix(b)};
  x.validate();
  return x;
}

QRPair qr_pair(const XSymmetricData& x) {
  x.validate();
  const Eigen::Index n = x.n();
  const Eigen::MatrixXd base = Eigen::MatrixXd::Identity(n, n) + x.b.matrix();
  return {SymMatrix(base - x.a.matrix()), SymMatrix(base + (x.m - 1) * x.a.matrix())};
}

std::optional<XSymmetricData> detect_x_symmetric(const BiquadraticForm& p, double tol) {
  const int m = p.m();
  const int n = p.n();
  const double thr = tol * (1.0 + p.gram().cwiseAbs().maxCoeff());
  const auto same = [thr](double u, double v) { return std::abs(u - v) <= thr; };

  Eigen::VectorXd d(n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double ref = p.at(0, j, 0, l);
      for (int i = 1; i < m; ++i) {
        if (!same(p.at(i, j, i, l), ref)) return std::nullopt;
      }
      if (j == l) {
        d[j] = ref;
      } else {
        b(j, l) = ref;
      }
    }
  }
  if (m >= 2) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        const double ref = p.at(0, j, 1, l);
        for (int i = 0; i < m; ++i) {
          for (int k = 0; k < m; ++k) {
            if (i != k && !same(p.at(i, j, k, l), ref)) return std::nullopt;
          }
        }
        a(j, l) = ref;
      }
    }
  }
  return XSymmetricData{m, std::move(d), SymMatrix(a), SymMatrix(b)};
}

BiquadraticForm reconstruct(const XSymmetricData& x) {
  x.validate();
  const int m = x.m;
  const int n = x.n();
  const Eigen::MatrixXd same_x = diag_block(x);
  Eigen::MatrixXd g(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      g.block(i * n, k * n, n, n) = (i == k) ? same_x : x.a.matrix();
    }
  }
  return BiquadraticForm::symmetrize(m, n, g);
}

PSDCertificate check_psd_monic(const XSymmetricData& x, const Tolerances& tol) {
  require_monic(x, "check_psd_monic");
  return certify(x, qr_spectra(x), tol);
}

Eigen::MatrixXd helmert_basis(int m) {
  if (m < 1) throw InvalidInput("helmert_basis: m must be positive");
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, m);
  u.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(m)));
  for (int k = 1; k < m; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    u.col(k).head(k).setConstant(s);
    u(k, k) = -k * s;
  }
  return u;
}

SymMatrix assemble_m(const XSymmetricData& x) {
  require_monic(x, "assemble_m");
  const QRPair qr = qr_pair(x);
  const int m = x.m;
  const int n = x.n();
  const Eigen::MatrixXd coupling = (qr.r.matrix() - qr.q.matrix()) / m;
  Eigen::MatrixXd big(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k) {
      big.block(i * n, k * n, n, n) = (i == k) ? Eigen::MatrixXd(qr.q.matrix() + coupling) : coupling;
    }
  }
  return SymMatrix(big);
}

Eigen::MatrixXd block_diagonalize(const Eigen::MatrixXd& m_matrix, int m, int n) {
  if (m_matrix.rows() != m * n || m_matrix.cols() != m * n) throw InvalidInput("block_diagonalize: size mismatch");
  const Eigen::MatrixXd u = helmert_basis(m);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < m; ++c) k.block(i * n, c * n, n, n).diagonal().setConstant(u(i, c));
  }
  return k.transpose() * m_matrix * k;
}

SOSDecomposition sos_decompose_naive(const XSymmetricData& x, const Tolerances& tol) {
  require_monic(x, "sos_decompose_naive");
  const PSDCertificate cert = certify(x, qr_spectra(x), tol);
  if (cert.verdict == Verdict::NotPSD) throw NotPSD("form is not positive semidefinite", *cert.witness);
  return SOSDecomposition(x.m, x.n(), psd_factor(assemble_m(x), tol));
}

SOSDecomposition sos_decompose_structured(const XSymmetricData& x, const Tolerances& tol) {
  require_monic(x, "sos_decompose_structured");
  const QRSpectra spectra = qr_spectra(x);
  const PSDCertificate cert = certify(x, spectra, tol);
  if (cert.verdict == Verdict::NotPSD) throw NotPSD("form is not positive semidefinite", *cert.witness);

  const int m = x.m;
  const int n = x.n();
  const double cutoff = tol.eps_rank * spectra.scale;
  const int rank_r = count_positive(spectra.r.eigenvalues, cutoff);
  const int rank_q = m == 1 ? 0 : count_positive(spectra.q.eigenvalues, cutoff);
  Eigen::MatrixXd cols(m * n, rank_r + (m - 1) * rank_q);

  const auto mn = static_cast<std::size_t>(m) * n;
  const auto emit = [&](Eigen::Index col, const Eigen::VectorXd& v, const Eigen::VectorXd& u, double lambda) {
    kernels::kron({v.data(), static_cast<std::size_t>(m)}, {u.data(), static_cast<std::size_t>(n)},
                  std::sqrt(lambda), {cols.col(col).data(), mn});
  };

  Eigen::Index col = 0;
  const Eigen::VectorXd mean = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
  for (int p = 0; p < rank_r; ++p) {
    emit(col++, mean, spectra.r.eigenvectors.col(p), spectra.r.eigenvalues[p]);
  }
  if (rank_q > 0) {
    const Eigen::MatrixXd helmert = helmert_basis(m);
    for (int p = 0; p < rank_q; ++p) {
      const Eigen::VectorXd u = spectra.q.eigenvectors.col(p);
      for (int k = 1; k < m; ++k) emit(col++, helmert.col(k), u, spectra.q.eigenvalues[p]);
    }
  }
  return SOSDecomposition(m, n, std::move(cols));
}

int rank_bound(const XSymmetricData& x, const Tolerances& tol) {
  require_monic(x, "rank_bound");
  const QRSpectra spectra = qr_spectra(x);
  const PSDCertificate cert = certify(x, spectra, tol);
  if (cert.verdict == Verdict::NotPSD) throw NotPSD("form is not positive semidefinite", *cert.witness);
  const double cutoff = tol.eps_rank * spectra.scale;
  const int rank_q = x.m == 1 ? 0 : count_positive(spectra.q.eigenvalues, cutoff);
  return count_positive(spectra.r.eigenvalues, cutoff) + (x.m - 1) * rank_q;
}

Reduction reduce_general(const XSymmetricData& x, const Tolerances& tol) {
  (void)tol;
  x.validate();
  const int m = x.m;
  const int n = x.n();
  const double cut = kZeroDiagonalRel * x.d.cwiseAbs().maxCoeff();
  const double coeff_scale =
      std::max({x.d.cwiseAbs().maxCoeff(), x.a.matrix().cwiseAbs().maxCoeff(), x.b.matrix().cwiseAbs().maxCoeff()});
  const double vanish = kZeroDiagonalRel * coeff_scale;

  const BiquadraticForm form = reconstruct(x);
  const auto basis = [](int dim, int idx) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[idx] = 1.0;
    return e;
  };

  for (int j = 0; j < n; ++j) {
    if (x.d[j] < -cut) {
      return ReductionFailure{"negative diagonal coefficient d_" + std::to_string(j + 1),
                              make_witness(form, basis(m, 0), basis(n, j))};
    }
  }

  // Probe points x ∈ {e_1, (e_1 − e_2)/√2, 1/√m} reduce P to yᵀSy with
  // S = D + B, D + B − A and D + B + (m−1)A. A vanishing weight d_j forces
  // row j of each S to vanish; otherwise S is indefinite.
  const Eigen::MatrixXd s1 = diag_block(x);
  std::vector<std::pair<Eigen::MatrixXd, Eigen::VectorXd>> probes{{s1, basis(m, 0)}};
  if (m >= 2) {
    Eigen::VectorXd split = Eigen::VectorXd::Zero(m);
    split[0] = 1.0;
    split[1] = -1.0;
    probes.emplace_back(s1 - x.a.matrix(), split);
    probes.emplace_back(s1 + (m - 1) * x.a.matrix(), Eigen::VectorXd::Ones(m));
  }

  std::vector<int> active;
  for (int j0 = 0; j0 < n; ++j0) {
    if (x.d[j0] > cut) {
      active.push_back(j0);
      continue;
    }
    for (const auto& [s, px] : probes) {
      if (s(j0, j0) < -vanish) {
        FormWitness w = make_witness(form, px, basis(n, j0));
        if (w.value < 0.0) return ReductionFailure{"vanishing condition fails at y_" + std::to_string(j0 + 1), w};
      }
      for (int j = 0; j < n; ++j) {
        if (j == j0 || std::abs(s(j, j0)) <= vanish) continue;
        // y = e_j + t e_j0 gives yᵀSy = S_jj + 2t S_{j,j0} + t² S_{j0,j0} = −1 + t² S_{j0,j0}.
        const double t = -(s(j, j) + 1.0) / (2.0 * s(j, j0));
        Eigen::VectorXd y = basis(n, j);
        y[j0] = t;
        FormWitness w = make_witness(form, px, y);
        if (!(w.value < 0.0)) {
          const SpectralDecomposition eig = sym_eig(SymMatrix(s));
          w = make_witness(form, px, eig.eigenvectors.col(n - 1));
        }
        if (w.value < 0.0) return ReductionFailure{"vanishing condition fails at y_" + std::to_string(j0 + 1), w};
      }
    }
  }

  MonicReduction out;
  out.active = active;
  out.scaling = Eigen::VectorXd::Zero(n);
  for (int j : active) out.scaling[j] = std::sqrt(x.d[j]);
  if (active.empty()) return out;

  const auto na = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd a(na, na);
  Eigen::MatrixXd b(na, na);
  for (Eigen::Index p = 0; p < na; ++p) {
    for (Eigen::Index q = 0; q < na; ++q) {
      const int j = active[p];
      const int l = active[q];
      const double s = out.scaling[j] * out.scaling[l];
      a(p, q) = x.a(j, l) / s;
      b(p, q) = p == q ? 0.0 : x.b(j, l) / s;
    }
  }
  out.monic = XSymmetricData::monic_from(m, a, b);
  return out;
}

GeneralPsdResult check_psd_general(const XSymmetricData& x, const Tolerances& tol) {
  GeneralPsdResult out;
  Reduction red = reduce_general(x, tol);
  if (auto* fail = std::get_if<ReductionFailure>(&red)) {
    out.verdict = Verdict::NotPSD;
    out.witness = fail->witness;
    out.reason = fail->reason;
    return out;
  }
  out.reduction = std::get<MonicReduction>(std::move(red));
  if (!out.reduction->monic) return out;

  out.monic_certificate = check_psd_monic(*out.reduction->monic, tol);
  if (out.monic_certificate->verdict == Verdict::PSD) return out;

  out.verdict = Verdict::NotPSD;
  out.reason = "reduced monic form fails the Q/R test";
  const FormWitness& reduced = *out.monic_certificate->witness;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.n());
  for (std::size_t p = 0; p < out.reduction->active.size(); ++p) {
    const int j = out.reduction->active[p];
    y[j] = reduced.y[static_cast<Eigen::Index>(p)] / out.reduction->scaling[j];
  }
  out.witness = make_witness(reconstruct(x), reduced.x, y);
  return out;
}

SOSDecomposition sos_decompose_general(const XSymmetricData& x, const Tolerances& tol) {
  const GeneralPsdResult check = check_psd_general(x, tol);
  if (check.verdict == Verdict::NotPSD) throw NotPSD("form is not positive semidefinite: " + check.reason, *check.witness);

  const int m = x.m;
  const int n = x.n();
  const MonicReduction& red = *check.reduction;
  if (!red.monic) return SOSDecomposition(m, n);

  const SOSDecomposition reduced = sos_decompose_structured(*red.monic, tol);
  const int na = red.monic->n();
  Eigen::MatrixXd cols = Eigen::MatrixXd::Zero(m * n, reduced.size());
  for (int i = 0; i < m; ++i) {
    for (int p = 0; p < na; ++p) {
      const int j = red.active[static_cast<std::size_t>(p)];
      cols.row(i * n + j) = reduced.columns().row(i * na + p) * red.scaling[j];
    }
  }
  return SOSDecomposition(m, n, std::move(cols));
}

}  // namespace biquad
