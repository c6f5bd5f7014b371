#include "biquad/forms.hpp"

#include "biquad/kernels.hpp"
#include "biquad/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace biquad {

namespace {

void require_dims(int m, int n) {
  if (m < 1 || n < 1) throw InvalidInput("form dimensions must be positive");
}

void require_vec(const Eigen::VectorXd& v, int dim, const char* what) {
  if (v.size() != dim) {
    throw InvalidInput(std::string(what) + ": expected length " + std::to_string(dim) + ", got " +
                       std::to_string(v.size()));
  }
}

}  // namespace

BiquadraticForm BiquadraticForm::zero(int m, int n) {
  require_dims(m, n);
  return BiquadraticForm(m, n, Eigen::MatrixXd::Zero(m * n, m * n));
}

BiquadraticForm BiquadraticForm::symmetrize(int m, int n, const Eigen::MatrixXd& raw) {
  require_dims(m, n);
  const int mn = m * n;
  if (raw.rows() != mn || raw.cols() != mn) throw InvalidInput("symmetrize: tensor must be mn×mn");
  Eigen::MatrixXd g(mn, mn);
  const auto idx = [n](int a, int b) { return a * n + b; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < n; ++l) {
          // Paired so that an already symmetric input is reproduced bit-for-bit.
          g(idx(i, j), idx(k, l)) = 0.25 * ((raw(idx(i, j), idx(k, l)) + raw(idx(k, l), idx(i, j))) +
                                            (raw(idx(k, j), idx(i, l)) + raw(idx(i, l), idx(k, j))));
        }
      }
    }
  }
  return BiquadraticForm(m, n, std::move(g));
}

BiquadraticForm BiquadraticForm::from_terms(int m, int n, std::span<const MonomialTerm> terms) {
  require_dims(m, n);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m * n, m * n);
  for (const MonomialTerm& t : terms) {
    if (t.i < 0 || t.i >= m || t.k < 0 || t.k >= m || t.j < 0 || t.j >= n || t.l < 0 || t.l >= n) {
      throw InvalidInput("monomial index out of range");
    }
    if (!std::isfinite(t.coefficient)) throw InvalidInput("monomial coefficient is not finite");
    const double share = t.coefficient / monomial_multiplicity(t.i, t.k, t.j, t.l);
    std::array<std::array<int, 4>, 4> orbit{{{t.i, t.j, t.k, t.l},
                                             {t.k, t.j, t.i, t.l},
                                             {t.i, t.l, t.k, t.j},
                                             {t.k, t.l, t.i, t.j}}};
    std::sort(orbit.begin(), orbit.end());
    const auto last = std::unique(orbit.begin(), orbit.end());
    for (auto it = orbit.begin(); it != last; ++it) {
      g((*it)[0] * n + (*it)[1], (*it)[2] * n + (*it)[3]) += share;
    }
  }
  return BiquadraticForm(m, n, std::move(g));
}

std::vector<MonomialTerm> BiquadraticForm::terms() const {
  std::vector<MonomialTerm> out;
  for (int i = 0; i < m_; ++i) {
    for (int k = i; k < m_; ++k) {
      for (int j = 0; j < n_; ++j) {
        for (int l = j; l < n_; ++l) {
          const double c = monomial_multiplicity(i, k, j, l) * at(i, j, k, l);
          if (c != 0.0) out.push_back({i, k, j, l, c});
        }
      }
    }
  }
  return out;
}

double BiquadraticForm::max_abs_coefficient() const {
  double best = 0.0;
  for (const MonomialTerm& t : terms()) best = std::max(best, std::abs(t.coefficient));
  return best;
}

BiquadraticForm BiquadraticForm::scaled(double s) const { return BiquadraticForm(m_, n_, gram_ * s); }

SOSDecomposition::SOSDecomposition(int m, int n) : SOSDecomposition(m, n, Eigen::MatrixXd(m * n, 0)) {}

SOSDecomposition::SOSDecomposition(int m, int n, Eigen::MatrixXd columns)
    : m_(m), n_(n), columns_(std::move(columns)) {
  require_dims(m, n);
  if (columns_.rows() != m * n) throw InvalidInput("decomposition factors must have m·n entries");
}

SOSDecomposition SOSDecomposition::from_factors(int m, int n, std::span<const Eigen::MatrixXd> factors) {
  require_dims(m, n);
  Eigen::MatrixXd cols(m * n, static_cast<Eigen::Index>(factors.size()));
  for (std::size_t p = 0; p < factors.size(); ++p) {
    const Eigen::MatrixXd& w = factors[p];
    if (w.rows() != m || w.cols() != n) throw InvalidInput("decomposition factor must be m×n");
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) cols(i * n + j, static_cast<Eigen::Index>(p)) = w(i, j);
    }
  }
  return SOSDecomposition(m, n, std::move(cols));
}

Eigen::MatrixXd SOSDecomposition::factor(Eigen::Index p) const {
  Eigen::MatrixXd w(m_, n_);
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) w(i, j) = columns_(i * n_ + j, p);
  }
  return w;
}

Eigen::MatrixXd SOSDecomposition::gram() const { return columns_ * columns_.transpose(); }

SOSDecomposition SOSDecomposition::transposed() const {
  Eigen::MatrixXd cols(columns_.rows(), columns_.cols());
  for (int i = 0; i < m_; ++i) {
    for (int j = 0; j < n_; ++j) cols.row(j * m_ + i) = columns_.row(i * n_ + j);
  }
  return SOSDecomposition(n_, m_, std::move(cols));
}

Eigen::VectorXd kron(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd z(x.size() * y.size());
  kernels::kron({x.data(), static_cast<std::size_t>(x.size())}, {y.data(), static_cast<std::size_t>(y.size())},
                1.0, {z.data(), static_cast<std::size_t>(z.size())});
  return z;
}

double evaluate(const BiquadraticForm& p, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  require_vec(x, p.m(), "evaluate: x");
  require_vec(y, p.n(), "evaluate: y");
  const Eigen::VectorXd z = kron(x, y);
  return kernels::quad_form({p.gram().data(), static_cast<std::size_t>(p.gram().size())},
                            {z.data(), static_cast<std::size_t>(z.size())});
}

double evaluate_sos(const SOSDecomposition& d, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  require_vec(x, d.m(), "evaluate_sos: x");
  require_vec(y, d.n(), "evaluate_sos: y");
  const Eigen::VectorXd z = kron(x, y);
  const auto len = static_cast<std::size_t>(z.size());
  double total = 0.0;
  for (Eigen::Index p = 0; p < d.size(); ++p) {
    const double f = kernels::dot({d.columns().col(p).data(), len}, {z.data(), len});
    total += f * f;
  }
  return total;
}

VerifyResult verify_sos(const BiquadraticForm& p, const SOSDecomposition& d, int samples, std::uint64_t seed) {
  VerifyResult out;
  out.threshold = 1e-8 * (1.0 + p.max_abs_coefficient());
  if (p.m() != d.m() || p.n() != d.n()) return out;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = random_unit(rng, p.m());
    const Eigen::VectorXd y = random_unit(rng, p.n());
    out.max_residual = std::max(out.max_residual, std::abs(evaluate(p, x, y) - evaluate_sos(d, x, y)));
  }
  out.passed = out.max_residual <= out.threshold;
  return out;
}

BiquadraticForm transpose_xy(const BiquadraticForm& p) {
  const int m = p.m();
  const int n = p.n();
  Eigen::MatrixXd g(m * n, m * n);
  // b_{jilk} = a_{ijkl}: row (j·m + i), column (l·m + k).
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < m; ++k) {
        for (int l = 0; l < n; ++l) g(j * m + i, l * m + k) = p.at(i, j, k, l);
      }
    }
  }
  return BiquadraticForm::symmetrize(n, m, g);
}

}  // namespace biquad
