#include "biquad/gram.hpp"

#include "biquad/random.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace biquad {

namespace {

double lambda_min(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

double operator_norm(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Range/kernel split of a PSD point at the rank cutoff.
struct Face {
  Eigen::VectorXd lambda;  // positive part, descending
  Eigen::MatrixXd range;   // mn × r
  Eigen::MatrixXd kernel;  // mn × (mn − r)
  double scale = 1.0;
  int rank = 0;
};

Face face_of(const SymMatrix& m, const Tolerances& tol) {
  const SpectralDecomposition eig = sym_eig(m);
  Face face;
  face.scale = spectral_scale(eig.eigenvalues);
  const double cutoff = tol.eps_rank * face.scale;
  const Eigen::Index total = eig.eigenvalues.size();
  Eigen::Index r = 0;
  while (r < total && eig.eigenvalues[r] > cutoff) ++r;
  face.rank = static_cast<int>(r);
  face.lambda = eig.eigenvalues.head(r);
  face.range = eig.eigenvectors.leftCols(r);
  face.kernel = eig.eigenvectors.rightCols(total - r);
  return face;
}

/// Basis (columns, in coefficient space) of the directions Δ with Δ·kernel = 0.
Eigen::MatrixXd face_directions(const GramFamily& f, const Eigen::MatrixXd& kernel) {
  const Eigen::Index d = f.dimension();
  if (kernel.cols() == 0 || d == 0) return Eigen::MatrixXd::Identity(d, d);
  const Eigen::Index mn = kernel.rows();
  const Eigen::Index q = kernel.cols();
  const int n = f.n();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(mn * q, d);
  for (Eigen::Index t = 0; t < d; ++t) {
    const GramDirection& g = f.directions()[static_cast<std::size_t>(t)];
    const Eigen::Index a = g.i * n + g.j;
    const Eigen::Index b = g.k * n + g.l;
    const Eigen::Index c = g.i * n + g.l;
    const Eigen::Index e = g.k * n + g.j;
    for (Eigen::Index col = 0; col < q; ++col) {
      k(col * mn + a, t) += kernel(b, col);
      k(col * mn + b, t) += kernel(a, col);
      k(col * mn + c, t) -= kernel(e, col);
      k(col * mn + e, t) -= kernel(c, col);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = 1e-9 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > cut) ++rank;
  return svd.matrixV().rightCols(d - rank);
}

std::vector<double> axpy(const std::vector<double>& gamma, double t, const Eigen::VectorXd& dir) {
  std::vector<double> out(gamma);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += t * dir[static_cast<Eigen::Index>(i)];
  return out;
}

bool better(const GramPoint& a, int rank_a, const GramPoint& b, int rank_b) {
  if (rank_a != rank_b) return rank_a < rank_b;
  return a.gamma < b.gamma;
}

struct StepResult {
  double t = 0.0;
  bool ok = false;
};

/// Boundary step inside the current face along coefficient direction c.
StepResult face_step(const GramFamily& f, const Face& face, const Eigen::VectorXd& c, bool both_signs,
                     const Tolerances& tol, const BoundaryOptions& opts) {
  const Eigen::MatrixXd delta = f.combine({c.data(), static_cast<std::size_t>(c.size())});
  const Eigen::MatrixXd s = face.lambda.asDiagonal();
  const Eigen::MatrixXd t = face.range.transpose() * delta * face.range;
  const double zero_cut = 0.5 * tol.eps_rank * face.scale;
  const std::optional<double> plus = boundary_step(s, t, zero_cut, opts);
  std::optional<double> minus;
  if (both_signs) minus = boundary_step(s, -t, zero_cut, opts);
  if (plus && (!minus || *plus <= *minus)) return {*plus, true};
  if (minus) return {-*minus, true};
  return {};
}

/// Walks to lower-rank faces until no family direction stays inside the face.
GramPoint face_walk(const GramFamily& f, GramPoint point, Rng& rng, bool guided, const Tolerances& tol,
                    const BoundaryOptions& opts) {
  const Eigen::Index mn = f.base().order();
  for (Eigen::Index step = 0; step < mn; ++step) {
    const Face face = face_of(point.matrix, tol);
    if (face.rank == 0) break;
    const Eigen::MatrixXd basis = face_directions(f, face.kernel);
    if (basis.cols() == 0) break;

    Eigen::VectorXd c;
    bool both_signs = true;
    if (guided) {
      // Descend on the smallest positive eigenvalue, projected onto the face.
      const Eigen::VectorXd grad = f.directional_quadratics(face.range.col(face.rank - 1));
      c = -(basis * (basis.transpose() * grad));
      both_signs = false;
    }
    if (!guided || c.norm() <= 1e-12 * std::max(1.0, face.scale)) {
      c = basis * random_normal(rng, basis.cols());
      both_signs = true;
    }
    c.normalize();
    const StepResult s = face_step(f, face, c, both_signs, tol, opts);
    if (!s.ok) break;
    GramPoint next = gram_at(f, axpy(point.gamma, s.t, c));
    if (!is_psd(next.matrix, tol).psd || numerical_rank(next.matrix, tol) >= face.rank) break;
    point = std::move(next);
  }
  return point;
}

/// Soft-min smoothed ascent on λ_min over γ.
std::vector<double> ascend_lambda_min(const GramFamily& f, std::vector<double> gamma, int iterations) {
  const Eigen::Index d = f.dimension();
  if (d == 0) return gamma;
  const auto eval = [&](const std::vector<double>& g, double mu, Eigen::VectorXd* grad) {
    const SymMatrix m = gram_at(f, g).matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        m.matrix(), grad != nullptr ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& vals = solver.eigenvalues();
    const double lmin = vals[0];
    const Eigen::ArrayXd w = (-(vals.array() - lmin) / mu).exp();
    const double total = w.sum();
    if (grad != nullptr) {
      grad->setZero(d);
      for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (w[i] / total < 1e-12) continue;
        *grad += (w[i] / total) * f.directional_quadratics(solver.eigenvectors().col(i));
      }
    }
    return lmin - mu * std::log(total);
  };

  const double scale = std::max(1.0, operator_norm(f.base().matrix()));
  double mu = 0.05 * scale;
  double step = scale;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd grad;
    const double value = eval(gamma, mu, &grad);
    const double gnorm = grad.norm();
    if (gnorm <= 1e-12 * scale) {
      if (mu < 1e-9 * scale) break;
      mu *= 0.5;
      continue;
    }
    const Eigen::VectorXd dir = grad / gnorm;
    bool moved = false;
    for (int back = 0; back < 40; ++back) {
      std::vector<double> trial = axpy(gamma, step, dir);
      if (eval(trial, mu, nullptr) >= value + 1e-4 * step * gnorm) {
        gamma = std::move(trial);
        moved = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      if (mu < 1e-9 * scale) break;
      mu *= 0.5;
      step = scale;
    }
  }
  return gamma;
}

/// Newton-type refinement for families whose PSD set has empty interior:
/// with U spanning the k smallest eigenvectors, solve in least squares for a
/// step that makes Uᵀ G(γ) U a multiple of the identity. Tries each cluster
/// size and keeps a point once it is PSD.
std::optional<std::vector<double>> flatten_cluster(const GramFamily& f, const std::vector<double>& gamma,
                                                   const Tolerances& tol) {
  const Eigen::Index d = f.dimension();
  const Eigen::Index mn = f.base().order();
  std::vector<Eigen::MatrixXd> dirs;
  dirs.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index t = 0; t < d; ++t) dirs.push_back(f.direction_matrix(t));
  for (Eigen::Index k = 1; k < mn; ++k) {
    std::vector<double> g = gamma;
    double current = lambda_min(gram_at(f, g).matrix.matrix());
    for (int it = 0; it < 30; ++it) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram_at(f, g).matrix.matrix());
      const Eigen::MatrixXd u = solver.eigenvectors().leftCols(k);
      const Eigen::MatrixXd block = u.transpose() * gram_at(f, g).matrix.matrix() * u;
      const Eigen::Index rows = k * (k + 1) / 2;
      Eigen::MatrixXd sys(rows, d + 1);
      Eigen::VectorXd rhs(rows);
      for (Eigen::Index t = 0; t < d; ++t) {
        const Eigen::MatrixXd dt = u.transpose() * dirs[static_cast<std::size_t>(t)] * u;
        for (Eigen::Index a = 0, row = 0; a < k; ++a)
          for (Eigen::Index b = a; b < k; ++b) sys(row++, t) = dt(a, b);
      }
      for (Eigen::Index a = 0, row = 0; a < k; ++a)
        for (Eigen::Index b = a; b < k; ++b, ++row) {
          sys(row, d) = a == b ? -1.0 : 0.0;
          rhs[row] = -block(a, b);
        }
      const Eigen::VectorXd step = sys.completeOrthogonalDecomposition().solve(rhs);
      std::vector<double> next = axpy(g, 1.0, step.head(d));
      const double value = lambda_min(gram_at(f, next).matrix.matrix());
      if (!(value > current)) break;
      g = std::move(next);
      current = value;
      if (is_psd(gram_at(f, g).matrix, tol).psd) return g;
    }
  }
  return std::nullopt;
}

}  // namespace

GramFamily::GramFamily(int m, int n, SymMatrix base, std::vector<GramDirection> directions)
    : m_(m), n_(n), base_(std::move(base)), directions_(std::move(directions)) {
  if (base_.order() != m_ * n_) throw InvalidInput("GramFamily: base must be mn×mn");
}

Eigen::MatrixXd GramFamily::combine(std::span<const double> coeffs) const {
  if (coeffs.size() != directions_.size()) throw InvalidInput("GramFamily: coefficient count mismatch");
  const Eigen::Index mn = base_.order();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(mn, mn);
  for (std::size_t t = 0; t < directions_.size(); ++t) {
    const GramDirection& g = directions_[t];
    const double c = coeffs[t];
    const Eigen::Index a = g.i * n_ + g.j;
    const Eigen::Index b = g.k * n_ + g.l;
    const Eigen::Index p = g.i * n_ + g.l;
    const Eigen::Index q = g.k * n_ + g.j;
    out(a, b) += c;
    out(b, a) += c;
    out(p, q) -= c;
    out(q, p) -= c;
  }
  return out;
}

Eigen::MatrixXd GramFamily::direction_matrix(Eigen::Index t) const {
  std::vector<double> unit(directions_.size(), 0.0);
  unit.at(static_cast<std::size_t>(t)) = 1.0;
  return combine(unit);
}

Eigen::VectorXd GramFamily::directional_quadratics(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(dimension());
  for (std::size_t t = 0; t < directions_.size(); ++t) {
    const GramDirection& g = directions_[t];
    out[static_cast<Eigen::Index>(t)] =
        2.0 * (v[g.i * n_ + g.j] * v[g.k * n_ + g.l] - v[g.i * n_ + g.l] * v[g.k * n_ + g.j]);
  }
  return out;
}

GramFamily build_family(const BiquadraticForm& p) {
  std::vector<GramDirection> dirs;
  for (int i = 0; i < p.m(); ++i) {
    for (int k = i + 1; k < p.m(); ++k) {
      for (int j = 0; j < p.n(); ++j) {
        for (int l = j + 1; l < p.n(); ++l) dirs.push_back({i, k, j, l});
      }
    }
  }
  return GramFamily(p.m(), p.n(), SymMatrix(p.gram()), std::move(dirs));
}

GramPoint gram_at(const GramFamily& f, std::span<const double> gamma) {
  if (static_cast<Eigen::Index>(gamma.size()) != f.dimension()) {
    throw InvalidInput("gram_at: expected " + std::to_string(f.dimension()) + " parameters, got " +
                       std::to_string(gamma.size()));
  }
  for (double g : gamma) {
    if (!std::isfinite(g)) throw InvalidInput("gram_at: non-finite parameter");
  }
  return {std::vector<double>(gamma.begin(), gamma.end()), SymMatrix(f.base().matrix() + f.combine(gamma))};
}

GramPoint gram_point_from_matrix(const GramFamily& f, const Eigen::MatrixXd& g, double tol) {
  const Eigen::Index mn = f.base().order();
  if (g.rows() != mn || g.cols() != mn) throw InvalidInput("gram_point_from_matrix: size mismatch");
  const Eigen::MatrixXd diff = g - f.base().matrix();
  const int n = f.n();
  std::vector<double> gamma;
  gamma.reserve(f.directions().size());
  for (const GramDirection& d : f.directions()) {
    gamma.push_back(0.5 * (diff(d.i * n + d.j, d.k * n + d.l) - diff(d.i * n + d.l, d.k * n + d.j)));
  }
  GramPoint point = gram_at(f, gamma);
  const double residual = (point.matrix.matrix() - g).cwiseAbs().maxCoeff();
  if (residual > tol * (1.0 + g.cwiseAbs().maxCoeff())) {
    throw InvalidInput("gram_point_from_matrix: matrix does not represent the form (residual " +
                       std::to_string(residual) + ")");
  }
  return point;
}

std::optional<double> boundary_step(const Eigen::MatrixXd& s, const Eigen::MatrixXd& t, double zero_cut,
                                    const BoundaryOptions& opts) {
  const double lam0 = lambda_min(s);
  if (lam0 <= 0.0) return 0.0;
  const double tnorm = operator_norm(t);
  if (tnorm == 0.0) return std::nullopt;

  // Weyl: λ_min(S + τT) ≥ λ_min(S) − τ‖T‖, so τ = λ_min(S)/‖T‖ is still PSD.
  double lo = 0.0;
  double hi = lam0 / tnorm;
  int doublings = 0;
  while (lambda_min(s + hi * t) >= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > opts.max_doublings) return std::nullopt;
  }
  for (int it = 0; it < 400; ++it) {
    const double width = hi - lo;
    if (width <= opts.bisection_tol * std::max(1.0, hi) && lambda_min(s + lo * t) <= zero_cut) break;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) break;
    const double mid = lo + 0.5 * width;
    if (lambda_min(s + mid * t) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

GramPoint reduce_to_boundary(const GramFamily& f, const GramPoint& m0, std::uint64_t seed, const Tolerances& tol,
                             const BoundaryOptions& opts) {
  const PsdCheck check = is_psd(m0.matrix, tol);
  if (!check.psd) throw NotPSD("reduce_to_boundary: starting point is not PSD", check.witness);
  const Eigen::Index mn = f.base().order();
  if (numerical_rank(m0.matrix, tol) <= mn - 1) return m0;
  if (f.dimension() == 0) {
    throw CannotReduce("reduce_to_boundary: family has no directions (needs m, n >= 2) and the start has full rank");
  }

  Rng rng(seed);
  const Face face = face_of(m0.matrix, tol);
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    Eigen::VectorXd c = random_normal(rng, f.dimension());
    c.normalize();
    const StepResult s = face_step(f, face, c, true, tol, opts);
    if (!s.ok) continue;
    GramPoint out = gram_at(f, axpy(m0.gamma, s.t, c));
    if (is_psd(out.matrix, tol).psd && numerical_rank(out.matrix, tol) <= mn - 1) return out;
  }
  throw CannotReduce("reduce_to_boundary: no boundary point found within the retry budget");
}

std::optional<GramPoint> find_psd_point(const GramFamily& f, const SearchOptions& opts) {
  opts.tol.validate();
  Rng rng(opts.seed);
  const Eigen::Index d = f.dimension();
  const double scale = std::max(1.0, operator_norm(f.base().matrix()));
  for (int attempt = 0; attempt <= std::max(opts.restarts, 1); ++attempt) {
    std::vector<double> start(static_cast<std::size_t>(d), 0.0);
    if (attempt > 0) {
      const Eigen::VectorXd r = random_normal(rng, d) * scale;
      start.assign(r.data(), r.data() + r.size());
    }
    const std::vector<double> gamma = ascend_lambda_min(f, std::move(start), opts.center_iterations);
    GramPoint p = gram_at(f, gamma);
    if (is_psd(p.matrix, opts.tol).psd) return p;
    if (const auto flat = flatten_cluster(f, gamma, opts.tol)) return gram_at(f, *flat);
    if (d == 0) break;
  }
  return std::nullopt;
}

SearchResult min_rank_search(const GramFamily& f, const SearchOptions& opts) {
  const std::optional<GramPoint> center = find_psd_point(f, opts);
  if (!center) throw NoPSDPointFound("min_rank_search: no PSD member of the Gram family was found");
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);

  const BoundaryOptions boundary{};
  SearchResult result{*center, numerical_rank(center->matrix, opts.tol), 0};
  result.start_rank = result.rank;
  const auto consider = [&](GramPoint p) {
    const int rank = numerical_rank(p.matrix, opts.tol);
    if (better(p, rank, result.best, result.rank)) {
      result.best = std::move(p);
      result.rank = rank;
    }
  };

  GramPoint origin = gram_at(f, std::vector<double>(static_cast<std::size_t>(f.dimension()), 0.0));
  if (is_psd(origin.matrix, opts.tol).psd) consider(std::move(origin));

  const Face center_face = face_of(center->matrix, opts.tol);
  const Eigen::MatrixXd center_dirs = face_directions(f, center_face.kernel);
  for (int r = 0; r < opts.restarts; ++r) {
    GramPoint start = *center;
    if (r > 0 && center_dirs.cols() > 0) {
      // Random point of the center's face on a random chord through the center.
      Eigen::VectorXd c = center_dirs * random_normal(rng, center_dirs.cols());
      c.normalize();
      const StepResult up = face_step(f, center_face, c, false, opts.tol, boundary);
      const StepResult down = face_step(f, center_face, -c, false, opts.tol, boundary);
      if (up.ok && down.ok) {
        const double t = std::uniform_real_distribution<double>(-down.t, up.t)(rng);
        GramPoint candidate = gram_at(f, axpy(center->gamma, t, c));
        if (is_psd(candidate.matrix, opts.tol).psd) start = std::move(candidate);
      }
    }
    consider(face_walk(f, std::move(start), rng, r % 2 == 0, opts.tol, boundary));
  }
  return result;
}

SOSDecomposition factor_gram(const GramFamily& f, const GramPoint& g, const Tolerances& tol) {
  return SOSDecomposition(f.m(), f.n(), psd_factor(g.matrix, tol));
}

}  // namespace biquad
