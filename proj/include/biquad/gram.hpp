#pragma once

// Affine family of Gram matrices M(γ) = G₀ + Σ_t γ_t Δ_t with
// zᵀ M(γ) z = P(x, y) for z = x ⊗ y (row index i·n + j).
//
// G₀ is the symmetric tensor of P. There is one direction per monomial
// x_i x_k y_j y_l with i < k and j < l: Δ has +1 at ((i,j),(k,l)) and −1 at
// ((i,l),(k,j)), mirrored. Each Δ vanishes on every x ⊗ y, and together they
// span all such symmetric matrices, so the family has dimension C(m,2)·C(n,2).

#include "biquad/forms.hpp"
#include "biquad/linalg.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace biquad {

struct GramDirection {
  int i = 0;
  int k = 0;
  int j = 0;
  int l = 0;
};

class GramFamily {
 public:
  GramFamily(int m, int n, SymMatrix base, std::vector<GramDirection> directions);

  int m() const { return m_; }
  int n() const { return n_; }
  const SymMatrix& base() const { return base_; }
  const std::vector<GramDirection>& directions() const { return directions_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(directions_.size()); }

  /// Σ_t c_t Δ_t as a dense mn×mn matrix.
  Eigen::MatrixXd combine(std::span<const double> coeffs) const;
  Eigen::MatrixXd direction_matrix(Eigen::Index t) const;
  /// vᵀ Δ_t v for every t.
  Eigen::VectorXd directional_quadratics(const Eigen::VectorXd& v) const;

 private:
  int m_;
  int n_;
  SymMatrix base_;
  std::vector<GramDirection> directions_;
};

/// A member of a GramFamily. The family is passed alongside; `matrix` is
/// always recomputable as family.base() + Σ γ_t Δ_t.
struct GramPoint {
  std::vector<double> gamma;
  SymMatrix matrix;
};

GramFamily build_family(const BiquadraticForm& p);
GramPoint gram_at(const GramFamily& f, std::span<const double> gamma);
/// The γ with M(γ) = g. Throws InvalidInput if g is not in the family
/// (residual above tol·(1 + ‖g‖_max)).
GramPoint gram_point_from_matrix(const GramFamily& f, const Eigen::MatrixXd& g, double tol = 1e-9);

struct BoundaryOptions {
  int max_retries = 3;
  double bisection_tol = 1e-10;  // relative width of the final bracket on t
  int max_doublings = 80;
};

/// Largest t ≥ 0 with S + tT ⪰ 0 for symmetric positive definite S, by a
/// doubling bracket from the Weyl bound followed by bisection on λ_min. The
/// bracket is tightened until λ_min(S + tT) ≤ zero_cut. Empty when the
/// bracket never closes.
std::optional<double> boundary_step(const Eigen::MatrixXd& s, const Eigen::MatrixXd& t, double zero_cut,
                                    const BoundaryOptions& opts = {});

/// Moves a full-rank PSD point along a seeded random family direction (both
/// signs, first hit wins) onto the PSD boundary, giving rank ≤ mn − 1.
/// Rank-deficient input is returned unchanged. Throws NotPSD when m0 is not
/// PSD and CannotReduce when the family is empty or every retry fails.
GramPoint reduce_to_boundary(const GramFamily& f, const GramPoint& m0, std::uint64_t seed,
                             const Tolerances& tol = {}, const BoundaryOptions& opts = {});

struct SearchOptions {
  int restarts = 20;
  std::uint64_t seed = 0;
  Tolerances tol{};
  int center_iterations = 300;
};

struct SearchResult {
  GramPoint best;
  int rank = 0;        // an upper bound on the SOS rank
  int start_rank = 0;  // rank of the first PSD point found
};

/// A PSD member of the family, found by smoothed ascent on λ_min from γ = 0
/// and then from seeded random starts (at most opts.restarts of them). The
/// point lies near the middle of the PSD slice, so its rank is usually the
/// largest the slice allows. Empty when every attempt fails.
std::optional<GramPoint> find_psd_point(const GramFamily& f, const SearchOptions& opts = {});

/// Heuristic minimization of rank over the PSD members of the family.
/// Candidates are γ = 0 (when PSD), the find_psd_point result and the ends of
/// `restarts` face walks, so the result never exceeds the rank at γ = 0.
/// Throws NoPSDPointFound when no PSD member is found (inconclusive).
SearchResult min_rank_search(const GramFamily& f, const SearchOptions& opts = {});

/// Spectral factorization of a PSD Gram point, reshaped into bilinear factors.
SOSDecomposition factor_gram(const GramFamily& f, const GramPoint& g, const Tolerances& tol = {});

}  // namespace biquad
