#pragma once

// Simple biquadratic forms Σ_{(i,j)∈S} x_i² y_j² and their exact SOS rank.
//
// Lower bound. Write P = Σ_t L_t², L_t = Σ c^t_{ij} x_i y_j, and collect the
// coefficients of each pair into C_{ij} = (c^t_{ij})_t. Matching coefficients:
//   x_i² y_j²          → ‖C_ij‖² = [(i,j) ∈ S]            (so C_ij = 0 off S)
//   x_i² y_j y_l       → C_ij · C_il = 0                   (same row)
//   x_i x_k y_j²       → C_ij · C_kj = 0                   (same column)
//   x_i x_k y_j y_l    → C_ij · C_kl + C_il · C_kj = 0
// If S has no rectangle {(p,r),(p,s),(q,r),(q,s)}, one of C_il, C_kj in the
// last line is zero, so the |S| vectors C_ij are orthonormal and the number
// of squares is at least |S|. |S| squares x_i y_j always suffice.

#include "biquad/forms.hpp"

#include <array>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace biquad {

struct SupportSet {
  int m = 0;
  int n = 0;
  std::vector<std::pair<int, int>> pairs;  // 0-based (i, j), distinct
};

struct LowerBoundCertificate {
  bool applicable = false;
  int bound = 0;
  std::optional<std::array<std::pair<int, int>, 4>> rectangle;  // (p,r),(p,s),(q,r),(q,s)
};

/// First s pairs of the series: k = p·m + q, i = q, j = (p + q) mod n (0-based).
/// Requires m ≥ n ≥ 1 and 1 ≤ s ≤ mn.
SupportSet gen_simple(int m, int n, int s);

BiquadraticForm to_form(const SupportSet& s);

/// Support of a form consisting only of x_i² y_j² terms with coefficient 1.
std::optional<SupportSet> support_of(const BiquadraticForm& p);

LowerBoundCertificate lower_bound_certificate(const SupportSet& s);

struct UpperBoundOnly {
  int bound = 0;
};

std::variant<int, UpperBoundOnly> exact_sos_rank_simple(const SupportSet& s);

}  // namespace biquad
