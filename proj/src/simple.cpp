#include "biquad/simple.hpp"

#include "biquad/error.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace biquad {

namespace {

void validate(const SupportSet& s) {
  if (s.m < 1 || s.n < 1) throw InvalidInput("support set: dimensions must be positive");
  std::set<std::pair<int, int>> seen;
  for (const auto& pair : s.pairs) {
    if (pair.first < 0 || pair.first >= s.m || pair.second < 0 || pair.second >= s.n) {
      throw InvalidInput("support set: index pair out of range");
    }
    if (!seen.insert(pair).second) throw InvalidInput("support set: duplicate index pair");
  }
}

}  // namespace

SupportSet gen_simple(int m, int n, int s) {
  if (n < 1 || m < n) throw InvalidInput("gen_simple: need m >= n >= 1");
  if (s < 1 || s > m * n) throw InvalidInput("gen_simple: need 1 <= s <= m*n, got s = " + std::to_string(s));
  SupportSet out{m, n, {}};
  out.pairs.reserve(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) {
    const int p = k / m;
    const int q = k % m;
    out.pairs.emplace_back(q, (p + q) % n);
  }
  return out;
}

BiquadraticForm to_form(const SupportSet& s) {
  validate(s);
  std::vector<MonomialTerm> terms;
  terms.reserve(s.pairs.size());
  for (const auto& [i, j] : s.pairs) terms.push_back({i, i, j, j, 1.0});
  return BiquadraticForm::from_terms(s.m, s.n, terms);
}

std::optional<SupportSet> support_of(const BiquadraticForm& p) {
  SupportSet out{p.m(), p.n(), {}};
  for (const MonomialTerm& t : p.terms()) {
    if (t.i != t.k || t.j != t.l || t.coefficient != 1.0) return std::nullopt;
    out.pairs.emplace_back(t.i, t.j);
  }
  return out;
}

LowerBoundCertificate lower_bound_certificate(const SupportSet& s) {
  validate(s);
  const std::set<std::pair<int, int>> present(s.pairs.begin(), s.pairs.end());
  for (auto a = present.begin(); a != present.end(); ++a) {
    for (auto b = std::next(a); b != present.end(); ++b) {
      const auto [p, r] = *a;
      const auto [q, t] = *b;
      if (p == q || r == t) continue;
      if (present.contains({p, t}) && present.contains({q, r})) {
        const int lo_row = std::min(p, q);
        const int hi_row = std::max(p, q);
        const int lo_col = std::min(r, t);
        const int hi_col = std::max(r, t);
        return {false, 0,
                std::array<std::pair<int, int>, 4>{
                    {{lo_row, lo_col}, {lo_row, hi_col}, {hi_row, lo_col}, {hi_row, hi_col}}}};
      }
    }
  }
  return {true, static_cast<int>(present.size()), std::nullopt};
}

std::variant<int, UpperBoundOnly> exact_sos_rank_simple(const SupportSet& s) {
  const LowerBoundCertificate cert = lower_bound_certificate(s);
  if (cert.applicable) return cert.bound;
  return UpperBoundOnly{static_cast<int>(s.pairs.size())};
}

}  // namespace biquad
