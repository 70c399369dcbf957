#pragma once

// Multi-symbols p_n(m_0, ..., m_n) of the derivatives of phi -> P_phi.
//
// p_n is always an integer combination of values of p_0 at integer points,
// multiplied by factor^n. The recursive form is evaluated by building that
// combination exactly in integer arithmetic; the closed form sums its
// alternating subset terms directly. Both sum in long double with
// compensation because the alternating terms cancel by many orders of
// magnitude for growing symbols.

#include <span>
#include <utility>
#include <vector>

#include "diffs1/multiplier.hpp"
#include "diffs1/spectral.hpp"

namespace diffs1 {

class MultiSymbolTable {
 public:
  /// factor replaces the angular constant of the derivative; i for period 2pi.
  explicit MultiSymbolTable(MultiplierSymbol base, cplx factor = cplx(0.0, 1.0),
                            int cache_radius = 128);

  const MultiplierSymbol& base() const noexcept { return base_; }
  cplx factor() const noexcept { return factor_; }

  /// p_0(k) in extended precision (cached on |k| <= cache_radius).
  cplx_ext p0(long long k) const;

 private:
  MultiplierSymbol base_;
  cplx factor_;
  int radius_;
  std::vector<cplx_ext> cache_;
};

/// p_n = factor^n * sum_j coeff_j * p_0(point_j); terms sorted by point, no zero coefficients.
struct SymbolCombination {
  int n = 0;
  std::vector<std::pair<long long, long long>> terms;

  friend bool operator==(const SymbolCombination&, const SymbolCombination&) = default;
};

/// Integer combination produced by the recursion in the last mode.
SymbolCombination recursive_combination(int n, std::span<const int> modes);
/// Integer combination produced by the alternating subset formula (n >= 1).
SymbolCombination closed_combination(int n, std::span<const int> modes);

cplx evaluate(const MultiSymbolTable& t, const SymbolCombination& comb);

cplx p_n_recursive(const MultiSymbolTable& t, int n, std::span<const int> modes);
cplx p_n_closed(const MultiSymbolTable& t, int n, std::span<const int> modes);

/// sum over m_0 + ... + m_n = l of u_0(m_0) ... u_n(m_n) p_n(m_0, ..., m_n), by
/// direct convolution. Inputs must be supported on |k| <= K/(n+1).
PeriodicField apply_P_n(const MultiSymbolTable& t, int n, std::span<const PeriodicField> fields);

}  // namespace diffs1
