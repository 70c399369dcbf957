#include "diffs1/multi_symbol.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <string>

#include "diffs1/errors.hpp"

namespace diffs1 {

namespace {

constexpr int kMaxOrder = 12;

// Neumaier-compensated sum in long double.
struct CompensatedSum {
  long double sum = 0.0L;
  long double comp = 0.0L;
  void add(long double x) {
    const long double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  long double value() const { return sum + comp; }
};

long long checked_mul(long long a, long long b) {
  long long r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw DomainError("multi-symbol coefficient overflow; mode tuple too large");
  return r;
}

void check_modes(int n, std::span<const int> modes) {
  if (n < 0 || n > kMaxOrder)
    throw ConfigurationError("multi-symbol order must lie in [0, " + std::to_string(kMaxOrder) + "]");
  if (modes.size() != static_cast<size_t>(n + 1))
    throw ConfigurationError("multi-symbol of order " + std::to_string(n) + " needs " +
                             std::to_string(n + 1) + " modes, got " + std::to_string(modes.size()));
}

cplx_ext factor_power(cplx factor, int n) {
  cplx_ext f(factor.real(), factor.imag());
  cplx_ext out(1.0L, 0.0L);
  for (int i = 0; i < n; ++i) out *= f;
  return out;
}

using ModeArray = std::array<long long, kMaxOrder + 1>;

// Adds w * p_n(modes[0..n]) to buf, as a combination of p_0 values.
void accumulate(int n, const ModeArray& modes, long long w, std::vector<long long>& buf,
                long long offset) {
  if (n == 0) {
    buf[static_cast<size_t>(modes[0] + offset)] += w;
    return;
  }
  long long s = 0;
  for (int j = 0; j < n; ++j) s += modes[static_cast<size_t>(j)];
  if (s != 0) accumulate(n - 1, modes, checked_mul(w, s), buf, offset);
  const long long shift = modes[static_cast<size_t>(n)];
  for (int k = 0; k < n; ++k) {
    const long long mk = modes[static_cast<size_t>(k)];
    if (mk == 0) continue;
    ModeArray shifted = modes;
    shifted[static_cast<size_t>(k)] += shift;
    accumulate(n - 1, shifted, checked_mul(-w, mk), buf, offset);
  }
}

long long int_pow(long long base, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace

MultiSymbolTable::MultiSymbolTable(MultiplierSymbol base, cplx factor, int cache_radius)
    : base_(std::move(base)), factor_(factor), radius_(std::max(cache_radius, 0)) {
  cache_.reserve(static_cast<size_t>(2 * radius_ + 1));
  for (int k = -radius_; k <= radius_; ++k) cache_.push_back(base_.at_ext(k));
}

cplx_ext MultiSymbolTable::p0(long long k) const {
  if (k >= -radius_ && k <= radius_) return cache_[static_cast<size_t>(k + radius_)];
  return base_.at_ext(k);
}

SymbolCombination recursive_combination(int n, std::span<const int> modes) {
  check_modes(n, modes);
  long long reach = 0;
  ModeArray arr{};
  for (int j = 0; j <= n; ++j) {
    arr[static_cast<size_t>(j)] = modes[static_cast<size_t>(j)];
    reach += std::llabs(modes[static_cast<size_t>(j)]);
  }
  std::vector<long long> buf(static_cast<size_t>(2 * reach + 1), 0);
  accumulate(n, arr, 1, buf, reach);
  SymbolCombination comb;
  comb.n = n;
  for (size_t i = 0; i < buf.size(); ++i)
    if (buf[i] != 0) comb.terms.emplace_back(static_cast<long long>(i) - reach, buf[i]);
  return comb;
}

SymbolCombination closed_combination(int n, std::span<const int> modes) {
  check_modes(n, modes);
  if (n < 1) throw ConfigurationError("closed form needs n >= 1");
  const long long m0 = modes[0];
  std::map<long long, long long> acc;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    long long k = m0;
    int size = 0;
    for (int j = 1; j <= n; ++j) {
      if (mask & (1u << (j - 1))) {
        k += modes[static_cast<size_t>(j)];
        ++size;
      }
    }
    long long c = checked_mul(m0, int_pow(k, n - 1));
    if (size % 2 == 1) c = -c;
    acc[k] += c;
  }
  SymbolCombination comb;
  comb.n = n;
  for (const auto& [k, c] : acc)
    if (c != 0) comb.terms.emplace_back(k, c);
  return comb;
}

cplx evaluate(const MultiSymbolTable& t, const SymbolCombination& comb) {
  CompensatedSum re, im;
  for (const auto& [k, c] : comb.terms) {
    const cplx_ext p = t.p0(k);
    re.add(static_cast<long double>(c) * p.real());
    im.add(static_cast<long double>(c) * p.imag());
  }
  const cplx_ext v = factor_power(t.factor(), comb.n) * cplx_ext(re.value(), im.value());
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

cplx p_n_recursive(const MultiSymbolTable& t, int n, std::span<const int> modes) {
  return evaluate(t, recursive_combination(n, modes));
}

cplx p_n_closed(const MultiSymbolTable& t, int n, std::span<const int> modes) {
  check_modes(n, modes);
  if (n < 1) throw ConfigurationError("closed form needs n >= 1");
  const long long m0 = modes[0];
  CompensatedSum re, im;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    long long k = m0;
    int size = 0;
    for (int j = 1; j <= n; ++j) {
      if (mask & (1u << (j - 1))) {
        k += modes[static_cast<size_t>(j)];
        ++size;
      }
    }
    long double w = static_cast<long double>(m0) * static_cast<long double>(int_pow(k, n - 1));
    if (size % 2 == 1) w = -w;
    const cplx_ext p = t.p0(k);
    re.add(w * p.real());
    im.add(w * p.imag());
  }
  const cplx_ext v = factor_power(t.factor(), n) * cplx_ext(re.value(), im.value());
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

PeriodicField apply_P_n(const MultiSymbolTable& t, int n, std::span<const PeriodicField> fields) {
  if (fields.size() != static_cast<size_t>(n + 1))
    throw ConfigurationError("apply_P_n: order " + std::to_string(n) + " needs " +
                             std::to_string(n + 1) + " fields");
  const GridSpec grid = fields[0].grid();
  const int K = grid.band();
  const int budget = K / (n + 1);
  for (const PeriodicField& f : fields) {
    if (!(f.grid() == grid)) throw ConfigurationError("apply_P_n: fields live on different grids");
    if (f.support_band() > budget)
      throw ResolutionError("apply_P_n: input supported up to |k| = " +
                            std::to_string(f.support_band()) + ", budget for n = " +
                            std::to_string(n) + " is " + std::to_string(budget));
  }
  if (n == 0) return apply(t.base(), fields[0]);
  check_modes(n, std::vector<int>(static_cast<size_t>(n + 1)));

  std::vector<std::vector<int>> support(fields.size());
  for (size_t j = 0; j < fields.size(); ++j) {
    const int s = fields[j].support_band();
    for (int k = -s; k <= s; ++k)
      if (fields[j].coeff(k) != cplx{}) support[j].push_back(k);
    if (support[j].empty()) return PeriodicField(grid);
  }

  std::vector<cplx> out(static_cast<size_t>(2 * K + 1));
  std::vector<size_t> idx(fields.size(), 0);
  std::vector<int> modes(fields.size());
  while (true) {
    cplx prod(1.0);
    int l = 0;
    for (size_t j = 0; j < fields.size(); ++j) {
      modes[j] = support[j][idx[j]];
      prod *= fields[j].coeff(modes[j]);
      l += modes[j];
    }
    out[static_cast<size_t>(l + K)] += prod * p_n_closed(t, n, modes);

    size_t j = 0;
    while (j < idx.size() && ++idx[j] == support[j].size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return PeriodicField::from_coefficients(grid, out);
}

}  // namespace diffs1
