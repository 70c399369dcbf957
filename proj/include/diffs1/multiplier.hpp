#pragma once

// Fourier multipliers P e_k = p(k) e_k on the circle.

#include <complex>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "diffs1/spectral.hpp"

namespace diffs1 {

using cplx_ext = std::complex<long double>;

class MultiplierSymbol {
 public:
  using Eval = std::function<cplx(double)>;
  using EvalExt = std::function<cplx_ext(long double)>;

  /// `eval` is the symbol on the real line; its restriction to the integers is
  /// the multiplier. `eval_ext` is an optional extended-precision twin used by
  /// the multi-symbol calculus (defaults to widening `eval`).
  MultiplierSymbol(std::string name, double order, Eval eval, std::set<int> kernel,
                   EvalExt eval_ext = {});

  const std::string& name() const noexcept { return name_; }
  double order() const noexcept { return order_; }
  const std::set<int>& kernel_modes() const noexcept { return kernel_; }
  bool is_real() const noexcept { return real_; }

  cplx at(int k) const { return eval_(static_cast<double>(k)); }
  cplx at_real(double xi) const { return eval_(xi); }
  cplx_ext at_ext(long long k) const;

  /// Integer zeros of the symbol with |k| <= kmax.
  std::set<int> zeros_in_band(int kmax) const;

  /// Same symbol with a different declared order (for negative controls).
  MultiplierSymbol with_order(double r) const;

 private:
  std::string name_;
  double order_;
  Eval eval_;
  EvalExt eval_ext_;
  std::set<int> kernel_;
  bool real_ = true;
};

namespace symbols {
MultiplierSymbol identity();
MultiplierSymbol ch();
MultiplierSymbol lambda_2s(double s);
/// |k|^r + delta_0(k); the real extension replaces delta_0 by a smooth bump
/// supported in (-1, 1) with value 1 at the origin.
MultiplierSymbol frac(double r);
MultiplierSymbol hs();
MultiplierSymbol clm();
MultiplierSymbol wp();
/// -i sgn(k), so that hilbert o D = op{|k|}.
MultiplierSymbol hilbert();

/// Built-in symbol by name; parameters: "s" for lambda_2s, "r" for frac.
MultiplierSymbol by_name(const std::string& name, const std::map<std::string, double>& params = {});

/// Table file: `k value` lines for k >= 0 plus directives
///   order <r>
///   extension linear|cubic
///   name <identifier>
/// Lines starting with '#' are comments. The symbol is even in k; beyond the
/// last tabulated wavenumber it continues as c (1+k^2)^{r/2}, matched at the end.
MultiplierSymbol from_table_file(const std::string& path);
MultiplierSymbol from_table(const std::string& name, double order, const std::vector<double>& values,
                            bool cubic);
}  // namespace symbols

PeriodicField apply(const MultiplierSymbol& P, const PeriodicField& u);

/// Symbol division; kernel modes are set to zero after checking that m carries
/// at most tol*||m||_{L2} there.
PeriodicField invert_on_range(const MultiplierSymbol& P, const PeriodicField& m, double tol = 1e-10);

struct OrderBound {
  double c_est = 0.0;
  bool pass = false;
};

/// C = max_{|k|<=k_max} |p(k)| / (1+k^2)^{r/2}, stable to 1% against k_max/2.
OrderBound order_bound_check(const MultiplierSymbol& P, int k_max);

struct SymbolConditionReport {
  struct PerN {
    int n = 0;
    double sup_ratio = 0.0;
    double sup_ratio_half = 0.0;
    bool pass = false;
  };
  int n_max = 0;
  double xi_max = 0.0;
  std::vector<PerN> per_n;
  bool overall_pass = false;
  /// Observations that a finite scan cannot decide (e.g. a jump of f_n^{(n)} at 0).
  std::vector<std::string> notes;
};

/// Scans sup |f_n^{(n)}(xi)| / (1+xi^2)^{(r-1)/2} for f_n(xi) = xi^{n-1} p(xi),
/// n = 1..n_max, over [-xi_max, xi_max] and over half that interval. Derivatives
/// use n-th centered differences with step h (1+|xi|) and one Richardson level.
/// Passing means the sup moved by less than 1% between the two intervals; this
/// can falsify a uniform bound but never prove one.
SymbolConditionReport symbol_condition_check(const MultiplierSymbol& P, int n_max, double xi_max,
                                             double h = 1e-2);

/// n-th derivative of f_n at xi by the checker's difference scheme.
double symbol_fn_derivative(const MultiplierSymbol& P, int n, double xi, double h = 1e-2);

}  // namespace diffs1
