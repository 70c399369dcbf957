#pragma once

// Orientation-preserving circle diffeomorphisms phi(x) = x + f(x).

#include <vector>

#include "diffs1/multiplier.hpp"
#include "diffs1/spectral.hpp"

namespace diffs1 {

class Diffeo {
 public:
  /// Throws NotADiffeomorphism unless 1 + f' > 0 on a 4x refined grid.
  explicit Diffeo(PeriodicField displacement);

  static Diffeo identity(GridSpec grid);
  /// x -> x + s.
  static Diffeo rotation(GridSpec grid, double s);

  const GridSpec& grid() const noexcept { return f_.grid(); }
  const PeriodicField& displacement() const noexcept { return f_; }

  double operator()(double x) const noexcept { return x + f_.value_at(x); }
  /// phi(x) and phi'(x).
  void eval(double x, double& value, double& derivative) const noexcept;

  /// phi at the grid nodes.
  std::vector<double> samples() const;
  /// phi_x at the grid nodes.
  std::vector<double> jacobian() const;
  /// min phi_x over the 4x refined grid.
  double min_jacobian() const noexcept { return min_jac_; }

 private:
  PeriodicField f_;
  double min_jac_ = 1.0;
};

/// Minimum of 1 + f' on the 4x refined grid.
double min_jacobian_of(const PeriodicField& displacement);

/// v o phi, analysed from values at the warped nodes.
PeriodicField compose_field(const PeriodicField& v, const Diffeo& phi);

/// phi o psi.
Diffeo compose(const Diffeo& phi, const Diffeo& psi);

/// Points y_j with phi(y_j) = x_j (Newton inside a shrinking bisection bracket).
std::vector<double> inverse_at_nodes(const Diffeo& phi, double tol = 1e-12);

/// phi^{-1}; throws ResolutionError if sup|phi o phi^{-1} - id| at the nodes exceeds 10 tol.
Diffeo invert_diffeo(const Diffeo& phi, double tol = 1e-12);

enum class InverseComposition {
  /// v evaluated at the node preimages phi^{-1}(x_j).
  invert_then_evaluate,
  /// Band-limited w with w(phi(x_j)) = v(x_j), least squares over the nodes.
  collocation,
};

/// v o phi^{-1}.
PeriodicField compose_inverse(const PeriodicField& v, const Diffeo& phi,
                              InverseComposition method = InverseComposition::invert_then_evaluate);

/// A_phi v = (A (v o phi^{-1})) o phi.
PeriodicField conjugate_apply(const MultiplierSymbol& A, const Diffeo& phi, const PeriodicField& v,
                              InverseComposition method = InverseComposition::invert_then_evaluate);

/// Grid mean of eta * A_phi(xi) * phi_x.
double metric_inner(const MultiplierSymbol& A, const Diffeo& phi, const PeriodicField& xi,
                    const PeriodicField& eta,
                    InverseComposition method = InverseComposition::invert_then_evaluate);

}  // namespace diffs1
