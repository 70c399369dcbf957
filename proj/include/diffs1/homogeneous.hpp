#pragma once

// Geodesic flows on Diff/Rot and Diff/PSL(2,R), realised on the subgroups
// fixing one or three points of the circle.

#include <vector>

#include "diffs1/geodesic.hpp"

namespace diffs1 {

class Constraint {
 public:
  enum class Kind { fix1, fix3 };

  /// Kernel basis {1}; default point 0.
  static Constraint fix1(GridSpec grid, double x0 = 0.0);
  /// Kernel basis {1, cos, sin}; default points 0, 2pi/3, 4pi/3.
  static Constraint fix3(GridSpec grid, std::vector<double> points = {});

  Kind kind() const noexcept { return kind_; }
  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<double>& points() const noexcept { return points_; }
  const std::vector<PeriodicField>& kernel_basis() const noexcept { return basis_; }
  /// Fourier modes spanned by the kernel basis.
  std::vector<int> kernel_modes() const;
  /// 2-norm condition number of the interpolation matrix.
  double condition_number() const noexcept { return cond_; }

  /// Coefficients a with sum_b a_b basis_b(p_i) = values_i.
  std::vector<double> interpolate(const std::vector<double>& values) const;

  /// max_i |u(p_i)|.
  double violation(const PeriodicField& u) const;

 private:
  Constraint(Kind kind, GridSpec grid, std::vector<double> points);

  Kind kind_;
  GridSpec grid_;
  std::vector<double> points_;
  std::vector<PeriodicField> basis_;
  std::vector<double> matrix_;  // row-major, rows = points
  double cond_ = 1.0;
};

/// u minus the kernel-basis combination that matches u at the constraint points.
PeriodicField project_to_fixed(const PeriodicField& u, const Constraint& c);

/// Solution of A u = m vanishing at the constraint points. Kernel modes of m
/// must carry at most tol ||m||.
PeriodicField constrained_invert(const MultiplierSymbol& A, const PeriodicField& m, const Constraint& c,
                                 double tol = 1e-10);

/// -constrained_invert(A, (Au)_x u + 2 (Au) u_x).
PeriodicField constrained_euler_rhs(const MultiplierSymbol& A, const PeriodicField& u, const Constraint& c,
                                    double tol = 1e-10);

/// S for the constrained flow, with constrained_invert in place of A^{-1}.
PeriodicField constrained_spray_S(const MultiplierSymbol& A, const PeriodicField& u, const Constraint& c,
                                  double tol = 1e-10);

/// || A(w_x u - w u_x) + (w (Au)_x + 2 w_x (Au)) ||_{L2} over modes |k| <= K-2,
/// i.e. the defect of A o ad_w = ad*_w o A with ad*_w m = -(w m_x + 2 w_x m).
double verify_equivariance(const MultiplierSymbol& A, const PeriodicField& w, const PeriodicField& u);

struct ConstrainedRun {
  Trajectory<GeodesicState> trajectory;
  /// Largest constraint violation of phi - id or v seen after any step, before re-projection.
  double max_drift = 0.0;
  int reprojections = 0;
};

/// Lagrangian RK4 from (id, u0). After each step phi and v are re-projected
/// onto the constraint when their violation exceeds 1e-11; a violation above
/// 1e-9 after re-projection raises ConstraintDriftError.
ConstrainedRun integrate_constrained(const MultiplierSymbol& A, const Constraint& c, const PeriodicField& u0,
                                     const IntegratorOptions& opt);

}  // namespace diffs1
