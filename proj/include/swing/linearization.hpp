#pragma once

#include "swing/core_model.hpp"

namespace swing {

/// physical:  J = [0 I; N -cI], the exact derivative of vector_field.
/// paper_eq4: J = [0 I; N +cI], the blocks exactly as printed in the source
///            model (real eigenvalues {0, +c}).
enum class JacobianForm { physical, paper_eq4 };

std::string_view to_string(JacobianForm form);

/// Relative spread of the damping ratios D_i/2H_i: max_i |r_i - mean| / mean
/// (absolute when the mean is zero).
double damping_relative_spread(const SystemCase& sys);

inline constexpr double kUniformDampingTol = 1e-9;

struct JacobianBundle {
  Mat N;
  double c = 0.0;   // uniform damping constant (mean ratio for forced bundles)
  double mu = 0.0;  // -c (physical) or +c (paper_eq4)
  JacobianForm form = JacobianForm::physical;
  Mat J;
  Vec delta_s;
  /// True when built through the non-uniform pathway: the lower-right block is
  /// then the true damping diagonal, and c / mu are the mean-ratio reference.
  bool forced = false;

  Index machines() const { return N.rows(); }
};

Mat build_N(const SystemCase& sys, const Vec& delta_s);

/// Requires uniform damping (relative spread <= tol); throws NonuniformDamping otherwise.
JacobianBundle build_jacobian(const SystemCase& sys, const Vec& delta_s,
                              JacobianForm form = JacobianForm::physical,
                              double uniform_tol = kUniformDampingTol);

/// Non-uniform pathway: J's lower-right block is -diag(D_i/2H_i) (physical) or
/// +diag(D_i/2H_i) (paper_eq4); c is the mean ratio and mu = -+c the value the
/// uniform theory would predict for the second real eigenvalue.
JacobianBundle build_jacobian_forced(const SystemCase& sys, const Vec& delta_s,
                                     JacobianForm form = JacobianForm::physical);

/// Idealized basis for a possibly non-uniform case: lower-right block mu*I with
/// c the mean ratio, i.e. what the uniform theory assumes. forced is set when
/// the true ratios are not uniform.
JacobianBundle build_jacobian_mean_c(const SystemCase& sys, const Vec& delta_s,
                                     JacobianForm form = JacobianForm::physical,
                                     double uniform_tol = kUniformDampingTol);

/// build_jacobian when uniform, build_jacobian_forced otherwise.
JacobianBundle build_jacobian_any(const SystemCase& sys, const Vec& delta_s,
                                  JacobianForm form = JacobianForm::physical,
                                  double uniform_tol = kUniformDampingTol);

/// Central differences of vector_field at state, step h on every coordinate.
Mat finite_diff_jacobian(const SystemCase& sys, const StateVec& state, double h);

/// Max absolute row sum.
double inf_norm(const Mat& a);

}  // namespace swing
