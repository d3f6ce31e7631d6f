#include "swing/linearization.hpp"

#include <cmath>
#include <sstream>

#include "swing/errors.hpp"
#include "swing/kernels.hpp"

namespace swing {

std::string_view to_string(JacobianForm form) {
  return form == JacobianForm::physical ? "physical" : "paper_eq4";
}

double damping_relative_spread(const SystemCase& sys) {
  const Vec r = sys.damping_ratios();
  const double mean = r.mean();
  const double dev = (r.array() - mean).abs().maxCoeff();
  return mean != 0.0 ? dev / std::abs(mean) : dev;
}

double inf_norm(const Mat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

Mat build_N(const SystemCase& sys, const Vec& delta_s) {
  if (delta_s.size() != sys.size()) {
    throw Error(ErrorKind::Input, "delta_s has length " + std::to_string(delta_s.size()) + ", case has " +
                                      std::to_string(sys.size()) + " machines");
  }
  Mat n;
  if (sys.size() >= kernels::kParallelThreshold) {
    kernels::coupling_matrix_parallel(sys, delta_s, n);
  } else {
    kernels::coupling_matrix_serial(sys, delta_s, n);
  }
  return n;
}

namespace {

JacobianBundle assemble(const SystemCase& sys, const Vec& delta_s, JacobianForm form, const Vec& lower_right,
                        double c, bool forced) {
  const Index m = sys.size();
  JacobianBundle b;
  b.N = build_N(sys, delta_s);
  b.c = c;
  b.mu = form == JacobianForm::physical ? -c : c;
  b.form = form;
  b.delta_s = delta_s;
  b.forced = forced;
  b.J = Mat::Zero(2 * m, 2 * m);
  b.J.topRightCorner(m, m).setIdentity();
  b.J.bottomLeftCorner(m, m) = b.N;
  b.J.bottomRightCorner(m, m).diagonal() = lower_right;
  return b;
}

}  // namespace

JacobianBundle build_jacobian(const SystemCase& sys, const Vec& delta_s, JacobianForm form, double uniform_tol) {
  require_valid(sys);
  const double spread = damping_relative_spread(sys);
  if (spread > uniform_tol) {
    std::ostringstream os;
    os << "damping ratios D_i/2H_i differ (relative spread " << spread << " > " << uniform_tol
       << "); use the forced non-uniform pathway instead";
    throw Error(ErrorKind::NonuniformDamping, os.str());
  }
  const double c = sys.damping_ratios().mean();
  const double mu = form == JacobianForm::physical ? -c : c;
  return assemble(sys, delta_s, form, Vec::Constant(sys.size(), mu), c, false);
}

JacobianBundle build_jacobian_forced(const SystemCase& sys, const Vec& delta_s, JacobianForm form) {
  require_valid(sys);
  const Vec ratios = sys.damping_ratios();
  const Vec lower_right = form == JacobianForm::physical ? Vec(-ratios) : ratios;
  return assemble(sys, delta_s, form, lower_right, ratios.mean(), true);
}

JacobianBundle build_jacobian_mean_c(const SystemCase& sys, const Vec& delta_s, JacobianForm form,
                                     double uniform_tol) {
  require_valid(sys);
  const double c = sys.damping_ratios().mean();
  const double mu = form == JacobianForm::physical ? -c : c;
  return assemble(sys, delta_s, form, Vec::Constant(sys.size(), mu), c,
                  damping_relative_spread(sys) > uniform_tol);
}

JacobianBundle build_jacobian_any(const SystemCase& sys, const Vec& delta_s, JacobianForm form,
                                  double uniform_tol) {
  if (damping_relative_spread(sys) <= uniform_tol) return build_jacobian(sys, delta_s, form, uniform_tol);
  return build_jacobian_forced(sys, delta_s, form);
}

Mat finite_diff_jacobian(const SystemCase& sys, const StateVec& state, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::Input, "finite-difference step must be positive");
  require_state_dims(sys, state);
  const Vec x0 = state.stacked();
  const Index n = x0.size();
  Mat jac(n, n);
  for (Index k = 0; k < n; ++k) {
    Vec xp = x0;
    Vec xm = x0;
    xp(k) += h;
    xm(k) -= h;
    const Vec fp = vector_field(sys, StateVec::from_stacked(xp)).stacked();
    const Vec fm = vector_field(sys, StateVec::from_stacked(xm)).stacked();
    jac.col(k) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

}  // namespace swing
