#include "swing/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "swing/errors.hpp"
#include "swing/kernels.hpp"

namespace swing {

namespace {

Vec gather(const Vec& full, const std::vector<Index>& idx) {
  Vec out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Index>(k)) = full(idx[k]);
  return out;
}

}  // namespace

Equilibrium solve_equilibrium(const SystemCase& sys, const Vec& guess, Index reference, const NewtonOptions& opts) {
  require_valid(sys);
  const Index m = sys.size();
  if (guess.size() != m) {
    throw Error(ErrorKind::Input, "guess has length " + std::to_string(guess.size()) + ", case has " +
                                      std::to_string(m) + " machines");
  }
  if (reference < 0 || reference >= m) {
    throw Error(ErrorKind::Input, "reference machine index " + std::to_string(reference + 1) + " outside 1.." +
                                      std::to_string(m));
  }

  std::vector<Index> free;
  for (Index i = 0; i < m; ++i) {
    if (i != reference) free.push_back(i);
  }
  const Index nf = m - 1;
  const Vec pm = sys.mechanical_power();

  auto residual = [&](const Vec& delta) -> Vec { return pm - electrical_power(sys, delta); };

  Vec delta = guess;
  Vec f = gather(residual(delta), free);
  double fnorm = f.cwiseAbs().maxCoeff();
  int iter = 0;
  Mat jac_full;
  while (fnorm > opts.tol) {
    if (iter >= opts.max_iterations) {
      std::ostringstream os;
      os << "Newton hit " << opts.max_iterations << " iterations with residual " << fnorm;
      throw Error(ErrorKind::NoConvergence, os.str());
    }
    kernels::power_balance_jacobian_serial(sys, delta, jac_full);
    Mat jac(nf, nf);
    for (Index a = 0; a < nf; ++a) {
      for (Index b = 0; b < nf; ++b) jac(a, b) = jac_full(free[a], free[b]);
    }
    Eigen::FullPivLU<Mat> lu(jac);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) {
      std::ostringstream os;
      os << "Newton matrix singular at iteration " << iter << " (rank " << lu.rank() << " of " << nf << ")";
      throw Error(ErrorKind::SingularStep, os.str());
    }
    const Vec step = lu.solve(-f);

    double t = 1.0;
    Vec trial = delta;
    Vec ftrial;
    double tnorm = 0.0;
    for (int h = 0;; ++h) {
      trial = delta;
      for (Index a = 0; a < nf; ++a) trial(free[a]) += t * step(a);
      ftrial = gather(residual(trial), free);
      tnorm = ftrial.cwiseAbs().maxCoeff();
      if (tnorm <= fnorm || h >= opts.max_halvings) break;
      t *= 0.5;
    }
    delta = trial;
    f = ftrial;
    fnorm = tnorm;
    ++iter;
    if (!std::isfinite(fnorm)) throw Error(ErrorKind::NoConvergence, "Newton iterate became non-finite");
  }

  const Vec full = residual(delta);
  const double omitted = std::abs(full(reference));
  if (omitted > opts.tol) {
    std::ostringstream os;
    os << "reference machine " << (reference + 1) << " residual " << omitted
       << " after solving the others; the case has no exact equilibrium (sum of Pm - Pe = " << full.sum() << ")";
    throw Error(ErrorKind::InconsistentPowerBalance, os.str());
  }
  return Equilibrium{delta, full.cwiseAbs().maxCoeff(), reference, iter};
}

SystemCase synthesize_equilibrium(const SystemCase& sys, const Vec& delta_target) {
  const Vec pe = electrical_power(sys, delta_target);
  SystemCase out = sys;
  for (Index i = 0; i < sys.size(); ++i) out.machines[static_cast<std::size_t>(i)].Pm = pe(i);
  return out;
}

AssumptionReport check_assumptions(const SystemCase& sys, const Equilibrium& eq, const CVec& spectrum,
                                   double jacobian_norm, const AssumptionTolerances& tol) {
  const Index m = sys.size();
  AssumptionReport rep;
  rep.tolerances = tol;
  rep.jacobian_norm = jacobian_norm;
  rep.equilibrium_residual = eq.residual_norm;

  const Vec ratios = sys.damping_ratios();
  rep.damping_mean = ratios.mean();
  rep.damping_range = ratios.maxCoeff() - ratios.minCoeff();
  rep.damping_max_dev = (ratios.array() - rep.damping_mean).abs().maxCoeff();
  rep.damping_rel_spread = damping_relative_spread(sys);
  rep.expected_mu = -rep.damping_mean;

  rep.asm1 = {1, "second-order machines, constant-impedance loads", true, "fixed by the model class"};

  const double imag_tol = tol.imag_rel * jacobian_norm;
  rep.oscillatory_abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& l : spectrum) {
    if (std::abs(l.imag()) > imag_tol) {
      ++rep.complex_count;
      rep.oscillatory_abscissa = std::max(rep.oscillatory_abscissa, l.real());
    } else {
      rep.real_eigenvalues.push_back(l.real());
    }
  }
  std::sort(rep.real_eigenvalues.begin(), rep.real_eigenvalues.end(),
            [](double a, double b) { return std::abs(a) < std::abs(b); });
  rep.expected_complex = static_cast<int>(2 * (m - 1));

  {
    std::ostringstream os;
    rep.asm3.id = 3;
    rep.asm3.name = "(m-1) complex-conjugate eigenvalue pairs";
    rep.asm3.pass = rep.complex_count == rep.expected_complex;
    os << rep.complex_count << " non-real eigenvalues, expected " << rep.expected_complex;
    rep.asm3.detail = os.str();
  }
  {
    std::ostringstream os;
    rep.asm2.id = 2;
    rep.asm2.name = "asymptotically stable equilibrium (relative motions)";
    const double real_tol = tol.real_rel * jacobian_norm;
    const bool two_real = rep.real_eigenvalues.size() == 2;
    const bool zero_ok = two_real && std::abs(rep.real_eigenvalues[0]) <= real_tol;
    const bool mu_ok = two_real && rep.real_eigenvalues[1] < -real_tol;
    const bool osc_ok = rep.complex_count == 0 || rep.oscillatory_abscissa < 0.0;
    rep.asm2.pass = two_real && zero_ok && mu_ok && osc_ok;
    os << "oscillatory abscissa " << rep.oscillatory_abscissa << "; real eigenvalues {";
    for (std::size_t k = 0; k < rep.real_eigenvalues.size(); ++k) {
      os << (k ? ", " : "") << rep.real_eigenvalues[k];
    }
    os << "} vs expected {0, " << rep.expected_mu << "}";
    rep.asm2.detail = os.str();
  }
  {
    std::ostringstream os;
    rep.asm4.id = 4;
    rep.asm4.name = "uniform damping D_i/2H_i = c";
    rep.asm4.pass = rep.damping_rel_spread <= tol.uniform_rel;
    rep.near_uniform = rep.damping_rel_spread <= tol.near_uniform_rel;
    os << "ratios span " << rep.damping_range << " around mean " << rep.damping_mean << " (relative spread "
       << rep.damping_rel_spread << ")";
    rep.asm4.detail = os.str();
  }
  rep.interpretation =
      "Asm. 2 is read as asymptotic stability of the relative motions: every oscillatory mode strictly damped, "
      "the zero eigenvalue is the rigid angle drift, and the second real eigenvalue is negative";
  return rep;
}

AssumptionReport check_assumptions(const SystemCase& sys, const Equilibrium& eq, const ModalBasis& basis,
                                   const AssumptionTolerances& tol) {
  return check_assumptions(sys, eq, basis.eigenvalues, basis.jacobian_norm, tol);
}

AssumptionReport check_assumptions(const SystemCase& sys, const Equilibrium& eq, const JacobianBundle& bundle,
                                   const AssumptionTolerances& tol) {
  return check_assumptions(sys, eq, eigenvalues_of(bundle.J), inf_norm(bundle.J), tol);
}

}  // namespace swing
