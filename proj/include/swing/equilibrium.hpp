#pragma once

#include <string>
#include <vector>

#include "swing/core_model.hpp"
#include "swing/linearization.hpp"
#include "swing/modal.hpp"

namespace swing {

struct Equilibrium {
  Vec delta_s;
  double residual_norm = 0.0;  // |Pm - Pe(delta_s)|_inf
  Index reference = 0;         // 0-based index of the pinned machine
  int iterations = 0;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 50;
  int max_halvings = 30;
};

/// Newton on the m-1 power-balance equations i != reference with
/// delta[reference] pinned to its guess; the omitted equation is checked after
/// convergence (InconsistentPowerBalance when it does not vanish).
Equilibrium solve_equilibrium(const SystemCase& sys, const Vec& guess, Index reference,
                              const NewtonOptions& opts = {});

/// Copy of the case with Pm := Pe(delta_target), so delta_target is an exact
/// equilibrium.
SystemCase synthesize_equilibrium(const SystemCase& sys, const Vec& delta_target);

struct AssumptionTolerances {
  double uniform_rel = kUniformDampingTol;
  double near_uniform_rel = 1e-3;  // reporting only
  double imag_rel = 1e-8;
  double real_rel = 1e-8;
};

struct AssumptionEntry {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AssumptionReport {
  AssumptionEntry asm1, asm2, asm3, asm4;

  // Asm. 2 evidence
  double oscillatory_abscissa = 0.0;  // max Re over non-real eigenvalues
  std::vector<double> real_eigenvalues;
  double expected_mu = 0.0;  // -mean(D_i/2H_i)
  // Asm. 3 evidence
  int complex_count = 0;
  int expected_complex = 0;
  // Asm. 4 evidence
  double damping_mean = 0.0;
  double damping_range = 0.0;    // max - min
  double damping_max_dev = 0.0;  // max |r_i - mean|
  double damping_rel_spread = 0.0;
  bool near_uniform = false;

  double jacobian_norm = 0.0;
  double equilibrium_residual = 0.0;
  AssumptionTolerances tolerances;
  std::string interpretation;

  bool all_pass() const { return asm1.pass && asm2.pass && asm3.pass && asm4.pass; }
};

/// Core evaluation from a raw spectrum of the physical Jacobian.
AssumptionReport check_assumptions(const SystemCase& sys, const Equilibrium& eq, const CVec& spectrum,
                                   double jacobian_norm, const AssumptionTolerances& tol = {});

AssumptionReport check_assumptions(const SystemCase& sys, const Equilibrium& eq, const ModalBasis& basis,
                                   const AssumptionTolerances& tol = {});

/// For spectra the eigendecomposition refuses (e.g. decoupled machines).
AssumptionReport check_assumptions(const SystemCase& sys, const Equilibrium& eq, const JacobianBundle& bundle,
                                   const AssumptionTolerances& tol = {});

}  // namespace swing
