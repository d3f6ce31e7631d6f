#pragma once

#include <vector>

#include "swing/core_model.hpp"
#include "swing/equilibrium.hpp"
#include "swing/modal.hpp"

namespace swing {

/// Instantaneous offsets applied at t = 0 to the equilibrium state.
struct Disturbance {
  Vec ddelta;
  Vec domega;

  static Disturbance none(Index m) { return {Vec::Zero(m), Vec::Zero(m)}; }
  StateVec apply(const Vec& delta_s) const { return {delta_s + ddelta, domega}; }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVec> states;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

enum class MeanFreeze {
  none,          // integrate all 2m modal coordinates
  hold_initial,  // hold y_{2m-1}, y_{2m} at their initial values
  hold_zero,     // hold them at zero
};

struct ModalTrajectory {
  std::vector<double> times;
  std::vector<CVec> y;
  MeanFreeze freeze = MeanFreeze::none;
  double max_asymmetry = 0.0;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

struct PairDiscrepancy {
  Index i = 0;
  Index j = 0;
  double max_abs = 0.0;
};

struct DecouplingReport {
  std::vector<PairDiscrepancy> pairs;
  double max_pair = 0.0;
  double max_coi = 0.0;  // max_i |(delta_i - delta_COI)_full - (...)_reduced|
  double t_end = 0.0;
  double dt = 0.0;
  std::size_t samples = 0;
  double damping_spread = 0.0;
  bool forced = false;
};

struct SweepRow {
  double spread = 0.0;
  double max_pair = 0.0;
  double max_coi = 0.0;
};

/// Number of RK4 steps for (t_end, dt); throws Input unless dt > 0 and t_end >= dt.
std::size_t step_count(double t_end, double dt);

/// Fixed-step classical RK4 on vector_field, sampled at every step.
Trajectory integrate(const SystemCase& sys, const StateVec& initial, double t_end, double dt);

/// RK4 on the modal vector field in complex arithmetic, checking conjugate
/// symmetry after each step (NonRealReconstruction beyond symmetry_tol).
ModalTrajectory integrate_modal(const SystemCase& sys, const ModalBasis& basis, const CVec& y0, double t_end,
                                double dt, MeanFreeze freeze = MeanFreeze::none, double symmetry_tol = 1e-8);

/// Maps every modal sample back to physical coordinates.
Trajectory reconstruct(const ModalBasis& basis, const ModalTrajectory& traj);

/// Full simulation vs the frozen-mean (m-1)-oscillator reduction from the same
/// disturbed state. Non-uniform cases use the mean-ratio (uniform-theory) basis.
DecouplingReport decoupling_experiment(const SystemCase& sys, const Equilibrium& eq, const Disturbance& dist,
                                       double t_end, double dt, MeanFreeze freeze = MeanFreeze::hold_initial);

/// Damping ratios spread linearly over machine index as c(1 - s/2) .. c(1 + s/2),
/// c the current mean ratio; H, network and Pm unchanged.
SystemCase with_damping_spread(const SystemCase& sys, double spread);

/// decoupling_experiment per spread; rows in input order. The independent runs
/// execute across OpenMP threads unless serial is requested.
std::vector<SweepRow> damping_sweep(const SystemCase& sys, const Equilibrium& eq, const std::vector<double>& spreads,
                                    const Disturbance& dist, double t_end, double dt, bool parallel = true);

}  // namespace swing
