#include "swing/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

#include "swing/errors.hpp"
#include "swing/linearization.hpp"

namespace swing {

std::size_t step_count(double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Input, "dt must be positive and finite");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw Error(ErrorKind::Input, "t_end must be finite and >= dt");
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

namespace {

template <class V, class F>
V rk4_step(const F& f, const V& x, double dt) {
  const V k1 = f(x);
  const V k2 = f(V(x + (0.5 * dt) * k1));
  const V k3 = f(V(x + (0.5 * dt) * k2));
  const V k4 = f(V(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

[[noreturn]] void throw_non_finite(double t) {
  std::ostringstream os;
  os << "state became non-finite at t = " << t;
  throw Error(ErrorKind::NonFinite, os.str());
}

}  // namespace

Trajectory integrate(const SystemCase& sys, const StateVec& initial, double t_end, double dt) {
  require_valid(sys);
  require_state_dims(sys, initial);
  const std::size_t n = step_count(t_end, dt);
  auto f = [&sys](const Vec& x) -> Vec { return vector_field(sys, StateVec::from_stacked(x)).stacked(); };

  Trajectory traj;
  traj.times.reserve(n + 1);
  traj.states.reserve(n + 1);
  Vec x = initial.stacked();
  if (!x.allFinite()) throw_non_finite(0.0);
  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  for (std::size_t k = 1; k <= n; ++k) {
    x = rk4_step(f, x, dt);
    const double t = static_cast<double>(k) * dt;
    if (!x.allFinite()) throw_non_finite(t);
    traj.times.push_back(t);
    traj.states.push_back(StateVec::from_stacked(x));
  }
  return traj;
}

ModalTrajectory integrate_modal(const SystemCase& sys, const ModalBasis& basis, const CVec& y0, double t_end,
                                double dt, MeanFreeze freeze, double symmetry_tol) {
  require_valid(sys);
  if (basis.m != sys.size() || y0.size() != basis.dim()) {
    throw Error(ErrorKind::Input, "modal initial vector does not match the basis / case");
  }
  const std::size_t n = step_count(t_end, dt);
  const Index z = basis.zero_mode();
  const Index d = basis.damping_mode();

  CVec y = y0;
  if (freeze == MeanFreeze::hold_zero) {
    y(z) = 0.0;
    y(d) = 0.0;
  }
  auto f = [&](const CVec& v) -> CVec {
    CVec out = modal_vector_field(sys, basis, v);
    if (freeze != MeanFreeze::none) {
      out(z) = 0.0;
      out(d) = 0.0;
    }
    return out;
  };

  ModalTrajectory traj;
  traj.freeze = freeze;
  traj.times.reserve(n + 1);
  traj.y.reserve(n + 1);
  traj.max_asymmetry = conjugate_asymmetry(basis, y);
  if (traj.max_asymmetry > symmetry_tol) {
    throw Error(ErrorKind::NonRealReconstruction, "initial modal vector is not conjugate-symmetric");
  }
  traj.times.push_back(0.0);
  traj.y.push_back(y);
  for (std::size_t k = 1; k <= n; ++k) {
    y = rk4_step(f, y, dt);
    const double t = static_cast<double>(k) * dt;
    if (!y.allFinite()) throw_non_finite(t);
    const double asym = conjugate_asymmetry(basis, y);
    traj.max_asymmetry = std::max(traj.max_asymmetry, asym);
    if (asym > symmetry_tol) {
      std::ostringstream os;
      os << "conjugate symmetry lost at t = " << t << " (asymmetry " << asym << ")";
      throw Error(ErrorKind::NonRealReconstruction, os.str());
    }
    traj.times.push_back(t);
    traj.y.push_back(y);
  }
  return traj;
}

Trajectory reconstruct(const ModalBasis& basis, const ModalTrajectory& traj) {
  Trajectory out;
  out.times = traj.times;
  out.states.reserve(traj.y.size());
  for (const auto& y : traj.y) out.states.push_back(from_modal(basis, y));
  return out;
}

DecouplingReport decoupling_experiment(const SystemCase& sys, const Equilibrium& eq, const Disturbance& dist,
                                       double t_end, double dt, MeanFreeze freeze) {
  require_valid(sys);
  const Index m = sys.size();
  if (dist.ddelta.size() != m || dist.domega.size() != m || !dist.ddelta.allFinite() || !dist.domega.allFinite()) {
    throw Error(ErrorKind::Input, "disturbance must hold m finite angle and speed offsets");
  }
  // The reduction is the one the uniform theory prescribes, so non-uniform
  // cases get the mean-ratio basis and the true damping only in the dynamics.
  const JacobianBundle bundle = build_jacobian_mean_c(sys, eq.delta_s);
  const ModalBasis basis = eigendecompose(bundle);

  const StateVec x0 = dist.apply(eq.delta_s);
  const Trajectory full = integrate(sys, x0, t_end, dt);
  const Trajectory reduced = reconstruct(basis, integrate_modal(sys, basis, to_modal(basis, x0), t_end, dt, freeze));

  DecouplingReport rep;
  rep.t_end = t_end;
  rep.dt = dt;
  rep.samples = full.size();
  rep.damping_spread = damping_relative_spread(sys);
  rep.forced = bundle.forced;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) rep.pairs.push_back({i, j, 0.0});
  }
  const Vec h = sys.inertias();
  const double htot = h.sum();
  for (std::size_t k = 0; k < full.size(); ++k) {
    const Vec& a = full.states[k].delta;
    const Vec& b = reduced.states[k].delta;
    for (auto& p : rep.pairs) {
      const double e = std::abs((a(p.i) - a(p.j)) - (b(p.i) - b(p.j)));
      p.max_abs = std::max(p.max_abs, e);
    }
    const Vec ra = a.array() - h.dot(a) / htot;
    const Vec rb = b.array() - h.dot(b) / htot;
    rep.max_coi = std::max(rep.max_coi, (ra - rb).cwiseAbs().maxCoeff());
  }
  for (const auto& p : rep.pairs) rep.max_pair = std::max(rep.max_pair, p.max_abs);
  return rep;
}

SystemCase with_damping_spread(const SystemCase& sys, double spread) {
  if (!(spread >= 0.0)) throw Error(ErrorKind::Input, "damping spread must be nonnegative");
  const Index m = sys.size();
  const double c = sys.damping_ratios().mean();
  SystemCase out = sys;
  for (Index k = 0; k < m; ++k) {
    const double pos = m > 1 ? static_cast<double>(k) / static_cast<double>(m - 1) - 0.5 : 0.0;
    auto& mp = out.machines[static_cast<std::size_t>(k)];
    mp.D = 2.0 * mp.H * c * (1.0 + spread * pos);
  }
  return out;
}

std::vector<SweepRow> damping_sweep(const SystemCase& sys, const Equilibrium& eq, const std::vector<double>& spreads,
                                    const Disturbance& dist, double t_end, double dt, bool parallel) {
  for (double s : spreads) {
    if (!(s >= 0.0)) throw Error(ErrorKind::Input, "damping spreads must be nonnegative");
  }
  std::vector<SweepRow> rows(spreads.size());
  std::vector<std::exception_ptr> failures(spreads.size());
  const int n = static_cast<int>(spreads.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < n; ++k) {
    try {
      const SystemCase variant = with_damping_spread(sys, spreads[static_cast<std::size_t>(k)]);
      const DecouplingReport rep = decoupling_experiment(variant, eq, dist, t_end, dt);
      rows[static_cast<std::size_t>(k)] = {spreads[static_cast<std::size_t>(k)], rep.max_pair, rep.max_coi};
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

}  // namespace swing
