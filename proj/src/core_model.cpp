#include "swing/core_model.hpp"

#include <cmath>
#include <sstream>

#include "swing/errors.hpp"
#include "swing/kernels.hpp"

namespace swing {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InconsistentPowerBalance: return "InconsistentPowerBalance";
    case ErrorKind::SingularStep: return "SingularStep";
    case ErrorKind::NonuniformDamping: return "NonuniformDamping";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::ClassificationFailure: return "ClassificationFailure";
    case ErrorKind::NonRealReconstruction: return "NonRealReconstruction";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

Vec SystemCase::damping_ratios() const {
  Vec out(size());
  for (Index i = 0; i < size(); ++i) out(i) = damping_ratio(i);
  return out;
}

Vec SystemCase::inertias() const {
  Vec out(size());
  for (Index i = 0; i < size(); ++i) out(i) = machines[static_cast<std::size_t>(i)].H;
  return out;
}

Vec SystemCase::mechanical_power() const {
  Vec out(size());
  for (Index i = 0; i < size(); ++i) out(i) = machines[static_cast<std::size_t>(i)].Pm;
  return out;
}

Vec StateVec::stacked() const {
  Vec x(delta.size() + speed.size());
  x << delta, speed;
  return x;
}

StateVec StateVec::from_stacked(const Vec& x) {
  if (x.size() % 2 != 0) {
    throw Error(ErrorKind::Input, "stacked state has odd length " + std::to_string(x.size()));
  }
  const Index m = x.size() / 2;
  return StateVec{x.head(m), x.tail(m)};
}

StateVec StateVec::at_rest(const Vec& delta) {
  return StateVec{delta, Vec::Zero(delta.size())};
}

namespace {

void require_angle_dims(const SystemCase& sys, const Vec& delta) {
  if (delta.size() != sys.size()) {
    throw Error(ErrorKind::Input, "angle vector has length " + std::to_string(delta.size()) +
                                      ", case has " + std::to_string(sys.size()) + " machines");
  }
}

}  // namespace

void require_state_dims(const SystemCase& sys, const StateVec& state) {
  if (state.delta.size() != sys.size() || state.speed.size() != sys.size()) {
    throw Error(ErrorKind::Input, "state dimensions (" + std::to_string(state.delta.size()) + ", " +
                                      std::to_string(state.speed.size()) + ") do not match " +
                                      std::to_string(sys.size()) + " machines");
  }
}

Vec electrical_power(const SystemCase& sys, const Vec& delta) {
  require_angle_dims(sys, delta);
  Vec pe;
  if (sys.size() >= kernels::kParallelThreshold) {
    kernels::electrical_power_parallel(sys, delta, pe);
  } else {
    kernels::electrical_power_serial(sys, delta, pe);
  }
  return pe;
}

StateVec vector_field(const SystemCase& sys, const StateVec& state) {
  require_state_dims(sys, state);
  const Vec pe = electrical_power(sys, state.delta);
  const Index m = sys.size();
  StateVec out{state.speed, Vec(m)};
  for (Index i = 0; i < m; ++i) {
    const auto& mp = sys.machines[static_cast<std::size_t>(i)];
    const double two_h = 2.0 * mp.H;
    out.speed(i) = -(mp.D / two_h) * state.speed(i) + (sys.omega_s / two_h) * (mp.Pm - pe(i));
  }
  return out;
}

CoiView coi_view(const SystemCase& sys, const StateVec& state) {
  require_state_dims(sys, state);
  const Vec h = sys.inertias();
  const double total = h.sum();
  CoiView view;
  view.delta_coi = h.dot(state.delta) / total;
  view.speed_coi = h.dot(state.speed) / total;
  view.rel_delta = state.delta.array() - view.delta_coi;
  return view;
}

ValidationReport validate_case(const SystemCase& sys) {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.pass = false;
    rep.violations.push_back(std::move(msg));
  };

  const Index m = sys.size();
  if (m < 2) fail("case needs at least 2 machines, has " + std::to_string(m));
  if (!(sys.omega_s > 0.0) || !std::isfinite(sys.omega_s)) fail("omega_s must be positive and finite");

  for (Index i = 0; i < m; ++i) {
    const auto& mp = sys.machines[static_cast<std::size_t>(i)];
    const std::string where = "machine " + std::to_string(i + 1) + " (machines[" + std::to_string(i) + "]";
    if (!(mp.H > 0.0) || !std::isfinite(mp.H)) fail(where + ".H): inertia H must be > 0");
    if (!(mp.E > 0.0) || !std::isfinite(mp.E)) fail(where + ".E): EMF E must be > 0");
    if (!(mp.D >= 0.0) || !std::isfinite(mp.D)) fail(where + ".D): damping D must be >= 0");
    if (!std::isfinite(mp.Pm)) fail(where + ".Pm): mechanical power must be finite");
  }

  const auto& net = sys.network;
  if (net.G.size() != m) {
    fail("network.G has length " + std::to_string(net.G.size()) + ", expected " + std::to_string(m));
  } else if (!net.G.allFinite()) {
    fail("network.G has non-finite entries");
  }
  auto check_square = [&](const Mat& a, const char* name) {
    if (a.rows() != m || a.cols() != m) {
      std::ostringstream os;
      os << "network." << name << " is " << a.rows() << "x" << a.cols() << ", expected " << m << "x" << m;
      fail(os.str());
      return;
    }
    for (Index i = 0; i < m; ++i) {
      if (a(i, i) != 0.0) {
        std::ostringstream os;
        os << "network." << name << "[" << i << "][" << i << "] diagonal entry must be zero, is " << a(i, i);
        fail(os.str());
      }
      for (Index j = 0; j < m; ++j) {
        if (!std::isfinite(a(i, j))) {
          std::ostringstream os;
          os << "network." << name << "[" << i << "][" << j << "] is not finite";
          fail(os.str());
        }
      }
    }
  };
  check_square(net.C, "C");
  check_square(net.Dmat, "Dmat");
  return rep;
}

void require_valid(const SystemCase& sys) {
  const auto rep = validate_case(sys);
  if (rep.pass) return;
  std::string msg = "invalid case:";
  for (const auto& v : rep.violations) msg += "\n  " + v;
  throw Error(ErrorKind::Input, msg);
}

}  // namespace swing
