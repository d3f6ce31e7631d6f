#pragma once

#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace swing {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultOmegaS = 120.0 * std::numbers::pi;

struct MachineParams {
  double H = 1.0;   // inertia constant [s]
  double D = 0.0;   // damping constant [pu]
  double Pm = 0.0;  // mechanical power [pu]
  double E = 1.0;   // internal EMF [pu]
};

/// Reduced-network coefficients. C multiplies sin(d_i - d_j), Dmat multiplies
/// cos(d_i - d_j); both carry an exactly-zero diagonal.
struct NetworkParams {
  Vec G;
  Mat C;
  Mat Dmat;
};

/// The classical m-machine model: machines plus the reduced network they
/// interact through.
struct SystemCase {
  double omega_s = kDefaultOmegaS;
  std::vector<MachineParams> machines;
  NetworkParams network;

  Index size() const { return static_cast<Index>(machines.size()); }

  /// D_i / 2H_i for machine i.
  double damping_ratio(Index i) const {
    const auto& mp = machines[static_cast<std::size_t>(i)];
    return mp.D / (2.0 * mp.H);
  }
  Vec damping_ratios() const;
  Vec inertias() const;
  Vec mechanical_power() const;
};

/// Angles and angle rates, each of length m. Stacked form is [delta; speed].
struct StateVec {
  Vec delta;
  Vec speed;

  Index size() const { return delta.size(); }
  Vec stacked() const;
  static StateVec from_stacked(const Vec& x);
  static StateVec at_rest(const Vec& delta);
};

struct CoiView {
  double delta_coi = 0.0;
  double speed_coi = 0.0;
  Vec rel_delta;
};

struct ValidationReport {
  bool pass = true;
  std::vector<std::string> violations;
};

Vec electrical_power(const SystemCase& sys, const Vec& delta);

/// Physical-sign swing dynamics:
///   d(delta)/dt = speed
///   d(speed_i)/dt = -(D_i/2H_i) speed_i + (omega_s/2H_i)(Pm_i - Pe_i)
StateVec vector_field(const SystemCase& sys, const StateVec& state);

CoiView coi_view(const SystemCase& sys, const StateVec& state);

/// Never throws; collects every violated invariant.
ValidationReport validate_case(const SystemCase& sys);

/// Throws Error(Input) listing the violations if validate_case fails.
void require_valid(const SystemCase& sys);

void require_state_dims(const SystemCase& sys, const StateVec& state);

}  // namespace swing
