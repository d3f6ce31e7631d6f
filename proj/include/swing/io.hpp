#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swing/core_model.hpp"
#include "swing/equilibrium.hpp"
#include "swing/modal.hpp"
#include "swing/sim.hpp"
#include "swing/verify.hpp"

namespace swing::io {

inline constexpr int kCaseSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

// Case files:
//   {"schema_version": 1, "omega_s": ...,
//    "machines": [{"H": ., "D": ., "Pm": ., "E": .}, ...],
//    "network": {"G": [...], "C": [[...], ...], "Dmat": [[...], ...]}}
nlohmann::json case_to_json(const SystemCase& sys);
/// SchemaError on missing/mistyped fields or wrong version, ValidationError on
/// invariant violations (messages name the offending location).
SystemCase case_from_json(const nlohmann::json& j);

SystemCase load_case(const std::filesystem::path& path);
void save_case(const SystemCase& sys, const std::filesystem::path& path);

/// Shortest representation that parses back to the identical double.
std::string format_double(double x);

/// Header "t,delta_1..delta_m,omega_1..omega_m", one row per sample.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void save_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
/// Header "t,y1_re,y1_im,...", one row per sample.
void write_modal_trajectory_csv(const ModalTrajectory& traj, std::ostream& out);
void save_modal_trajectory_csv(const ModalTrajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory_csv(const std::filesystem::path& path);

nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const VerificationReport& rep);
nlohmann::json to_json(const AssumptionReport& rep);
nlohmann::json to_json(const Equilibrium& eq);
nlohmann::json eigen_table(const ModalBasis& basis);
nlohmann::json mean_mode_vectors(const ModalBasis& basis);

struct ReportInputs {
  const SystemCase* sys = nullptr;
  const Equilibrium* eq = nullptr;
  const ModalBasis* basis = nullptr;
  const AssumptionReport* assumptions = nullptr;
  const VerificationReport* verification = nullptr;
  nlohmann::json settings = nlohmann::json::object();
};

/// The replayable report document written by `analyze` and `verify`.
nlohmann::json build_report(const ReportInputs& in);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace swing::io
