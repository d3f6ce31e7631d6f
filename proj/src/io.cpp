#include "swing/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "swing/errors.hpp"

namespace swing::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorKind::Schema, msg); }

double number_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where + "." + key + " is missing");
  const json& v = obj.at(key);
  if (!v.is_number()) schema_error(where + "." + key + " must be a number");
  return v.get<double>();
}

Vec vector_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where + "." + key + " is missing");
  const json& v = obj.at(key);
  if (!v.is_array()) schema_error(where + "." + key + " must be an array");
  Vec out(static_cast<Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) schema_error(where + "." + key + "[" + std::to_string(k) + "] must be a number");
    out(static_cast<Index>(k)) = v[k].get<double>();
  }
  return out;
}

Mat matrix_at(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) schema_error(where + "." + key + " is missing");
  const json& v = obj.at(key);
  const std::string name = where + "." + key;
  if (!v.is_array()) schema_error(name + " must be an array of rows");
  const std::size_t rows = v.size();
  const std::size_t cols = rows ? (v[0].is_array() ? v[0].size() : 0) : 0;
  Mat out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      schema_error(name + "[" + std::to_string(i) + "] must be a row of " + std::to_string(cols) + " numbers");
    }
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) {
        schema_error(name + "[" + std::to_string(i) + "][" + std::to_string(j) + "] must be a number");
      }
      out(static_cast<Index>(i), static_cast<Index>(j)) = v[i][j].get<double>();
    }
  }
  return out;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v(k));
  return a;
}

json mat_json(const Mat& m) {
  json a = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(std::move(row));
  }
  return a;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to " + path.string() + " failed");
}

}  // namespace

json case_to_json(const SystemCase& sys) {
  json j;
  j["schema_version"] = kCaseSchemaVersion;
  j["omega_s"] = sys.omega_s;
  j["machines"] = json::array();
  for (const auto& mp : sys.machines) {
    j["machines"].push_back({{"H", mp.H}, {"D", mp.D}, {"Pm", mp.Pm}, {"E", mp.E}});
  }
  j["network"] = {{"G", vec_json(sys.network.G)}, {"C", mat_json(sys.network.C)}, {"Dmat", mat_json(sys.network.Dmat)}};
  return j;
}

SystemCase case_from_json(const json& j) {
  if (!j.is_object()) schema_error("case file must be a JSON object");
  if (!j.contains("schema_version")) schema_error("schema_version is missing");
  if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kCaseSchemaVersion) {
    schema_error("unsupported schema_version (expected " + std::to_string(kCaseSchemaVersion) + ")");
  }
  SystemCase sys;
  sys.omega_s = number_at(j, "omega_s", "case");
  if (!j.contains("machines") || !j["machines"].is_array()) schema_error("machines must be an array");
  const json& ms = j["machines"];
  for (std::size_t k = 0; k < ms.size(); ++k) {
    const std::string where = "machines[" + std::to_string(k) + "]";
    if (!ms[k].is_object()) schema_error(where + " must be an object");
    sys.machines.push_back({number_at(ms[k], "H", where), number_at(ms[k], "D", where), number_at(ms[k], "Pm", where),
                            number_at(ms[k], "E", where)});
  }
  if (!j.contains("network") || !j["network"].is_object()) schema_error("network must be an object");
  const json& net = j["network"];
  sys.network.G = vector_at(net, "G", "network");
  sys.network.C = matrix_at(net, "C", "network");
  sys.network.Dmat = matrix_at(net, "Dmat", "network");

  const auto rep = validate_case(sys);
  if (!rep.pass) {
    std::string msg = "case violates model invariants:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw Error(ErrorKind::Validation, msg);
  }
  return sys;
}

SystemCase load_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open case file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  return case_from_json(j);
}

void save_case(const SystemCase& sys, const std::filesystem::path& path) {
  write_text_file(path, case_to_json(sys).dump(2) + "\n");
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  if (traj.empty()) throw Error(ErrorKind::Input, "refusing to write an empty trajectory");
  const Index m = traj.states.front().size();
  out << "t";
  for (Index i = 1; i <= m; ++i) out << ",delta_" << i;
  for (Index i = 1; i <= m; ++i) out << ",omega_" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.times[k]);
    const auto& s = traj.states[k];
    for (Index i = 0; i < m; ++i) out << ',' << format_double(s.delta(i));
    for (Index i = 0; i < m; ++i) out << ',' << format_double(s.speed(i));
    out << '\n';
  }
}

void save_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  if (traj.empty()) throw Error(ErrorKind::Input, "refusing to write an empty trajectory");
  auto out = open_for_write(path);
  write_trajectory_csv(traj, out);
  finish_write(out, path);
}

void write_modal_trajectory_csv(const ModalTrajectory& traj, std::ostream& out) {
  if (traj.empty()) throw Error(ErrorKind::Input, "refusing to write an empty trajectory");
  const Index n = traj.y.front().size();
  out << "t";
  for (Index k = 1; k <= n; ++k) out << ",y" << k << "_re,y" << k << "_im";
  out << '\n';
  for (std::size_t s = 0; s < traj.size(); ++s) {
    out << format_double(traj.times[s]);
    for (Index k = 0; k < n; ++k) {
      out << ',' << format_double(traj.y[s](k).real()) << ',' << format_double(traj.y[s](k).imag());
    }
    out << '\n';
  }
}

void save_modal_trajectory_csv(const ModalTrajectory& traj, const std::filesystem::path& path) {
  if (traj.empty()) throw Error(ErrorKind::Input, "refusing to write an empty trajectory");
  auto out = open_for_write(path);
  write_modal_trajectory_csv(traj, out);
  finish_write(out, path);
}

Trajectory load_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, path.string() + ": missing header");
  const auto columns = static_cast<Index>(std::count(line.begin(), line.end(), ',') + 1);
  if (columns < 3 || (columns - 1) % 2 != 0) throw Error(ErrorKind::Parse, path.string() + ": bad header");
  const Index m = (columns - 1) / 2;

  Trajectory traj;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Vec row(columns);
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (Index c = 0; c < columns; ++c) {
      const auto res = std::from_chars(p, end, row(c));
      if (res.ec != std::errc()) {
        throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": bad number");
      }
      p = res.ptr;
      if (c + 1 < columns) {
        if (p == end || *p != ',') {
          throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": too few columns");
        }
        ++p;
      }
    }
    if (p != end) throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": trailing data");
    traj.times.push_back(row(0));
    traj.states.push_back({row.segment(1, m), row.tail(m)});
  }
  return traj;
}

json to_json(const CheckResult& c) {
  return {{"name", c.name},           {"pass", c.pass},       {"worst_residual", c.worst_residual},
          {"tolerance", c.tolerance}, {"samples", c.samples}, {"seed", c.seed},
          {"retries", c.retries},     {"detail", c.detail}};
}

json to_json(const Equilibrium& eq) {
  return {{"delta_s", vec_json(eq.delta_s)},
          {"residual_norm", eq.residual_norm},
          {"reference_machine", eq.reference + 1},
          {"iterations", eq.iterations}};
}

json to_json(const VerificationReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) checks.push_back(to_json(c));
  json failing = json::array();
  for (const auto& c : rep.checks) {
    if (!c.pass) failing.push_back(c.name);
  }
  return {{"overall_pass", rep.overall_pass},
          {"case_fingerprint", rep.case_fingerprint},
          {"jacobian_form", std::string(to_string(rep.form))},
          {"forced_nonuniform", rep.forced},
          {"checks", std::move(checks)},
          {"failing", std::move(failing)}};
}

json to_json(const AssumptionReport& rep) {
  auto entry = [](const AssumptionEntry& e) {
    return json{{"id", e.id}, {"name", e.name}, {"pass", e.pass}, {"detail", e.detail}};
  };
  json reals = json::array();
  for (double r : rep.real_eigenvalues) reals.push_back(r);
  return {{"all_pass", rep.all_pass()},
          {"assumptions", json::array({entry(rep.asm1), entry(rep.asm2), entry(rep.asm3), entry(rep.asm4)})},
          {"evidence",
           {{"oscillatory_abscissa", rep.complex_count > 0 ? json(rep.oscillatory_abscissa) : json(nullptr)},
            {"real_eigenvalues", std::move(reals)},
            {"expected_mu", rep.expected_mu},
            {"complex_count", rep.complex_count},
            {"expected_complex", rep.expected_complex},
            {"damping_mean", rep.damping_mean},
            {"damping_range", rep.damping_range},
            {"damping_max_dev", rep.damping_max_dev},
            {"damping_rel_spread", rep.damping_rel_spread},
            {"near_uniform", rep.near_uniform},
            {"jacobian_norm", rep.jacobian_norm},
            {"equilibrium_residual", rep.equilibrium_residual}}},
          {"tolerances",
           {{"uniform_rel", rep.tolerances.uniform_rel},
            {"near_uniform_rel", rep.tolerances.near_uniform_rel},
            {"imag_rel", rep.tolerances.imag_rel},
            {"real_rel", rep.tolerances.real_rel}}},
          {"interpretation", rep.interpretation}};
}

json eigen_table(const ModalBasis& basis) {
  json rows = json::array();
  for (Index k = 0; k < basis.dim(); ++k) {
    const char* kind = k == basis.zero_mode()      ? "mean_zero"
                       : k == basis.damping_mode() ? "mean_damping"
                                                   : "oscillatory";
    const auto l = basis.eigenvalues(k);
    json row{{"index", k + 1}, {"re", l.real()}, {"im", l.imag()}, {"kind", kind}, {"residual", basis.residuals(k)}};
    if (l.imag() != 0.0) {
      row["frequency_hz"] = std::abs(l.imag()) / (2.0 * std::numbers::pi);
      row["damping_ratio"] = -l.real() / std::abs(l);
    }
    rows.push_back(std::move(row));
  }
  return {{"eigenvalues", std::move(rows)},
          {"cond_R", basis.cond_R},
          {"min_gap", basis.min_gap},
          {"jacobian_norm", basis.jacobian_norm},
          {"mu", basis.mu}};
}

json mean_mode_vectors(const ModalBasis& basis) {
  auto vec = [&](Index col) {
    const Vec v = basis.R.col(col).real();
    return json{{"eigenvalue", basis.eigenvalues(col).real()},
                {"angle", vec_json(v.head(basis.m))},
                {"speed", vec_json(v.tail(basis.m))}};
  };
  return {{"zero_mode", vec(basis.zero_mode())}, {"damping_mode", vec(basis.damping_mode())}};
}

json build_report(const ReportInputs& in) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  if (in.sys) {
    j["case_fingerprint"] = case_fingerprint(*in.sys);
    j["case"] = case_to_json(*in.sys);
  }
  j["settings"] = in.settings;
  if (in.eq) j["equilibrium"] = to_json(*in.eq);
  if (in.assumptions) j["assumptions"] = to_json(*in.assumptions);
  if (in.basis) {
    j["modes"] = eigen_table(*in.basis);
    j["mean_motion_vectors"] = mean_mode_vectors(*in.basis);
  }
  if (in.verification) j["verification"] = to_json(*in.verification);
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_for_write(path);
  out << text;
  finish_write(out, path);
}

}  // namespace swing::io
