#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cases.hpp"
#include "swing/errors.hpp"
#include "swing/io.hpp"

using namespace swing;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "swing_test_io";
  fs::create_directories(dir);
  return dir / name;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Input;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

bool same_case(const SystemCase& a, const SystemCase& b) {
  if (a.omega_s != b.omega_s || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.machines.size(); ++i) {
    const auto& x = a.machines[i];
    const auto& y = b.machines[i];
    if (x.H != y.H || x.D != y.D || x.Pm != y.Pm || x.E != y.E) return false;
  }
  return a.network.G == b.network.G && a.network.C == b.network.C && a.network.Dmat == b.network.Dmat;
}

}  // namespace

TEST_CASE("shipped case file loads as the two-machine case") {
  const SystemCase sys = io::load_case(fs::path(SWING_DATA_DIR) / "case_a.json");
  CHECK(same_case(sys, swing::testing::case_a()));
  const SystemCase non = io::load_case(fs::path(SWING_DATA_DIR) / "case_a_nonuniform.json");
  CHECK(same_case(non, swing::testing::case_a_nonuniform()));
}

TEST_CASE("case round trip is exact") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    const SystemCase sys = swing::testing::random_uniform_case(rng, 3 + k).sys;
    const fs::path p = temp_path("case_" + std::to_string(k) + ".json");
    io::save_case(sys, p);
    CHECK(same_case(io::load_case(p), sys));
    CHECK(same_case(io::case_from_json(io::case_to_json(sys)), sys));
  }
}

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.0}) {
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.1) == "0.1");
}

TEST_CASE("validation error names the location") {
  nlohmann::json j = io::case_to_json(swing::testing::case_a());
  j["network"]["C"][0][0] = 0.5;
  try {
    io::case_from_json(j);
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("network.C[0][0]") != std::string::npos);
  }
}

TEST_CASE("schema errors") {
  const nlohmann::json good = io::case_to_json(swing::testing::case_a());
  nlohmann::json no_machines = good;
  no_machines.erase("machines");
  CHECK(kind_of([&] { io::case_from_json(no_machines); }) == ErrorKind::Schema);

  nlohmann::json wrong_type = good;
  wrong_type["machines"][0]["H"] = "ten";
  CHECK(kind_of([&] { io::case_from_json(wrong_type); }) == ErrorKind::Schema);

  nlohmann::json version = good;
  version["schema_version"] = 99;
  CHECK(kind_of([&] { io::case_from_json(version); }) == ErrorKind::Schema);
}

TEST_CASE("malformed and missing files") {
  const fs::path p = temp_path("truncated.json");
  {
    std::ofstream out(p);
    out << R"({"schema_version": 1, "omega_s": 20.0, "machines": [)";
  }
  CHECK(kind_of([&] { io::load_case(p); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { io::load_case(temp_path("does_not_exist.json")); }) == ErrorKind::Io);
}

TEST_CASE("trajectory CSV") {
  const SystemCase sys = swing::testing::case_a();
  StateVec x0 = StateVec::at_rest(Vec::Zero(2));
  x0.delta(0) = 0.1;
  const Trajectory tr = integrate(sys, x0, 0.2, 0.1);
  REQUIRE(tr.size() == 3);
  const fs::path p = temp_path("traj.csv");
  io::save_trajectory_csv(tr, p);
  const auto lines = lines_of(p);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "t,delta_1,delta_2,omega_1,omega_2");

  const Trajectory back = io::load_trajectory_csv(p);
  REQUIRE(back.size() == tr.size());
  for (std::size_t k = 0; k < tr.size(); ++k) {
    CHECK(back.times[k] == tr.times[k]);
    CHECK(back.states[k].stacked() == tr.states[k].stacked());
  }

  CHECK(kind_of([&] { io::save_trajectory_csv(Trajectory{}, temp_path("empty.csv")); }) == ErrorKind::Input);
}

TEST_CASE("modal trajectory CSV header") {
  const SystemCase sys = swing::testing::case_a();
  const ModalBasis b = eigendecompose(build_jacobian(sys, Vec::Zero(2)));
  StateVec x0 = StateVec::at_rest(Vec::Zero(2));
  x0.delta(0) = 0.1;
  const ModalTrajectory mt = integrate_modal(sys, b, to_modal(b, x0), 0.2, 0.1);
  std::ostringstream os;
  io::write_modal_trajectory_csv(mt, os);
  const std::string text = os.str();
  CHECK(text.rfind("t,y1_re,y1_im,y2_re,y2_im,y3_re,y3_im,y4_re,y4_im\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}

TEST_CASE("report JSON lists failing checks") {
  const VerificationReport rep = run_verification(swing::testing::case_a_nonuniform());
  const nlohmann::json j = io::to_json(rep);
  CHECK(j["overall_pass"] == false);
  CHECK(j["failing"].size() == 5);
  CHECK(j["checks"].size() == 8);
}
