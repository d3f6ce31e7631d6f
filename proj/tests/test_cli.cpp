#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cases.hpp"
#include "swing/cli.hpp"
#include "swing/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "swingmodal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = swing::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (fs::path(SWING_DATA_DIR) / name).string(); }

std::string temp(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "swing_test_cli";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("verify exit codes") {
  const Run ok = run({"verify", data("case_a.json"), "--out", temp("ok.json")});
  CHECK(ok.code == 0);
  const Run bad = run({"verify", data("case_a_nonuniform.json"), "--out", temp("bad.json")});
  CHECK(bad.code == 2);
  const auto j = nlohmann::json::parse(slurp(temp("bad.json")));
  std::vector<std::string> failing = j["verification"]["failing"];
  CHECK(failing == std::vector<std::string>{"lemma_1_2", "lemma_1_4", "lemma_2_1", "claim_1", "claim_2"});
}

TEST_CASE("verify reports are byte-identical across runs and execution modes") {
  REQUIRE(run({"verify", data("case_a.json"), "--seed", "7", "--out", temp("r1.json")}).code == 0);
  REQUIRE(run({"verify", data("case_a.json"), "--seed", "7", "--out", temp("r2.json")}).code == 0);
  const std::string a = slurp(temp("r1.json"));
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(temp("r2.json")));
}

TEST_CASE("verify writes to stdout without --out") {
  const Run r = run({"verify", data("case_a.json"), "--samples", "5"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verification"]["overall_pass"] == true);
  CHECK(r.err.find("PASS") != std::string::npos);
}

TEST_CASE("analyze") {
  const Run r = run({"analyze", data("case_a.json")});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.contains("modes"));
  CHECK(j.contains("assumptions"));
  CHECK(j.contains("case_fingerprint"));
}

TEST_CASE("simulate writes one row per step plus header") {
  const std::string out = temp("sim.csv");
  const Run r = run({"simulate", data("case_a.json"), "--perturb", "1:0.1:0", "--tmax", "10", "--dt", "1e-3",
                     "--out", out});
  CHECK(r.code == 0);
  CHECK(count_lines(slurp(out)) == 10002);

  const std::string modal = temp("sim_modal.csv");
  CHECK(run({"simulate", data("case_a.json"), "--perturb", "1:0.1:0", "--tmax", "1", "--dt", "0.1", "--modal",
             "--freeze-mean", "--out", modal})
            .code == 0);
  CHECK(slurp(modal).rfind("t,y1_re,y1_im", 0) == 0);
}

TEST_CASE("sweep CSV") {
  const std::string out = temp("sweep.csv");
  const Run r = run({"sweep", data("case_a.json"), "--spreads", "0,0.25,0.5", "--perturb", "1:0.1:0", "--tmax",
                     "2", "--dt", "1e-2", "--out", out});
  CHECK(r.code == 0);
  const std::string text = slurp(out);
  CHECK(count_lines(text) == 4);
  CHECK(text.rfind("spread,max_pair_discrepancy,max_coi_discrepancy\n", 0) == 0);
}

TEST_CASE("synthesize produces an exact equilibrium case") {
  const std::string out = temp("synth.json");
  CHECK(run({"synthesize", data("case_a.json"), "--angles", "0.5235987755982988,0", "--out", out}).code == 0);
  const swing::SystemCase sys = swing::io::load_case(out);
  CHECK(sys.machines[0].Pm == doctest::Approx(0.5));
  CHECK(run({"synthesize", data("case_a.json"), "--angles", "0,0,0", "--out", out}).code == 1);
}

TEST_CASE("usage errors exit 1, help exits 0") {
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"verify", data("case_a.json"), "--bogus"}).code == 1);
  CHECK(run({"verify"}).code == 1);
  CHECK(run({"verify", temp("missing.json")}).code == 1);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"simulate", data("case_a.json"), "--perturb", "9:0.1:0", "--tmax", "1", "--dt", "0.1", "--out",
             temp("x.csv")})
            .code == 1);
}
