#include <doctest.h>

#include <numbers>
#include <random>

#include "cases.hpp"
#include "swing/equilibrium.hpp"
#include "swing/errors.hpp"

using namespace swing;
using swing::testing::case_a;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
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

}  // namespace

TEST_CASE("symmetric zero equilibrium") {
  const Equilibrium eq = solve_equilibrium(case_a(), v2(0.1, 0), 1);
  CHECK(eq.delta_s.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(eq.residual_norm <= 1e-10);
  CHECK(eq.reference == 1);
  CHECK(eq.delta_s(1) == 0.0);
}

TEST_CASE("synthesized equilibrium is recovered") {
  const SystemCase sys = synthesize_equilibrium(case_a(), v2(0.3, 0));
  const Equilibrium eq = solve_equilibrium(sys, v2(0.1, 0), 1);
  CHECK(std::abs(eq.delta_s(0) - 0.3) < 1e-10);
  CHECK(std::abs(eq.delta_s(1)) < 1e-10);
  // Direct residual evaluation as the oracle.
  const Vec r = sys.mechanical_power() - electrical_power(sys, v2(0.3, 0));
  CHECK(r.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lossless case with net power surplus has no equilibrium") {
  SystemCase sys = case_a();
  sys.machines[0].Pm = 0.5;
  sys.machines[1].Pm = 0.4;
  CHECK(kind_of([&] { solve_equilibrium(sys, v2(0.1, 0), 1); }) == ErrorKind::InconsistentPowerBalance);
}

TEST_CASE("uncoupled machines with unbalanced power give a singular Newton step") {
  SystemCase sys = case_a();
  sys.network.C.setZero();
  sys.machines[0].Pm = 0.1;
  sys.machines[1].Pm = -0.1;
  CHECK(kind_of([&] { solve_equilibrium(sys, v2(0, 0), 1); }) == ErrorKind::SingularStep);
}

TEST_CASE("iteration cap reports NoConvergence") {
  const SystemCase sys = synthesize_equilibrium(case_a(), v2(0.9, 0));
  NewtonOptions opts;
  opts.max_iterations = 1;
  CHECK(kind_of([&] { solve_equilibrium(sys, v2(0, 0), 1, opts); }) == ErrorKind::NoConvergence);
}

TEST_CASE("bad inputs") {
  CHECK(kind_of([&] { solve_equilibrium(case_a(), Vec::Zero(3), 0); }) == ErrorKind::Input);
  CHECK(kind_of([&] { solve_equilibrium(case_a(), Vec::Zero(2), 2); }) == ErrorKind::Input);
  CHECK_THROWS_AS(synthesize_equilibrium(case_a(), Vec::Zero(3)), Error);
}

TEST_CASE("synthesize examples") {
  const SystemCase z = synthesize_equilibrium(case_a(), v2(0, 0));
  CHECK(z.machines[0].Pm == 0.0);
  CHECK(z.machines[1].Pm == 0.0);

  const Vec target = v2(std::numbers::pi / 6, 0);
  const SystemCase s = synthesize_equilibrium(case_a(), target);
  CHECK(s.machines[0].Pm == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.machines[1].Pm == doctest::Approx(-0.5).epsilon(1e-15));
  const StateVec f = vector_field(s, StateVec::at_rest(target));
  CHECK(f.delta.isZero(0.0));
  CHECK(f.speed.isZero(0.0));
}

TEST_CASE("synthesize then solve round trip on random cases") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 25; ++k) {
    const auto rc = swing::testing::random_uniform_case(rng, 2 + k % 9);
    const Index m = rc.sys.size();
    const Index ref = k % m;
    const Vec guess = rc.delta_s + 0.05 * Vec::Random(m);
    const Equilibrium eq = solve_equilibrium(rc.sys, guess, ref);
    CHECK(eq.residual_norm <= 1e-10);
    // Recovered up to the shift fixed by the pinned reference angle.
    const Vec expected = (rc.delta_s.array() + (guess(ref) - rc.delta_s(ref))).matrix();
    CHECK((eq.delta_s - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("assumption report on the two-machine case") {
  const SystemCase sys = case_a();
  const Equilibrium eq = solve_equilibrium(sys, v2(0, 0), 1);
  const auto basis = eigendecompose(build_jacobian(sys, eq.delta_s));
  const AssumptionReport rep = check_assumptions(sys, eq, basis);
  CHECK(rep.asm1.pass);
  CHECK(rep.asm2.pass);
  CHECK(rep.asm3.pass);
  CHECK(rep.asm4.pass);
  CHECK(rep.all_pass());
  CHECK(rep.complex_count == 2);
  CHECK(rep.oscillatory_abscissa == doctest::Approx(-0.05));
  CHECK(rep.expected_mu == doctest::Approx(-0.1));
  CHECK_FALSE(rep.interpretation.empty());

  // Deterministic given the same inputs.
  const AssumptionReport again = check_assumptions(sys, eq, basis);
  CHECK(again.asm2.detail == rep.asm2.detail);
  CHECK(again.oscillatory_abscissa == rep.oscillatory_abscissa);
}

TEST_CASE("non-uniform damping fails Asm. 4 only") {
  const SystemCase sys = swing::testing::case_a_nonuniform();
  const Equilibrium eq = solve_equilibrium(sys, v2(0, 0), 1);
  const auto bundle = build_jacobian_forced(sys, eq.delta_s);
  const AssumptionReport rep = check_assumptions(sys, eq, bundle);
  CHECK_FALSE(rep.asm4.pass);
  CHECK(rep.damping_range == doctest::Approx(0.1));
  CHECK(rep.damping_mean == doctest::Approx(0.15));
  CHECK(rep.damping_max_dev == doctest::Approx(0.05));
  CHECK(rep.asm2.pass);
  CHECK(rep.asm3.pass);
}

TEST_CASE("decoupled machines fail Asm. 3") {
  SystemCase sys = case_a();
  sys.network.C.setZero();
  const Equilibrium eq = solve_equilibrium(sys, v2(0, 0), 1);
  const auto bundle = build_jacobian(sys, eq.delta_s);
  // N = 0 makes J block-triangular; eigen oracle: the spectrum is {0, 0, -c, -c}.
  CHECK_THROWS_AS(eigendecompose(bundle), Error);
  const AssumptionReport rep = check_assumptions(sys, eq, bundle);
  CHECK_FALSE(rep.asm3.pass);
  CHECK(rep.complex_count == 0);
  REQUIRE(rep.real_eigenvalues.size() == 4);
  CHECK(rep.real_eigenvalues[0] == doctest::Approx(0.0));
  CHECK(rep.real_eigenvalues[1] == doctest::Approx(0.0));
  CHECK(rep.real_eigenvalues[2] == doctest::Approx(-0.1));
  CHECK(rep.real_eigenvalues[3] == doctest::Approx(-0.1));
}
