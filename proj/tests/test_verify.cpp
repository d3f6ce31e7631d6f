#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "cases.hpp"
#include "swing/errors.hpp"
#include "swing/sim.hpp"
#include "swing/verify.hpp"

using namespace swing;
using swing::testing::case_a;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::set<std::string> failing(const VerificationReport& rep) {
  std::set<std::string> out;
  for (const auto& c : rep.checks) {
    if (!c.pass) out.insert(c.name);
  }
  return out;
}

}  // namespace

TEST_CASE("lemma 1.1 examples") {
  const Mat n = build_N(case_a(), v2(0, 0));
  const CheckResult ok = check_lemma_1_1(n);
  CHECK(ok.pass);
  CHECK(ok.worst_residual == 0.0);

  Mat bad = n;
  bad(0, 0) += 1e-3;
  const CheckResult r = check_lemma_1_1(bad);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_residual > 1e-12);
}

TEST_CASE("lemma 1.2 examples") {
  const JacobianBundle phys = build_jacobian(case_a(), v2(0, 0));
  CHECK(check_lemma_1_2(phys).pass);
  CHECK(check_lemma_1_2(build_jacobian(case_a(), v2(0, 0), JacobianForm::paper_eq4)).pass);
  // Physical Jacobian tested against the wrong sign.
  CHECK_FALSE(check_lemma_1_2(phys, 1e-8, 0.1).pass);
}

TEST_CASE("lemmas 1.3, 1.4 and 2.1 on the two-machine case") {
  const ModalBasis b = eigendecompose(build_jacobian(case_a(), v2(0, 0)));
  CHECK(check_lemma_1_3(b).pass);
  CHECK(check_lemma_1_4(b).pass);
  CHECK(check_lemmas_1_3_1_4(b).pass);
  const CheckResult l21 = check_lemma_2_1(b);
  CHECK(l21.pass);
  CHECK(l21.worst_residual < 1e-12);
}

TEST_CASE("lemma 2.2 flags a power function that depends on absolute angle") {
  CHECK(check_lemma_2_2(case_a(), 50, 1).pass);
  const SystemCase sys = case_a();
  const PowerFn broken = [&](const Vec& d) {
    Vec p = electrical_power(sys, d);
    p(0) += 1e-3 * std::sin(d(0));
    return p;
  };
  const CheckResult r = check_lemma_2_2(2, broken, 50, 1);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_residual > 1e-6);
}

TEST_CASE("every check passes on random uniform cases") {
  std::mt19937_64 rng(404);
  for (Index m : {4, 5, 6}) {
    const auto rc = swing::testing::random_uniform_case(rng, m);
    VerifyConfig cfg;
    cfg.samples = 30;
    cfg.guess = rc.delta_s;
    const VerificationReport rep = run_verification(rc.sys, cfg);
    CHECK(rep.checks.size() == 8);
    CHECK_MESSAGE(rep.overall_pass, "m=" << m);
    CHECK_FALSE(rep.forced);
  }
}

TEST_CASE("non-uniform damping fails exactly the predicted subset") {
  const VerificationReport rep = run_verification(swing::testing::case_a_nonuniform());
  CHECK(rep.forced);
  CHECK_FALSE(rep.overall_pass);
  const std::set<std::string> expected{kLemma12, kLemma14, kLemma21, kClaim1, kClaim2};
  CHECK(failing(rep) == expected);
}

TEST_CASE("non-uniform damping can be refused outright") {
  VerifyConfig cfg;
  cfg.allow_nonuniform = false;
  try {
    run_verification(swing::testing::case_a_nonuniform(), cfg);
    FAIL("expected NonuniformDamping");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonuniformDamping);
  }
}

TEST_CASE("sampled checks are deterministic and independent of execution mode") {
  std::mt19937_64 rng(55);
  const auto rc = swing::testing::random_uniform_case(rng, 7);
  const ModalBasis b = eigendecompose(build_jacobian(rc.sys, rc.delta_s));
  const auto a = check_claim_2(rc.sys, b, rc.delta_s, 64, 9, 1e-9, 1.0, Execution::parallel);
  const auto s = check_claim_2(rc.sys, b, rc.delta_s, 64, 9, 1e-9, 1.0, Execution::serial);
  const auto again = check_claim_2(rc.sys, b, rc.delta_s, 64, 9, 1e-9, 1.0, Execution::parallel);
  CHECK(a.worst_residual == s.worst_residual);
  CHECK(a.worst_residual == again.worst_residual);
  CHECK(a.retries == s.retries);

  const auto c1p = check_claim_1(b, rc.delta_s, 64, 9, 1e-9, 1.0, Execution::parallel);
  const auto c1s = check_claim_1(b, rc.delta_s, 64, 9, 1e-9, 1.0, Execution::serial);
  CHECK(c1p.worst_residual == c1s.worst_residual);

  const auto other = check_claim_2(rc.sys, b, rc.delta_s, 64, 10);
  CHECK(other.seed == 10);
}

TEST_CASE("claim 2 holds at small and large amplitude") {
  const SystemCase sys = case_a();
  const ModalBasis b = eigendecompose(build_jacobian(sys, v2(0, 0)));
  CHECK(check_claim_2(sys, b, v2(0, 0), 100, 3, 1e-9, 0.1).pass);
  CHECK(check_claim_2(sys, b, v2(0, 0), 100, 3, 1e-9, 1.0).pass);
}

TEST_CASE("claim residuals grow with damping spread") {
  const SystemCase base = case_a();
  double prev1 = -1.0;
  double prev2 = -1.0;
  for (double s : {0.0, 0.05, 0.1}) {
    const SystemCase sys = with_damping_spread(base, s);
    const ModalBasis b = eigendecompose(build_jacobian_any(sys, v2(0, 0)));
    const double r1 = check_claim_1(b, v2(0, 0), 40, 5).worst_residual;
    const double r2 = check_claim_2(sys, b, v2(0, 0), 40, 5).worst_residual;
    CHECK(r1 > prev1);
    CHECK(r2 > prev2);
    prev1 = r1;
    prev2 = r2;
  }
  CHECK(prev1 > 1e-9);
  CHECK(prev2 > 1e-9);
}

TEST_CASE("fingerprint is stable and sensitive") {
  const SystemCase a = case_a();
  CHECK(case_fingerprint(a) == case_fingerprint(case_a()));
  CHECK(case_fingerprint(a).size() == 16);
  SystemCase b = a;
  b.machines[0].H = std::nextafter(b.machines[0].H, 11.0);
  CHECK(case_fingerprint(a) != case_fingerprint(b));
}

TEST_CASE("report lookup") {
  const VerificationReport rep = run_verification(case_a());
  REQUIRE(rep.find(kClaim2) != nullptr);
  CHECK(rep.find("nope") == nullptr);
  CHECK(rep.checks.front().name == kLemma11);
  CHECK(rep.checks.back().name == kClaim2);
}
