#include <doctest.h>

#include <random>

#include "cases.hpp"
#include "swing/kernels.hpp"

using namespace swing;

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  std::mt19937_64 rng(2024);
  for (Index m : {2, 7, 64, 130}) {
    auto sys = swing::testing::case_a();
    // Dense random network of size m; the kernels do not care about stability.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    sys.machines.assign(static_cast<std::size_t>(m), MachineParams{});
    for (auto& mp : sys.machines) {
      mp.H = 1.0 + 9.0 * u(rng);
      mp.E = 0.9 + 0.3 * u(rng);
    }
    sys.network.G = Vec::Random(m).cwiseAbs();
    sys.network.C = Mat::Random(m, m).cwiseAbs();
    sys.network.Dmat = 0.1 * Mat::Random(m, m).cwiseAbs();
    sys.network.C.diagonal().setZero();
    sys.network.Dmat.diagonal().setZero();
    const Vec delta = Vec::Random(m);

    Vec ps, pp;
    kernels::electrical_power_serial(sys, delta, ps);
    kernels::electrical_power_parallel(sys, delta, pp);
    CHECK(ps == pp);

    Mat ns, np;
    kernels::coupling_matrix_serial(sys, delta, ns);
    kernels::coupling_matrix_parallel(sys, delta, np);
    CHECK(ns == np);

    // Dispatching entry points agree with the reference too.
    CHECK(electrical_power(sys, delta) == ps);
  }
}

TEST_CASE("power-balance Jacobian matches central differences of Pm - Pe") {
  std::mt19937_64 rng(9);
  const auto rc = swing::testing::random_uniform_case(rng, 5);
  const Vec d = rc.delta_s + 0.3 * Vec::Random(5);
  Mat jac;
  kernels::power_balance_jacobian_serial(rc.sys, d, jac);
  const double h = 1e-6;
  for (Index j = 0; j < 5; ++j) {
    Vec dp = d, dm = d;
    dp(j) += h;
    dm(j) -= h;
    const Vec col = -(electrical_power(rc.sys, dp) - electrical_power(rc.sys, dm)) / (2 * h);
    CHECK((col - jac.col(j)).cwiseAbs().maxCoeff() < 1e-7);
  }
}
