#include <random>

#include <benchmark/benchmark.h>

#include "cases.hpp"
#include "swing/kernels.hpp"
#include "swing/verify.hpp"

using namespace swing;

namespace {

SystemCase dense_case(Index m) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(m));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemCase sys;
  sys.machines.resize(static_cast<std::size_t>(m));
  for (auto& mp : sys.machines) mp = {1.0 + 9.0 * u(rng), 0.2, 0.0, 0.9 + 0.3 * u(rng)};
  sys.network.G = Vec::Zero(m);
  sys.network.C = Mat::Zero(m, m);
  sys.network.Dmat = Mat::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    sys.network.G(i) = 0.3 * u(rng);
    for (Index j = i + 1; j < m; ++j) {
      sys.network.C(i, j) = sys.network.C(j, i) = 2.0 * u(rng);
      sys.network.Dmat(i, j) = sys.network.Dmat(j, i) = 0.2 * u(rng);
    }
  }
  return sys;
}

template <void (*Kernel)(const SystemCase&, const Vec&, Vec&)>
void BM_power(benchmark::State& state) {
  const Index m = state.range(0);
  const SystemCase sys = dense_case(m);
  const Vec delta = Vec::Random(m);
  Vec out;
  for (auto _ : state) {
    Kernel(sys, delta, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(m);
}

template <void (*Kernel)(const SystemCase&, const Vec&, Mat&)>
void BM_coupling(benchmark::State& state) {
  const Index m = state.range(0);
  const SystemCase sys = dense_case(m);
  const Vec delta = Vec::Random(m);
  Mat out;
  for (auto _ : state) {
    Kernel(sys, delta, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_claim2(benchmark::State& state) {
  const auto exec = state.range(0) == 0 ? Execution::serial : Execution::parallel;
  const auto rc = swing::testing::family_case(1, 8);
  const ModalBasis basis = eigendecompose(build_jacobian(rc.sys, rc.delta_s));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_claim_2(rc.sys, basis, rc.delta_s, 100, 42, 1e-9, 1.0, exec));
  }
}

}  // namespace

BENCHMARK(BM_power<kernels::electrical_power_serial>)->Name("electrical_power/serial")->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_power<kernels::electrical_power_parallel>)->Name("electrical_power/parallel")->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_coupling<kernels::coupling_matrix_serial>)->Name("coupling_matrix/serial")->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_coupling<kernels::coupling_matrix_parallel>)->Name("coupling_matrix/parallel")->Arg(50)->Arg(200)->Arg(1000);
BENCHMARK(BM_claim2)->Name("claim_2_sampled/serial")->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_claim2)->Name("claim_2_sampled/parallel")->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
