#include "swing/kernels.hpp"

#include <cmath>

namespace swing::kernels {

namespace {

inline double power_row(const SystemCase& sys, const Vec& delta, Index i) {
  const Index m = sys.size();
  const auto& net = sys.network;
  const double e = sys.machines[static_cast<std::size_t>(i)].E;
  double acc = e * e * net.G(i);
  for (Index j = 0; j < m; ++j) {
    if (j == i) continue;
    const double d = delta(i) - delta(j);
    acc += net.C(i, j) * std::sin(d) + net.Dmat(i, j) * std::cos(d);
  }
  return acc;
}

inline void coupling_row(const SystemCase& sys, const Vec& delta, Index i, Mat& out) {
  const Index m = sys.size();
  const auto& net = sys.network;
  const double scale = sys.omega_s / (2.0 * sys.machines[static_cast<std::size_t>(i)].H);
  double diag = 0.0;
  for (Index j = 0; j < m; ++j) {
    if (j == i) continue;
    const double d = delta(i) - delta(j);
    const double nij = scale * (net.C(i, j) * std::cos(d) - net.Dmat(i, j) * std::sin(d));
    out(i, j) = nij;
    diag += nij;
  }
  out(i, i) = -diag;
}

}  // namespace

void electrical_power_serial(const SystemCase& sys, const Vec& delta, Vec& out) {
  const Index m = sys.size();
  out.resize(m);
  for (Index i = 0; i < m; ++i) out(i) = power_row(sys, delta, i);
}

void electrical_power_parallel(const SystemCase& sys, const Vec& delta, Vec& out) {
  const Index m = sys.size();
  out.resize(m);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) out(i) = power_row(sys, delta, i);
}

void coupling_matrix_serial(const SystemCase& sys, const Vec& delta, Mat& out) {
  const Index m = sys.size();
  out.resize(m, m);
  for (Index i = 0; i < m; ++i) coupling_row(sys, delta, i, out);
}

void coupling_matrix_parallel(const SystemCase& sys, const Vec& delta, Mat& out) {
  const Index m = sys.size();
  out.resize(m, m);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < m; ++i) coupling_row(sys, delta, i, out);
}

void power_balance_jacobian_serial(const SystemCase& sys, const Vec& delta, Mat& out) {
  // d(Pm_i - Pe_i)/d(delta_j) = (2H_i / omega_s) N_ij, row scaling of the coupling matrix.
  coupling_matrix_serial(sys, delta, out);
  for (Index i = 0; i < sys.size(); ++i) {
    out.row(i) *= 2.0 * sys.machines[static_cast<std::size_t>(i)].H / sys.omega_s;
  }
}

}  // namespace swing::kernels
