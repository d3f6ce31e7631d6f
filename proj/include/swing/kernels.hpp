#pragma once

// Data-parallel inner loops of the model. Each kernel has a serial reference
// and an OpenMP variant; the two perform identical per-element arithmetic in
// identical order, so their outputs are bit-equal.

#include "swing/core_model.hpp"

namespace swing::kernels {

/// Machine count at or above which the dispatching entry points go parallel.
inline constexpr Index kParallelThreshold = 64;

// Pe_i = E_i^2 G_i + sum_{j != i} C_ij sin(d_i - d_j) + Dmat_ij cos(d_i - d_j)
void electrical_power_serial(const SystemCase& sys, const Vec& delta, Vec& out);
void electrical_power_parallel(const SystemCase& sys, const Vec& delta, Vec& out);

// N_ij = (omega_s / 2H_i)(C_ij cos(d_i - d_j) - Dmat_ij sin(d_i - d_j)), i != j
// N_ii = -sum_{j != i} N_ij
void coupling_matrix_serial(const SystemCase& sys, const Vec& delta, Mat& out);
void coupling_matrix_parallel(const SystemCase& sys, const Vec& delta, Mat& out);

// d/d(delta) of Pm - Pe, i.e. the Newton matrix of the power-balance residual.
void power_balance_jacobian_serial(const SystemCase& sys, const Vec& delta, Mat& out);

}  // namespace swing::kernels
