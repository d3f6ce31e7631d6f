#pragma once

#include <complex>

#include "swing/core_model.hpp"
#include "swing/linearization.hpp"

namespace swing {

struct ModalTolerances {
  double imag_rel = 1e-8;       // |Im lambda| <= imag_rel * |J| counts as real
  double residual_rel = 1e-8;   // |J r - lambda r| <= residual_rel * |J| * |r|
  double biorth = 1e-10;        // |L R - I|
  double diag_rel = 1e-8;       // |L J R - diag(lambda)| <= diag_rel * |J|
  double mean_eig_rel = 1e-8;   // real pair within mean_eig_rel * |J| of {0, mu}
  double gap_rel = 1e-6;        // near-repeated eigenvalue gap
  double cond_max = 1e8;        // refusal threshold for cond(R) with near-repeated modes
  double reconstruct_rel = 1e-8;  // tolerated imaginary residual in from_modal
};

/// Eigen-structure of J in the ordering
///   (lambda_1, conj lambda_1), ..., (lambda_{2m-3}, conj), 0, mu
/// with R's columns the right eigenvectors and L = R^{-1}.
struct ModalBasis {
  CVec eigenvalues;
  CMat R;
  CMat L;
  Vec residuals;  // |J r_k - lambda_k r_k|_inf per column
  double cond_R = 0.0;
  double min_gap = 0.0;
  double jacobian_norm = 0.0;
  double mu = 0.0;
  JacobianForm form = JacobianForm::physical;
  bool forced = false;
  Index m = 0;

  Index dim() const { return 2 * m; }
  Index zero_mode() const { return 2 * m - 2; }
  Index damping_mode() const { return 2 * m - 1; }
};

/// Plain eigenvalues of a real square matrix (no ordering, no vectors).
CVec eigenvalues_of(const Mat& a);

ModalBasis eigendecompose(const JacobianBundle& bundle, const ModalTolerances& tol = {});

/// Y = L [delta; speed]
CVec to_modal(const ModalBasis& basis, const StateVec& state);

/// [delta; speed] = Re(R Y); throws NonRealReconstruction when the discarded
/// imaginary part exceeds reconstruct_rel * |R Y|.
StateVec from_modal(const ModalBasis& basis, const CVec& y, double reconstruct_rel = 1e-8);

/// Ydot = L f(R Y) with f the physical-sign nonlinear vector field.
CVec modal_vector_field(const SystemCase& sys, const ModalBasis& basis, const CVec& y,
                        double reconstruct_rel = 1e-8);

/// max_k |y_{2k} - conj(y_{2k-1})| over conjugate pairs and |Im y| over the
/// two real modes, relative to max(1, |y|_inf).
double conjugate_asymmetry(const ModalBasis& basis, const CVec& y);

}  // namespace swing
