#include "swing/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "swing/errors.hpp"

namespace swing {

using cd = std::complex<double>;

CVec eigenvalues_of(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NotDiagonalizable, "eigenvalue iteration did not converge");
  return es.eigenvalues();
}

namespace {

// Unit Euclidean norm; largest-magnitude angle entry rotated onto the positive real axis.
CVec normalize_oscillatory(const CVec& v, Index m) {
  CVec r = v / v.norm();
  Index k = 0;
  r.head(m).cwiseAbs().maxCoeff(&k);
  const cd pivot = r(k);
  return r * (std::abs(pivot) / pivot);
}

// Real eigenvector scaled so its angle entries average to exactly one.
CVec normalize_mean_mode(const CVec& v, Index m) {
  Index k = 0;
  v.head(m).cwiseAbs().maxCoeff(&k);
  CVec r = v / v(k);  // real up to rounding now
  Vec re = r.real();
  const double sum = re.head(m).sum();
  if (std::abs(sum) > 1e-3 * m * re.head(m).cwiseAbs().maxCoeff()) {
    re *= static_cast<double>(m) / sum;
  }
  return re.cast<cd>();
}

}  // namespace

ModalBasis eigendecompose(const JacobianBundle& bundle, const ModalTolerances& tol) {
  const Mat& jac = bundle.J;
  const Index n = jac.rows();
  const Index m = n / 2;
  const double jnorm = inf_norm(jac);

  Eigen::EigenSolver<Mat> es(jac, true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NotDiagonalizable, "eigenvalue iteration did not converge");
  }
  const CVec lam = es.eigenvalues();
  const CMat vecs = es.eigenvectors();

  std::vector<Index> reals;
  std::vector<Index> upper;
  std::vector<Index> lower;
  for (Index k = 0; k < n; ++k) {
    const double im = lam(k).imag();
    if (std::abs(im) <= tol.imag_rel * jnorm) {
      reals.push_back(k);
    } else if (im > 0) {
      upper.push_back(k);
    } else {
      lower.push_back(k);
    }
  }
  if (reals.size() != 2 || upper.size() != static_cast<std::size_t>(m - 1) || lower.size() != upper.size()) {
    std::ostringstream os;
    os << "expected 2 real eigenvalues and " << (m - 1) << " conjugate pairs, found " << reals.size()
       << " real and " << upper.size() << "/" << lower.size() << " upper/lower non-real";
    throw Error(ErrorKind::ClassificationFailure, os.str());
  }

  // Conjugate pairs by ascending |Im|; each partner is the closest unused conjugate.
  std::sort(upper.begin(), upper.end(), [&](Index a, Index b) {
    const double ia = lam(a).imag(), ib = lam(b).imag();
    if (ia != ib) return ia < ib;
    return lam(a).real() < lam(b).real();
  });

  ModalBasis basis;
  basis.m = m;
  basis.mu = bundle.mu;
  basis.form = bundle.form;
  basis.forced = bundle.forced;
  basis.jacobian_norm = jnorm;
  basis.eigenvalues.resize(n);
  basis.R.resize(n, n);

  Index col = 0;
  for (Index k : upper) {
    const cd l = lam(k);
    const CVec r = normalize_oscillatory(vecs.col(k), m);
    basis.eigenvalues(col) = l;
    basis.R.col(col) = r;
    basis.eigenvalues(col + 1) = std::conj(l);
    basis.R.col(col + 1) = r.conjugate();
    col += 2;
  }

  // Real pair: the one nearer zero is the angle-drift mode.
  Index z = reals[0], d = reals[1];
  if (std::abs(lam(d).real()) < std::abs(lam(z).real())) std::swap(z, d);
  if (std::abs(lam(z).real()) > tol.mean_eig_rel * jnorm) {
    std::ostringstream os;
    os << "no zero eigenvalue: real eigenvalues are " << lam(z).real() << " and " << lam(d).real();
    throw Error(ErrorKind::ClassificationFailure, os.str());
  }
  if (!bundle.forced && std::abs(lam(d).real() - bundle.mu) > tol.mean_eig_rel * jnorm) {
    std::ostringstream os;
    os << "second real eigenvalue " << lam(d).real() << " differs from mu = " << bundle.mu;
    throw Error(ErrorKind::ClassificationFailure, os.str());
  }
  basis.eigenvalues(col) = cd(lam(z).real(), 0.0);
  basis.R.col(col) = normalize_mean_mode(vecs.col(z), m);
  basis.eigenvalues(col + 1) = cd(lam(d).real(), 0.0);
  basis.R.col(col + 1) = normalize_mean_mode(vecs.col(d), m);

  // Diagnostics and refusal of ill-conditioned bases.
  const CMat jc = jac.cast<cd>();
  basis.residuals.resize(n);
  for (Index k = 0; k < n; ++k) {
    const CVec& r = basis.R.col(k);
    basis.residuals(k) = (jc * r - basis.eigenvalues(k) * r).cwiseAbs().maxCoeff() / r.cwiseAbs().maxCoeff();
  }
  basis.min_gap = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      basis.min_gap = std::min(basis.min_gap, std::abs(basis.eigenvalues(a) - basis.eigenvalues(b)));
    }
  }
  Eigen::JacobiSVD<CMat> svd(basis.R);
  const auto& sv = svd.singularValues();
  basis.cond_R = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();

  if (basis.min_gap < tol.gap_rel * jnorm && basis.cond_R > tol.cond_max) {
    std::ostringstream os;
    os << "near-repeated eigenvalues (gap " << basis.min_gap << ") with cond(R) = " << basis.cond_R;
    throw Error(ErrorKind::NotDiagonalizable, os.str());
  }
  const double worst_residual = basis.residuals.maxCoeff();
  if (worst_residual > tol.residual_rel * jnorm) {
    std::ostringstream os;
    os << "eigenpair residual " << worst_residual << " exceeds " << tol.residual_rel << " * |J|";
    throw Error(ErrorKind::NotDiagonalizable, os.str());
  }

  basis.L = basis.R.partialPivLu().inverse();
  const double biorth = (basis.L * basis.R - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
  const double diag_err =
      (basis.L * jc * basis.R - CMat(basis.eigenvalues.asDiagonal())).cwiseAbs().maxCoeff();
  if (biorth > tol.biorth || diag_err > tol.diag_rel * jnorm) {
    std::ostringstream os;
    os << "eigenbasis not usable: |LR - I| = " << biorth << ", |LJR - diag| = " << diag_err
       << ", cond(R) = " << basis.cond_R;
    throw Error(ErrorKind::NotDiagonalizable, os.str());
  }
  return basis;
}

CVec to_modal(const ModalBasis& basis, const StateVec& state) {
  if (state.delta.size() != basis.m || state.speed.size() != basis.m) {
    throw Error(ErrorKind::Input, "state dimension does not match modal basis");
  }
  return basis.L * state.stacked().cast<cd>();
}

StateVec from_modal(const ModalBasis& basis, const CVec& y, double reconstruct_rel) {
  if (y.size() != basis.dim()) throw Error(ErrorKind::Input, "modal vector has wrong length");
  const CVec x = basis.R * y;
  const double scale = x.cwiseAbs().maxCoeff();
  const double imag = x.imag().cwiseAbs().maxCoeff();
  if (imag > reconstruct_rel * scale) {
    std::ostringstream os;
    os << "reconstructed state has imaginary part " << imag << " (|x| = " << scale
       << "); modal vector is not conjugate-symmetric";
    throw Error(ErrorKind::NonRealReconstruction, os.str());
  }
  return StateVec::from_stacked(x.real());
}

CVec modal_vector_field(const SystemCase& sys, const ModalBasis& basis, const CVec& y, double reconstruct_rel) {
  const StateVec state = from_modal(basis, y, reconstruct_rel);
  return basis.L * vector_field(sys, state).stacked().cast<cd>();
}

double conjugate_asymmetry(const ModalBasis& basis, const CVec& y) {
  double worst = 0.0;
  for (Index k = 0; k + 1 < basis.zero_mode(); k += 2) {
    worst = std::max(worst, std::abs(y(k + 1) - std::conj(y(k))));
  }
  worst = std::max(worst, std::abs(y(basis.zero_mode()).imag()));
  worst = std::max(worst, std::abs(y(basis.damping_mode()).imag()));
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  return worst / scale;
}

}  // namespace swing
