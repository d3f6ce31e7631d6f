#include "swing/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <random>
#include <sstream>

#include "swing/errors.hpp"

namespace swing {

namespace {

using cd = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::mt19937_64 sample_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x5eedu};
  return std::mt19937_64(seq);
}

struct SampleOutcome {
  double residual = 0.0;
  int retries = 0;
};

/// Max residual over samples. Each sample i gets its own generator, so the
/// serial and parallel paths agree exactly.
template <class Fn>
SampleOutcome sample_max(int samples, std::uint64_t seed, Execution exec, Fn&& fn) {
  double worst = 0.0;
  int retries = 0;
  std::exception_ptr failure;
  int failed_index = samples;
#pragma omp parallel for schedule(static) reduction(max : worst) reduction(+ : retries) \
    if (exec == Execution::parallel)
  for (int i = 0; i < samples; ++i) {
    try {
      auto rng = sample_rng(seed, i);
      const SampleOutcome o = fn(rng);
      worst = std::max(worst, std::isnan(o.residual) ? kInf : o.residual);
      retries += o.retries;
    } catch (...) {
#pragma omp critical(swing_sample_failure)
      if (i < failed_index) {
        failed_index = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return {worst, retries};
}

Vec uniform_vec(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vec v(n);
  for (Index k = 0; k < n; ++k) v(k) = dist(rng);
  return v;
}

double spread(const Eigen::Ref<const Vec>& v) { return v.maxCoeff() - v.minCoeff(); }

CheckResult make_result(std::string name, double residual, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.worst_residual = residual;
  r.tolerance = tol;
  r.pass = residual <= tol;
  return r;
}

// Random real state around delta_s mapped into modal coordinates.
CVec random_modal_point(const ModalBasis& basis, const Vec& delta_s, double amplitude, std::mt19937_64& rng) {
  const Index m = basis.m;
  StateVec x{delta_s + uniform_vec(rng, m, -amplitude, amplitude), uniform_vec(rng, m, -amplitude, amplitude)};
  return to_modal(basis, x);
}

}  // namespace

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

CheckResult check_lemma_1_1(const Mat& N, double tol) {
  if (N.rows() != N.cols()) throw Error(ErrorKind::Input, "N must be square");
  const double norm = inf_norm(N);
  const double worst = N.rowwise().sum().cwiseAbs().maxCoeff();
  auto r = make_result(kLemma11, norm > 0.0 ? worst / norm : worst, tol);
  r.detail = "max |row sum of N| / |N|_inf";
  return r;
}

CheckResult check_lemma_1_2(const JacobianBundle& bundle, double tol, std::optional<double> expected_mu) {
  const double mu = expected_mu.value_or(bundle.mu);
  const double jnorm = inf_norm(bundle.J);
  const CVec lam = eigenvalues_of(bundle.J);
  std::vector<double> reals;
  for (const auto& l : lam) {
    if (std::abs(l.imag()) <= tol * jnorm) reals.push_back(l.real());
  }
  std::sort(reals.begin(), reals.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });

  std::ostringstream os;
  double residual = kInf;
  if (reals.size() == 2) {
    residual = std::max(std::abs(reals[0]), std::abs(reals[1] - mu)) / jnorm;
    os << "real eigenvalues {" << reals[0] << ", " << reals[1] << "} vs {0, " << mu << "}";
  } else {
    os << reals.size() << " real eigenvalues, expected exactly 2";
  }
  auto r = make_result(kLemma12, residual, tol);
  r.detail = os.str();
  return r;
}

CheckResult check_lemma_1_3(const ModalBasis& basis, double tol) {
  const Index m = basis.m;
  const Vec v = basis.R.col(basis.zero_mode()).real();
  const double scale = v.head(m).cwiseAbs().maxCoeff();
  const double ang = spread(v.head(m)) / scale;
  const double spe = v.tail(m).cwiseAbs().maxCoeff() / scale;
  const double imag = basis.R.col(basis.zero_mode()).imag().cwiseAbs().maxCoeff() / scale;
  auto r = make_result(kLemma13, std::max({ang, spe, imag}), tol);
  std::ostringstream os;
  os << "r_{2m-1}: angle spread " << ang << ", max |speed| " << spe;
  r.detail = os.str();
  return r;
}

CheckResult check_lemma_1_4(const ModalBasis& basis, double tol) {
  const Index m = basis.m;
  const Vec v = basis.R.col(basis.damping_mode()).real();
  const double scale = v.head(m).cwiseAbs().maxCoeff();
  const double ang = spread(v.head(m)) / scale;
  const double prop = (v.tail(m) - basis.mu * v.head(m)).cwiseAbs().maxCoeff() / (scale * std::max(1.0, std::abs(basis.mu)));
  const double imag = basis.R.col(basis.damping_mode()).imag().cwiseAbs().maxCoeff() / scale;
  auto r = make_result(kLemma14, std::max({ang, prop, imag}), tol);
  std::ostringstream os;
  os << "r_{2m}: angle spread " << ang << ", |speed - mu*angle| " << prop << " (mu = " << basis.mu << ")";
  r.detail = os.str();
  return r;
}

CheckResult check_lemmas_1_3_1_4(const ModalBasis& basis, double tol) {
  const auto a = check_lemma_1_3(basis, tol);
  const auto b = check_lemma_1_4(basis, tol);
  auto r = make_result("lemmas_1_3_1_4", std::max(a.worst_residual, b.worst_residual), tol);
  r.detail = a.detail + "; " + b.detail;
  return r;
}

CheckResult check_lemma_2_1(const ModalBasis& basis, double tol) {
  const Index m = basis.m;
  double worst = 0.0;
  for (Index i = 0; i < 2 * m - 2; ++i) {
    const CVec row = basis.L.row(i).transpose();
    const double norm = row.norm();
    worst = std::max(worst, std::abs(row.head(m).sum()) / norm);
    worst = std::max(worst, std::abs(row.tail(m).sum()) / norm);
  }
  auto r = make_result(kLemma21, worst, tol);
  r.detail = "max over oscillatory rows of L of |angle-block sum|, |speed-block sum| relative to |l_i|";
  return r;
}

CheckResult check_lemma_2_2(Index m, const PowerFn& power, int samples, std::uint64_t seed, double tol,
                            Execution exec) {
  if (samples < 1) throw Error(ErrorKind::Input, "samples must be >= 1");
  const auto out = sample_max(samples, seed, exec, [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> shift(-std::numbers::pi, std::numbers::pi);
    const Vec delta = uniform_vec(rng, m, -std::numbers::pi, std::numbers::pi);
    const double a = shift(rng);
    const Vec p0 = power(delta);
    const Vec p1 = power((delta.array() + a).matrix());
    return SampleOutcome{(p1 - p0).cwiseAbs().maxCoeff() / std::max(1.0, p0.cwiseAbs().maxCoeff()), 0};
  });
  auto r = make_result(kLemma22, out.residual, tol);
  r.samples = samples;
  r.seed = seed;
  r.detail = "max |Pe(delta + a 1) - Pe(delta)|_inf / max(1, |Pe|_inf)";
  return r;
}

CheckResult check_lemma_2_2(const SystemCase& sys, int samples, std::uint64_t seed, double tol, Execution exec) {
  return check_lemma_2_2(
      sys.size(), [&sys](const Vec& d) { return electrical_power(sys, d); }, samples, seed, tol, exec);
}

CheckResult check_claim_1(const ModalBasis& basis, const Vec& delta_s, int samples, std::uint64_t seed, double tol,
                          double amplitude, Execution exec) {
  if (samples < 1) throw Error(ErrorKind::Input, "samples must be >= 1");
  const Index m = basis.m;
  const Index z = basis.zero_mode();
  const Index d = basis.damping_mode();

  auto structural_of = [&](Index col) {
    const CVec c = basis.R.col(col).head(m);
    const double scale = c.cwiseAbs().maxCoeff();
    return std::max(spread(c.real()), spread(c.imag())) / scale;
  };
  const double structural = std::max(structural_of(z), structural_of(d));

  const auto sampled = sample_max(samples, seed, exec, [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> shift(-amplitude, amplitude);
    const CVec y = random_modal_point(basis, delta_s, amplitude, rng);
    CVec y2 = y;
    y2(z) += shift(rng);
    y2(d) += shift(rng);
    const Vec change = from_modal(basis, y2).delta - from_modal(basis, y).delta;
    return SampleOutcome{spread(change), 0};
  });

  auto r = make_result(kClaim1, std::max(structural, sampled.residual), tol);
  r.samples = samples;
  r.seed = seed;
  std::ostringstream os;
  os << "structural " << structural << " (mean-mode angle spread), sampled " << sampled.residual
     << " (max change of delta_i - delta_j, rad)";
  r.detail = os.str();
  return r;
}

CheckResult check_claim_2(const SystemCase& sys, const ModalBasis& basis, const Vec& delta_s, int samples,
                          std::uint64_t seed, double tol, double amplitude, Execution exec) {
  if (samples < 1) throw Error(ErrorKind::Input, "samples must be >= 1");
  const Index m = basis.m;
  const Index z = basis.zero_mode();
  const Index d = basis.damping_mode();
  constexpr int kMaxRetries = 16;

  const auto out = sample_max(samples, seed, exec, [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> shift(-amplitude, amplitude);
    for (int attempt = 0;; ++attempt) {
      try {
        const CVec y = random_modal_point(basis, delta_s, amplitude, rng);
        CVec y2 = y;
        y2(z) += shift(rng);
        y2(d) += shift(rng);
        const CVec f0 = modal_vector_field(sys, basis, y);
        const CVec f1 = modal_vector_field(sys, basis, y2);
        const double scale = std::max(f0.cwiseAbs().maxCoeff(), f1.cwiseAbs().maxCoeff());
        const double diff = (f1.head(2 * m - 2) - f0.head(2 * m - 2)).cwiseAbs().maxCoeff();
        return SampleOutcome{scale > 0.0 ? diff / scale : diff, attempt};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NonRealReconstruction || attempt >= kMaxRetries) throw;
      }
    }
  });

  auto r = make_result(kClaim2, out.residual, tol);
  r.samples = samples;
  r.seed = seed;
  r.retries = out.retries;
  r.detail = "max change of oscillatory components of L f(R Y) under mean-coordinate shifts, relative to |Ydot|";
  return r;
}

std::string case_fingerprint(const SystemCase& sys) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double x) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &x, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffu;
      h *= 1099511628211ULL;
    }
  };
  mix(sys.omega_s);
  mix(static_cast<double>(sys.size()));
  for (const auto& mp : sys.machines) {
    mix(mp.H);
    mix(mp.D);
    mix(mp.Pm);
    mix(mp.E);
  }
  for (Index i = 0; i < sys.network.G.size(); ++i) mix(sys.network.G(i));
  for (Index i = 0; i < sys.network.C.rows(); ++i) {
    for (Index j = 0; j < sys.network.C.cols(); ++j) mix(sys.network.C(i, j));
  }
  for (Index i = 0; i < sys.network.Dmat.rows(); ++i) {
    for (Index j = 0; j < sys.network.Dmat.cols(); ++j) mix(sys.network.Dmat(i, j));
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

VerificationReport run_verification(const SystemCase& sys, const VerifyConfig& config) {
  require_valid(sys);
  const Index m = sys.size();
  const Vec guess = config.guess.value_or(Vec::Zero(m));
  const Index reference = config.reference.value_or(m - 1);

  VerificationReport rep;
  rep.config = config;
  rep.form = config.form;
  rep.case_fingerprint = case_fingerprint(sys);
  rep.equilibrium = solve_equilibrium(sys, guess, reference);
  const Vec& delta_s = rep.equilibrium.delta_s;

  const JacobianBundle bundle = config.allow_nonuniform
                                    ? build_jacobian_any(sys, delta_s, config.form, kUniformDampingTol)
                                    : build_jacobian(sys, delta_s, config.form, kUniformDampingTol);
  rep.forced = bundle.forced;
  const ModalBasis basis = eigendecompose(bundle);
  const auto& t = config.tol;

  rep.checks.push_back(check_lemma_1_1(bundle.N, t.structural));
  rep.checks.push_back(check_lemma_1_2(bundle, t.eigen));
  rep.checks.push_back(check_lemma_1_3(basis, t.eigen));
  rep.checks.push_back(check_lemma_1_4(basis, t.eigen));
  rep.checks.push_back(check_lemma_2_1(basis, t.eigen));
  rep.checks.push_back(check_lemma_2_2(sys, config.samples, config.seed, t.structural, config.execution));
  rep.checks.push_back(
      check_claim_1(basis, delta_s, config.samples, config.seed, t.sampled, config.amplitude, config.execution));
  rep.checks.push_back(check_claim_2(sys, basis, delta_s, config.samples, config.seed, t.sampled, config.amplitude,
                                     config.execution));

  rep.overall_pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  return rep;
}

}  // namespace swing
