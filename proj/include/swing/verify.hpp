#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "swing/core_model.hpp"
#include "swing/equilibrium.hpp"
#include "swing/linearization.hpp"
#include "swing/modal.hpp"

namespace swing {

/// Sampled checks run their samples either serially (reference path) or across
/// OpenMP threads. Each sample owns a generator seeded from (seed, index), so
/// both paths produce identical results.
enum class Execution { serial, parallel };

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  int retries = 0;
  std::string detail;
};

struct VerifyTolerances {
  double structural = 1e-12;  // exact-arithmetic identities
  double eigen = 1e-8;        // eigensolver-limited structure
  double sampled = 1e-9;      // sampled nonlinear decoupling
};

struct VerifyConfig {
  int samples = 100;
  std::uint64_t seed = 42;
  double amplitude = 1.0;
  VerifyTolerances tol;
  JacobianForm form = JacobianForm::physical;
  /// Non-uniform cases go through the forced Jacobian pathway so their failures
  /// are observable; when false they raise NonuniformDamping.
  bool allow_nonuniform = true;
  std::optional<Vec> guess;          // defaults to zeros
  std::optional<Index> reference;    // 0-based, defaults to the last machine
  Execution execution = Execution::parallel;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool overall_pass = false;
  std::string case_fingerprint;
  JacobianForm form = JacobianForm::physical;
  bool forced = false;
  Equilibrium equilibrium;
  VerifyConfig config;

  const CheckResult* find(std::string_view name) const;
};

// Names used in reports, in run order.
inline constexpr const char* kLemma11 = "lemma_1_1";
inline constexpr const char* kLemma12 = "lemma_1_2";
inline constexpr const char* kLemma13 = "lemma_1_3";
inline constexpr const char* kLemma14 = "lemma_1_4";
inline constexpr const char* kLemma21 = "lemma_2_1";
inline constexpr const char* kLemma22 = "lemma_2_2";
inline constexpr const char* kClaim1 = "claim_1";
inline constexpr const char* kClaim2 = "claim_2";

/// max_i |sum_j N_ij| / |N|_inf
CheckResult check_lemma_1_1(const Mat& N, double tol = 1e-12);

/// The two real eigenvalues of J are {0, mu}; mu defaults to the bundle's.
/// Residual is +inf when the spectrum does not have exactly two real values.
CheckResult check_lemma_1_2(const JacobianBundle& bundle, double tol = 1e-8,
                            std::optional<double> expected_mu = std::nullopt);

/// Zero-eigenvalue vector r_{2m-1}: equal angle entries, zero speed entries.
CheckResult check_lemma_1_3(const ModalBasis& basis, double tol = 1e-8);
/// Damping-eigenvalue vector r_{2m}: equal angle entries, speed = mu * angle.
CheckResult check_lemma_1_4(const ModalBasis& basis, double tol = 1e-8);
/// Both of the above folded into one result (worst residual of the two).
CheckResult check_lemmas_1_3_1_4(const ModalBasis& basis, double tol = 1e-8);

/// Rows 1..2m-2 of L: angle-block and speed-block sums vanish.
CheckResult check_lemma_2_1(const ModalBasis& basis, double tol = 1e-8);

using PowerFn = std::function<Vec(const Vec&)>;

/// Translation invariance of the electrical power under delta -> delta + a 1.
CheckResult check_lemma_2_2(const SystemCase& sys, int samples, std::uint64_t seed, double tol = 1e-12,
                            Execution exec = Execution::parallel);
CheckResult check_lemma_2_2(Index m, const PowerFn& power, int samples, std::uint64_t seed, double tol = 1e-12,
                            Execution exec = Execution::serial);

/// Structural part on R's mean columns plus sampled reconstruction of
/// delta_i - delta_j under random shifts of (y_{2m-1}, y_{2m}).
CheckResult check_claim_1(const ModalBasis& basis, const Vec& delta_s, int samples, std::uint64_t seed,
                          double tol = 1e-9, double amplitude = 1.0, Execution exec = Execution::parallel);

/// Nonlinear decoupling of the modal vector field: components 1..2m-2 of
/// L f(R Y) do not move under real shifts of the two mean coordinates.
CheckResult check_claim_2(const SystemCase& sys, const ModalBasis& basis, const Vec& delta_s, int samples,
                          std::uint64_t seed, double tol = 1e-9, double amplitude = 1.0,
                          Execution exec = Execution::parallel);

/// Equilibrium, Jacobian, eigendecomposition, then every check in fixed order.
VerificationReport run_verification(const SystemCase& sys, const VerifyConfig& config = {});

/// Deterministic hex digest of every numeric parameter of the case.
std::string case_fingerprint(const SystemCase& sys);

}  // namespace swing
