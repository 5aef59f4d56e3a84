#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mbl/discretize.hpp"
#include "mbl/margins.hpp"
#include "mbl/stats.hpp"
#include "mbl/types.hpp"

namespace mbl::verify {

/// Slack constant for the sub-gaussian tail thresholds used by the margin
/// preservation and Lipschitz budgets: thresholds have the shape
/// C exp(-gamma^2 k / C) with C = kTailSlack.
inline constexpr double kTailSlack = 800.0;

/// Constant in the chi-square tail bound 2 exp(-k x^2 / kChiSquareSlack).
inline constexpr double kChiSquareSlack = 8.0;

/// Every statistical acceptance threshold allows this many standard errors.
inline constexpr double kSigmaAllowance = 3.0;

/// Fixed significance level for the two-sample KS tests.
inline constexpr double kKsPValueFloor = 0.01;

/// Hypothesis hinge for the steep-branch Lipschitz bound: it requires
/// k >= 72 ln(2) / gamma_i^2.
inline constexpr double kLipschitzMinKFactor = 72.0;

/// Outcome of one verification run. `pass` on a metric means the stated
/// inequality holds at the stated sigma level; reports are reproducible
/// bit-for-bit from (name, parameters, seed).
struct CheckReport {
  enum class Status { Pass, Fail, Inconclusive };

  struct Metric {
    std::string label;
    double value = 0.0;
    double se = 0.0;         // NaN when deterministic
    double threshold = 0.0;  // NaN when not applicable
    bool pass = true;
  };

  std::string name;
  std::vector<Metric> metrics;
  Status status = Status::Pass;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  bool passed() const { return status == Status::Pass; }
};

const char* to_string(CheckReport::Status status);

/// Scans random (v, k) pairs over a wide range plus exact grid points and
/// midpoints; passes iff the down-rounding probability always lands in
/// [0, 1], reconstructs v, and hits the exact special values.
CheckReport check_p_in_unit(std::int64_t trials, std::uint64_t seed);

struct DistDeterminismParams {
  double alpha = 0.0;        // margin fed to the dimension-free sampler
  int k = 64;
  std::int64_t samples = 100000;
  int pairs = 5;
  std::uint64_t seed = 1;
  /// Margin used to build the direct full-pipeline configurations.
  /// Defaults to `alpha`; setting it differently is the deliberate
  /// inversion: the KS test must then detect the mismatch.
  double alpha_direct = std::numeric_limits<double>::quiet_NaN();
  int threads = 1;
};

/// Claim-level determinism of the snapped-margin law: distinct ambient
/// configurations (dimension, rotation, label sign) with the same margin
/// must be KS-indistinguishable from the dimension-free sampler.
CheckReport check_dist_determinism(const DistDeterminismParams& params);

struct MonotonicityParams {
  int k = 512;
  double gamma_i = 0.1;
  std::vector<double> alphas = {0.0, 0.025, 0.05, 0.075, 0.1};
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// q(alpha) = Pr[snapped margin > gamma_i/2] must be nondecreasing along
/// the grid (and its complement nonincreasing) within 3 pooled standard
/// errors per adjacent pair.
CheckReport check_monotonicity(const MonotonicityParams& params);

/// Surrogate phi: Monte Carlo probability of the snapped margin exceeding
/// gamma_i/2 for alpha <= 0, the linear interpolant (gamma_i - alpha) /
/// gamma_i times the alpha = 0 anchor on (0, gamma_i], and exactly 0 above.
/// The anchor shares the branch-1 stream, so the two branches agree at 0
/// by construction. Requires |alpha| <= c_gamma.
Estimate estimate_phi(double alpha, double gamma_i, int k, std::int64_t samples,
                      std::uint64_t seed, int threads = 1,
                      double c_gamma = margins::kDefaultLiftScale);

/// Mirror of estimate_phi: zero for alpha <= 0, (alpha / gamma_i) times the
/// alpha = gamma_i anchor of Pr[snapped margin <= gamma_i/2] on
/// (0, gamma_i], and the Monte Carlo probability above gamma_i.
Estimate estimate_rho(double alpha, double gamma_i, int k, std::int64_t samples,
                      std::uint64_t seed, int threads = 1,
                      double c_gamma = margins::kDefaultLiftScale);

struct LipschitzParams {
  double gamma_i = 0.2;
  int k = 4096;
  double step = 0.01;        // finite-difference half-step h
  std::int64_t samples = 20000;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Scales the slope budget; < 1 is the self-test inversion knob.
  double threshold_scale = 1.0;
  double c_gamma = margins::kDefaultLiftScale;
};

/// Finite-difference slopes of phi and rho over their three branches must
/// stay below kTailSlack exp(-gamma_i^2 k / kTailSlack) (sqrt(k) + 1/gamma_i)
/// plus a 3 sigma allowance. The interpolation-branch slope is anchor /
/// gamma_i exactly and the flat branch is exactly 0. Metrics whose Monte
/// Carlo noise exceeds 10% of the budget report inconclusive, not fail.
/// Requires k >= 72 ln(2) / gamma_i^2.
CheckReport check_lipschitz(const LipschitzParams& params);

struct ChiSquareTailParams {
  int k = 100;
  double x = 0.5;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Empirical Pr[|Y/k - 1| >= x] for Y ~ chi^2_k against 2 exp(-k x^2 / 8),
/// plus the mean check E[Y/k] = 1, each with 3 sigma allowance. The bound
/// is only guaranteed for x in (0, 1); feeding x well outside is the
/// deliberate inversion.
CheckReport check_chi_square_tail(const ChiSquareTailParams& params);

struct BernsteinParams {
  double gamma = 0.0;
  int n = 1000;
  double delta = 0.1;
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Scales the concentration threshold; < 1 is the inversion knob.
  double threshold_scale = 1.0;
};

/// Bernstein concentration of the projected margin loss: resampling
/// S ~ D^n, the frequency of |L_AD - L_AS| exceeding
/// sqrt(8 L_AD ln(1/delta) / n) + 2 ln(1/delta) / n must stay below
/// delta + 3 sigma. The hypothesis w lives in the projected space and need
/// not be unit norm.
CheckReport check_bernstein_margin(const DiscreteDistribution& dist,
                                   const Eigen::VectorXd& w,
                                   const discretize::DiscretizationDraw& draw,
                                   const BernsteinParams& params);

struct SandwichParams {
  double gamma_i = 0.1;
  double gamma = 0.15;  // intended range (gamma_i, 2 gamma_i]
  int k = 256;
  std::int64_t samples = 2000;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// The four surrogate inequalities: expectations of the joint
/// snap-and-margin events over (A, t) sandwiched by the phi / rho
/// expectations over the distribution and the sample, each within 3 sigma
/// of combined standard error. Data must live in the lifted space
/// (unit-norm points). gamma below gamma_i breaks the sample-side phi
/// inequality by design and serves as the inversion.
CheckReport check_phirho_sandwich(const DiscreteDistribution& dist,
                                  const Sample& sample, const UnitVector& w,
                                  const SandwichParams& params);

}  // namespace mbl::verify
