#include "mbl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mbl/parallel.hpp"
#include "mbl/rng.hpp"

namespace mbl::verify {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CheckReport::Status combine_status(const std::vector<CheckReport::Metric>& metrics,
                                   const std::vector<bool>& inconclusive = {}) {
  bool any_inconclusive = false;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const bool inc = i < inconclusive.size() && inconclusive[i];
    if (inc) {
      any_inconclusive = true;
      continue;
    }
    if (!metrics[i].pass) return CheckReport::Status::Fail;
  }
  return any_inconclusive ? CheckReport::Status::Inconclusive
                          : CheckReport::Status::Pass;
}

/// Bernoulli Monte Carlo with per-trial derived streams; `tag` separates
/// independent estimates under one master seed.
template <typename Predicate>
Estimate bernoulli_mc(std::int64_t samples, int threads, std::uint64_t seed,
                      std::uint64_t tag, Predicate&& predicate) {
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t s) {
    Rng rng(derive_seed(seed, s, tag));
    hits[s] = predicate(rng) ? 1 : 0;
  });
  std::int64_t total = 0;
  for (std::uint8_t h : hits) total += h;
  return bernoulli_estimate(total, samples);
}

// Estimate tags keep the sampler streams of different estimates disjoint.
enum SeedTag : std::uint64_t {
  kTagPhiBranch1 = 11,
  kTagPhiAnchor = 12,
  kTagRhoBranch1 = 13,
  kTagRhoAnchor = 14,
  kTagDirect = 21,
  kTagSampler = 22,
  kTagChi = 31,
  kTagBernstein = 41,
  kTagSandwichDraws = 51,
  kTagMonotone = 61,
};

}  // namespace

const char* to_string(CheckReport::Status status) {
  switch (status) {
    case CheckReport::Status::Pass: return "pass";
    case CheckReport::Status::Fail: return "fail";
    case CheckReport::Status::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

CheckReport check_p_in_unit(std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_p_in_unit: trials >= 1");
  Rng rng(seed);
  std::int64_t violations = 0;
  std::int64_t grid_hits = 0, midpoints = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    const int k = 1 + static_cast<int>(rng.below(4096));
    const auto mode = t % 3;
    double v;
    if (mode == 1) {  // exact grid point: expect p == 1
      const auto z = static_cast<std::int64_t>(rng.below(2001)) - 1000;
      v = discretize::grid_value(z, k);
    } else if (mode == 2) {  // midpoint: expect p == 0.5
      const auto z = static_cast<std::int64_t>(rng.below(2001)) - 1000;
      v = discretize::grid_value(z, k) + 0.5 * discretize::grid_pitch(k);
    } else {  // wide range
      v = (rng.uniform01() - 0.5) * 2.0 * std::pow(10.0, rng.uniform(-6.0, 5.0));
    }
    const auto [z, p] = discretize::rounding_probability(v, k);
    bool ok = p >= 0.0 && p <= 1.0;
    const double lo = discretize::grid_value(z, k);
    const double hi = discretize::grid_value(z + 1, k);
    ok = ok && lo <= v && v < hi;
    const double reconstructed = p * lo + (1.0 - p) * hi;
    ok = ok && std::fabs(reconstructed - v) <= 1e-12 * std::max(1.0, std::fabs(v));
    if (mode == 1) {
      ok = ok && p == 1.0;
      ++grid_hits;
    } else if (mode == 2) {
      ok = ok && std::fabs(p - 0.5) <= 1e-12;
      ++midpoints;
    }
    if (!ok) ++violations;
  }
  CheckReport report;
  report.name = "p-in-unit";
  report.trials = trials;
  report.seed = seed;
  report.metrics.push_back({"violations", static_cast<double>(violations), kNaN,
                            0.0, violations == 0});
  report.metrics.push_back({"grid_point_cases", static_cast<double>(grid_hits),
                            kNaN, kNaN, true});
  report.metrics.push_back({"midpoint_cases", static_cast<double>(midpoints),
                            kNaN, kNaN, true});
  report.status = combine_status(report.metrics);
  return report;
}

CheckReport check_dist_determinism(const DistDeterminismParams& params) {
  if (std::fabs(params.alpha) > 1.0)
    throw std::invalid_argument("check_dist_determinism: |alpha| <= 1 required");
  if (params.pairs < 1 || params.samples < 2)
    throw std::invalid_argument("check_dist_determinism: need pairs >= 1, samples >= 2");
  const double alpha_direct =
      std::isnan(params.alpha_direct) ? params.alpha : params.alpha_direct;

  static constexpr int kDims[] = {3, 7, 16, 33, 50};
  CheckReport report;
  report.name = "dist-determinism";
  report.trials = params.samples;
  report.seed = params.seed;

  for (int pair = 0; pair < params.pairs; ++pair) {
    // Distinct ambient configuration: dimension, rotation, label sign.
    const int d = kDims[pair % 5];
    const int y = pair % 2 == 0 ? +1 : -1;
    Rng setup(derive_seed(params.seed, static_cast<std::uint64_t>(pair), 0, 1));
    Eigen::VectorXd w(d), u(d);
    for (int i = 0; i < d; ++i) w[i] = setup.gaussian();
    w.normalize();
    for (int i = 0; i < d; ++i) u[i] = setup.gaussian();
    u -= u.dot(w) * w;
    u.normalize();
    const Eigen::VectorXd x =
        (alpha_direct * y) * w +
        std::sqrt(std::max(0.0, 1.0 - alpha_direct * alpha_direct)) * u;
    const UnitVector hypothesis(w);
    const LabeledPoint point(x, y);

    std::vector<double> direct(static_cast<std::size_t>(params.samples));
    parallel_for(direct.size(), params.threads, [&](std::size_t s) {
      Rng rng(derive_seed(params.seed, s, static_cast<std::uint64_t>(pair),
                          kTagDirect));
      direct[s] = discretize::sample_margin_direct(hypothesis, point, params.k, rng);
    });
    std::vector<double> reference(static_cast<std::size_t>(params.samples));
    parallel_for(reference.size(), params.threads, [&](std::size_t s) {
      Rng rng(derive_seed(params.seed, s, static_cast<std::uint64_t>(pair),
                          kTagSampler));
      reference[s] = discretize::sample_margin(params.alpha, params.k, rng);
    });

    const double d_stat = ks_statistic(std::move(direct), std::move(reference));
    const double p = ks_pvalue(d_stat, static_cast<std::size_t>(params.samples),
                               static_cast<std::size_t>(params.samples));
    CheckReport::Metric metric;
    metric.label = "pair" + std::to_string(pair) + "_dim" + std::to_string(d) +
                   "_ks_pvalue";
    metric.value = p;
    metric.se = kNaN;
    metric.threshold = kKsPValueFloor;
    metric.pass = p > kKsPValueFloor;
    report.metrics.push_back(metric);
  }
  report.status = combine_status(report.metrics);
  return report;
}

CheckReport check_monotonicity(const MonotonicityParams& params) {
  if (params.alphas.empty())
    throw std::invalid_argument("check_monotonicity: empty alpha grid");
  if (!(params.gamma_i > 0.0) ||
      params.gamma_i > margins::kDefaultLiftScale / 2.0)
    throw std::invalid_argument(
        "check_monotonicity: gamma_i must lie in (0, c_gamma/2]");
  for (double a : params.alphas)
    if (std::fabs(a) > 1.0)
      throw std::invalid_argument("check_monotonicity: |alpha| <= 1 required");

  const double threshold = params.gamma_i / 2.0;
  std::vector<Estimate> q(params.alphas.size());
  for (std::size_t j = 0; j < params.alphas.size(); ++j) {
    const double alpha = params.alphas[j];
    q[j] = bernoulli_mc(params.samples, params.threads,
                        derive_seed(params.seed, j, 0, kTagMonotone), kTagMonotone,
                        [&](Rng& rng) {
                          return discretize::sample_margin(alpha, params.k, rng) >
                                 threshold;
                        });
  }

  CheckReport report;
  report.name = "monotonicity";
  report.trials = params.samples;
  report.seed = params.seed;
  for (std::size_t j = 0; j < q.size(); ++j) {
    report.metrics.push_back({"q_alpha" + std::to_string(j), q[j].value, q[j].se,
                              kNaN, true});
  }
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    // Nondecreasing q (and its complement nonincreasing) within 3 pooled se.
    const double diff = q[j + 1].value - q[j].value;
    const double pooled = std::sqrt(q[j].se * q[j].se + q[j + 1].se * q[j + 1].se);
    const double allowance = kSigmaAllowance * pooled;
    report.metrics.push_back({"step" + std::to_string(j) + "_increase", diff,
                              pooled, -allowance, diff >= -allowance});
  }
  report.status = combine_status(report.metrics);
  return report;
}

namespace {

Estimate phi_anchor(double gamma_i, int k, std::int64_t samples,
                    std::uint64_t seed, int threads) {
  return bernoulli_mc(samples, threads, seed, kTagPhiAnchor, [&](Rng& rng) {
    return discretize::sample_margin(0.0, k, rng) > gamma_i / 2.0;
  });
}

Estimate rho_anchor(double gamma_i, int k, std::int64_t samples,
                    std::uint64_t seed, int threads) {
  return bernoulli_mc(samples, threads, seed, kTagRhoAnchor, [&](Rng& rng) {
    return discretize::sample_margin(gamma_i, k, rng) <= gamma_i / 2.0;
  });
}

void validate_surrogate_args(double alpha, double gamma_i, double c_gamma,
                             const char* who) {
  if (!(gamma_i > 0.0) || gamma_i > c_gamma)
    throw std::invalid_argument(std::string(who) +
                                ": gamma_i must lie in (0, c_gamma]");
  if (std::fabs(alpha) > c_gamma + 1e-12)
    throw std::invalid_argument(std::string(who) +
                                ": alpha must lie in [-c_gamma, c_gamma]");
}

}  // namespace

Estimate estimate_phi(double alpha, double gamma_i, int k, std::int64_t samples,
                      std::uint64_t seed, int threads, double c_gamma) {
  validate_surrogate_args(alpha, gamma_i, c_gamma, "estimate_phi");
  if (alpha > gamma_i) return {0.0, 0.0, 0};
  if (alpha <= 0.0) {
    return bernoulli_mc(samples, threads, seed, kTagPhiBranch1, [&](Rng& rng) {
      return discretize::sample_margin(alpha, k, rng) > gamma_i / 2.0;
    });
  }
  // Interpolation branch shares the alpha = 0 stream with branch 1, so the
  // two branches agree at 0 exactly.
  Estimate anchor = bernoulli_mc(samples, threads, seed, kTagPhiBranch1,
                                 [&](Rng& rng) {
                                   return discretize::sample_margin(0.0, k, rng) >
                                          gamma_i / 2.0;
                                 });
  const double coefficient = (gamma_i - alpha) / gamma_i;
  return {coefficient * anchor.value, coefficient * anchor.se, anchor.n};
}

Estimate estimate_rho(double alpha, double gamma_i, int k, std::int64_t samples,
                      std::uint64_t seed, int threads, double c_gamma) {
  validate_surrogate_args(alpha, gamma_i, c_gamma, "estimate_rho");
  if (alpha <= 0.0) return {0.0, 0.0, 0};
  if (alpha > gamma_i) {
    return bernoulli_mc(samples, threads, seed, kTagRhoBranch1, [&](Rng& rng) {
      return discretize::sample_margin(alpha, k, rng) <= gamma_i / 2.0;
    });
  }
  Estimate anchor = bernoulli_mc(samples, threads, seed, kTagRhoBranch1,
                                 [&](Rng& rng) {
                                   return discretize::sample_margin(gamma_i, k, rng) <=
                                          gamma_i / 2.0;
                                 });
  const double coefficient = alpha / gamma_i;
  return {coefficient * anchor.value, coefficient * anchor.se, anchor.n};
}

CheckReport check_lipschitz(const LipschitzParams& params) {
  const double g = params.gamma_i;
  if (!(g > 0.0) || g > params.c_gamma)
    throw std::invalid_argument("check_lipschitz: gamma_i in (0, c_gamma] required");
  const double min_k = kLipschitzMinKFactor * std::log(2.0) / (g * g);
  if (static_cast<double>(params.k) < min_k)
    throw std::domain_error("check_lipschitz: requires k >= 72 ln(2) / gamma_i^2");
  const double h = params.step;
  if (!(h > 0.0) || h >= g / 4.0)
    throw std::invalid_argument("check_lipschitz: step must lie in (0, gamma_i/4)");

  const double budget = params.threshold_scale * kTailSlack *
                        std::exp(-g * g * static_cast<double>(params.k) / kTailSlack) *
                        (std::sqrt(static_cast<double>(params.k)) + 1.0 / g);

  CheckReport report;
  report.name = "lipschitz";
  report.trials = params.samples;
  report.seed = params.seed;
  std::vector<bool> inconclusive;

  std::uint64_t estimate_id = 0;
  auto phi_at = [&](double alpha) {
    return estimate_phi(alpha, g, params.k, params.samples,
                        derive_seed(params.seed, estimate_id++), params.threads,
                        params.c_gamma);
  };
  auto rho_at = [&](double alpha) {
    return estimate_rho(alpha, g, params.k, params.samples,
                        derive_seed(params.seed, estimate_id++), params.threads,
                        params.c_gamma);
  };

  auto add_slope = [&](const std::string& label, const Estimate& lo,
                       const Estimate& hi) {
    const double slope = std::fabs(hi.value - lo.value) / (2.0 * h);
    const double se_slope =
        std::sqrt(hi.se * hi.se + lo.se * lo.se) / (2.0 * h);
    const double noise = (hi.se + lo.se) / h;
    const bool conclusive = noise < 0.1 * budget;
    report.metrics.push_back({label, slope, se_slope, budget,
                              slope <= budget + kSigmaAllowance * se_slope});
    inconclusive.push_back(!conclusive);
  };
  auto add_exact = [&](const std::string& label, double slope, double se) {
    report.metrics.push_back({label, slope, se, budget,
                              slope <= budget + kSigmaAllowance * se});
    inconclusive.push_back(false);
  };

  // Steep branch of phi: alpha in [-c_gamma, 0].
  const double lo_edge = -params.c_gamma + h;
  const double phi_probes[] = {lo_edge, -params.c_gamma / 2.0, -h};
  int idx = 0;
  for (double probe : phi_probes) {
    const Estimate lo = phi_at(probe - h);
    const Estimate hi = phi_at(probe + h);
    add_slope("phi_mc_slope" + std::to_string(idx++), lo, hi);
  }
  // Interpolation branch: the slope is the anchor over gamma_i, exactly.
  const Estimate anchor_phi =
      phi_anchor(g, params.k, params.samples,
                 derive_seed(params.seed, estimate_id++), params.threads);
  add_exact("phi_interp_slope", anchor_phi.value / g, anchor_phi.se / g);
  // Flat branch: exactly zero.
  {
    const Estimate a = phi_at(g + (params.c_gamma - g) / 3.0);
    const Estimate b = phi_at(g + 2.0 * (params.c_gamma - g) / 3.0);
    add_exact("phi_flat_slope",
              std::fabs(b.value - a.value) / ((params.c_gamma - g) / 3.0), 0.0);
  }

  // Steep branch of rho: alpha in (gamma_i, c_gamma].
  const double rho_probes[] = {g + 2.0 * h, (g + params.c_gamma) / 2.0,
                               params.c_gamma - h};
  idx = 0;
  for (double probe : rho_probes) {
    const Estimate lo = rho_at(probe - h);
    const Estimate hi = rho_at(probe + h);
    add_slope("rho_mc_slope" + std::to_string(idx++), lo, hi);
  }
  const Estimate anchor_rho =
      rho_anchor(g, params.k, params.samples,
                 derive_seed(params.seed, estimate_id++), params.threads);
  add_exact("rho_interp_slope", anchor_rho.value / g, anchor_rho.se / g);
  {
    const Estimate a = rho_at(-params.c_gamma / 2.0);
    const Estimate b = rho_at(-params.c_gamma / 4.0);
    add_exact("rho_flat_slope",
              std::fabs(b.value - a.value) / (params.c_gamma / 4.0), 0.0);
  }

  report.status = combine_status(report.metrics, inconclusive);
  return report;
}

CheckReport check_chi_square_tail(const ChiSquareTailParams& params) {
  if (params.k < 1 || !(params.x > 0.0))
    throw std::invalid_argument("check_chi_square_tail: k >= 1, x > 0 required");
  if (params.trials < 2)
    throw std::invalid_argument("check_chi_square_tail: trials >= 2 required");

  std::vector<double> normalized(static_cast<std::size_t>(params.trials));
  parallel_for(normalized.size(), params.threads, [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t, 0, kTagChi));
    double y = 0.0;
    for (int i = 0; i < params.k; ++i) {
      const double gi = rng.gaussian();
      y += gi * gi;
    }
    normalized[t] = y / static_cast<double>(params.k);
  });

  std::int64_t hits = 0;
  for (double v : normalized)
    if (std::fabs(v - 1.0) >= params.x) ++hits;
  const Estimate tail = bernoulli_estimate(hits, params.trials);
  const Estimate mean = mean_estimate(normalized);
  const double bound =
      2.0 * std::exp(-static_cast<double>(params.k) * params.x * params.x /
                     kChiSquareSlack);

  CheckReport report;
  report.name = "chi-square-tail";
  report.trials = params.trials;
  report.seed = params.seed;
  report.metrics.push_back({"tail_probability", tail.value, tail.se, bound,
                            tail.value <= bound + kSigmaAllowance * tail.se});
  report.metrics.push_back({"mean", mean.value, mean.se, 1.0,
                            std::fabs(mean.value - 1.0) <=
                                kSigmaAllowance * mean.se});
  report.status = combine_status(report.metrics);
  return report;
}

CheckReport check_bernstein_margin(const DiscreteDistribution& dist,
                                   const Eigen::VectorXd& w,
                                   const discretize::DiscretizationDraw& draw,
                                   const BernsteinParams& params) {
  if (params.n < 1 || params.trials < 1)
    throw std::invalid_argument("check_bernstein_margin: n, trials >= 1");
  if (!(params.delta > 0.0) || params.delta > 1.0)
    throw std::invalid_argument("check_bernstein_margin: delta in (0, 1]");
  if (w.size() != draw.k())
    throw std::invalid_argument("check_bernstein_margin: w must live in R^k");

  // Project the support once; only the margins matter afterwards.
  std::vector<double> margins_projected;
  std::vector<double> cumulative;
  margins_projected.reserve(dist.size());
  cumulative.reserve(dist.size());
  double loss_ad = 0.0;
  double acc = 0.0;
  for (const auto& [point, weight] : dist.support()) {
    if (point.x.size() != draw.d())
      throw std::invalid_argument("check_bernstein_margin: dimension mismatch");
    const double m = static_cast<double>(point.y) * w.dot(draw.A * point.x);
    margins_projected.push_back(m);
    if (m <= params.gamma) loss_ad += weight;
    acc += weight;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;

  const double log_inv_delta = std::log(1.0 / params.delta);
  const double n = static_cast<double>(params.n);
  const double threshold =
      params.threshold_scale *
      (std::sqrt(8.0 * loss_ad * log_inv_delta / n) + 2.0 * log_inv_delta / n);

  const Estimate violations =
      bernoulli_mc(params.trials, params.threads, params.seed, kTagBernstein,
                   [&](Rng& rng) {
                     std::int64_t losses = 0;
                     for (int i = 0; i < params.n; ++i) {
                       const double u = rng.uniform01();
                       const auto it = std::upper_bound(cumulative.begin(),
                                                        cumulative.end(), u);
                       const auto j = static_cast<std::size_t>(
                           std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                    static_cast<std::ptrdiff_t>(
                                                        cumulative.size() - 1)));
                       if (margins_projected[j] <= params.gamma) ++losses;
                     }
                     const double loss_as = static_cast<double>(losses) / n;
                     return std::fabs(loss_ad - loss_as) > threshold;
                   });

  CheckReport report;
  report.name = "bernstein";
  report.trials = params.trials;
  report.seed = params.seed;
  report.metrics.push_back({"projected_dist_loss", loss_ad, kNaN, kNaN, true});
  report.metrics.push_back({"concentration_threshold", threshold, kNaN, kNaN, true});
  report.metrics.push_back(
      {"violation_frequency", violations.value, violations.se,
       params.delta,
       violations.value <= params.delta + kSigmaAllowance * violations.se});
  report.status = combine_status(report.metrics);
  return report;
}

CheckReport check_phirho_sandwich(const DiscreteDistribution& dist,
                                  const Sample& sample, const UnitVector& w,
                                  const SandwichParams& params) {
  if (!(params.gamma_i > 0.0) || !(params.gamma >= 0.0))
    throw std::invalid_argument("check_phirho_sandwich: gamma_i > 0, gamma >= 0");
  if (params.samples < 2)
    throw std::invalid_argument("check_phirho_sandwich: samples >= 2");
  const int d = static_cast<int>(w.dim());
  for (const auto& [point, weight] : dist.support()) {
    (void)weight;
    if (point.x.size() != d)
      throw std::invalid_argument("check_phirho_sandwich: dimension mismatch");
  }

  const double half = params.gamma_i / 2.0;
  const double inv_n = 1.0 / static_cast<double>(sample.size());

  // Margins are fixed; only the draw (A, t) is random.
  std::vector<double> dist_margin(dist.size()), sample_margin_true(sample.size());
  for (std::size_t j = 0; j < dist.size(); ++j)
    dist_margin[j] = margins::margin(w, dist.support()[j].first);
  for (std::size_t j = 0; j < sample.size(); ++j)
    sample_margin_true[j] = margins::margin(w, sample.points()[j]);

  struct DrawEvents {
    double d_above_and_wrong;   // y<h,Ax> > gamma_i/2 and margin <= 0 (over D)
    double s_above_and_small;   // y<h,Ax> > gamma_i/2 and margin <= gamma (over S)
    double s_below_and_large;   // y<h,Ax> <= gamma_i/2 and margin > gamma (over S)
    double d_below_and_right;   // y<h,Ax> <= gamma_i/2 and margin > 0 (over D)
  };
  std::vector<DrawEvents> events(static_cast<std::size_t>(params.samples));
  parallel_for(events.size(), params.threads, [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t, 0, kTagSandwichDraws));
    const double sd = 1.0 / std::sqrt(static_cast<double>(params.k));
    Eigen::MatrixXd a(params.k, d);
    for (int i = 0; i < params.k; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = rng.gaussian(sd);
    Eigen::VectorXd offsets(params.k);
    for (int i = 0; i < params.k; ++i) offsets[i] = rng.uniform01();
    const Eigen::VectorXd h =
        discretize::snap_vector(a * w.coords(), offsets).realized();

    DrawEvents e{0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const auto& [point, weight] = dist.support()[j];
      const double v = static_cast<double>(point.y) * h.dot(a * point.x);
      if (v > half && dist_margin[j] <= 0.0) e.d_above_and_wrong += weight;
      if (v <= half && dist_margin[j] > 0.0) e.d_below_and_right += weight;
    }
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const auto& point = sample.points()[j];
      const double v = static_cast<double>(point.y) * h.dot(a * point.x);
      if (v > half && sample_margin_true[j] <= params.gamma)
        e.s_above_and_small += inv_n;
      if (v <= half && sample_margin_true[j] > params.gamma)
        e.s_below_and_large += inv_n;
    }
    events[t] = e;
  });

  auto collect = [&](auto member) {
    std::vector<double> values(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) values[i] = events[i].*member;
    return mean_estimate(values);
  };
  const Estimate lhs1 = collect(&DrawEvents::d_above_and_wrong);
  const Estimate lhs2 = collect(&DrawEvents::s_above_and_small);
  const Estimate lhs3 = collect(&DrawEvents::s_below_and_large);
  const Estimate lhs4 = collect(&DrawEvents::d_below_and_right);

  // phi / rho expectations; estimates are cached per distinct margin.
  std::map<double, Estimate> phi_cache, rho_cache;
  std::uint64_t estimate_id = 1000;
  auto phi_of = [&](double alpha) -> const Estimate& {
    auto it = phi_cache.find(alpha);
    if (it == phi_cache.end()) {
      it = phi_cache
               .emplace(alpha, estimate_phi(alpha, params.gamma_i, params.k,
                                            params.samples,
                                            derive_seed(params.seed, estimate_id++),
                                            params.threads))
               .first;
    }
    return it->second;
  };
  auto rho_of = [&](double alpha) -> const Estimate& {
    auto it = rho_cache.find(alpha);
    if (it == rho_cache.end()) {
      it = rho_cache
               .emplace(alpha, estimate_rho(alpha, params.gamma_i, params.k,
                                            params.samples,
                                            derive_seed(params.seed, estimate_id++),
                                            params.threads))
               .first;
    }
    return it->second;
  };

  auto weighted = [&](auto&& lookup, const std::vector<double>& margins_in,
                      const std::vector<double>& weights) {
    // Group weights by margin value so shared estimates combine exactly.
    std::map<double, double> weight_of;
    for (std::size_t j = 0; j < margins_in.size(); ++j)
      weight_of[margins_in[j]] += weights[j];
    double value = 0.0, var = 0.0;
    for (const auto& [alpha, weight] : weight_of) {
      const Estimate& e = lookup(alpha);
      value += weight * e.value;
      var += weight * weight * e.se * e.se;
    }
    return Estimate{value, std::sqrt(var), 0};
  };

  std::vector<double> dist_weights, sample_weights(sample.size(), inv_n);
  for (const auto& [point, weight] : dist.support()) {
    (void)point;
    dist_weights.push_back(weight);
  }
  const Estimate phi_d = weighted(phi_of, dist_margin, dist_weights);
  const Estimate phi_s = weighted(phi_of, sample_margin_true, sample_weights);
  const Estimate rho_s = weighted(rho_of, sample_margin_true, sample_weights);
  const Estimate rho_d = weighted(rho_of, dist_margin, dist_weights);

  CheckReport report;
  report.name = "phirho-sandwich";
  report.trials = params.samples;
  report.seed = params.seed;
  auto add_inequality = [&](const std::string& label, const Estimate& small,
                            const Estimate& large) {
    // pass iff small <= large within 3 sigma of combined standard error
    const double slack = small.value - large.value;
    const double se = std::sqrt(small.se * small.se + large.se * large.se);
    report.metrics.push_back(
        {label, slack, se, kSigmaAllowance * se, slack <= kSigmaAllowance * se});
  };
  add_inequality("dist_phi_upper", lhs1, phi_d);
  add_inequality("sample_phi_lower", phi_s, lhs2);
  add_inequality("sample_rho_upper", lhs3, rho_s);
  add_inequality("dist_rho_lower", rho_d, lhs4);
  report.status = combine_status(report.metrics);
  return report;
}

}  // namespace mbl::verify
