#include "mbl/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mbl/margins.hpp"
#include "mbl/parallel.hpp"
#include "mbl/rng.hpp"

namespace mbl::lowerbound {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

Eigen::VectorXd point_vector(const LowerBoundConfig& cfg, std::int64_t global) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.dimension());
  for (int j = 1; j <= cfg.levels; ++j)
    x[j - 1] = std::exp2(-0.5 * static_cast<double>(j + 3));
  x[cfg.levels + global] = kInvSqrt2;
  return x;
}

}  // namespace

void LowerBoundConfig::validate() const {
  if (levels < 1)
    throw std::invalid_argument("LowerBoundConfig: levels must be >= 1");
  if (static_cast<int>(tau.size()) != levels)
    throw std::invalid_argument("LowerBoundConfig: need one tau per level");
  for (int i = 1; i <= levels; ++i) {
    const double t = tau[static_cast<std::size_t>(i - 1)];
    if (!(t > 0.0) || t > 1.0)
      throw std::invalid_argument("LowerBoundConfig: tau must lie in (0, 1]");
    const double count = std::exp2(i) / t;
    if (count > 1e7 || std::fabs(count - std::round(count)) > 1e-9)
      throw std::invalid_argument(
          "LowerBoundConfig: 2^i / tau_i must be a (moderate) positive integer");
  }
}

std::int64_t LowerBoundConfig::level_size(int level) const {
  return std::llround(std::exp2(level) / tau[static_cast<std::size_t>(level - 1)]);
}

std::int64_t LowerBoundConfig::support_size() const {
  std::int64_t m = 0;
  for (int i = 1; i <= levels; ++i) m += level_size(i);
  return m;
}

int LowerBoundConfig::dimension() const {
  return levels + static_cast<int>(support_size());
}

std::int64_t LowerBoundConfig::level_offset(int level) const {
  std::int64_t off = 0;
  for (int i = 1; i < level; ++i) off += level_size(i);
  return off;
}

void WitnessSpec::validate(const LowerBoundConfig& cfg) const {
  if (level < 1 || level > cfg.levels)
    throw std::invalid_argument("WitnessSpec: level out of range");
  const auto expected = static_cast<std::int64_t>(std::exp2(level));
  if (static_cast<std::int64_t>(members.size()) != expected)
    throw std::invalid_argument("WitnessSpec: |T| must equal 2^level");
  const std::int64_t size = cfg.level_size(level);
  std::int64_t prev = -1;
  for (std::int64_t idx : members) {
    if (idx <= prev || idx >= size)
      throw std::invalid_argument(
          "WitnessSpec: members must be ascending, unique, within the level");
    prev = idx;
  }
}

DiscreteDistribution build_distribution(const LowerBoundConfig& cfg) {
  cfg.validate();
  const std::int64_t m = cfg.support_size();
  const double weight = 1.0 / static_cast<double>(m);
  std::vector<DiscreteDistribution::Entry> support;
  support.reserve(static_cast<std::size_t>(m));
  for (std::int64_t g = 0; g < m; ++g)
    support.emplace_back(LabeledPoint(point_vector(cfg, g), +1), weight);
  return DiscreteDistribution(std::move(support));
}

double gamma_level(int level) {
  if (level < 1) throw std::invalid_argument("gamma_level: level must be >= 1");
  return std::exp2(-0.5 * static_cast<double>(level + 4));
}

UnitVector witness(const LowerBoundConfig& cfg, const WitnessSpec& spec) {
  cfg.validate();
  spec.validate(cfg);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(cfg.dimension());
  w[spec.level - 1] = kInvSqrt2;
  const double slot = -std::exp2(-0.5 * static_cast<double>(spec.level + 1));
  const std::int64_t offset = cfg.level_offset(spec.level);
  for (std::int64_t idx : spec.members)
    w[cfg.levels + offset + idx] = slot;
  return UnitVector(w);
}

double level_true_loss(const LowerBoundConfig& cfg, int level) {
  if (level < 1 || level > cfg.levels)
    throw std::invalid_argument("level_true_loss: level out of range");
  return std::exp2(level) / static_cast<double>(cfg.support_size());
}

GapExperimentResult gap_experiment(const LowerBoundConfig& cfg, int level,
                                   int n, int trials, std::uint64_t seed,
                                   MarginMode mode, int threads) {
  cfg.validate();
  if (level < 1 || level > cfg.levels)
    throw std::invalid_argument("gap_experiment: level out of range");
  if (n < 1) throw std::invalid_argument("gap_experiment: n must be >= 1");
  if (trials < 1) throw std::invalid_argument("gap_experiment: trials must be >= 1");

  const DiscreteDistribution dist = build_distribution(cfg);
  const std::int64_t m = cfg.support_size();
  const std::int64_t level_points = cfg.level_size(level);
  const std::int64_t offset = cfg.level_offset(level);
  const auto t_size = static_cast<std::int64_t>(std::exp2(level));
  const double gamma = gamma_level(level);

  GapExperimentResult result;
  result.level = level;
  result.gamma = gamma;
  result.mode = mode;
  result.gamma_evaluated =
      mode == MarginMode::Shrunk ? gamma * (1.0 - 1e-9) : gamma;

  // Exact-geometry preflight on an arbitrary witness.
  {
    WitnessSpec spec;
    spec.level = level;
    spec.members.resize(static_cast<std::size_t>(t_size));
    std::iota(spec.members.begin(), spec.members.end(), 0);
    const UnitVector w = witness(cfg, spec);
    double worst = 0.0;
    for (std::int64_t g = 0; g < m; ++g) {
      const bool in_t = g >= offset && g < offset + t_size;
      const double ip = w.coords().dot(dist.support()[static_cast<std::size_t>(g)].first.x);
      if (!in_t) worst = std::max(worst, std::fabs(ip - gamma));
    }
    result.preflight_margin_error = worst;
  }

  result.rows.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t trial) {
    Rng rng(derive_seed(seed, trial));

    std::vector<std::int64_t> counts(static_cast<std::size_t>(level_points), 0);
    std::vector<LabeledPoint> drawn;
    drawn.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto g = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(m)));
      drawn.push_back(dist.support()[static_cast<std::size_t>(g)].first);
      if (g >= offset && g < offset + level_points)
        ++counts[static_cast<std::size_t>(g - offset)];
    }
    const Sample sample(std::move(drawn));

    // T = the 2^level least represented points of X_level, ties by index.
    std::vector<std::int64_t> order(static_cast<std::size_t>(level_points));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int64_t a, std::int64_t b) {
                       return counts[static_cast<std::size_t>(a)] <
                              counts[static_cast<std::size_t>(b)];
                     });
    WitnessSpec spec;
    spec.level = level;
    spec.members.assign(order.begin(), order.begin() + t_size);
    std::sort(spec.members.begin(), spec.members.end());
    bool disjoint = true;
    for (std::int64_t idx : spec.members)
      if (counts[static_cast<std::size_t>(idx)] > 0) disjoint = false;

    const UnitVector w = witness(cfg, spec);
    GapTrialRow row;
    row.margin_loss =
        margins::margin_loss_sample(w, sample, result.gamma_evaluated);
    row.true_loss = margins::true_loss(w, dist);
    row.gap = row.true_loss - row.margin_loss;
    row.t_disjoint = disjoint;
    result.rows[trial] = row;
  });
  return result;
}

}  // namespace mbl::lowerbound
