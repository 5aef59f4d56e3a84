#include "mbl/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mbl/bounds.hpp"
#include "mbl/margins.hpp"
#include "mbl/parallel.hpp"
#include "mbl/rng.hpp"
#include "mbl/stats.hpp"

namespace mbl::learn {

namespace {

std::size_t pick_index(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - cumulative.begin(),
                               static_cast<std::ptrdiff_t>(cumulative.size() - 1)));
}

std::vector<double> cumulative_weights(const DiscreteDistribution& dist) {
  std::vector<double> cumulative;
  cumulative.reserve(dist.size());
  double acc = 0.0;
  for (const auto& [point, weight] : dist.support()) {
    (void)point;
    acc += weight;
    cumulative.push_back(acc);
  }
  cumulative.back() = 1.0;
  return cumulative;
}

}  // namespace

TrainResult margin_perceptron(const Sample& sample, const LearnerConfig& cfg) {
  if (cfg.max_epochs < 1)
    throw std::invalid_argument("margin_perceptron: max_epochs must be >= 1");
  if (cfg.target_margin < 0.0)
    throw std::invalid_argument("margin_perceptron: target_margin must be >= 0");
  const auto& points = sample.points();
  const auto dim = points.front().x.size();
  for (const auto& p : points)
    if (p.x.size() != dim)
      throw std::invalid_argument("margin_perceptron: inconsistent dimensions");

  Rng rng(cfg.seed);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);

  std::int64_t updates = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best = w;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    // Fisher-Yates under our own stream; std::shuffle is not portable.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);

    bool updated = false;
    for (std::size_t idx : order) {
      const auto& p = points[idx];
      const double xnorm = p.x.norm();
      if (xnorm == 0.0) continue;  // degenerate point, no information
      const double score = static_cast<double>(p.y) * w.dot(p.x);
      if (score <= cfg.target_margin * w.norm()) {
        w += static_cast<double>(p.y) * p.x;
        ++updates;
        updated = true;
      }
    }
    if (!updated) {
      if (w.norm() == 0.0)
        throw std::invalid_argument("margin_perceptron: every point is zero");
      return {UnitVector(w / w.norm()), updates, true};
    }
    const double wnorm = w.norm();
    if (wnorm > 0.0) {
      const double loss = margins::margin_loss_sample(
          Eigen::VectorXd(w / wnorm), sample, cfg.target_margin);
      if (loss < best_loss) {
        best_loss = loss;
        best = w / wnorm;
      }
    }
  }
  if (!(best_loss < std::numeric_limits<double>::infinity()))
    throw std::invalid_argument("margin_perceptron: every point is zero");
  return {UnitVector(best), updates, false};
}

Sample sample_from(const DiscreteDistribution& dist, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_from: n must be >= 1");
  const std::vector<double> cumulative = cumulative_weights(dist);
  Rng rng(seed);
  std::vector<LabeledPoint> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    points.push_back(dist.support()[pick_index(cumulative, rng.uniform01())].first);
  return Sample(std::move(points));
}

GapTable gap_vs_bounds(const DiscreteDistribution& dist, int n, double gamma,
                       double delta, int trials, std::uint64_t seed, double c,
                       int max_epochs, int threads) {
  if (trials < 0) throw std::invalid_argument("gap_vs_bounds: trials >= 0");
  GapTable table;
  table.rows.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    const Sample s = sample_from(dist, n, derive_seed(seed, t, 1));
    LearnerConfig cfg;
    cfg.target_margin = gamma;
    cfg.max_epochs = max_epochs;
    cfg.seed = derive_seed(seed, t, 2);
    const TrainResult trained = margin_perceptron(s, cfg);

    GapRow row;
    row.margin_loss = margins::margin_loss_sample(trained.hypothesis, s, gamma);
    row.true_loss = margins::true_loss(trained.hypothesis, dist);
    row.gap = row.true_loss - row.margin_loss;

    BoundInputs inputs;
    inputs.gamma = gamma;
    inputs.n = n;
    inputs.delta = delta;
    inputs.empirical_loss = row.margin_loss;
    inputs.c = c;
    row.bartlett_hard = row.margin_loss == 0.0
                            ? bounds::bartlett_hard(inputs)
                            : std::numeric_limits<double>::quiet_NaN();
    row.bartlett_soft = bounds::bartlett_soft(inputs);
    row.mcallester = bounds::mcallester(inputs);
    row.sota = bounds::sota(inputs);
    row.tight = bounds::tight(inputs);
    table.rows[t] = row;
  });

  if (!table.rows.empty()) {
    std::vector<double> gaps, margin_losses, true_losses;
    for (const auto& row : table.rows) {
      gaps.push_back(row.gap);
      margin_losses.push_back(row.margin_loss);
      true_losses.push_back(row.true_loss);
    }
    std::sort(gaps.begin(), gaps.end());
    std::sort(margin_losses.begin(), margin_losses.end());
    std::sort(true_losses.begin(), true_losses.end());
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
      table.quantiles.push_back({q, quantile_sorted(gaps, q),
                                 quantile_sorted(margin_losses, q),
                                 quantile_sorted(true_losses, q)});
    }
  }
  return table;
}

PlantedDistribution make_planted_margin_distribution(int dim, int support,
                                                     double margin,
                                                     std::uint64_t seed) {
  if (dim < 1 || support < 1)
    throw std::invalid_argument("make_planted_margin_distribution: dim, support >= 1");
  if (!(margin > 0.0) || margin >= 1.0)
    throw std::invalid_argument("make_planted_margin_distribution: margin in (0, 1)");
  Rng rng(seed);
  Eigen::VectorXd normal(dim);
  for (int i = 0; i < dim; ++i) normal[i] = rng.gaussian();
  normal.normalize();

  std::vector<DiscreteDistribution::Entry> entries;
  entries.reserve(static_cast<std::size_t>(support));
  const double weight = 1.0 / static_cast<double>(support);
  while (static_cast<int>(entries.size()) < support) {
    // Uniform direction, radius biased toward the shell; keep points that
    // clear the planted margin on either side.
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.gaussian();
    x.normalize();
    x *= std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
    const double score = normal.dot(x);
    if (std::fabs(score) < margin) continue;
    entries.emplace_back(LabeledPoint(x, score > 0.0 ? +1 : -1), weight);
  }
  return {DiscreteDistribution(std::move(entries)), UnitVector(normal), margin};
}

}  // namespace mbl::learn
