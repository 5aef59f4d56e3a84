#pragma once

#include <cstdint>
#include <vector>

#include "mbl/types.hpp"

namespace mbl::learn {

struct LearnerConfig {
  double target_margin = 0.0;  // gamma the trainer tries to clear
  int max_epochs = 200;        // >= 1
  std::uint64_t seed = 0;      // per-epoch visiting order
};

struct TrainResult {
  UnitVector hypothesis;
  std::int64_t updates = 0;
  bool converged = false;  // no margin violation in a full pass
};

/// Margin perceptron: update w <- w + y x on any point with
/// y<w, x> <= gamma ||w|| until none remains or the epoch budget runs out,
/// then return w normalized (on budget exhaustion, the best epoch-end
/// hypothesis by empirical margin loss at gamma). Zero points are skipped.
TrainResult margin_perceptron(const Sample& sample, const LearnerConfig& cfg);

struct GapRow {
  double margin_loss;    // L^gamma_S(w)
  double true_loss;      // L_D(w), exact
  double gap;            // true_loss - margin_loss
  double bartlett_hard;  // NaN unless margin_loss == 0
  double bartlett_soft;
  double mcallester;
  double sota;
  double tight;
};

struct GapQuantile {
  double q;
  double gap;
  double margin_loss;
  double true_loss;
};

struct GapTable {
  std::vector<GapRow> rows;
  std::vector<GapQuantile> quantiles;
};

/// Per trial: S ~ D^n, w = margin_perceptron(S), then the empirical loss,
/// the exact loss under D and every upper-bound value at that loss.
/// Deterministic under (seed, trial); quantiles summarize the gap.
GapTable gap_vs_bounds(const DiscreteDistribution& dist, int n, double gamma,
                       double delta, int trials, std::uint64_t seed,
                       double c = 1.0, int max_epochs = 200, int threads = 1);

struct PlantedDistribution {
  DiscreteDistribution dist;
  UnitVector normal;
  double planted_margin;
};

/// Finite support of points with |<w*, x>| >= margin and labels
/// y = sign(<w*, x>): linearly separable with the planted margin.
PlantedDistribution make_planted_margin_distribution(int dim, int support,
                                                     double margin,
                                                     std::uint64_t seed);

/// Draws n points i.i.d. from a discrete distribution.
Sample sample_from(const DiscreteDistribution& dist, int n, std::uint64_t seed);

}  // namespace mbl::learn
