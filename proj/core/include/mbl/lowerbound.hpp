#pragma once

#include <cstdint>
#include <vector>

#include "mbl/types.hpp"

namespace mbl::lowerbound {

/// Configuration of the adversarial distribution: `levels` point classes
/// X_1..X_k where X_i holds 2^i / tau_i points (which must be integral).
/// The ambient dimension is levels + total support size.
struct LowerBoundConfig {
  int levels = 1;
  std::vector<double> tau;  // tau[i-1] in (0, 1] for level i

  void validate() const;
  std::int64_t level_size(int level) const;   // |X_level| = 2^level / tau
  std::int64_t support_size() const;          // m
  int dimension() const;                      // levels + m
  std::int64_t level_offset(int level) const; // global index of X_level[0]
};

/// Picks the error set: a level i in [1, levels] and |T| = 2^i member
/// indices (local to X_i, unique, ascending).
struct WitnessSpec {
  int level = 1;
  std::vector<std::int64_t> members;

  void validate(const LowerBoundConfig& cfg) const;
};

/// Uniform distribution over all points, every label +1. Each point carries
/// the shared head (2^{-(j+3)/2})_{j=1..levels} in its first `levels`
/// coordinates and 1/sqrt(2) in its own designated coordinate.
DiscreteDistribution build_distribution(const LowerBoundConfig& cfg);

/// Margin threshold gamma_i = 2^{-(i+4)/2} attached to level i.
double gamma_level(int level);

/// The witness hyperplane: 1/sqrt(2) on head coordinate i, -1/sqrt(2^{i+1})
/// on the designated coordinate of every x in T, zero elsewhere. Exactly
/// unit norm; <w, x> = gamma_i off T and -gamma_i on T.
UnitVector witness(const LowerBoundConfig& cfg, const WitnessSpec& spec);

/// Mass the witness misclassifies: |T| / m = 2^level / m.
double level_true_loss(const LowerBoundConfig& cfg, int level);

/// How the empirical margin loss treats points whose margin is exactly
/// gamma_i: Shrunk evaluates at gamma_i (1 - 1e-9) so margin-gamma_i points
/// do not count as losses; Strict uses gamma_i with the closed comparison,
/// under which every point counts and the loss is identically 1.
enum class MarginMode { Shrunk, Strict };

struct GapTrialRow {
  double margin_loss;  // L^gamma_S(witness)
  double true_loss;    // L_D(witness), exact
  double gap;          // true_loss - margin_loss
  bool t_disjoint;     // T never appeared in S
};

struct GapExperimentResult {
  std::vector<GapTrialRow> rows;
  int level = 1;
  double gamma = 0.0;           // gamma_i of the level
  double gamma_evaluated = 0.0; // threshold actually used for the loss
  MarginMode mode = MarginMode::Shrunk;
  double preflight_margin_error = 0.0;  // max |<w,x> - gamma_i| over x not in T
};

/// Per trial: draw S ~ D^n, pick T as the 2^level least represented points
/// of X_level (ties by index), build the witness and report the loss gap.
GapExperimentResult gap_experiment(const LowerBoundConfig& cfg, int level,
                                   int n, int trials, std::uint64_t seed,
                                   MarginMode mode = MarginMode::Shrunk,
                                   int threads = 1);

}  // namespace mbl::lowerbound
