#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mbl/rng.hpp"
#include "mbl/stats.hpp"
#include "mbl/types.hpp"

namespace mbl::discretize {

/// One realization of the random projection: a k x d matrix with i.i.d.
/// N(0, 1/k) entries and k rounding offsets uniform in [0, 1).
struct DiscretizationDraw {
  Eigen::MatrixXd A;
  Eigen::VectorXd offsets;

  int k() const { return static_cast<int>(A.rows()); }
  int d() const { return static_cast<int>(A.cols()); }
};

/// Deterministic given the seed: A is filled row-major, then the offsets.
DiscretizationDraw sample_draw(int k, int d, std::uint64_t seed);

/// Grid pitch (10 sqrt(k))^{-1}; coordinates live at odd multiples of half
/// the pitch, so no grid coordinate is ever zero.
double grid_pitch(int k);

/// Realized grid coordinate (1/2 + z) * pitch.
double grid_value(std::int64_t z, int k);

/// Down-rounding choice for a value v: z is the unique integer with
/// grid(z) <= v < grid(z+1) and p solves v = p grid(z) + (1-p) grid(z+1),
/// so rounding down with probability p leaves the coordinate unbiased.
/// p always lands in (0, 1].
struct RoundingChoice {
  std::int64_t z;
  double down_probability;
};
RoundingChoice rounding_probability(double v, int k);

/// A grid vector kept as its integer coordinates; realized values are
/// rematerialized on demand so grid membership never drifts.
struct GridVector {
  std::vector<std::int64_t> z;
  int k = 0;

  double coordinate(int i) const { return grid_value(z[i], k); }
  Eigen::VectorXd realized() const;
  /// Exact squared norm via integer arithmetic: sum (2z+1)^2 / (400 k).
  double squared_norm() const;
  double norm() const;
};

/// Randomized snap of a projected vector v (length k) to the grid:
/// coordinate i rounds down iff offsets[i] <= p(z_i). Per-coordinate error
/// stays below one pitch, so ||snap(v) - v||_2 <= 1/10 always.
GridVector snap_vector(const Eigen::VectorXd& v, const Eigen::VectorXd& offsets);

/// h_{A,t}(w): project w and snap.
GridVector snap(const DiscretizationDraw& draw, const UnitVector& w);

/// Smallest level i >= 0 with ||g||_2 <= 2^i * 4 (closed boundary); exact
/// integer comparison, no floating point.
int grid_level(const GridVector& g);

struct GridCount {
  std::uint64_t exact;     // lattice points in the level-i grid family
  double log2_bound;       // 2^{i+7} k
  bool within_bound;       // log2(exact) <= log2_bound
};

/// Exact lattice-point count of the level-i grid family by enumeration.
/// Only k in {1, 2, 3} (the count explodes otherwise); throws for larger k
/// or when the count would overflow.
GridCount grid_count(int k, int level);

/// One draw from the law of y<h_{A,t}(w), A x> given alpha = y<w, x> with
/// ||w|| = ||x|| = 1, via the dimension-free construction: X_i ~ N(0,1/k),
/// Y_i ~ N(0,(1-alpha^2)/k), Z = alpha X + Y, X' = snap of X with fresh
/// offsets; returns <X', Z>. Requires |alpha| <= 1.
double sample_margin(double alpha, int k, Rng& rng);
double sample_margin(double alpha, int k, std::uint64_t seed);

/// Monte Carlo estimate of Pr[|y<h,Ax> - alpha| > gamma] using the
/// dimension-free sampler; per-trial streams derived from (seed, trial).
Estimate estimate_preservation(double alpha, double gamma, int k,
                               std::int64_t trials, std::uint64_t seed,
                               int threads = 1);

/// Direct d-dimensional draw of y<h_{A,t}(w), A x> with a fresh (A, t);
/// the cross-check oracle for the dimension-free sampler.
double sample_margin_direct(const UnitVector& w, const LabeledPoint& p, int k,
                            Rng& rng);

}  // namespace mbl::discretize
