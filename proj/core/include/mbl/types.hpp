#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace mbl {

inline constexpr double kUnitNormTolerance = 1e-9;

/// Hypothesis normal on the unit sphere. Construction enforces
/// | ||w|| - 1 | <= 1e-9; downstream code may assume exact unit norm.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);

  const Eigen::VectorXd& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }

 private:
  Eigen::VectorXd coords_;
};

/// A labeled data point (x, y) with ||x|| <= 1 and y in {-1, +1}.
struct LabeledPoint {
  LabeledPoint(Eigen::VectorXd x_in, int y_in);

  Eigen::VectorXd x;
  int y;
};

/// Ordered multiset of labeled points; uniform-draw semantics.
class Sample {
 public:
  explicit Sample(std::vector<LabeledPoint> points);

  const std::vector<LabeledPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<LabeledPoint> points_;
};

/// Finite-support distribution over labeled points. Weights are positive
/// and sum to 1 (within 1e-12), which makes every loss below exact.
class DiscreteDistribution {
 public:
  using Entry = std::pair<LabeledPoint, double>;

  explicit DiscreteDistribution(std::vector<Entry> support);

  const std::vector<Entry>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<Entry> support_;
};

/// Scalar inputs shared by all bound evaluators. The constant multiplier c
/// is an explicit input (default 1): none of the formulas pin it.
struct BoundInputs {
  double gamma = 0.1;        // margin, in (0, 1]
  std::int64_t n = 100;      // sample count, >= 1
  double delta = 0.05;       // failure probability, in (0, 1]
  double empirical_loss = 0; // margin loss fraction, in [0, 1]
  double c = 1.0;            // constant multiplier, > 0

  void validate() const;     // throws std::domain_error naming the field
};

}  // namespace mbl
