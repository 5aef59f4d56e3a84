#include "mbl/types.hpp"

#include <cmath>
#include <stdexcept>

namespace mbl {

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() == 0)
    throw std::invalid_argument("UnitVector: empty coordinate vector");
  const double norm = coords_.norm();
  if (std::fabs(norm - 1.0) > kUnitNormTolerance)
    throw std::invalid_argument("UnitVector: norm deviates from 1 by more than 1e-9");
}

LabeledPoint::LabeledPoint(Eigen::VectorXd x_in, int y_in)
    : x(std::move(x_in)), y(y_in) {
  if (y != 1 && y != -1)
    throw std::invalid_argument("LabeledPoint: label must be -1 or +1");
  if (x.norm() > 1.0 + kUnitNormTolerance)
    throw std::invalid_argument("LabeledPoint: ||x|| exceeds 1");
}

Sample::Sample(std::vector<LabeledPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("Sample: needs at least one point");
}

DiscreteDistribution::DiscreteDistribution(std::vector<Entry> support)
    : support_(std::move(support)) {
  if (support_.empty())
    throw std::invalid_argument("DiscreteDistribution: empty support");
  double total = 0.0;
  for (const auto& [point, weight] : support_) {
    (void)point;
    if (!(weight > 0.0))
      throw std::invalid_argument("DiscreteDistribution: weights must be positive");
    total += weight;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteDistribution: weights must sum to 1");
}

void BoundInputs::validate() const {
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::domain_error("BoundInputs: gamma must lie in (0, 1]");
  if (n < 1) throw std::domain_error("BoundInputs: n must be >= 1");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::domain_error("BoundInputs: delta must lie in (0, 1]");
  if (empirical_loss < 0.0 || empirical_loss > 1.0)
    throw std::domain_error("BoundInputs: empirical_loss must lie in [0, 1]");
  if (!(c > 0.0)) throw std::domain_error("BoundInputs: c must be positive");
}

}  // namespace mbl
