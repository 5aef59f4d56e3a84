#pragma once

#include "mbl/types.hpp"

namespace mbl::margins {

/// Default embedding constant for lift_point / lift_hypothesis: the largest
/// value the downstream Lipschitz machinery tolerates.
inline constexpr double kDefaultLiftScale = 0.7071067811865475244;  // 1/sqrt(2)

/// Signed margin y<w, x>. Positive iff the halfspace classifies (x, y)
/// correctly. Throws on dimension mismatch.
double margin(const UnitVector& w, const LabeledPoint& p);

/// Fraction of sample points with margin <= gamma (closed comparison;
/// ties at the threshold count as losses), counting multiplicity.
double margin_loss_sample(const UnitVector& w, const Sample& s, double gamma);
double margin_loss_sample(const Eigen::VectorXd& w, const Sample& s, double gamma);

/// Exact probability mass of support points with margin <= gamma.
double margin_loss_dist(const UnitVector& w, const DiscreteDistribution& d,
                        double gamma);
double margin_loss_dist(const Eigen::VectorXd& w, const DiscreteDistribution& d,
                        double gamma);

/// Misclassification probability Pr[sign(<w,x>) != y]. sign(0) is a third
/// value, so zero-margin points always count as errors.
double true_loss(const UnitVector& w, const DiscreteDistribution& d);

/// Three-valued sign with sign(0) = 0.
int sign3(double v);

/// Maps x to (scale * x, sqrt(1 - scale^2 ||x||^2)): the image is exactly
/// unit-norm and the first dim(x) coordinates have norm <= scale, while
/// inner products against lifted hypotheses shrink by exactly `scale`.
/// Requires 0 < scale < 1 and ||x|| <= 1.
Eigen::VectorXd lift_point(const Eigen::VectorXd& x,
                           double scale = kDefaultLiftScale);

/// Appends a zero coordinate; classification is preserved exactly.
UnitVector lift_hypothesis(const UnitVector& w);

LabeledPoint lift_labeled_point(const LabeledPoint& p,
                                double scale = kDefaultLiftScale);
Sample lift_sample(const Sample& s, double scale = kDefaultLiftScale);
DiscreteDistribution lift_distribution(const DiscreteDistribution& d,
                                       double scale = kDefaultLiftScale);

}  // namespace mbl::margins
