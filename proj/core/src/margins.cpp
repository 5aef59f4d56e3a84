#include "mbl/margins.hpp"

#include <cmath>
#include <stdexcept>

namespace mbl::margins {

namespace {

double raw_margin(const Eigen::VectorXd& w, const LabeledPoint& p) {
  if (w.size() != p.x.size())
    throw std::invalid_argument("margin: dimension mismatch between w and x");
  return static_cast<double>(p.y) * w.dot(p.x);
}

}  // namespace

int sign3(double v) { return (v > 0.0) - (v < 0.0); }

double margin(const UnitVector& w, const LabeledPoint& p) {
  return raw_margin(w.coords(), p);
}

double margin_loss_sample(const Eigen::VectorXd& w, const Sample& s,
                          double gamma) {
  std::size_t losses = 0;
  for (const auto& p : s.points())
    if (raw_margin(w, p) <= gamma) ++losses;
  return static_cast<double>(losses) / static_cast<double>(s.size());
}

double margin_loss_sample(const UnitVector& w, const Sample& s, double gamma) {
  return margin_loss_sample(w.coords(), s, gamma);
}

double margin_loss_dist(const Eigen::VectorXd& w, const DiscreteDistribution& d,
                        double gamma) {
  double mass = 0.0;
  for (const auto& [point, weight] : d.support())
    if (raw_margin(w, point) <= gamma) mass += weight;
  return mass;
}

double margin_loss_dist(const UnitVector& w, const DiscreteDistribution& d,
                        double gamma) {
  return margin_loss_dist(w.coords(), d, gamma);
}

double true_loss(const UnitVector& w, const DiscreteDistribution& d) {
  double mass = 0.0;
  for (const auto& [point, weight] : d.support()) {
    if (w.coords().size() != point.x.size())
      throw std::invalid_argument("true_loss: dimension mismatch");
    if (sign3(w.coords().dot(point.x)) != point.y) mass += weight;
  }
  return mass;
}

Eigen::VectorXd lift_point(const Eigen::VectorXd& x, double scale) {
  if (!(scale > 0.0) || !(scale < 1.0))
    throw std::invalid_argument("lift_point: scale must lie in (0, 1)");
  const double norm2 = x.squaredNorm();
  if (norm2 > 1.0 + 2.0 * kUnitNormTolerance)
    throw std::invalid_argument("lift_point: ||x|| exceeds 1");
  Eigen::VectorXd out(x.size() + 1);
  out.head(x.size()) = scale * x;
  out[x.size()] = std::sqrt(std::max(0.0, 1.0 - scale * scale * norm2));
  return out;
}

UnitVector lift_hypothesis(const UnitVector& w) {
  Eigen::VectorXd out(w.dim() + 1);
  out.head(w.dim()) = w.coords();
  out[w.dim()] = 0.0;
  return UnitVector(out);
}

LabeledPoint lift_labeled_point(const LabeledPoint& p, double scale) {
  return LabeledPoint(lift_point(p.x, scale), p.y);
}

Sample lift_sample(const Sample& s, double scale) {
  std::vector<LabeledPoint> lifted;
  lifted.reserve(s.size());
  for (const auto& p : s.points()) lifted.push_back(lift_labeled_point(p, scale));
  return Sample(std::move(lifted));
}

DiscreteDistribution lift_distribution(const DiscreteDistribution& d,
                                       double scale) {
  std::vector<DiscreteDistribution::Entry> support;
  support.reserve(d.size());
  for (const auto& [point, weight] : d.support())
    support.emplace_back(lift_labeled_point(point, scale), weight);
  return DiscreteDistribution(std::move(support));
}

}  // namespace mbl::margins
