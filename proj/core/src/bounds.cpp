#include "mbl/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace mbl::bounds {

namespace {

double ln(double x) { return std::log(x); }

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::BartlettHard: return "bartlett_hard";
    case BoundKind::BartlettSoft: return "bartlett_soft";
    case BoundKind::McAllester: return "mcallester";
    case BoundKind::Sota: return "sota";
    case BoundKind::Tight: return "tight";
    case BoundKind::Lower: return "lower";
  }
  throw std::logic_error("to_string: unknown BoundKind");
}

double log_e_over(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_e_over: x must be positive");
  return 1.0 - std::log(x);
}

double xlog_e_over(double x) {
  if (x < 0.0) throw std::domain_error("xlog_e_over: x must be nonnegative");
  if (x == 0.0) return 0.0;
  return x * (1.0 - std::log(x));
}

double bartlett_hard(const BoundInputs& b) {
  b.validate();
  if (b.empirical_loss != 0.0)
    throw std::domain_error("bartlett_hard: requires empirical_loss == 0");
  const double n = static_cast<double>(b.n);
  const double lnn = ln(n);
  return b.c * (lnn * lnn / (b.gamma * b.gamma * n) + log_e_over(b.delta) / n);
}

double bartlett_soft(const BoundInputs& b, bool rademacher_variant) {
  b.validate();
  const double n = static_cast<double>(b.n);
  const double lnn = ln(n);
  const double log_term = rademacher_variant ? 1.0 : lnn * lnn;
  return b.empirical_loss +
         b.c * std::sqrt(log_term / (b.gamma * b.gamma * n) +
                         log_e_over(b.delta) / n);
}

double mcallester(const BoundInputs& b) {
  b.validate();
  const double n = static_cast<double>(b.n);
  const double lnn = ln(n);
  const double g2n = b.gamma * b.gamma * n;
  return b.empirical_loss +
         b.c * (std::sqrt(b.empirical_loss * lnn / g2n) + lnn / g2n +
                std::sqrt((lnn + log_e_over(b.delta)) / n));
}

double sota(const BoundInputs& b) {
  b.validate();
  const double n = static_cast<double>(b.n);
  const double lnn = ln(n);
  const double g2n = b.gamma * b.gamma * n;
  return b.empirical_loss +
         b.c * (std::sqrt(b.empirical_loss *
                          (lnn / g2n + log_e_over(b.delta) / n)) +
                lnn / g2n + log_e_over(b.delta) / n);
}

double tight(const BoundInputs& b) {
  b.validate();
  const double n = static_cast<double>(b.n);
  if (b.gamma < 1.0 / std::sqrt(n))
    throw std::domain_error("tight: requires gamma >= n^{-1/2}");
  const double g2n = b.gamma * b.gamma * n;
  const double L = b.empirical_loss;
  const double radical = xlog_e_over(L) / g2n + L * log_e_over(b.delta) / n;
  return L + b.c * (std::sqrt(radical) + ln(M_E * g2n) / g2n +
                    log_e_over(b.delta) / n);
}

double lower(const BoundInputs& b, double tau, double range_c) {
  b.validate();
  if (tau < 0.0 || tau > 1.0)
    throw std::domain_error("lower: tau must lie in [0, 1]");
  if (!(range_c > 0.0)) throw std::domain_error("lower: range_c must be positive");
  const double n = static_cast<double>(b.n);
  if (!(b.gamma > range_c / std::sqrt(n)) || !(b.gamma < 1.0 / range_c))
    throw std::domain_error(
        "lower: requires range_c * n^{-1/2} < gamma < 1 / range_c");
  const double g2n = b.gamma * b.gamma * n;
  return b.c * (std::sqrt(xlog_e_over(tau) / g2n) + ln(g2n) / g2n);
}

double evaluate(BoundKind kind, const BoundInputs& b, double tau) {
  switch (kind) {
    case BoundKind::BartlettHard: return bartlett_hard(b);
    case BoundKind::BartlettSoft: return bartlett_soft(b);
    case BoundKind::McAllester: return mcallester(b);
    case BoundKind::Sota: return sota(b);
    case BoundKind::Tight: return tight(b);
    case BoundKind::Lower: return lower(b, tau);
  }
  throw std::logic_error("evaluate: unknown BoundKind");
}

}  // namespace mbl::bounds
