#pragma once

#include <string>

#include "mbl/types.hpp"

namespace mbl::bounds {

enum class BoundKind {
  BartlettHard,
  BartlettSoft,
  McAllester,
  Sota,
  Tight,
  Lower,
};

std::string to_string(BoundKind kind);

/// ln(e/x) computed as 1 - ln(x); stable for tiny x.
double log_e_over(double x);

/// x * ln(e/x), extended continuously with 0 at x = 0.
double xlog_e_over(double x);

/// Hard-margin bound c * (ln^2(n) / (gamma^2 n) + ln(e/delta) / n).
/// Requires empirical_loss == 0.
double bartlett_hard(const BoundInputs& b);

/// Soft-margin bound L + c * sqrt(ln^2(n) / (gamma^2 n) + ln(e/delta) / n).
/// With rademacher_variant the ln^2(n) factor is replaced by 1.
double bartlett_soft(const BoundInputs& b, bool rademacher_variant = false);

/// First-order tradeoff
/// L + c * (sqrt(L ln(n) / (gamma^2 n)) + ln(n) / (gamma^2 n)
///          + sqrt((ln(n) + ln(e/delta)) / n)).
double mcallester(const BoundInputs& b);

/// L + c * (sqrt(L (ln(n)/(gamma^2 n) + ln(e/delta)/n))
///          + ln(n)/(gamma^2 n) + ln(e/delta)/n).
double sota(const BoundInputs& b);

/// L + c * (sqrt(L (ln(e/L)/(gamma^2 n) + ln(e/delta)/n))
///          + ln(e gamma^2 n)/(gamma^2 n) + ln(e/delta)/n).
/// Requires gamma >= n^{-1/2}. At L = 0 the radical vanishes by the
/// continuity convention L ln(e/L) -> 0.
double tight(const BoundInputs& b);

/// Lower bound c * (sqrt(tau ln(e/tau) / (gamma^2 n)) + ln(gamma^2 n) / (gamma^2 n)).
///
/// The source statement uses one symbol both for the multiplier and for the
/// admissible range of gamma; they are separate knobs here: b.c multiplies
/// the bound, range_c constrains range_c * n^{-1/2} < gamma < 1 / range_c.
double lower(const BoundInputs& b, double tau, double range_c = 1.0);

/// Dispatch by kind; `tau` only feeds BoundKind::Lower.
double evaluate(BoundKind kind, const BoundInputs& b, double tau = 0.0);

}  // namespace mbl::bounds
