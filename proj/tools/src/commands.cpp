#include "mbltool/commands.hpp"

#include <cmath>
#include <iostream>
#include <limits>

#include "mbl/bounds.hpp"
#include "mbl/learn.hpp"
#include "mbl/lowerbound.hpp"
#include "mbl/margins.hpp"
#include "mbl/verify.hpp"
#include "mbltool/csv.hpp"

namespace mbltool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t run_hash(const RunContext& ctx, const std::string& command) {
  std::string canonical = ctx.config.serialize();
  canonical += "command=" + command + "\n";
  canonical += "seed=" + std::to_string(ctx.seed) + "\n";
  if (ctx.trials_override >= 0)
    canonical += "trials=" + std::to_string(ctx.trials_override) + "\n";
  if (!ctx.check.empty()) canonical += "check=" + ctx.check + "\n";
  return config_hash(canonical);
}

int usage_error(const std::string& message) {
  std::cerr << "mbl: " << message << "\n";
  return kExitUsage;
}

}  // namespace

int run_bounds_table(const RunContext& ctx, std::ostream& out) {
  const auto& cfg = ctx.config;
  const std::vector<double> gammas = cfg.get_double_list("sweep", "gamma", {0.1});
  const std::vector<double> ns = cfg.get_double_list("sweep", "n", {100});
  const std::vector<double> deltas = cfg.get_double_list("sweep", "delta", {0.05});
  const std::vector<double> losses = cfg.get_double_list("sweep", "loss", {0.0});
  const double c = cfg.get_double("constants", "c", 1.0);
  const double range_c = cfg.get_double("constants", "lower_range_c", 1.0);

  // Validate the whole grid before emitting anything.
  for (double gamma : gammas)
    for (double n : ns)
      for (double delta : deltas)
        for (double loss : losses) {
          mbl::BoundInputs b{gamma, static_cast<std::int64_t>(n), delta, loss, c};
          try {
            b.validate();
          } catch (const std::exception& e) {
            return usage_error(e.what());
          }
        }

  CsvWriter csv(out);
  csv.provenance("bounds-table", ctx.seed, run_hash(ctx, "bounds-table"));
  csv.header({"gamma", "n", "delta", "loss", "bartlett_hard", "bartlett_soft",
              "mcallester", "sota", "tight", "lower"});

  for (double gamma : gammas)
    for (double n : ns)
      for (double delta : deltas)
        for (double loss : losses) {
          mbl::BoundInputs b{gamma, static_cast<std::int64_t>(n), delta, loss, c};
          // Per-bound preconditions blank the cell rather than abort the sweep.
          double hard = kNaN, tight_v = kNaN, lower_v = kNaN;
          if (loss == 0.0) hard = mbl::bounds::bartlett_hard(b);
          const double sqrt_n = std::sqrt(static_cast<double>(b.n));
          if (gamma >= 1.0 / sqrt_n) tight_v = mbl::bounds::tight(b);
          if (gamma > range_c / sqrt_n && gamma < 1.0 / range_c)
            lower_v = mbl::bounds::lower(b, loss, range_c);
          csv.row({CsvWriter::format(gamma), CsvWriter::format(n),
                   CsvWriter::format(delta), CsvWriter::format(loss),
                   CsvWriter::format(hard),
                   CsvWriter::format(mbl::bounds::bartlett_soft(b)),
                   CsvWriter::format(mbl::bounds::mcallester(b)),
                   CsvWriter::format(mbl::bounds::sota(b)),
                   CsvWriter::format(tight_v), CsvWriter::format(lower_v)});
        }
  return kExitPass;
}

namespace {

/// Shared 3-point base distribution for the sandwich check: margins land in
/// each branch of phi/rho after lifting.
mbl::DiscreteDistribution sandwich_base_distribution(
    const std::vector<double>& lifted_margins, const std::vector<double>& weights) {
  if (lifted_margins.size() != weights.size() || lifted_margins.empty())
    throw std::runtime_error("sandwich: margins and weights must match and be nonempty");
  std::vector<mbl::DiscreteDistribution::Entry> entries;
  for (std::size_t i = 0; i < lifted_margins.size(); ++i) {
    const double base_margin = lifted_margins[i] / mbl::margins::kDefaultLiftScale;
    Eigen::VectorXd x(3);
    x << base_margin, 0.5, 0.0;
    entries.emplace_back(mbl::LabeledPoint(x, +1), weights[i]);
  }
  return mbl::DiscreteDistribution(std::move(entries));
}

mbl::verify::CheckReport dispatch_check(const RunContext& ctx,
                                        const std::string& name) {
  const auto& cfg = ctx.config;
  auto count = [&](const char* key, std::int64_t fallback) {
    return ctx.trials_override >= 0 ? ctx.trials_override
                                    : cfg.get_int("params", key, fallback);
  };

  if (name == "p-in-unit") {
    return mbl::verify::check_p_in_unit(count("trials", 1000000), ctx.seed);
  }
  if (name == "dist-determinism") {
    mbl::verify::DistDeterminismParams p;
    p.alpha = cfg.get_double("params", "alpha", 0.0);
    p.k = static_cast<int>(cfg.get_int("params", "k", 64));
    p.samples = count("samples", 100000);
    p.pairs = static_cast<int>(cfg.get_int("params", "pairs", 5));
    p.seed = ctx.seed;
    p.alpha_direct = cfg.get_double("params", "alpha_direct", kNaN);
    p.threads = ctx.threads;
    return mbl::verify::check_dist_determinism(p);
  }
  if (name == "monotonicity") {
    mbl::verify::MonotonicityParams p;
    p.k = static_cast<int>(cfg.get_int("params", "k", 512));
    p.gamma_i = cfg.get_double("params", "gamma_i", 0.1);
    p.alphas = cfg.get_double_list("params", "alphas",
                                   {0.0, 0.025, 0.05, 0.075, 0.1});
    p.samples = count("samples", 100000);
    p.seed = ctx.seed;
    p.threads = ctx.threads;
    return mbl::verify::check_monotonicity(p);
  }
  if (name == "lipschitz") {
    mbl::verify::LipschitzParams p;
    p.gamma_i = cfg.get_double("params", "gamma_i", 0.2);
    p.k = static_cast<int>(cfg.get_int("params", "k", 4096));
    p.step = cfg.get_double("params", "step", 0.01);
    p.samples = count("samples", 20000);
    p.seed = ctx.seed;
    p.threads = ctx.threads;
    p.threshold_scale = cfg.get_double("params", "threshold_scale", 1.0);
    return mbl::verify::check_lipschitz(p);
  }
  if (name == "chi-square-tail") {
    mbl::verify::ChiSquareTailParams p;
    p.k = static_cast<int>(cfg.get_int("params", "k", 100));
    p.x = cfg.get_double("params", "x", 0.5);
    p.trials = count("trials", 100000);
    p.seed = ctx.seed;
    p.threads = ctx.threads;
    return mbl::verify::check_chi_square_tail(p);
  }
  if (name == "bernstein") {
    const int dim = static_cast<int>(cfg.get_int("params", "dim", 12));
    const int support = static_cast<int>(cfg.get_int("params", "support", 40));
    const double margin = cfg.get_double("params", "margin", 0.15);
    const auto data_seed =
        static_cast<std::uint64_t>(cfg.get_int("params", "data_seed", 7));
    const int k = static_cast<int>(cfg.get_int("params", "k", 32));
    const auto planted =
        mbl::learn::make_planted_margin_distribution(dim, support, margin, data_seed);
    const auto draw = mbl::discretize::sample_draw(
        k, dim, mbl::derive_seed(ctx.seed, 0, 0, 7));
    // Hypothesis: the snapped projection of the planted normal, a vector the
    // discretization itself would produce.
    const Eigen::VectorXd w =
        mbl::discretize::snap(draw, planted.normal).realized();

    mbl::verify::BernsteinParams p;
    p.gamma = cfg.get_double("params", "gamma", 0.05);
    p.n = static_cast<int>(cfg.get_int("params", "n", 1000));
    p.delta = cfg.get_double("params", "delta", 0.1);
    p.trials = count("trials", 10000);
    p.seed = ctx.seed;
    p.threads = ctx.threads;
    p.threshold_scale = cfg.get_double("params", "threshold_scale", 1.0);
    return mbl::verify::check_bernstein_margin(planted.dist, w, draw, p);
  }
  if (name == "phirho-sandwich") {
    const auto margins_list =
        cfg.get_double_list("params", "margins", {-0.1, 0.05, 0.2});
    const auto weights = cfg.get_double_list("params", "weights", {0.4, 0.3, 0.3});
    const auto base = sandwich_base_distribution(margins_list, weights);
    const auto lifted = mbl::margins::lift_distribution(base);
    Eigen::VectorXd w0(3);
    w0 << 1.0, 0.0, 0.0;
    const auto w = mbl::margins::lift_hypothesis(mbl::UnitVector(w0));
    const int s_n = static_cast<int>(cfg.get_int("params", "sample_n", 50));
    const auto sample =
        mbl::learn::sample_from(lifted, s_n, mbl::derive_seed(ctx.seed, 0, 0, 8));

    mbl::verify::SandwichParams p;
    p.gamma_i = cfg.get_double("params", "gamma_i", 0.1);
    p.gamma = cfg.get_double("params", "gamma", 0.15);
    p.k = static_cast<int>(cfg.get_int("params", "k", 256));
    p.samples = count("samples", 2000);
    p.seed = ctx.seed;
    p.threads = ctx.threads;
    return mbl::verify::check_phirho_sandwich(lifted, sample, w, p);
  }
  throw std::domain_error("unknown check name: " + name);
}

}  // namespace

int run_verify(const RunContext& ctx, std::ostream& out) {
  std::string name = ctx.check;
  if (name.empty()) name = ctx.config.get_string("verify", "check", "");
  if (name.empty())
    return usage_error("verify: no check name (use --check or [verify] check=)");

  mbl::verify::CheckReport report;
  try {
    report = dispatch_check(ctx, name);
  } catch (const std::domain_error& e) {
    return usage_error(e.what());
  }

  CsvWriter csv(out);
  csv.provenance("verify", ctx.seed, run_hash(ctx, "verify"));
  csv.comment("check=" + report.name +
              " status=" + mbl::verify::to_string(report.status));
  csv.header({"check", "metric", "value", "stderr", "threshold", "pass",
              "status", "trials", "seed"});
  for (const auto& m : report.metrics) {
    csv.row({report.name, m.label, CsvWriter::format(m.value),
             CsvWriter::format(m.se), CsvWriter::format(m.threshold),
             CsvWriter::format(m.pass), mbl::verify::to_string(report.status),
             CsvWriter::format(report.trials), CsvWriter::format(report.seed)});
  }
  switch (report.status) {
    case mbl::verify::CheckReport::Status::Pass: return kExitPass;
    case mbl::verify::CheckReport::Status::Fail: return kExitFail;
    case mbl::verify::CheckReport::Status::Inconclusive: return kExitInconclusive;
  }
  return kExitFail;
}

int run_lowerbound(const RunContext& ctx, std::ostream& out) {
  const auto& cfg = ctx.config;
  mbl::lowerbound::LowerBoundConfig lb;
  lb.levels = static_cast<int>(cfg.get_int("lowerbound", "levels", 1));
  lb.tau = cfg.get_double_list("lowerbound", "tau", {0.5});
  const int level = static_cast<int>(cfg.get_int("lowerbound", "level", 1));
  const int n = static_cast<int>(cfg.get_int("lowerbound", "n", 2));
  const auto trials = static_cast<int>(
      ctx.trials_override >= 0 ? ctx.trials_override
                               : cfg.get_int("lowerbound", "trials", 100));
  const std::string mode_name =
      cfg.get_string("lowerbound", "margin_mode", "shrunk");
  mbl::lowerbound::MarginMode mode;
  if (mode_name == "shrunk") {
    mode = mbl::lowerbound::MarginMode::Shrunk;
  } else if (mode_name == "strict") {
    mode = mbl::lowerbound::MarginMode::Strict;
  } else {
    return usage_error("lowerbound: margin_mode must be shrunk or strict");
  }

  mbl::lowerbound::GapExperimentResult result;
  try {
    result = mbl::lowerbound::gap_experiment(lb, level, n, trials, ctx.seed,
                                             mode, ctx.threads);
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  }

  CsvWriter csv(out);
  csv.provenance("lowerbound", ctx.seed, run_hash(ctx, "lowerbound"));
  csv.comment("level=" + std::to_string(result.level) +
              " gamma=" + CsvWriter::format(result.gamma) +
              " gamma_evaluated=" + CsvWriter::format(result.gamma_evaluated) +
              " margin_mode=" + mode_name);
  csv.comment("preflight_max_margin_error=" +
              CsvWriter::format(result.preflight_margin_error));
  csv.header({"trial", "margin_loss", "true_loss", "gap", "t_disjoint"});
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& row = result.rows[i];
    csv.row({CsvWriter::format(static_cast<std::int64_t>(i)),
             CsvWriter::format(row.margin_loss), CsvWriter::format(row.true_loss),
             CsvWriter::format(row.gap), CsvWriter::format(row.t_disjoint)});
  }
  return kExitPass;
}

int run_gap(const RunContext& ctx, std::ostream& out) {
  const auto& cfg = ctx.config;
  const std::string kind = cfg.get_string("distribution", "kind", "planted");
  if (kind != "planted")
    return usage_error("gap: only distribution kind=planted is available");
  const int dim = static_cast<int>(cfg.get_int("distribution", "dim", 20));
  const int support = static_cast<int>(cfg.get_int("distribution", "support", 400));
  const double margin = cfg.get_double("distribution", "margin", 0.25);
  const auto data_seed =
      static_cast<std::uint64_t>(cfg.get_int("distribution", "data_seed", 7));

  const int n = static_cast<int>(cfg.get_int("experiment", "n", 500));
  const double gamma = cfg.get_double("experiment", "gamma", 0.2);
  const double delta = cfg.get_double("experiment", "delta", 0.1);
  const auto trials = static_cast<int>(
      ctx.trials_override >= 0 ? ctx.trials_override
                               : cfg.get_int("experiment", "trials", 1000));
  const double c = cfg.get_double("experiment", "c", 1.0);
  const int epochs = static_cast<int>(cfg.get_int("experiment", "epochs", 200));

  mbl::learn::GapTable table;
  try {
    const auto planted =
        mbl::learn::make_planted_margin_distribution(dim, support, margin, data_seed);
    table = mbl::learn::gap_vs_bounds(planted.dist, n, gamma, delta, trials,
                                      ctx.seed, c, epochs, ctx.threads);
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what());
  } catch (const std::domain_error& e) {
    return usage_error(e.what());
  }

  CsvWriter csv(out);
  csv.provenance("gap", ctx.seed, run_hash(ctx, "gap"));
  csv.header({"kind", "index", "quantile", "margin_loss", "true_loss", "gap",
              "bartlett_hard", "bartlett_soft", "mcallester", "sota", "tight"});
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    csv.row({"trial", CsvWriter::format(static_cast<std::int64_t>(i)), "",
             CsvWriter::format(r.margin_loss), CsvWriter::format(r.true_loss),
             CsvWriter::format(r.gap), CsvWriter::format(r.bartlett_hard),
             CsvWriter::format(r.bartlett_soft), CsvWriter::format(r.mcallester),
             CsvWriter::format(r.sota), CsvWriter::format(r.tight)});
  }
  for (const auto& q : table.quantiles) {
    csv.row({"quantile", "", CsvWriter::format(q.q),
             CsvWriter::format(q.margin_loss), CsvWriter::format(q.true_loss),
             CsvWriter::format(q.gap), "", "", "", "", ""});
  }
  return kExitPass;
}

}  // namespace mbltool
