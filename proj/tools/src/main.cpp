#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mbl/parallel.hpp"
#include "mbltool/commands.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::int64_t trials = -1;
  int threads = 0;
  std::string check;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file");
  cmd->add_option("--out", flags.out_path, "output CSV path (default stdout)");
  cmd->add_option("--seed", flags.seed, "master seed")
      ->each([&](const std::string&) { flags.seed_given = true; });
  cmd->add_option("--trials", flags.trials, "override the primary trial count");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (speed only, never output)");
}

int dispatch(const std::string& command, const CommonFlags& flags) {
  mbltool::RunContext ctx;
  if (!flags.config_path.empty())
    ctx.config = mbltool::ConfigFile::parse_file(flags.config_path);
  ctx.seed = flags.seed_given
                 ? flags.seed
                 : static_cast<std::uint64_t>(ctx.config.get_int("run", "seed", 1));
  ctx.trials_override = flags.trials;
  ctx.threads = mbl::resolve_threads(
      flags.threads > 0 ? flags.threads
                        : static_cast<int>(ctx.config.get_int("run", "threads", 0)));
  ctx.check = flags.check;

  std::ofstream file;
  if (!flags.out_path.empty()) {
    file.open(flags.out_path, std::ios::binary);
    if (!file) {
      std::cerr << "mbl: cannot open output file " << flags.out_path << "\n";
      return mbltool::kExitUsage;
    }
  }
  std::ostream& out = flags.out_path.empty() ? std::cout : file;

  if (command == "bounds-table") return mbltool::run_bounds_table(ctx, out);
  if (command == "verify") return mbltool::run_verify(ctx, out);
  if (command == "lowerbound") return mbltool::run_lowerbound(ctx, out);
  if (command == "gap") return mbltool::run_gap(ctx, out);
  return mbltool::kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"margin bounds lab: bound tables, lemma checks, experiments"};
  app.require_subcommand(1);

  CommonFlags bounds_flags, verify_flags, lower_flags, gap_flags;
  CLI::App* bounds = app.add_subcommand(
      "bounds-table", "sweep the closed-form bound evaluators into CSV");
  add_common(bounds, bounds_flags);
  CLI::App* verify =
      app.add_subcommand("verify", "run one named verification check");
  add_common(verify, verify_flags);
  verify->add_option("--check", verify_flags.check, "check name");
  CLI::App* lower = app.add_subcommand(
      "lowerbound", "run the adversarial gap experiment");
  add_common(lower, lower_flags);
  CLI::App* gap = app.add_subcommand(
      "gap", "train hypotheses and compare observed gaps against the bounds");
  add_common(gap, gap_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mbltool::kExitUsage;
  }

  try {
    if (bounds->parsed()) return dispatch("bounds-table", bounds_flags);
    if (verify->parsed()) return dispatch("verify", verify_flags);
    if (lower->parsed()) return dispatch("lowerbound", lower_flags);
    if (gap->parsed()) return dispatch("gap", gap_flags);
  } catch (const mbltool::ConfigError& e) {
    std::cerr << "mbl: " << e.what() << "\n";
    return mbltool::kExitFail;
  } catch (const std::runtime_error& e) {
    std::cerr << "mbl: " << e.what() << "\n";
    return mbltool::kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "mbl: " << e.what() << "\n";
    return mbltool::kExitUsage;
  }
  return mbltool::kExitUsage;
}
