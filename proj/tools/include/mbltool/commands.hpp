#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "mbltool/config.hpp"

namespace mbltool {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitUsage = 64;

struct RunContext {
  ConfigFile config;
  std::uint64_t seed = 1;
  std::int64_t trials_override = -1;  // < 0 means "use config/default"
  int threads = 1;
  std::string check;  // verify only
};

int run_bounds_table(const RunContext& ctx, std::ostream& out);
int run_verify(const RunContext& ctx, std::ostream& out);
int run_lowerbound(const RunContext& ctx, std::ostream& out);
int run_gap(const RunContext& ctx, std::ostream& out);

}  // namespace mbltool
