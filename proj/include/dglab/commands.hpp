#pragma once

#include <iosfwd>
#include <optional>

#include "dglab/checks.hpp"

namespace dglab {

/// Exit codes shared by the CLI: 0 success, 1 configuration or usage error,
/// 2 instability abort, 3 residuals above tolerance.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitInstability = 2;
inline constexpr int kExitCheckFailed = 3;

int cmd_simulate(const RunConfig& cfg, bool dry_run, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& cfg, const std::string& suite, std::ostream& out,
              std::ostream& err);
int cmd_gauge(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_catalog(const std::optional<std::string>& name, bool list, bool as_json,
                std::ostream& out, std::ostream& err);
int cmd_plot_data(const std::string& path, std::ostream& out, std::ostream& err);

void print_check_report(const CheckReport& report, std::ostream& out);

}  // namespace dglab
