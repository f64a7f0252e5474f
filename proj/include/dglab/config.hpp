#pragma once

#include "dglab/evolution.hpp"
#include "dglab/gauge.hpp"

namespace dglab {

/// Fully resolved run configuration.  parse_config applies and echoes the
/// defaults (hbar = m = 1, epsilon = 1e-12, box-centre initial data), so a
/// parsed config always carries concrete values for every key.
struct RunConfig {
  // grid
  int dim = 1;
  int n = 256;
  int n_y = 256;
  double length = 40.0;
  double length_y = 40.0;
  // physics
  double hbar = 1.0;
  double mass = 1.0;
  double D = 0.0;
  double Dprime = 0.0;
  std::array<double, 5> c = {0.0, 0.0, 0.0, 0.0, 0.0};
  std::string potential = "none";
  std::string r3_variant = "current";  // current | divergence
  // initial
  std::string initial_kind = "gaussian";  // gaussian | plane-wave | file
  double sigma = 1.0, sigma_y = 1.0;
  double x0 = -1.0, x0_y = -1.0;  // negative: resolved to the box centre
  double k0 = 0.0, k0_y = 0.0;
  int mode = 1, mode_y = 0;  // plane-wave harmonics
  std::string initial_file;
  // time
  double dt = 1e-3;
  long steps = 1000;
  long record_every = 10;
  std::string scheme = "strang";  // strang | rk4
  // regularisation
  double epsilon = 1e-12;
  // output
  std::string csv = "observables.csv";
  std::string snapshot_prefix;  // empty: no snapshot files
  long snapshot_every = 0;      // in record units; 0: final state only
  std::string snapshot_format = "wf";  // wf | json
  // run
  std::uint64_t seed = 42;
  // gauge
  double gauge_kappa = 0.0;
  double gauge_gamma = 0.0;
  double gauge_lambda = 1.0;
  double gauge_theta = 0.0;
  double gauge_amp = 1.0;
  double gauge_tolerance = 1e-4;

  bool operator==(const RunConfig&) const = default;

  GridSpec grid() const;
  DGParams params() const;  // parses the potential expression on grid()
  InitialSpec initial() const;
  Schedule schedule() const;
  Regularisation regularisation() const;
  Scheme scheme_enum() const;
  GaugeParams gauge() const;
};

/// Line-oriented format: UTF-8, '#' comments, one `section.key = value` per
/// line.  Unknown keys and constraint violations are rejected with the line
/// number; syntax errors in field expressions also carry a column.
/// Overrides are `section.key=value` strings applied after the file text.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});
RunConfig parse_config_file(const std::string& path,
                            const std::vector<std::string>& overrides = {});

/// Canonical echo of a resolved config; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& cfg);

}  // namespace dglab
