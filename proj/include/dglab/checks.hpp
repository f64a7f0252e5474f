#pragma once

#include <random>

#include "dglab/config.hpp"

namespace dglab {

/// Deterministic generators for property-style checks, seeded from the run
/// config so identical configs produce identical residual tables.
class RandomFields {
 public:
  explicit RandomFields(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  /// Trig polynomial with harmonics up to max_mode per axis, coefficients in
  /// [-amp, amp].
  TrigPoly trig_scalar(const GridSpec& grid, int max_mode, double amp);
  VectorFieldSpec trig_vector(const GridSpec& grid, int max_mode, double amp);
  /// Band-limited state: random spectrum supported on |m| <= max_mode with a
  /// smooth envelope, normalised.
  WaveFunction band_limited_state(const GridSpec& grid, int max_mode);
  /// Node-free state exp(a(x) + i b(x)) with small trig a, b; |psi| is bounded
  /// away from zero by construction.
  WaveFunction node_free_state(const GridSpec& grid, double amp = 0.3);

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

const std::vector<std::string>& check_suite_names();
/// Throws std::invalid_argument listing the suites for an unknown name.
CheckReport run_check_suite(const std::string& suite, const RunConfig& cfg);

CheckReport run_kinematics_suite(const RunConfig& cfg);
CheckReport run_dynamics_obstruction_suite(const RunConfig& cfg);
CheckReport run_gauge_equivalence_suite(const RunConfig& cfg);
CheckReport run_continuity_suite(const RunConfig& cfg);

/// Worker-thread cap: DG_LAB_THREADS when set (>= 1), else the hardware
/// concurrency.
int worker_cap();
/// Runs the tasks on at most worker_cap() threads and rethrows the first
/// failure.
void run_parallel(std::vector<std::function<void()>> tasks);

}  // namespace dglab
