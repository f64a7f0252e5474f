#pragma once

#include <functional>

#include "dglab/functionals.hpp"

namespace dglab {

enum class Scheme { Strang, Rk4 };

/// Time-stepping plan.  steps == 0 is allowed and records only the initial
/// state.  record_every must divide the run into uniform recording intervals
/// for the continuity diagnostics to apply.
struct Schedule {
  double dt = 1e-3;
  long steps = 0;
  long record_every = 1;
};

struct ObsRow {
  double t = 0.0;
  double norm = 0.0;
  double mean_x = 0.0;   // axis-0 position expectation
  double mean_p = 0.0;   // axis-0 momentum expectation
  double sigma_x = 0.0;  // axis-0 position spread
  double energy = 0.0;   // <H> for D = D' = 0 runs, NaN otherwise
  double continuity_residual = 0.0;  // NaN on the first/last record
};

struct Trajectory {
  std::vector<WaveFunction> snapshots;  // every record_every steps, t increasing
  std::vector<ObsRow> observables;      // one row per snapshot
  WaveFunction final_state;
  double record_dt = 0.0;
};

/// Norm drift above 10% in a single step aborts the run: the singular
/// rho-denominators can blow up near nodes and garbage output helps nobody.
class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(long step, std::string why, WaveFunction last_good)
      : std::runtime_error(step >= 0
                               ? "instability at step " + std::to_string(step) + ": " + why
                               : "instability: " + why),
        step_index(step),
        reason(std::move(why)),
        last_good_state(std::move(last_good)) {}
  long step_index;
  std::string reason;
  WaveFunction last_good_state;
};

/// One integrator step.  Strang (default): half-step exact spectral kinetic
/// flow, a full step of the local potential+nonlinear phase taken with the
/// exponential midpoint rule, half-step kinetic.  Exact up to rounding for
/// the free linear equation.  Rk4: classical Runge-Kutta on dg_rhs, kept as a
/// cross-check.
WaveFunction step(const WaveFunction& psi, double dt, const DGParams& params,
                  const Regularisation& reg, Scheme scheme = Scheme::Strang);

/// Reusable stepper with precomputed kinetic phases and potential samples.
class Stepper {
 public:
  Stepper(const GridSpec& grid, const DGParams& params, const Regularisation& reg, double dt,
          Scheme scheme);
  /// Advances psi in place by dt; throws InstabilityError on norm blow-up.
  void advance(WaveFunction& psi) const;
  double dt() const { return dt_; }

 private:
  void advance_impl(WaveFunction& psi) const;
  GridSpec grid_;
  DGParams params_;
  Regularisation reg_;
  double dt_;
  Scheme scheme_;
  std::vector<cplx> kinetic_half_;   // exp(-i hbar |k|^2 dt / (4 m))
  std::vector<double> potential_;    // empty when V == 0
  std::vector<cplx> linear_local_;   // exp(-i V dt / hbar) for linear runs
};

using ObservableSink = std::function<void(const ObsRow&)>;

/// Deterministic time integration with observable recording.  Rows are
/// delivered to the sink in time order once the run (and the centred
/// continuity column) is complete.  Step errors are rethrown with the step
/// index attached.
Trajectory evolve(const WaveFunction& psi0, const Schedule& sched, const DGParams& params,
                  const Regularisation& reg, Scheme scheme = Scheme::Strang,
                  const ObservableSink& sink = {});

/// Continuity-law residual series r(t_i) = || d_t rho + div j0 - D Lap rho ||_2
/// with d_t rho by centred differences over recorded snapshots (interior
/// records only).  The probability flow obeys d_t rho = -div jD =
/// -div j0 + D Lap rho, so r -> 0 at second order in the recording interval.
std::vector<double> continuity_residual(const Trajectory& traj, const DGParams& params,
                                        const Regularisation& reg);

/// Least-squares order fit of log(err) against log(h).
struct OrderFit {
  double order = 0.0;
  double fit_residual = 0.0;  // max abs residual of the log-log fit
  bool monotone = true;       // errors decreased monotonically
  bool at_rounding_floor = false;  // finest error below 1e-12: report "spectral"
};
OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err);

struct ConvergenceProblem {
  GridSpec grid;
  InitialSpec init;
  DGParams params;
  Regularisation reg;
  Scheme scheme = Scheme::Strang;
  double T = 1.0;
  /// Analytic reference psi(grid, t); when absent a self-refined reference is
  /// used (time: dt_min/16; space: the finest grid restricted).
  std::function<WaveFunction(const GridSpec&, double)> reference;
};

OrderFit temporal_order(const ConvergenceProblem& prob, const std::vector<double>& dts);
OrderFit spatial_order(const ConvergenceProblem& prob, const std::vector<int>& ns, double dt);

struct ConvergenceReport {
  OrderFit temporal;
  OrderFit spatial;
};
ConvergenceReport convergence_order(const ConvergenceProblem& prob,
                                    const std::vector<double>& dts, const std::vector<int>& ns,
                                    double spatial_dt);

/// CSV: t,norm,mean_x,mean_p,sigma_x,energy,continuity_residual with 17
/// significant digits per value.
void write_observables_csv(const std::string& path, const std::vector<ObsRow>& rows);
ObsRow observables_of(const WaveFunction& psi, const DGParams& params);

}  // namespace dglab
