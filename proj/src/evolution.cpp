#include "dglab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace dglab {

namespace {

constexpr double kNormDriftLimit = 0.1;  // per-step abort threshold
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double l2_norm(const GridSpec& grid, const std::vector<double>& f) {
  double acc = 0.0;
  for (double x : f) acc += x * x;
  return std::sqrt(acc * grid.cell_volume());
}

}  // namespace

Stepper::Stepper(const GridSpec& grid, const DGParams& params, const Regularisation& reg,
                 double dt, Scheme scheme)
    : grid_(grid), params_(params), reg_(reg), dt_(dt), scheme_(scheme) {
  if (scheme_ == Scheme::Strang) {
    const auto k0 = grid.wavenumbers(0);
    const auto k1 = grid.dim == 2 ? grid.wavenumbers(1) : std::vector<double>{0.0};
    kinetic_half_.resize(grid.points());
    const double coef = -params.hbar * dt / (4.0 * params.mass);
    for (int i0 = 0; i0 < grid.n[0]; ++i0)
      for (int i1 = 0; i1 < grid.n[1]; ++i1) {
        const double k2 = k0[i0] * k0[i0] + (grid.dim == 2 ? k1[i1] * k1[i1] : 0.0);
        kinetic_half_[i0 * grid.n[1] + i1] = std::exp(cplx(0.0, coef * k2));
      }
  }
  if (params.has_potential()) {
    potential_ = params.potential.sample(grid);
    if (scheme_ == Scheme::Strang && params.is_linear()) {
      linear_local_.resize(potential_.size());
      for (size_t i = 0; i < potential_.size(); ++i)
        linear_local_[i] = std::exp(cplx(0.0, -potential_[i] * dt / params.hbar));
    }
  }
}

void Stepper::advance(WaveFunction& psi) const {
  const double norm_before = norm(psi);
  if (dt_ != 0.0) {
    try {
      advance_impl(psi);
    } catch (const InstabilityError&) {
      throw;
    } catch (const std::exception& e) {
      // inputs were finite at entry, so non-finite intermediates mean blow-up
      throw InstabilityError(-1, std::string("non-finite step: ") + e.what(), psi);
    }
  }
  psi.time += dt_;

  const double norm_after = norm(psi);
  if (!std::isfinite(norm_after) || std::abs(norm_after / norm_before - 1.0) > kNormDriftLimit)
    throw InstabilityError(-1,
                           "norm drift " + std::to_string(norm_after / norm_before - 1.0) +
                               " in one step exceeds 10%",
                           psi);
}

void Stepper::advance_impl(WaveFunction& psi) const {
  if (scheme_ == Scheme::Strang) {
    auto spec = fft_forward(grid_, psi.values);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] *= kinetic_half_[i];
    psi.values = fft_backward(grid_, spec);

    if (!params_.is_linear()) {
      // exponential midpoint on the local flow dpsi/dt = G(psi) psi
      const auto g0 =
          local_phase_rate(psi, params_, reg_, potential_.empty() ? nullptr : &potential_);
      WaveFunction mid = psi;
      for (size_t i = 0; i < mid.values.size(); ++i)
        mid.values[i] *= std::exp(g0[i] * (dt_ / 2.0));
      const auto gm =
          local_phase_rate(mid, params_, reg_, potential_.empty() ? nullptr : &potential_);
      for (size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= std::exp(gm[i] * dt_);
    } else if (!linear_local_.empty()) {
      for (size_t i = 0; i < psi.values.size(); ++i) psi.values[i] *= linear_local_[i];
    }

    spec = fft_forward(grid_, psi.values);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] *= kinetic_half_[i];
    psi.values = fft_backward(grid_, spec);
  } else {
    // classical RK4 on the full right-hand side
    const auto& y = psi.values;
    WaveFunction tmp = psi;
    const auto k1 = dg_rhs(psi, params_, reg_);
    for (size_t i = 0; i < y.size(); ++i) tmp.values[i] = y[i] + 0.5 * dt_ * k1[i];
    const auto k2 = dg_rhs(tmp, params_, reg_);
    for (size_t i = 0; i < y.size(); ++i) tmp.values[i] = y[i] + 0.5 * dt_ * k2[i];
    const auto k3 = dg_rhs(tmp, params_, reg_);
    for (size_t i = 0; i < y.size(); ++i) tmp.values[i] = y[i] + dt_ * k3[i];
    const auto k4 = dg_rhs(tmp, params_, reg_);
    for (size_t i = 0; i < psi.values.size(); ++i)
      psi.values[i] += (dt_ / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

WaveFunction step(const WaveFunction& psi, double dt, const DGParams& params,
                  const Regularisation& reg, Scheme scheme) {
  Stepper stepper(psi.grid, params, reg, dt, scheme);
  WaveFunction out = psi;
  stepper.advance(out);
  return out;
}

ObsRow observables_of(const WaveFunction& psi, const DGParams& params) {
  const auto& g = psi.grid;
  ObsRow row;
  row.t = psi.time;
  row.norm = norm(psi);
  const double n2 = row.norm * row.norm;

  double mx = 0.0, mx2 = 0.0;
  for (int i0 = 0; i0 < g.n[0]; ++i0) {
    const double x = i0 * g.spacing(0);
    double slab = 0.0;
    for (int i1 = 0; i1 < g.n[1]; ++i1) slab += std::norm(psi.values[i0 * g.n[1] + i1]);
    mx += x * slab;
    mx2 += x * x * slab;
  }
  mx *= g.cell_volume() / n2;
  mx2 *= g.cell_volume() / n2;
  row.mean_x = mx;
  row.sigma_x = std::sqrt(std::max(0.0, mx2 - mx * mx));

  const auto dpsi = spectral_derivative(g, psi.values, 0, 1);
  cplx p_acc = 0.0;
  for (size_t i = 0; i < psi.values.size(); ++i)
    p_acc += std::conj(psi.values[i]) * cplx(0.0, -params.hbar) * dpsi[i];
  row.mean_p = (p_acc * g.cell_volume()).real() / n2;

  if (params.is_linear()) {
    auto lap = spectral_laplacian(g, psi.values);
    const double kin = -params.hbar * params.hbar / (2.0 * params.mass);
    cplx e_acc = 0.0;
    for (size_t i = 0; i < psi.values.size(); ++i)
      e_acc += std::conj(psi.values[i]) * (kin * lap[i]);
    double e = (e_acc * g.cell_volume()).real();
    if (params.has_potential()) {
      const auto V = params.potential.sample(g);
      double v_acc = 0.0;
      for (size_t i = 0; i < psi.values.size(); ++i) v_acc += V[i] * std::norm(psi.values[i]);
      e += v_acc * g.cell_volume();
    }
    row.energy = e / n2;
  } else {
    row.energy = kNaN;  // no conserved DG energy functional is claimed
  }
  row.continuity_residual = kNaN;
  return row;
}

Trajectory evolve(const WaveFunction& psi0, const Schedule& sched, const DGParams& params,
                  const Regularisation& reg, Scheme scheme, const ObservableSink& sink) {
  if (sched.steps < 0) throw std::invalid_argument("schedule steps must be >= 0");
  if (sched.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  if (!(std::isfinite(sched.dt * sched.steps)))
    throw std::invalid_argument("dt*steps must be finite");

  Trajectory traj;
  traj.record_dt = sched.dt * sched.record_every;
  traj.snapshots.push_back(psi0);
  traj.observables.push_back(observables_of(psi0, params));

  WaveFunction psi = psi0;
  const Stepper stepper(psi0.grid, params, reg, sched.dt, scheme);
  for (long s = 1; s <= sched.steps; ++s) {
    WaveFunction before = psi;
    try {
      stepper.advance(psi);
    } catch (const InstabilityError& e) {
      throw InstabilityError(s, e.reason, std::move(before));
    }
    if (s % sched.record_every == 0) {
      traj.snapshots.push_back(psi);
      traj.observables.push_back(observables_of(psi, params));
    }
  }
  traj.final_state = std::move(psi);

  if (traj.snapshots.size() >= 3) {
    const auto res = continuity_residual(traj, params, reg);
    for (size_t i = 0; i < res.size(); ++i) traj.observables[i + 1].continuity_residual = res[i];
  }
  if (sink)
    for (const auto& row : traj.observables) sink(row);
  return traj;
}

std::vector<double> continuity_residual(const Trajectory& traj, const DGParams& params,
                                        const Regularisation& reg) {
  (void)reg;  // the residual divides by nothing
  if (traj.snapshots.size() < 3)
    throw std::invalid_argument("continuity residual needs at least 3 snapshots");
  const auto& g = traj.snapshots.front().grid;
  const double dt_rec = traj.record_dt;

  std::vector<std::vector<double>> rho(traj.snapshots.size());
  for (size_t s = 0; s < traj.snapshots.size(); ++s) {
    rho[s].resize(g.points());
    for (int i = 0; i < g.points(); ++i) rho[s][i] = std::norm(traj.snapshots[s].values[i]);
  }

  std::vector<double> out;
  for (size_t s = 1; s + 1 < traj.snapshots.size(); ++s) {
    const auto h = hydro_fields(traj.snapshots[s], params);
    std::vector<double> div_j0(g.points(), 0.0);
    for (int a = 0; a < g.dim; ++a) {
      std::vector<cplx> ja(h.j0[a].begin(), h.j0[a].end());
      auto d = spectral_derivative(g, ja, a, 1);
      for (int i = 0; i < g.points(); ++i) div_j0[i] += d[i].real();
    }
    std::vector<cplx> rho_c(rho[s].begin(), rho[s].end());
    auto lap_rho = spectral_laplacian(g, rho_c);

    std::vector<double> r(g.points());
    for (int i = 0; i < g.points(); ++i) {
      const double drho_dt = (rho[s + 1][i] - rho[s - 1][i]) / (2.0 * dt_rec);
      r[i] = drho_dt + div_j0[i] - params.D * lap_rho[i].real();
    }
    out.push_back(l2_norm(g, r));
  }
  return out;
}

OrderFit fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw std::invalid_argument("fit_order needs matching vectors of >= 2 levels");
  OrderFit fit;
  fit.at_rounding_floor = false;
  for (double e : err)
    if (e < 1e-12) fit.at_rounding_floor = true;  // some level hit the floor

  for (size_t i = 1; i < err.size(); ++i)
    if (!(err[i] < err[i - 1])) fit.monotone = false;

  std::vector<double> lx(h.size()), ly(h.size());
  for (size_t i = 0; i < h.size(); ++i) {
    lx[i] = std::log(h[i]);
    ly[i] = std::log(std::max(err[i], 1e-300));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (size_t i = 0; i < h.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  fit.order = slope;
  for (size_t i = 0; i < h.size(); ++i)
    fit.fit_residual = std::max(fit.fit_residual, std::abs(ly[i] - slope * lx[i] - intercept));
  return fit;
}

namespace {

double l2_state_error(const WaveFunction& a, const WaveFunction& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(acc * a.grid.cell_volume());
}

WaveFunction run_to(const ConvergenceProblem& prob, const GridSpec& grid, double dt) {
  const long steps = std::max<long>(1, std::lround(prob.T / dt));
  const double dt_actual = prob.T / static_cast<double>(steps);
  Schedule sched{dt_actual, steps, steps};
  auto psi0 = sample(grid, prob.init);
  return evolve(psi0, sched, prob.params, prob.reg, prob.scheme).final_state;
}

}  // namespace

OrderFit temporal_order(const ConvergenceProblem& prob, const std::vector<double>& dts) {
  if (dts.size() < 3) throw std::invalid_argument("temporal order needs >= 3 levels");
  WaveFunction ref;
  if (prob.reference)
    ref = prob.reference(prob.grid, prob.T);
  else
    ref = run_to(prob, prob.grid, *std::min_element(dts.begin(), dts.end()) / 16.0);

  std::vector<double> errs;
  for (double dt : dts) errs.push_back(l2_state_error(run_to(prob, prob.grid, dt), ref));
  return fit_order(dts, errs);
}

OrderFit spatial_order(const ConvergenceProblem& prob, const std::vector<int>& ns, double dt) {
  if (ns.size() < 3) throw std::invalid_argument("spatial order needs >= 3 levels");
  std::vector<double> errs, hs;

  WaveFunction fine;
  const int n_max = *std::max_element(ns.begin(), ns.end());
  if (!prob.reference) {
    const GridSpec fine_grid = make_grid(prob.grid.dim, 2 * n_max, prob.grid.length[0]);
    fine = run_to(prob, fine_grid, dt);
  }

  for (int n : ns) {
    const GridSpec grid_n = make_grid(prob.grid.dim, n, prob.grid.length[0]);
    const auto got = run_to(prob, grid_n, dt);
    WaveFunction ref;
    if (prob.reference) {
      ref = prob.reference(grid_n, prob.T);
    } else {
      // restrict the fine solution to the coarse points
      ref.grid = grid_n;
      ref.time = fine.time;
      ref.values.resize(grid_n.points());
      const int stride0 = fine.grid.n[0] / grid_n.n[0];
      const int stride1 = grid_n.dim == 2 ? fine.grid.n[1] / grid_n.n[1] : 1;
      for (int i0 = 0; i0 < grid_n.n[0]; ++i0)
        for (int i1 = 0; i1 < grid_n.n[1]; ++i1)
          ref.values[i0 * grid_n.n[1] + i1] =
              fine.values[(i0 * stride0) * fine.grid.n[1] + i1 * stride1];
    }
    errs.push_back(l2_state_error(got, ref));
    hs.push_back(grid_n.spacing(0));
  }
  return fit_order(hs, errs);
}

ConvergenceReport convergence_order(const ConvergenceProblem& prob,
                                    const std::vector<double>& dts, const std::vector<int>& ns,
                                    double spatial_dt) {
  return {temporal_order(prob, dts), spatial_order(prob, ns, spatial_dt)};
}

void write_observables_csv(const std::string& path, const std::vector<ObsRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "t,norm,mean_x,mean_p,sigma_x,energy,continuity_residual\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    os << buf;
  };
  for (const auto& r : rows) {
    put(r.t, ',');
    put(r.norm, ',');
    put(r.mean_x, ',');
    put(r.mean_p, ',');
    put(r.sigma_x, ',');
    put(r.energy, ',');
    put(r.continuity_residual, '\n');
  }
}

}  // namespace dglab
