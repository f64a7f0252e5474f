// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every tolerance is pinned here, including the wall-clock budgets.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <vector>

#include "dglab/checks.hpp"
#include "dglab/commands.hpp"
#include "dglab/gauge.hpp"
#include "json.hpp"
#include "../oracles.hpp"

using namespace dglab;
namespace {

constexpr double pi = std::numbers::pi;
const Regularisation kReg;

struct Criterion {
  std::string name;
  double time_budget_s;
  std::function<bool(std::string&)> run;
};

bool expect(bool ok, const std::string& what, std::string& detail) {
  if (!ok && detail.empty()) detail = "failed: " + what;
  return ok;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1
bool kinematic_homomorphism(std::string& detail) {
  const auto grid = make_grid(1, 256, 2 * pi);
  RandomFields gen(2026);
  struct Tuple {
    ScalarFieldSpec f, h;
    VectorFieldSpec X, Y;
  };
  std::vector<Tuple> tuples;
  for (int p = 0; p < 10; ++p)
    tuples.push_back({ScalarFieldSpec::from_trig(gen.trig_scalar(grid, 3, 1.0), 1),
                      ScalarFieldSpec::from_trig(gen.trig_scalar(grid, 3, 1.0), 1),
                      gen.trig_vector(grid, 3, 1.0), gen.trig_vector(grid, 3, 1.0)});
  std::vector<WaveFunction> states;
  for (int s = 0; s < 20; ++s) states.push_back(gen.band_limited_state(grid, 24));

  double worst = 0.0;
  for (double d : {0.0, 0.3, 5.0}) {
    DGParams params;
    params.D = d;
    for (const auto& t : tuples) {
      worst = std::max(worst, homomorphism_residual(
                                  {HomKind::PositionPosition, t.f, t.h, {}, {}}, params, states));
      worst = std::max(worst, homomorphism_residual(
                                  {HomKind::MomentumPosition, t.f, {}, t.X, {}}, params, states));
      worst = std::max(worst, homomorphism_residual(
                                  {HomKind::MomentumMomentum, {}, {}, t.X, t.Y}, params, states));
    }
  }
  detail = "max residual " + fmt(worst) + " (tol 1e-8)";
  return worst < 1e-8;
}

// ---------------------------------------------------------------- criterion 2
bool momentum_symmetry(std::string& detail) {
  const auto grid = make_grid(1, 256, 2 * pi);
  RandomFields gen(2027);
  std::vector<VectorFieldSpec> fields;
  for (int i = 0; i < 5; ++i) fields.push_back(gen.trig_vector(grid, 3, 1.0));
  std::vector<WaveFunction> states;
  for (int s = 0; s < 40; ++s) states.push_back(gen.band_limited_state(grid, 24));

  double worst = 0.0;
  for (double d : {0.0, 0.3, 5.0}) {
    DGParams params;
    params.D = d;
    for (const auto& X : fields)
      for (int p = 0; p < 20; ++p) {
        const auto& phi = states[2 * p];
        const auto& psi = states[2 * p + 1];
        const cplx lhs = inner_product(phi, apply_momentum(X, psi, params));
        const cplx rhs = inner_product(apply_momentum(X, phi, params), psi);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  detail = "max symmetry defect " + fmt(worst) + " (tol 1e-10)";
  return worst < 1e-10;
}

// ---------------------------------------------------------------- criterion 3
bool obstruction_identity(std::string& detail) {
  const auto grid = make_grid(1, 256, 2 * pi);
  RandomFields gen(2028);
  std::vector<ScalarFieldSpec> fs;
  fs.push_back(ScalarFieldSpec::from_trig(TrigPoly::sine(0, 1, 1.0, grid.length), 1));
  for (int i = 1; i < 5; ++i)
    fs.push_back(ScalarFieldSpec::from_trig(gen.trig_scalar(grid, 3, 1.0), 1));
  std::vector<WaveFunction> states;
  for (int s = 0; s < 5; ++s) states.push_back(gen.band_limited_state(grid, 24));

  double worst = 0.0;
  for (double d : {0.0, 0.5}) {
    DGParams params;
    params.D = d;
    for (const auto& f : fs)
      for (const auto& psi : states)
        worst = std::max(worst, dynamics_commutator_residual(f, psi, params));
  }
  detail = "max residual " + fmt(worst) + " (tol 1e-8)";
  return worst < 1e-8;
}

// ---------------------------------------------------------------- criterion 4
bool linear_limit_regression(std::string& detail) {
  bool ok = true;
  {  // free gaussian spreading over t in [0, 2]
    const auto grid = make_grid(1, 256, 40.0);
    DGParams params;
    const auto psi0 = sample(grid, InitialSpec::gaussian(1.0, 20.0));
    const auto traj = evolve(psi0, Schedule{1e-3, 2000, 50}, params, kReg);
    double worst = 0.0;
    for (const auto& row : traj.observables) {
      const double expect = oracles::spreading_sigma(1.0, row.t, 1.0, 1.0);
      worst = std::max(worst, std::abs(row.sigma_x - expect) / expect);
    }
    detail = "spreading err " + fmt(worst);
    ok = expect(worst < 1e-6, "spreading law 1e-6", detail) && ok;
  }
  {  // coherent-state oscillation over one period
    const auto grid = make_grid(1, 256, 20.0);
    DGParams params;
    params.potential = ScalarFieldSpec::harmonic(1.0, {10.0, 0.0}, grid);
    const double sigma = oracles::ground_state_sigma(1.0, 1.0, 1.0);
    const auto psi0 = sample(grid, InitialSpec::gaussian(sigma, 11.0));
    const long steps = 12566;
    const double dt = 2.0 * pi / static_cast<double>(steps);
    const auto traj = evolve(psi0, Schedule{dt, steps, 200}, params, kReg);
    double worst = 0.0;
    for (const auto& row : traj.observables)
      worst = std::max(worst, std::abs(row.mean_x - oracles::coherent_mean_x(10.0, 1.0, 1.0,
                                                                             row.t)));
    detail += ", coherent <x> err " + fmt(worst);
    ok = expect(worst < 1e-6, "coherent oscillation 1e-6", detail) && ok;
  }
  detail += " (tol 1e-6)";
  return ok;
}

// ---------------------------------------------------------------- criterion 5
bool fokker_planck_continuity(std::string& detail) {
  const auto grid = make_grid(1, 256, 40.0);
  DGParams params;
  params.D = 0.05;
  const double T = 0.2;
  const std::vector<double> dts = {4e-3, 2e-3, 1e-3};
  std::vector<double> rmax;
  double drift = 0.0;
  for (double dt : dts) {
    // node-free moving gaussian: O(1) density dynamics for a clean order fit
    const auto psi0 = sample(grid, InitialSpec::gaussian(1.0, 20.0, 1.0));
    const auto traj = evolve(psi0, Schedule{dt, std::lround(T / dt), 1}, params, kReg);
    const auto res = continuity_residual(traj, params, kReg);
    double m = 0.0;
    for (double r : res) m = std::max(m, r);
    rmax.push_back(m);
    if (dt == dts.back()) drift = std::abs(norm(traj.final_state) - 1.0) / T;
  }
  const auto fit = fit_order(dts, rmax);
  detail = "residual " + fmt(rmax.back()) + " (tol 1e-5), order " + fmt(fit.order) +
           " (2 +- 0.3), norm drift " + fmt(drift) + "/t (tol 1e-8)";
  bool ok = rmax.back() < 1e-5;
  ok = ok && fit.order > 1.7 && fit.order < 2.3;
  ok = ok && drift < 1e-8;
  return ok;
}

// ---------------------------------------------------------------- criterion 6
bool plane_wave_dispersion(std::string& detail) {
  const auto grid = make_grid(1, 64, 2 * pi);
  double worst = 0.0;
  for (double dc3 : {0.0, 0.1}) {
    DGParams params;
    params.Dprime = dc3;
    params.c[2] = 1.0;
    for (double k : {1.0, 2.0, 3.0}) {
      const auto psi0 = sample(grid, InitialSpec::plane_wave(k));
      const auto traj = evolve(psi0, Schedule{1e-3, 1000, 50}, params, kReg);
      double sx = 0, sy = 0, sxx = 0, sxy = 0, prev = 0;
      int n = 0;
      for (const auto& snap : traj.snapshots) {
        double phase = std::arg(inner_product(psi0, snap));
        while (phase - prev > pi) phase -= 2 * pi;
        while (phase - prev < -pi) phase += 2 * pi;
        prev = phase;
        sx += snap.time;
        sy += phase;
        sxx += snap.time * snap.time;
        sxy += snap.time * phase;
        ++n;
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      const double omega = oracles::dg_plane_wave_omega(k, 1.0, 1.0, dc3, 1.0);
      worst = std::max(worst, std::abs(-slope - omega) / omega);
    }
  }
  detail = "max relative dispersion error " + fmt(worst) + " (tol 1e-6)";
  return worst < 1e-6;
}

// ---------------------------------------------------------------- criterion 7
bool gauge_group_laws(std::string& detail) {
  const auto grid = make_grid(1, 128, 2 * pi);
  RandomFields gen(2029);
  double worst_comp = 0.0, worst_inv = 0.0, worst_rho = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto psi = gen.node_free_state(grid, 0.15);
    GaugeParams g1, g2;
    g1.gamma = gen.uniform(-0.4, 0.4);
    g1.lambda = gen.uniform(0.7, 1.3);
    g1.theta = gen.uniform(-0.4, 0.4);
    g1.kappa = gen.uniform(-0.3, 0.3);
    g1.amp_scale = gen.uniform(0.77, 1.3);
    g2.gamma = gen.uniform(-0.4, 0.4);
    g2.lambda = gen.uniform(0.7, 1.3);
    g2.theta = gen.uniform(-0.4, 0.4);
    g2.kappa = gen.uniform(-0.3, 0.3);
    g2.amp_scale = gen.uniform(0.77, 1.3);

    const auto two = gauge_apply(g2, gauge_apply(g1, psi, kReg), kReg);
    const auto one = gauge_apply(gauge_compose(g2, g1), psi, kReg);
    for (size_t i = 0; i < psi.values.size(); ++i)
      worst_comp = std::max(worst_comp, std::abs(two.values[i] - one.values[i]));

    const auto back = gauge_apply(gauge_inverse(g1), gauge_apply(g1, psi, kReg), kReg);
    for (size_t i = 0; i < psi.values.size(); ++i)
      worst_inv = std::max(worst_inv, std::abs(back.values[i] - psi.values[i]));

    GaugeParams rp;  // density preserving member
    rp.gamma = g1.gamma;
    rp.lambda = g1.lambda;
    rp.theta = g1.theta;
    const auto mapped = gauge_apply(rp, psi, kReg);
    for (size_t i = 0; i < psi.values.size(); ++i)
      worst_rho = std::max(worst_rho,
                           std::abs(std::abs(mapped.values[i]) - std::abs(psi.values[i])));
  }
  detail = "composition " + fmt(worst_comp) + ", inverse " + fmt(worst_inv) + ", rho " +
           fmt(worst_rho) + " (tol 1e-12)";
  return worst_comp < 1e-12 && worst_inv < 1e-12 && worst_rho < 1e-12;
}

// ---------------------------------------------------------------- criterion 8
bool gamma_4d_equivalence(std::string& detail) {
  const auto grid = make_grid(1, 256, 2 * pi);
  RandomFields gen(2030);
  DGParams base;
  std::vector<WaveFunction> states;
  for (int s = 0; s < 20; ++s) states.push_back(gen.band_limited_state(grid, 24));

  double worst = 0.0;
  for (double d : {0.0, 0.1, 1.0}) {
    DGParams params = base;
    params.D = d;
    GaugeParams gp;
    gp.gamma = 4.0 * d;
    for (int rep = 0; rep < 3; ++rep) {
      const auto X = gen.trig_vector(grid, 3, 1.0);
      const auto op = transformed_momentum(gp, X, base);
      for (const auto& psi : states) {
        const auto a = op.apply(psi);
        const auto b = apply_momentum(X, psi, params);
        double acc = 0.0;
        for (size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
        worst = std::max(worst, std::sqrt(acc * grid.cell_volume()) / norm(psi));
      }
    }
  }
  bool ok = worst < 1e-10;
  detail = "operator equivalence " + fmt(worst) + " (tol 1e-10)";

  // tangent map against the closed form, with the documented parameter map
  // gamma_op = 2 hbar gamma_polar, at O(delta^2) Richardson behaviour
  const auto psi = gen.node_free_state(grid, 0.15);
  const auto X = gen.trig_vector(grid, 2, 0.8);
  GaugeParams gp_polar;
  gp_polar.gamma = 0.25;
  gp_polar.theta = 0.2;
  GaugeParams gp_op = gp_polar;
  gp_op.gamma = operator_gamma_from_polar(gp_polar.gamma, base.hbar);
  const auto gen_spec = GeneratorSpec::from_operator(momentum_operator(X, base));
  const auto n_psi = gauge_apply(gp_polar, psi, kReg);
  auto closed = transformed_momentum(gp_op, X, base).apply(n_psi);
  for (auto& z : closed.values) z *= cplx(0.0, 1.0);
  auto defect = [&](double delta) {
    const auto numeric = tangent_map_numeric(gp_polar, gen_spec, psi, delta, kReg);
    double acc = 0.0;
    for (size_t i = 0; i < numeric.size(); ++i) acc += std::norm(numeric[i] - closed.values[i]);
    return std::sqrt(acc * grid.cell_volume()) / norm(psi);
  };
  const double d1 = defect(1e-5);
  const double ratio = defect(2e-5) / d1;
  detail += ", tangent defect " + fmt(d1) + " (tol 1e-6), Richardson ratio " + fmt(ratio);
  ok = ok && d1 < 1e-6 && ratio > 3.0 && ratio < 5.0;
  return ok;
}

// ---------------------------------------------------------------- criterion 9
bool gauge_covariance_oracle(std::string& detail) {
  const auto grid = make_grid(1, 256, 12.0);
  DGParams params;  // linear reference dynamics
  const auto psi0 = sample(grid, InitialSpec::gaussian(1.0, 6.0, 0.5));
  GaugeParams gp;
  gp.gamma = 0.4;

  const Schedule coarse{1e-3, 300, 1};
  const auto r1 = gauge_covariance_residual(gp, psi0, coarse, params, kReg);
  const Schedule fine{5e-4, 600, 1};  // halves the recording interval too
  const auto r2 = gauge_covariance_residual(gp, psi0, fine, params, kReg);
  const double ratio = r1.max_residual / r2.max_residual;

  DGParams wrong = derive_dg_coefficients(gp, params);
  wrong.D *= 1.5;
  const auto rw = gauge_covariance_residual(gp, psi0, coarse, params, kReg, &wrong);
  const double inflation = rw.max_residual / r1.max_residual;

  detail = "residual " + fmt(r1.max_residual) + " (tol 1e-4), halving ratio " + fmt(ratio) +
           " (~4), control x" + fmt(inflation) + " (>= 10)";
  return r1.max_residual < 1e-4 && ratio > 3.0 && ratio < 5.0 && inflation >= 10.0;
}

// --------------------------------------------------------------- criterion 10
bool catalog_fidelity(std::string& detail) {
  const auto& entries = catalog_list();
  bool ok = entries.size() == 9;

  // byte-equality against the embedded resource after canonical re-dump
  nlohmann::json rebuilt;
  rebuilt["entries"] = nlohmann::json::array();
  for (const auto& e : entries)
    rebuilt["entries"].push_back(nlohmann::json::parse(catalog_entry_to_json(e)));
  const std::string canonical = nlohmann::json::parse(catalog_json_resource()).dump(2);
  ok = ok && rebuilt.dump(2) == canonical;

  for (const auto& e : entries) ok = ok && catalog_lookup(e.name) == e;
  detail = std::to_string(entries.size()) + " rows, resource round-trip byte-equal";
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"kinematic homomorphism suite", 10.0, kinematic_homomorphism},
      {"momentum symmetry", 5.0, momentum_symmetry},
      {"dynamics obstruction identity", 5.0, obstruction_identity},
      {"linear-limit regression", 30.0, linear_limit_regression},
      {"Fokker-Planck continuity", 60.0, fokker_planck_continuity},
      {"plane-wave dispersion", 30.0, plane_wave_dispersion},
      {"gauge group laws", 10.0, gauge_group_laws},
      {"gamma = 4D equivalence", 20.0, gamma_4d_equivalence},
      {"gauge covariance oracle", 120.0, gauge_covariance_oracle},
      {"catalog fidelity", 1.0, catalog_fidelity},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criteria[i].time_budget_s) {
      ok = false;
      detail += " [over time budget]";
    }
    std::printf("[%2zu/10] %s  %-32s %s [%.1f s / %.0f s]\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].name.c_str(), detail.c_str(), elapsed, criteria[i].time_budget_s);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
