#include "dglab/checks.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace dglab {

double RandomFields::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng_);
}

TrigPoly RandomFields::trig_scalar(const GridSpec& grid, int max_mode, double amp) {
  TrigPoly p = TrigPoly::constant(uniform(-amp, amp), grid.length);
  for (int axis = 0; axis < grid.dim; ++axis)
    for (int m = 1; m <= max_mode; ++m) {
      p = p + TrigPoly::cosine(axis, m, uniform(-amp, amp), grid.length);
      p = p + TrigPoly::sine(axis, m, uniform(-amp, amp), grid.length);
    }
  return p;
}

VectorFieldSpec RandomFields::trig_vector(const GridSpec& grid, int max_mode, double amp) {
  std::vector<TrigPoly> comps;
  for (int axis = 0; axis < grid.dim; ++axis) comps.push_back(trig_scalar(grid, max_mode, amp));
  return VectorFieldSpec::from_trig_components(std::move(comps), grid.dim);
}

WaveFunction RandomFields::band_limited_state(const GridSpec& grid, int max_mode) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> spec(grid.points(), cplx(0.0));
  const int m1_range = grid.dim == 2 ? max_mode : 0;
  for (int m0 = -max_mode; m0 <= max_mode; ++m0)
    for (int m1 = -m1_range; m1 <= m1_range; ++m1) {
      const double r2 = static_cast<double>(m0 * m0 + m1 * m1) /
                        static_cast<double>(max_mode * max_mode);
      const double env = std::exp(-2.0 * r2);
      const cplx coef(gauss(rng_) * env, gauss(rng_) * env);
      const int i0 = m0 >= 0 ? m0 : grid.n[0] + m0;
      const int i1 = m1 >= 0 ? m1 : grid.n[1] + m1;
      spec[i0 * grid.n[1] + i1] = coef;
    }
  WaveFunction psi;
  psi.grid = grid;
  psi.values = fft_backward(grid, spec);
  const double nrm = norm(psi);
  for (auto& z : psi.values) z /= nrm;
  return psi;
}

WaveFunction RandomFields::node_free_state(const GridSpec& grid, double amp) {
  const TrigPoly a = trig_scalar(grid, 2, amp);
  const TrigPoly b = trig_scalar(grid, 2, amp);
  const auto av = a.sample(grid);
  const auto bv = b.sample(grid);
  WaveFunction psi;
  psi.grid = grid;
  psi.values.resize(grid.points());
  for (int i = 0; i < grid.points(); ++i) psi.values[i] = std::exp(cplx(av[i], bv[i]));
  const double nrm = norm(psi);
  for (auto& z : psi.values) z /= nrm;
  return psi;
}

int worker_cap() {
  if (const char* env = std::getenv("DG_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void run_parallel(std::vector<std::function<void()>> tasks) {
  const int cap = std::min<int>(worker_cap(), static_cast<int>(tasks.size()));
  if (cap <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        tasks[i]();
      } catch (...) {
        std::scoped_lock lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < cap; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string fmt_d(double d) {
  std::string s = std::to_string(d);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

CheckReport run_kinematics_suite(const RunConfig& cfg) {
  CheckReport report;
  report.suite = "kinematics";
  const GridSpec grid = cfg.grid();
  const int pairs = 10, nstates = 20, max_field_mode = 3, max_state_mode = 24;
  const std::vector<double> d_values = {0.0, 0.3, 5.0};

  RandomFields gen(cfg.seed);
  struct FieldTuple {
    ScalarFieldSpec f, h;
    VectorFieldSpec X, Y;
  };
  std::vector<FieldTuple> tuples;
  for (int p = 0; p < pairs; ++p) {
    FieldTuple t;
    t.f = ScalarFieldSpec::from_trig(gen.trig_scalar(grid, max_field_mode, 1.0), grid.dim);
    t.h = ScalarFieldSpec::from_trig(gen.trig_scalar(grid, max_field_mode, 1.0), grid.dim);
    t.X = gen.trig_vector(grid, max_field_mode, 1.0);
    t.Y = gen.trig_vector(grid, max_field_mode, 1.0);
    tuples.push_back(std::move(t));
  }
  std::vector<WaveFunction> states;
  for (int s = 0; s < nstates; ++s) states.push_back(gen.band_limited_state(grid, max_state_mode));

  DGParams base = cfg.params();
  std::vector<double> res_iii(d_values.size(), 0.0);
  std::vector<CheckResult> rows(d_values.size() * 3 + 2 + d_values.size());

  std::vector<std::function<void()>> tasks;
  for (size_t di = 0; di < d_values.size(); ++di) {
    tasks.push_back([&, di] {
      DGParams params = base;
      params.D = d_values[di];
      double r1 = 0.0, r2 = 0.0, r3 = 0.0;
      for (const auto& t : tuples) {
        HomomorphismCheck c1{HomKind::PositionPosition, t.f, t.h, {}, {}};
        HomomorphismCheck c2{HomKind::MomentumPosition, t.f, {}, t.X, {}};
        HomomorphismCheck c3{HomKind::MomentumMomentum, {}, {}, t.X, t.Y};
        r1 = std::max(r1, homomorphism_residual(c1, params, states));
        r2 = std::max(r2, homomorphism_residual(c2, params, states));
        r3 = std::max(r3, homomorphism_residual(c3, params, states));
      }
      res_iii[di] = r3;
      const double tol = 1e-8;
      rows[3 * di + 0] = {"commutator [Q(f),Q(h)] = 0, D=" + fmt_d(d_values[di]), r1, tol,
                          r1 < tol};
      rows[3 * di + 1] = {"commutator [P(X),Q(f)] = -i hbar Q(Xf), D=" + fmt_d(d_values[di]), r2,
                          tol, r2 < tol};
      rows[3 * di + 2] = {"commutator [P(X),P(Y)] = -i hbar P([X,Y]), D=" + fmt_d(d_values[di]),
                          r3, tol, r3 < tol};
    });
  }
  run_parallel(std::move(tasks));

  size_t row = d_values.size() * 3;
  for (size_t di = 1; di < d_values.size(); ++di) {
    const double diff = std::abs(res_iii[di] - res_iii[0]);
    rows[row++] = {"D-independence of bracket residual, D=" + fmt_d(d_values[di]) + " vs 0",
                   diff, 1e-10, diff < 1e-10};
  }

  // symmetry of P^(D)(X) over state pairs
  RandomFields gen2(cfg.seed + 1);
  std::vector<VectorFieldSpec> sym_fields;
  for (int i = 0; i < 5; ++i) sym_fields.push_back(gen2.trig_vector(grid, max_field_mode, 1.0));
  for (size_t di = 0; di < d_values.size(); ++di) {
    DGParams params = base;
    params.D = d_values[di];
    double worst = 0.0;
    for (const auto& X : sym_fields)
      for (int p = 0; p < nstates / 2; ++p) {
        const auto& phi = states[2 * p];
        const auto& psi = states[2 * p + 1];
        const cplx lhs = inner_product(phi, apply_momentum(X, psi, params));
        const cplx rhs = inner_product(apply_momentum(X, phi, params), psi);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    rows[row++] = {"symmetry defect of P^(D)(X), D=" + fmt_d(d_values[di]), worst, 1e-10,
                   worst < 1e-10};
  }

  report.results = std::move(rows);
  return report;
}

CheckReport run_dynamics_obstruction_suite(const RunConfig& cfg) {
  CheckReport report;
  report.suite = "dynamics-obstruction";
  const GridSpec grid = cfg.grid();
  RandomFields gen(cfg.seed + 2);

  std::vector<ScalarFieldSpec> fs;
  fs.push_back(ScalarFieldSpec::from_trig(TrigPoly::sine(0, 1, 1.0, grid.length), grid.dim));
  for (int i = 1; i < 5; ++i)
    fs.push_back(ScalarFieldSpec::from_trig(gen.trig_scalar(grid, 3, 1.0), grid.dim));

  std::vector<WaveFunction> states;
  for (int s = 0; s < 10; ++s) states.push_back(gen.band_limited_state(grid, 24));

  const DGParams base = cfg.params();
  for (double d : {0.0, 0.5}) {
    DGParams params = base;
    params.D = d;
    double worst = 0.0;
    for (const auto& f : fs)
      for (const auto& psi : states)
        worst = std::max(worst, dynamics_commutator_residual(f, psi, params));
    report.results.push_back({"[H,Q(f)] = -(i hbar/m) P^(D)(grad f) + (i hbar D/m) Q(lap f), D=" +
                                  fmt_d(d),
                              worst, 1e-8, worst < 1e-8});
  }
  return report;
}

CheckReport run_gauge_equivalence_suite(const RunConfig& cfg) {
  CheckReport report;
  report.suite = "gauge-equivalence";
  const GridSpec grid = cfg.grid();
  RandomFields gen(cfg.seed + 3);
  const DGParams base = cfg.params();

  std::vector<VectorFieldSpec> fields;
  for (int i = 0; i < 5; ++i) fields.push_back(gen.trig_vector(grid, 3, 1.0));
  std::vector<WaveFunction> states;
  for (int s = 0; s < 20; ++s) states.push_back(gen.band_limited_state(grid, 24));

  for (double d : {0.0, 0.1, 0.25, 1.0}) {
    DGParams params = base;
    params.D = d;
    GaugeParams gp;
    gp.gamma = 4.0 * d;  // operator-form parameter
    double worst = 0.0;
    for (const auto& X : fields) {
      const auto direct_op = momentum_operator(X, params);
      const auto transformed = transformed_momentum(gp, X, params);
      for (const auto& psi : states) {
        const auto a = transformed.apply(psi);
        const auto b = direct_op.apply(psi);
        double acc = 0.0;
        for (size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
        worst = std::max(worst, std::sqrt(acc * grid.cell_volume()) / norm(psi));
      }
    }
    report.results.push_back({"transformed momentum (gamma=4D) vs P^(D), D=" + fmt_d(d), worst,
                              1e-10, worst < 1e-10});
  }

  // numerical tangent map of the polar-form gauge against the closed form;
  // the closed-form family parameter is gamma_op = 2 hbar gamma_polar
  const Regularisation reg = cfg.regularisation();
  GaugeParams gp_polar;
  gp_polar.gamma = 0.25;
  gp_polar.theta = 0.2;
  GaugeParams gp_op = gp_polar;
  gp_op.gamma = operator_gamma_from_polar(gp_polar.gamma, base.hbar);

  const auto X = gen.trig_vector(grid, 2, 0.8);
  const auto psi = gen.node_free_state(grid);
  DGParams lin = base;
  lin.D = 0.0;
  const auto gen_spec = GeneratorSpec::from_operator(momentum_operator(X, lin));

  const auto closed_op = transformed_momentum(gp_op, X, base);
  const auto n_psi = gauge_apply(gp_polar, psi, reg);
  auto closed = closed_op.apply(n_psi);
  for (auto& z : closed.values) z *= cplx(0.0, 1.0);  // tangent is i A_N

  auto defect_at = [&](double delta) {
    const auto numeric = tangent_map_numeric(gp_polar, gen_spec, psi, delta, reg);
    double acc = 0.0;
    for (size_t i = 0; i < numeric.size(); ++i) acc += std::norm(numeric[i] - closed.values[i]);
    return std::sqrt(acc * grid.cell_volume()) / norm(psi);
  };
  const double d1 = defect_at(1e-5);
  const double d2 = defect_at(2e-5);
  const double ratio = d2 / d1;
  report.results.push_back({"tangent map vs closed form at delta=1e-5", d1, 1e-6, d1 < 1e-6});
  report.results.push_back({"tangent map Richardson ratio (expect ~4)", ratio, 5.0,
                            ratio > 3.0 && ratio < 5.0});
  return report;
}

CheckReport run_continuity_suite(const RunConfig& cfg) {
  CheckReport report;
  report.suite = "continuity";
  const Regularisation reg = cfg.regularisation();

  {  // stationary oscillator ground state, D = 0
    const GridSpec grid = make_grid(1, 128, 16.0);
    DGParams params;
    params.hbar = cfg.hbar;
    params.mass = cfg.mass;
    params.potential = ScalarFieldSpec::harmonic(1.0, {8.0, 0.0}, grid);
    const double sigma = std::sqrt(params.hbar / (2.0 * params.mass));
    const auto psi0 = sample(grid, InitialSpec::gaussian(sigma, 8.0));
    const auto traj = evolve(psi0, Schedule{1e-3, 200, 10}, params, reg);
    const auto res = continuity_residual(traj, params, reg);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, r);
    report.results.push_back(
        {"stationary oscillator state residual", worst, 1e-10, worst < 1e-10});
  }

  {  // free gaussian, D = 0
    const GridSpec grid = make_grid(1, 256, 40.0);
    DGParams params;
    params.hbar = cfg.hbar;
    params.mass = cfg.mass;
    const auto psi0 = sample(grid, InitialSpec::gaussian(1.0, 20.0));
    const auto traj = evolve(psi0, Schedule{1e-3, 200, 1}, params, reg);
    const auto res = continuity_residual(traj, params, reg);
    double worst = 0.0;
    for (double r : res) worst = std::max(worst, r);
    report.results.push_back({"free gaussian residual at dt_record=1e-3", worst, 1e-6,
                              worst < 1e-6});
  }

  {  // diffusive run: refinement order and norm drift
    const GridSpec grid = make_grid(1, 256, 40.0);
    DGParams params;
    params.hbar = cfg.hbar;
    params.mass = cfg.mass;
    params.D = 0.05;
    const double T = 0.2;
    std::vector<double> dts = {4e-3, 2e-3, 1e-3};
    std::vector<double> rmax(dts.size());
    double final_norm = 1.0;
    for (size_t i = 0; i < dts.size(); ++i) {
      // moving packet: O(1) density dynamics give the order fit a clean signal
      const auto psi0 = sample(grid, InitialSpec::gaussian(1.0, 20.0, 1.0));
      const long steps = std::lround(T / dts[i]);
      const auto traj = evolve(psi0, Schedule{dts[i], steps, 1}, params, reg);
      const auto res = continuity_residual(traj, params, reg);
      rmax[i] = 0.0;
      for (double r : res) rmax[i] = std::max(rmax[i], r);
      if (i + 1 == dts.size()) final_norm = norm(traj.final_state);
    }
    report.results.push_back({"diffusive run residual at dt_record=1e-3", rmax.back(), 1e-5,
                              rmax.back() < 1e-5});
    const auto fit = fit_order(dts, rmax);
    report.results.push_back({"residual refinement order (expect 2 +- 0.3)", fit.order, 2.3,
                              fit.order > 1.7 && fit.order < 2.3});
    const double drift = std::abs(final_norm - 1.0) / T;
    report.results.push_back({"norm drift per unit time", drift, 1e-8, drift < 1e-8});
  }
  return report;
}

const std::vector<std::string>& check_suite_names() {
  static const std::vector<std::string> names = {"kinematics", "dynamics-obstruction",
                                                 "gauge-equivalence", "continuity"};
  return names;
}

CheckReport run_check_suite(const std::string& suite, const RunConfig& cfg) {
  if (suite == "kinematics") return run_kinematics_suite(cfg);
  if (suite == "dynamics-obstruction") return run_dynamics_obstruction_suite(cfg);
  if (suite == "gauge-equivalence") return run_gauge_equivalence_suite(cfg);
  if (suite == "continuity") return run_continuity_suite(cfg);
  std::string msg = "unknown suite '" + suite + "'; available suites:";
  for (const auto& s : check_suite_names()) msg += " " + s;
  throw std::invalid_argument(msg);
}

}  // namespace dglab
