#include "dglab/gauge.hpp"

#include <cmath>
#include <numbers>

namespace dglab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal(double x) { return x - kTwoPi * std::round(x / kTwoPi); }
}  // namespace

GaugeParams gauge_compose(const GaugeParams& b, const GaugeParams& a) {
  // R -> amp_b (amp_a R^(ka+1))^(kb+1),  S -> gb ln(amp_a R^(ka+1)) + lb Sa + tb
  GaugeParams out;
  out.kappa = (a.kappa + 1.0) * (b.kappa + 1.0) - 1.0;
  out.amp_scale = b.amp_scale * std::pow(a.amp_scale, b.kappa + 1.0);
  out.gamma = b.gamma * (a.kappa + 1.0) + b.lambda * a.gamma;
  out.lambda = b.lambda * a.lambda;
  out.theta = b.gamma * std::log(a.amp_scale) + b.lambda * a.theta + b.theta;
  return out;
}

GaugeParams gauge_inverse(const GaugeParams& g) {
  if (g.lambda == 0.0) throw std::invalid_argument("gauge with lambda == 0 is not invertible");
  if (g.kappa == -1.0) throw std::invalid_argument("gauge with kappa == -1 is not invertible");
  GaugeParams inv;
  const double k1 = g.kappa + 1.0;
  inv.kappa = 1.0 / k1 - 1.0;
  inv.amp_scale = std::pow(g.amp_scale, -1.0 / k1);
  inv.lambda = 1.0 / g.lambda;
  inv.gamma = -g.gamma / (g.lambda * k1);
  inv.theta = g.gamma * std::log(g.amp_scale) / (g.lambda * k1) - g.theta / g.lambda;
  return inv;
}

PolarField polar_decompose(const WaveFunction& psi, const Regularisation& reg, bool force) {
  const auto& g = psi.grid;
  const int n0 = g.n[0], n1 = g.n[1];
  PolarField out;
  out.R.resize(g.points());
  out.S.resize(g.points());

  double rho_max = 0.0;
  for (const auto& z : psi.values) rho_max = std::max(rho_max, std::norm(z));
  const double floor_rho = reg.epsilon_rel * rho_max;
  const double floor_R = std::sqrt(floor_rho);

  for (int i = 0; i < g.points(); ++i) {
    const double r = std::abs(psi.values[i]);
    if (r * r < floor_rho && !force)
      throw NodeError("phase undefined at node (grid index " + std::to_string(i) + ")");
    out.R[i] = r;
  }

  // raw principal arguments, then cumulative unwrapping: row i0 = 0 across
  // axis 1 first, then each column down axis 0.
  std::vector<double> arg(g.points());
  for (int i = 0; i < g.points(); ++i) arg[i] = std::arg(psi.values[i]);

  out.S[0] = arg[0];
  for (int i1 = 1; i1 < n1; ++i1)
    out.S[i1] = out.S[i1 - 1] + principal(arg[i1] - arg[i1 - 1]);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i0 = 1; i0 < n0; ++i0) {
      const int idx = i0 * n1 + i1;
      const int prev = (i0 - 1) * n1 + i1;
      out.S[idx] = out.S[prev] + principal(arg[idx] - arg[prev]);
    }

  if (force)
    for (auto& r : out.R) r = std::max(r, floor_R);
  return out;
}

WaveFunction gauge_apply(const GaugeParams& gp, const WaveFunction& psi,
                         const Regularisation& reg, bool force) {
  const auto polar = polar_decompose(psi, reg, force);
  WaveFunction out;
  out.grid = psi.grid;
  out.time = psi.time;
  out.values.resize(psi.values.size());

  const bool keep_R = gp.rho_preserving();
  for (size_t i = 0; i < out.values.size(); ++i) {
    const double R = polar.R[i];
    const double Rn = keep_R ? R : gp.amp_scale * std::pow(R, gp.kappa + 1.0);
    const double Sn = gp.gamma * std::log(R) + gp.lambda * polar.S[i] + gp.theta;
    out.values[i] = Rn * std::exp(cplx(0.0, Sn));
  }
  return out;
}

GeneratorSpec GeneratorSpec::from_operator(LinearOperatorSpec op) {
  GeneratorSpec g;
  g.kind = Kind::Operator;
  g.op = std::move(op);
  return g;
}

GeneratorSpec GeneratorSpec::hamiltonian(DGParams params) {
  GeneratorSpec g;
  g.kind = Kind::Hamiltonian;
  g.hamiltonian_params = std::move(params);
  return g;
}

WaveFunction generator_flow(const GeneratorSpec& gen, const WaveFunction& psi, double t) {
  if (gen.kind == GeneratorSpec::Kind::Hamiltonian) {
    // exp(i t H): exact spectral kinetic halves around a midpoint potential
    const auto& params = gen.hamiltonian_params;
    const auto& g = psi.grid;
    const auto k0 = g.wavenumbers(0);
    const auto k1 = g.dim == 2 ? g.wavenumbers(1) : std::vector<double>{0.0};
    WaveFunction out = psi;

    auto kinetic = [&](double tau) {
      auto spec = fft_forward(g, out.values);
      const double coef = tau * params.hbar * params.hbar / (2.0 * params.mass);
      for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
          const double k2 = k0[i0] * k0[i0] + (g.dim == 2 ? k1[i1] * k1[i1] : 0.0);
          spec[i0 * g.n[1] + i1] *= std::exp(cplx(0.0, coef * k2));
        }
      out.values = fft_backward(g, spec);
    };

    kinetic(t / 2.0);
    if (params.has_potential()) {
      const auto V = params.potential.sample(g);
      for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= std::exp(cplx(0.0, t * V[i]));
    }
    kinetic(t / 2.0);
    return out;
  }

  // first-order kinematic generator: dpsi/ds = i A psi integrated by RK4 with
  // a few substeps; the error O((t/m)^5) is far below the central-difference
  // terms this flow feeds.
  const int substeps = 4;
  const double h = t / substeps;
  WaveFunction out = psi;
  for (int s = 0; s < substeps; ++s) {
    auto rhs = [&](const WaveFunction& p) {
      WaveFunction r = gen.op.apply(p);
      for (auto& z : r.values) z *= cplx(0.0, 1.0);
      return r;
    };
    const auto k1v = rhs(out);
    WaveFunction tmp = out;
    for (size_t i = 0; i < tmp.values.size(); ++i)
      tmp.values[i] = out.values[i] + 0.5 * h * k1v.values[i];
    const auto k2v = rhs(tmp);
    for (size_t i = 0; i < tmp.values.size(); ++i)
      tmp.values[i] = out.values[i] + 0.5 * h * k2v.values[i];
    const auto k3v = rhs(tmp);
    for (size_t i = 0; i < tmp.values.size(); ++i)
      tmp.values[i] = out.values[i] + h * k3v.values[i];
    const auto k4v = rhs(tmp);
    for (size_t i = 0; i < out.values.size(); ++i)
      out.values[i] +=
          (h / 6.0) * (k1v.values[i] + 2.0 * k2v.values[i] + 2.0 * k3v.values[i] + k4v.values[i]);
  }
  return out;
}

std::vector<cplx> tangent_map_numeric(const GaugeParams& gp, const GeneratorSpec& gen,
                                      const WaveFunction& psi, double delta,
                                      const Regularisation& reg) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const auto plus = gauge_apply(gp, generator_flow(gen, psi, delta), reg);
  const auto minus = gauge_apply(gp, generator_flow(gen, psi, -delta), reg);
  std::vector<cplx> out(psi.values.size());
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = (plus.values[i] - minus.values[i]) / (2.0 * delta);
  return out;
}

LinearOperatorSpec transformed_momentum(const GaugeParams& gp, const VectorFieldSpec& X,
                                        const DGParams& params) {
  LinearOperatorSpec op;
  op.grad_coef = cplx(0.0, -params.hbar);
  op.g = X;
  op.mult_coef = cplx(gp.gamma / 4.0, -params.hbar / 2.0);
  op.mult_field = X.divergence;
  return op;
}

double operator_gamma_from_polar(double polar_gamma, double hbar) {
  return 2.0 * hbar * polar_gamma;
}
double polar_gamma_from_operator(double operator_gamma, double hbar) {
  return operator_gamma / (2.0 * hbar);
}
double diffusion_from_operator_gamma(double operator_gamma) { return operator_gamma / 4.0; }
double diffusion_from_polar_gamma(double polar_gamma, double hbar, double mass) {
  return hbar * polar_gamma / (2.0 * mass);
}

DGParams derive_dg_coefficients(const GaugeParams& gp, const DGParams& params) {
  if (!gp.rho_preserving())
    throw std::invalid_argument(
        "derive_dg_coefficients needs a density-preserving gauge (kappa=0, amp=1)");
  if (gp.lambda != 1.0)
    throw std::invalid_argument(
        "lambda != 1 generates an imaginary div j0 / rho term outside the DG family");

  DGParams out = params;
  const double D = diffusion_from_polar_gamma(gp.gamma, params.hbar, params.mass);
  out.D = D;
  out.Dprime = D;
  if (gp.gamma != 0.0)
    out.c = {1.0, -gp.gamma / 2.0, 0.0, -1.0, gp.gamma / 4.0};
  else
    out.c = {0.0, 0.0, 0.0, 0.0, 0.0};
  return out;
}

GaugeCovarianceResult gauge_covariance_residual(const GaugeParams& gp,
                                                const WaveFunction& psi0, const Schedule& sched,
                                                const DGParams& params, const Regularisation& reg,
                                                const DGParams* dg_override) {
  if (!params.is_linear())
    throw std::invalid_argument("the reference run must be linear (D = D' = 0)");
  const DGParams dg = dg_override ? *dg_override : derive_dg_coefficients(gp, params);

  const auto traj = evolve(psi0, sched, params, reg);
  if (traj.snapshots.size() < 3)
    throw std::invalid_argument("covariance residual needs at least 3 recorded states");

  std::vector<WaveFunction> mapped;
  mapped.reserve(traj.snapshots.size());
  for (size_t s = 0; s < traj.snapshots.size(); ++s) {
    try {
      mapped.push_back(gauge_apply(gp, traj.snapshots[s], reg));
    } catch (const NodeError& e) {
      throw NodeError(std::string(e.what()) + " at t = " +
                      std::to_string(traj.snapshots[s].time));
    }
  }

  GaugeCovarianceResult result;
  const double dt_rec = traj.record_dt;
  for (size_t s = 1; s + 1 < mapped.size(); ++s) {
    const auto rhs = dg_rhs(mapped[s], dg, reg);  // dpsi/dt of the DG flow
    double acc = 0.0;
    for (size_t i = 0; i < rhs.size(); ++i) {
      const cplx dt_num =
          (mapped[s + 1].values[i] - mapped[s - 1].values[i]) / (2.0 * dt_rec);
      acc += std::norm(dt_num - rhs[i]);
    }
    // i hbar d_t Phi - H_DG Phi = i hbar (d_t Phi - dg_rhs(Phi))
    const double res = dg.hbar * std::sqrt(acc * psi0.grid.cell_volume()) / norm(mapped[s]);
    result.residuals.push_back(res);
    result.max_residual = std::max(result.max_residual, res);
  }
  return result;
}

}  // namespace dglab
