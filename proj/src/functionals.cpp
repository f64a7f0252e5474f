#include "dglab/functionals.hpp"

#include <cmath>

namespace dglab {

namespace {

struct HydroWorkspace {
  std::vector<double> rho;
  std::array<std::vector<double>, 2> grad_rho;
  std::vector<double> lap_rho;
  std::array<std::vector<double>, 2> j0;
  std::vector<double> div_j0;
  std::vector<double> rho_reg;  // floored denominator
  double rho_max = 0.0;
};

// Everything is computed spectrally from psi itself; rho-derivatives come
// from the FFT of rho, not finite differences, so continuity-type identities
// hold near machine precision.
HydroWorkspace hydro_workspace(const WaveFunction& psi, const DGParams& params,
                               const Regularisation& reg) {
  const auto& g = psi.grid;
  const int n = g.points();
  HydroWorkspace w;

  w.rho.resize(n);
  for (int i = 0; i < n; ++i) w.rho[i] = std::norm(psi.values[i]);
  for (double r : w.rho) w.rho_max = std::max(w.rho_max, r);

  const double floor = reg.epsilon_rel * w.rho_max;
  w.rho_reg.resize(n);
  for (int i = 0; i < n; ++i) w.rho_reg[i] = std::max(w.rho[i], floor);

  std::vector<cplx> rho_c(w.rho.begin(), w.rho.end());
  w.lap_rho.resize(n);
  {
    auto lr = spectral_laplacian(g, rho_c);
    for (int i = 0; i < n; ++i) w.lap_rho[i] = lr[i].real();
  }

  const double jcoef = params.hbar / params.mass;
  w.div_j0.assign(n, 0.0);
  for (int a = 0; a < g.dim; ++a) {
    auto dpsi = spectral_derivative(g, psi.values, a, 1);
    w.j0[a].resize(n);
    for (int i = 0; i < n; ++i)
      w.j0[a][i] = jcoef * std::imag(std::conj(psi.values[i]) * dpsi[i]);

    auto drho = spectral_derivative(g, rho_c, a, 1);
    w.grad_rho[a].resize(n);
    for (int i = 0; i < n; ++i) w.grad_rho[a][i] = drho[i].real();

    std::vector<cplx> ja(w.j0[a].begin(), w.j0[a].end());
    auto dja = spectral_derivative(g, ja, a, 1);
    for (int i = 0; i < n; ++i) w.div_j0[i] += dja[i].real();
  }
  return w;
}

void check_finite_field(const std::vector<double>& v, const char* name) {
  double acc = 0.0;
  for (double x : v) acc += x;
  if (!std::isfinite(acc))
    throw std::runtime_error(std::string("non-finite values in functional ") + name);
}

std::vector<double> r_from_workspace(int which, const HydroWorkspace& w, const DGParams& params,
                                     const GridSpec& grid) {
  const int n = grid.points();
  const double mh = params.mass / params.hbar;
  std::vector<double> out(n);
  switch (which) {
    case 1:
      for (int i = 0; i < n; ++i) out[i] = mh * w.div_j0[i] / w.rho_reg[i];
      break;
    case 2:
      for (int i = 0; i < n; ++i) out[i] = w.lap_rho[i] / w.rho_reg[i];
      break;
    case 3:
      if (params.r3 == R3Variant::CurrentSquared) {
        for (int i = 0; i < n; ++i) {
          double jj = w.j0[0][i] * w.j0[0][i];
          if (grid.dim == 2) jj += w.j0[1][i] * w.j0[1][i];
          out[i] = mh * mh * jj / (w.rho_reg[i] * w.rho_reg[i]);
        }
      } else {
        for (int i = 0; i < n; ++i)
          out[i] = mh * mh * w.div_j0[i] * w.div_j0[i] / (w.rho_reg[i] * w.rho_reg[i]);
      }
      break;
    case 4:
      for (int i = 0; i < n; ++i) {
        double jg = w.j0[0][i] * w.grad_rho[0][i];
        if (grid.dim == 2) jg += w.j0[1][i] * w.grad_rho[1][i];
        out[i] = mh * jg / (w.rho_reg[i] * w.rho_reg[i]);
      }
      break;
    case 5:
      for (int i = 0; i < n; ++i) {
        double gg = w.grad_rho[0][i] * w.grad_rho[0][i];
        if (grid.dim == 2) gg += w.grad_rho[1][i] * w.grad_rho[1][i];
        out[i] = gg / (w.rho_reg[i] * w.rho_reg[i]);
      }
      break;
    default:
      throw std::invalid_argument("r_functional index must be in 1..5");
  }
  return out;
}

}  // namespace

HydroFields hydro_fields(const WaveFunction& psi, const DGParams& params) {
  Regularisation reg;  // the fields themselves never divide by rho
  auto w = hydro_workspace(psi, params, reg);
  HydroFields h;
  h.grid = psi.grid;
  h.rho = std::move(w.rho);
  for (int a = 0; a < psi.grid.dim; ++a) {
    h.j0[a] = w.j0[a];
    h.jD[a].resize(h.j0[a].size());
    for (size_t i = 0; i < h.j0[a].size(); ++i)
      h.jD[a][i] = h.j0[a][i] - params.D * w.grad_rho[a][i];
  }
  return h;
}

std::vector<double> r_functional(int i, const WaveFunction& psi, const DGParams& params,
                                 const Regularisation& reg) {
  if (i < 1 || i > 5) throw std::invalid_argument("r_functional index must be in 1..5");
  auto w = hydro_workspace(psi, params, reg);
  return r_from_workspace(i, w, params, psi.grid);
}

std::vector<double> imaginary_term(const WaveFunction& psi, const DGParams& params,
                                   const Regularisation& reg) {
  const int n = psi.grid.points();
  std::vector<double> out(n, 0.0);
  if (params.D == 0.0) return out;
  auto w = hydro_workspace(psi, params, reg);
  const double coef = params.hbar * params.D / 2.0;
  for (int i = 0; i < n; ++i) out[i] = coef * w.lap_rho[i] / w.rho_reg[i];
  return out;
}

std::vector<cplx> local_phase_rate(const WaveFunction& psi, const DGParams& params,
                                   const Regularisation& reg,
                                   const std::vector<double>* potential_samples) {
  const auto& g = psi.grid;
  const int n = g.points();
  std::vector<cplx> rate(n, cplx(0.0));

  const cplx inv_ihbar(0.0, -1.0 / params.hbar);
  if (potential_samples != nullptr) {
    for (int i = 0; i < n; ++i) rate[i] = inv_ihbar * (*potential_samples)[i];
  } else if (params.has_potential()) {
    const auto V = params.potential.sample(g);
    for (int i = 0; i < n; ++i) rate[i] = inv_ihbar * V[i];
  }

  const bool need_hydro = params.D != 0.0 || params.Dprime != 0.0;
  if (!need_hydro) return rate;

  auto w = hydro_workspace(psi, params, reg);
  if (params.Dprime != 0.0) {
    for (int which = 1; which <= 5; ++which) {
      const double ci = params.c[which - 1];
      if (ci == 0.0) continue;
      auto ri = r_from_workspace(which, w, params, g);
      check_finite_field(ri, which == 1   ? "R1"
                             : which == 2 ? "R2"
                             : which == 3 ? "R3"
                             : which == 4 ? "R4"
                                          : "R5");
      const cplx coef = inv_ihbar * (params.hbar * params.Dprime * ci);
      for (int i = 0; i < n; ++i) rate[i] += coef * ri[i];
    }
  }
  if (params.D != 0.0) {
    const double coef = params.D / 2.0;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double gr = coef * w.lap_rho[i] / w.rho_reg[i];
      rate[i] += gr;
      acc += gr;
    }
    if (!std::isfinite(acc))
      throw std::runtime_error("non-finite values in functional imaginary term");
  }
  return rate;
}

std::vector<cplx> dg_rhs(const WaveFunction& psi, const DGParams& params,
                         const Regularisation& reg) {
  const auto& g = psi.grid;
  const int n = g.points();

  auto out = spectral_laplacian(g, psi.values);
  // (1/i hbar) * (-hbar^2/2m) = +i hbar/2m applied to Lap psi
  const cplx kin(0.0, params.hbar / (2.0 * params.mass));
  const auto rate = local_phase_rate(psi, params, reg);
  for (int i = 0; i < n; ++i) out[i] = kin * out[i] + rate[i] * psi.values[i];

  cplx acc = 0.0;
  for (const auto& z : out) acc += z;
  if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()))
    throw std::runtime_error("non-finite values in dg_rhs assembly");
  return out;
}

}  // namespace dglab
