#pragma once

#include "dglab/kinematics.hpp"

namespace dglab {

/// Relative floor for rho inside denominators: rho is replaced by
/// max(rho, epsilon_rel * max(rho)) wherever it divides.  The DG
/// nonlinearities are singular at nodes; the floor bounds them without
/// touching plane-wave or gaussian test values.
struct Regularisation {
  double epsilon_rel = 1e-12;
};

/// Hydrodynamic observables of a state:
///   rho = |psi|^2
///   j0  = (hbar/m) Im(conj(psi) grad psi)      quantum current
///   jD  = j0 - D grad rho                      generalised (diffusion) current
struct HydroFields {
  GridSpec grid;
  std::vector<double> rho;
  std::array<std::vector<double>, 2> j0;
  std::array<std::vector<double>, 2> jD;
};

HydroFields hydro_fields(const WaveFunction& psi, const DGParams& params);

/// The five real nonlinear functionals spanning the DG real part: the
/// independent homogeneous-of-order-zero, second-order rational, Euclidean
/// invariant combinations of rho and j0,
///   R1 = (m/hbar)   div j0 / rho
///   R2 = Lap rho / rho
///   R3 = (m/hbar)^2 (j0 . j0) / rho^2      [variant: (div j0)^2 / rho^2]
///   R4 = (m/hbar)   (j0 . grad rho) / rho^2
///   R5 = (grad rho . grad rho) / rho^2
/// All denominators use the regularised rho.
std::vector<double> r_functional(int i, const WaveFunction& psi, const DGParams& params,
                                 const Regularisation& reg);

/// Enforced imaginary part of the nonlinearity: hbar*(D/2)*Lap(rho)/rho,
/// identically hbar*(D/2)*R2.
std::vector<double> imaginary_term(const WaveFunction& psi, const DGParams& params,
                                   const Regularisation& reg);

/// Pointwise rate of the local (non-kinetic) part of the flow,
/// dpsi/dt|local = G psi with G = -(i/hbar)(V + Re F) + (D/2) Lap(rho)/rho.
/// potential_samples, when given, replaces sampling params.potential.
std::vector<cplx> local_phase_rate(const WaveFunction& psi, const DGParams& params,
                                   const Regularisation& reg,
                                   const std::vector<double>* potential_samples = nullptr);

/// Full right-hand side dpsi/dt of the DG equation
///   i hbar dpsi/dt = [ -hbar^2/2m Lap + V + i Im F + Re F ] psi,
///   Im F = hbar D/2 Lap(rho)/rho,   Re F = hbar D' sum c_i R_i.
/// Reduces to the linear Schroedinger right-hand side for D = D' = 0.
/// Throws std::runtime_error naming the offending functional if an
/// intermediate goes non-finite.
std::vector<cplx> dg_rhs(const WaveFunction& psi, const DGParams& params,
                         const Regularisation& reg);

}  // namespace dglab
