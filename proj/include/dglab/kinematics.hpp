#pragma once

#include "dglab/fields.hpp"
#include "dglab/grid.hpp"

namespace dglab {

/// Which quadratic form the R3 nonlinearity uses; CurrentSquared is the
/// default (j0.j0 / rho^2), DivergenceSquared exposes (div j0)^2 / rho^2 for
/// comparison runs.
enum class R3Variant { CurrentSquared, DivergenceSquared };

/// Full parameterisation of the Doebner-Goldin family
///   i hbar dPsi/dt = [ -hbar^2/2m Lap + V + i hbar D/2 Lap(rho)/rho
///                      + hbar D' sum_i c_i R_i[Psi] ] Psi.
/// D is the quantisation parameter of the momentum map and, dynamically, the
/// diffusion coefficient of the probability flow.  Units follow the
/// convention hbar = m = 1 unless set otherwise.
struct DGParams {
  double hbar = 1.0;
  double mass = 1.0;
  double D = 0.0;
  double Dprime = 0.0;
  std::array<double, 5> c = {0.0, 0.0, 0.0, 0.0, 0.0};
  ScalarFieldSpec potential;  // defaults to zero on an unbound box
  R3Variant r3 = R3Variant::CurrentSquared;

  bool is_linear() const;
  bool has_potential() const;
};

/// One row of the catalog of elementary quantum Borel kinematics: the
/// topological data of a configuration space and the resulting quantum
/// numbers.  Entries are static data, mirrored byte-for-byte by the embedded
/// JSON resource.
struct CatalogEntry {
  std::string name;
  std::string configuration_space;
  std::string pi1;
  std::string homology_h1;
  std::string cohomology_h2;
  struct QuantumNumber {
    std::string symbol;
    std::string domain;
    bool operator==(const QuantumNumber&) const = default;
  };
  std::vector<QuantumNumber> quantum_numbers;

  bool operator==(const CatalogEntry&) const = default;
};

const std::vector<CatalogEntry>& catalog_list();
/// Throws std::invalid_argument listing the valid names if absent.
const CatalogEntry& catalog_lookup(const std::string& name);
/// The embedded JSON resource (schema: {"entries":[...]}).
const std::string& catalog_json_resource();
std::string catalog_entry_to_json(const CatalogEntry& e);

/// A linear operator  grad_coef * (g . grad)  +  mult_coef * w(x).
/// Covers the quantised momenta and their gauge-transformed relatives.
struct LinearOperatorSpec {
  cplx grad_coef = 0.0;
  VectorFieldSpec g;
  cplx mult_coef = 0.0;
  ScalarFieldSpec mult_field;

  WaveFunction apply(const WaveFunction& psi) const;
};

/// Position operator: (Q(f) psi)(x) = f(x) psi(x).
WaveFunction apply_position(const ScalarFieldSpec& f, const WaveFunction& psi);

/// Momentum operator of the D-family,
///   P^(D)(X) psi = -i hbar g . grad psi + (-i hbar/2 + D) (div g) psi.
/// Symmetric for every real D; different D are unitarily inequivalent.
WaveFunction apply_momentum(const VectorFieldSpec& X, const WaveFunction& psi,
                            const DGParams& params);
LinearOperatorSpec momentum_operator(const VectorFieldSpec& X, const DGParams& params);

/// Lie bracket [X,Y]^i = X(Y^i) - Y(X^i) in the exact trig algebra, with the
/// analytic divergence computed from the bracket components.
VectorFieldSpec lie_bracket(const VectorFieldSpec& X, const VectorFieldSpec& Y);

enum class HomKind {
  PositionPosition,  // [Q(f), Q(h)] = 0
  MomentumPosition,  // [P(X), Q(f)] = -i hbar Q(X f)
  MomentumMomentum,  // [P(X), P(Y)] = -i hbar P([X,Y])
};

struct HomomorphismCheck {
  HomKind kind = HomKind::PositionPosition;
  ScalarFieldSpec f, h;
  VectorFieldSpec X, Y;
};

/// Max over the test states of ||LHS psi - RHS psi|| / ||psi|| for the
/// commutator identity selected by kind.  The residuals are independent of D:
/// the D-terms cancel through div[X,Y] = X(div Y) - Y(div X).
double homomorphism_residual(const HomomorphismCheck& check, const DGParams& params,
                             const std::vector<WaveFunction>& states);

/// Residual of the commutator identity obstructing a linear dynamics,
///   [H, Q(f)] = -(i hbar/m) P^(D)(grad f) + (i hbar D/m) Q(Lap f),
/// with H = -hbar^2/2m Lap + Q(V).  With hbar = m = 1 this is the identity
/// [H, Q(f)] = -i P^(D)(grad f) + i D Q(Lap f); at D = 0 it reduces to the
/// standard linear relation [H, Q(f)] = -i P(grad f).  The residual vanishes
/// for every D, which is exactly why demanding [H, Q(f)] = -i P(X_f) with no
/// correction forces D = 0.
double dynamics_commutator_residual(const ScalarFieldSpec& f, const WaveFunction& psi,
                                    const DGParams& params);

}  // namespace dglab
