#include "dglab/kinematics.hpp"

#include <cmath>
#include <functional>

namespace dglab {

bool DGParams::is_linear() const {
  if (D != 0.0) return false;
  if (Dprime == 0.0) return true;
  for (double ci : c)
    if (ci != 0.0) return false;
  return true;
}

bool DGParams::has_potential() const {
  if (potential.is_trig()) return !potential.trig.near_zero();
  return true;
}

WaveFunction LinearOperatorSpec::apply(const WaveFunction& psi) const {
  WaveFunction out;
  out.grid = psi.grid;
  out.time = psi.time;
  out.values.assign(psi.values.size(), cplx(0.0));

  if (grad_coef != cplx(0.0)) {
    for (int a = 0; a < psi.grid.dim; ++a) {
      const auto ga = g.comp[a].sample(psi.grid);
      const auto d = spectral_derivative(psi.grid, psi.values, a, 1);
      for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += grad_coef * ga[i] * d[i];
    }
  }
  if (mult_coef != cplx(0.0)) {
    const auto w = mult_field.sample(psi.grid);
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += mult_coef * w[i] * psi.values[i];
  }
  return out;
}

WaveFunction apply_position(const ScalarFieldSpec& f, const WaveFunction& psi) {
  const auto fv = f.sample(psi.grid);
  WaveFunction out = psi;
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] *= fv[i];
  return out;
}

LinearOperatorSpec momentum_operator(const VectorFieldSpec& X, const DGParams& params) {
  LinearOperatorSpec op;
  op.grad_coef = cplx(0.0, -params.hbar);
  op.g = X;
  op.mult_coef = cplx(params.D, -params.hbar / 2.0);
  op.mult_field = X.divergence;
  return op;
}

WaveFunction apply_momentum(const VectorFieldSpec& X, const WaveFunction& psi,
                            const DGParams& params) {
  if (X.dim != psi.grid.dim) throw std::invalid_argument("vector field dim mismatch");
  return momentum_operator(X, params).apply(psi);
}

VectorFieldSpec lie_bracket(const VectorFieldSpec& X, const VectorFieldSpec& Y) {
  if (X.dim != Y.dim) throw std::invalid_argument("lie_bracket: dim mismatch");
  if (!X.is_trig() || !Y.is_trig())
    throw std::invalid_argument("lie_bracket needs trig vector fields");
  std::vector<TrigPoly> comps;
  for (int i = 0; i < X.dim; ++i) {
    TrigPoly acc = X.comp[0].trig * Y.comp[i].trig.derivative(0) -
                   Y.comp[0].trig * X.comp[i].trig.derivative(0);
    if (X.dim == 2)
      acc = acc + X.comp[1].trig * Y.comp[i].trig.derivative(1) -
            Y.comp[1].trig * X.comp[i].trig.derivative(1);
    comps.push_back(acc);
  }
  return VectorFieldSpec::from_trig_components(std::move(comps), X.dim);
}

namespace {

double relative_defect(const WaveFunction& lhs, const WaveFunction& rhs,
                       const WaveFunction& psi) {
  double acc = 0.0;
  for (size_t i = 0; i < lhs.values.size(); ++i) acc += std::norm(lhs.values[i] - rhs.values[i]);
  return std::sqrt(acc * psi.grid.cell_volume()) / norm(psi);
}

WaveFunction commutator(const std::function<WaveFunction(const WaveFunction&)>& A,
                        const std::function<WaveFunction(const WaveFunction&)>& B,
                        const WaveFunction& psi) {
  WaveFunction ab = A(B(psi));
  const WaveFunction ba = B(A(psi));
  for (size_t i = 0; i < ab.values.size(); ++i) ab.values[i] -= ba.values[i];
  return ab;
}

}  // namespace

double homomorphism_residual(const HomomorphismCheck& check, const DGParams& params,
                             const std::vector<WaveFunction>& states) {
  if (states.empty()) throw std::invalid_argument("homomorphism_residual: empty test set");

  double worst = 0.0;
  for (const auto& psi : states) {
    WaveFunction lhs, rhs;
    switch (check.kind) {
      case HomKind::PositionPosition: {
        auto A = [&](const WaveFunction& p) { return apply_position(check.f, p); };
        auto B = [&](const WaveFunction& p) { return apply_position(check.h, p); };
        lhs = commutator(A, B, psi);
        rhs = psi;
        for (auto& z : rhs.values) z = 0.0;
        break;
      }
      case HomKind::MomentumPosition: {
        auto A = [&](const WaveFunction& p) { return apply_momentum(check.X, p, params); };
        auto B = [&](const WaveFunction& p) { return apply_position(check.f, p); };
        lhs = commutator(A, B, psi);
        const ScalarFieldSpec Xf = directional_derivative(check.X, check.f);
        rhs = apply_position(Xf, psi);
        for (auto& z : rhs.values) z *= cplx(0.0, -params.hbar);
        break;
      }
      case HomKind::MomentumMomentum: {
        auto A = [&](const WaveFunction& p) { return apply_momentum(check.X, p, params); };
        auto B = [&](const WaveFunction& p) { return apply_momentum(check.Y, p, params); };
        lhs = commutator(A, B, psi);
        const VectorFieldSpec XY = lie_bracket(check.X, check.Y);
        rhs = apply_momentum(XY, psi, params);
        for (auto& z : rhs.values) z *= cplx(0.0, -params.hbar);
        break;
      }
    }
    worst = std::max(worst, relative_defect(lhs, rhs, psi));
  }
  return worst;
}

double dynamics_commutator_residual(const ScalarFieldSpec& f, const WaveFunction& psi,
                                    const DGParams& params) {
  if (!f.is_trig()) throw std::invalid_argument("dynamics residual needs a trig f");

  const double hbar = params.hbar, m = params.mass;
  auto H = [&](const WaveFunction& p) {
    auto lap = spectral_laplacian(p.grid, p.values);
    WaveFunction out = p;
    const double kin = -hbar * hbar / (2.0 * m);
    if (params.has_potential()) {
      const auto V = params.potential.sample(p.grid);
      for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = kin * lap[i] + V[i] * p.values[i];
    } else {
      for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = kin * lap[i];
    }
    return out;
  };

  auto Qf = [&](const WaveFunction& p) { return apply_position(f, p); };
  WaveFunction lhs = commutator(H, Qf, psi);

  std::vector<TrigPoly> grad_comps;
  grad_comps.push_back(f.trig.derivative(0));
  if (psi.grid.dim == 2) grad_comps.push_back(f.trig.derivative(1));
  const VectorFieldSpec grad_f =
      VectorFieldSpec::from_trig_components(std::move(grad_comps), psi.grid.dim);

  WaveFunction rhs = apply_momentum(grad_f, psi, params);
  for (auto& z : rhs.values) z *= cplx(0.0, -hbar / m);
  if (params.D != 0.0) {
    WaveFunction corr = apply_position(trig_laplacian(f), psi);
    const cplx w(0.0, hbar * params.D / m);
    for (size_t i = 0; i < rhs.values.size(); ++i) rhs.values[i] += w * corr.values[i];
  }
  return relative_defect(lhs, rhs, psi);
}

}  // namespace dglab
