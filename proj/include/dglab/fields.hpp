#pragma once

#include <map>
#include <optional>
#include <string>

#include "dglab/grid.hpp"

namespace dglab {

/// Real trigonometric polynomial on a periodic box, stored as a sparse
/// hermitian Fourier series sum_m c_m exp(i m . (2pi/L) x) with integer mode
/// vectors m.  The representation is closed under +, *, and d/dx_a, which
/// keeps bracket and divergence identities exact instead of discretised.
/// A polynomial is tied to the box lengths it was built for.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(std::array<double, 2> lengths) : lengths_(lengths) {}

  static TrigPoly constant(double c, std::array<double, 2> lengths);
  /// amp*cos(m w x_axis) or amp*sin(m w x_axis), w = 2pi/L_axis.
  static TrigPoly cosine(int axis, int mode, double amp, std::array<double, 2> lengths);
  static TrigPoly sine(int axis, int mode, double amp, std::array<double, 2> lengths);

  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly operator-(const TrigPoly& o) const;
  TrigPoly operator*(const TrigPoly& o) const;
  TrigPoly scaled(double s) const;
  TrigPoly derivative(int axis) const;

  double evaluate(double x, double y = 0.0) const;
  std::vector<double> sample(const GridSpec& grid) const;

  bool is_constant() const;
  double constant_value() const;  // value of the zero mode
  int max_abs_mode(int axis) const;
  bool empty() const { return coef_.empty(); }
  std::array<double, 2> lengths() const { return lengths_; }

  bool near_zero(double tol = 0.0) const;

 private:
  using Key = std::pair<int, int>;
  std::map<Key, cplx> coef_;
  std::array<double, 2> lengths_ = {0.0, 0.0};

  void add_term(Key m, cplx c);
  void prune();
  void require_same_box(const TrigPoly& o) const;
};

/// Scalar field f in C^inf(M,R) restricted to periodic-compatible shapes:
/// constants and trig polynomials (exact algebra), wrapped gaussians, and the
/// named harmonic-well potential 0.5*omega^2*|x-c|^2 (smooth only away from
/// the box seam; intended for states that vanish there).
struct ScalarFieldSpec {
  enum class Kind { Constant, Trig, Gaussian, Harmonic };
  Kind kind = Kind::Constant;

  TrigPoly trig;  // Constant and Trig

  double g_amp = 1.0;  // Gaussian: amp * exp(-|x-c|^2 / (2 sigma^2)), wrapped
  std::array<double, 2> g_sigma = {1.0, 1.0};
  std::array<double, 2> g_center = {0.0, 0.0};

  double h_omega = 1.0;  // Harmonic
  std::array<double, 2> h_center = {0.0, 0.0};

  std::array<double, 2> lengths = {0.0, 0.0};
  int dim = 1;

  static ScalarFieldSpec zero(const GridSpec& grid);
  static ScalarFieldSpec constant(double c, const GridSpec& grid);
  static ScalarFieldSpec from_trig(TrigPoly p, int dim);
  static ScalarFieldSpec gaussian(double amp, std::array<double, 2> sigma,
                                  std::array<double, 2> center, const GridSpec& grid);
  static ScalarFieldSpec harmonic(double omega, std::array<double, 2> center,
                                  const GridSpec& grid);

  bool is_trig() const { return kind == Kind::Constant || kind == Kind::Trig; }
  /// Trig-only exact derivative; throws for gaussian/harmonic kinds.
  ScalarFieldSpec derivative(int axis) const;
  std::vector<double> sample(const GridSpec& grid) const;
  double evaluate(double x, double y = 0.0) const;
};

/// Vector field X = sum_i g_i(x) d/dx_i with an analytic divergence.  On a
/// periodic box every smooth field is complete (its flow exists for all
/// times), so no completeness bookkeeping is needed.
struct VectorFieldSpec {
  int dim = 1;
  std::array<ScalarFieldSpec, 2> comp;
  ScalarFieldSpec divergence;

  /// Builds the divergence exactly from trig components.
  static VectorFieldSpec from_trig_components(std::vector<TrigPoly> comps, int dim);
  static VectorFieldSpec from_components(std::vector<ScalarFieldSpec> comps,
                                         ScalarFieldSpec divergence);
  /// Constant coefficient field g . grad.
  static VectorFieldSpec constant_field(std::array<double, 2> g, const GridSpec& grid);

  bool is_trig() const;
  /// Max abs deviation between the analytic divergence and the spectral
  /// divergence of the sampled components.
  double divergence_defect(const GridSpec& grid) const;
};

/// Directional derivative X f = sum_i g_i d_i f in the exact trig algebra.
ScalarFieldSpec directional_derivative(const VectorFieldSpec& X, const ScalarFieldSpec& f);
/// Exact trig Laplacian of f.
ScalarFieldSpec trig_laplacian(const ScalarFieldSpec& f);

/// Parse a field expression such as
///   "0.5*cos(x) + 0.25*sin(2x)"        trig polynomial in box harmonics
///   "1.25"                              constant
///   "harmonic(1.0, 20.0)"               0.5*omega^2*(x-c)^2 well
///   "gaussian(1.0, 2.0, 10.0)"          amp, sigma, center
///   "none"                              zero field
/// sin(3x) means sin(3 * 2pi/L * x); on a 2pi-long axis that is the literal
/// sine.  Throws std::invalid_argument with a column number on bad syntax.
ScalarFieldSpec parse_field_expr(const std::string& text, const GridSpec& grid);

}  // namespace dglab
