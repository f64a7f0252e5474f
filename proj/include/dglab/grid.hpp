#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dglab {

using cplx = std::complex<double>;

/// Uniform periodic grid on a box [0,L0) x [0,L1).  Periodic boundaries are
/// the only supported kind: they make every smooth vector field complete and
/// turn integration-by-parts identities into exact statements of the discrete
/// spectral calculus.  All inner products use cell-volume quadrature.
struct GridSpec {
  int dim = 1;                              // 1 or 2
  std::array<int, 2> n = {0, 1};            // points per axis (n[1]==1 in 1d)
  std::array<double, 2> length = {0.0, 0.0};

  int points() const { return n[0] * n[1]; }
  double spacing(int axis) const { return length[axis] / n[axis]; }
  double cell_volume() const {
    double v = spacing(0);
    if (dim == 2) v *= spacing(1);
    return v;
  }
  /// DFT wavenumbers along an axis, 2*pi/L * {0,1,...,n/2,-n/2+1,...,-1}.
  std::vector<double> wavenumbers(int axis) const;

  bool operator==(const GridSpec&) const = default;
};

/// make_grid(1, 8, 2*pi) -> 8 cells of width pi/4.  n_points must be >= 8,
/// the same n and length are used on every axis.
GridSpec make_grid(int dim, int n_points, double length);
GridSpec make_grid(int dim, std::array<int, 2> n, std::array<double, 2> length);

/// Complex field samples on a periodic grid, row-major (axis 0 slow).
struct WaveFunction {
  GridSpec grid;
  std::vector<cplx> values;
  double time = 0.0;
};

/// Initial data for sample().
struct InitialSpec {
  enum class Kind { PlaneWave, Gaussian, Explicit };
  Kind kind = Kind::Gaussian;

  // PlaneWave: wavenumber per axis; must be an integer multiple of 2*pi/L.
  std::array<double, 2> k = {0.0, 0.0};

  // Gaussian: |psi|^2 has standard deviation sigma per axis, centred at x0,
  // carrier wavenumber k0.  Realised as a periodically wrapped image sum, so
  // the samples are exactly periodic for any k0.
  std::array<double, 2> sigma = {1.0, 1.0};
  std::array<double, 2> x0 = {0.0, 0.0};
  std::array<double, 2> k0 = {0.0, 0.0};

  // Explicit samples.
  std::vector<cplx> values;

  bool normalise = true;

  static InitialSpec plane_wave(double k0x, double k0y = 0.0);
  static InitialSpec gaussian(double sigma, double x0, double k0 = 0.0);
  static InitialSpec gaussian2d(std::array<double, 2> sigma, std::array<double, 2> x0,
                                std::array<double, 2> k0 = {0.0, 0.0});
  static InitialSpec explicit_samples(std::vector<cplx> v, bool normalise = true);
};

/// Sample an initial state; the result is L2-normalised to 1 unless
/// spec.normalise is false.  Throws std::invalid_argument for incommensurate
/// plane-wave k or zero-norm explicit data.
WaveFunction sample(const GridSpec& grid, const InitialSpec& spec);

/// Spectral derivative of order 1 or 2 along an axis.  Exact for band-limited
/// fields up to rounding.  The Nyquist mode of odd-order derivatives is
/// zeroed (its ik weight has no consistent sign on the real line).
std::vector<cplx> spectral_derivative(const GridSpec& grid, const std::vector<cplx>& field,
                                      int axis, int order);
/// Sum of second derivatives over all axes.
std::vector<cplx> spectral_laplacian(const GridSpec& grid, const std::vector<cplx>& field);

/// Forward/backward DFT (backward is normalised by 1/N so bwd(fwd(x)) == x).
std::vector<cplx> fft_forward(const GridSpec& grid, const std::vector<cplx>& field);
std::vector<cplx> fft_backward(const GridSpec& grid, const std::vector<cplx>& spectrum);

/// <psi|phi> with cell-volume quadrature, conjugate-linear in the first slot.
cplx inner_product(const WaveFunction& psi, const WaveFunction& phi);
double norm(const WaveFunction& psi);
double norm(const GridSpec& grid, const std::vector<cplx>& values);

/// Coordinate samples along an axis (0, h, 2h, ...).
std::vector<double> axis_coordinates(const GridSpec& grid, int axis);

/// Binary snapshot format (extension .wf): little-endian header
///   i64 dim, i64 n[dim], f64 length[dim], f64 time, f64 hbar, f64 mass
/// followed by interleaved re/im f64 samples in row-major order.
void write_wf(const std::string& path, const WaveFunction& psi, double hbar, double mass);
struct WfSnapshot {
  WaveFunction psi;
  double hbar = 1.0;
  double mass = 1.0;
};
WfSnapshot read_wf(const std::string& path);

/// JSON snapshot form for small grids (<= 4096 points).
std::string write_wf_json(const WaveFunction& psi, double hbar, double mass);
WfSnapshot read_wf_json(const std::string& text);
void write_wf_json_file(const std::string& path, const WaveFunction& psi, double hbar,
                        double mass);

}  // namespace dglab
