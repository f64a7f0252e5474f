#pragma once

// Analytic reference solutions used as independent oracles by the unit and
// acceptance tests.  Everything here is closed-form calculus, computed apart
// from the library's spectral machinery.

#include <cmath>
#include <complex>
#include <numbers>

#include "dglab/grid.hpp"

namespace oracles {

using dglab::cplx;

/// Free-packet spreading of a gaussian whose density has std dev sigma0:
/// sigma(t) = sigma0 sqrt(1 + (hbar t / (2 m sigma0^2))^2).
inline double spreading_sigma(double sigma0, double t, double hbar, double mass) {
  const double u = hbar * t / (2.0 * mass * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + u * u);
}

/// Classical oscillation of a coherent state: <x>(t) = c + A cos(w t).
inline double coherent_mean_x(double center, double amplitude, double omega, double t) {
  return center + amplitude * std::cos(omega * t);
}

/// Plane-wave dispersion of the DG equation with only the c3 channel active:
/// omega(k) = hbar k^2 / 2m + D' c3 k^2.
inline double dg_plane_wave_omega(double k, double hbar, double mass, double dprime, double c3) {
  return hbar * k * k / (2.0 * mass) + dprime * c3 * k * k;
}

/// Exact free evolution of one gaussian image
///   psi0(x) = exp(-(x-x0)^2/(4 sigma^2) + i k0 (x-x0)):
///   psi(x,t) = (sigma/sqrt(a)) exp(b^2/(4a) - sigma^2 k0^2),
///   a = sigma^2 + i hbar t/(2m),  b = 2 sigma^2 k0 + i (x-x0).
inline cplx free_gaussian_image(double u, double sigma, double k0, double t, double hbar,
                                double mass) {
  const cplx a(sigma * sigma, hbar * t / (2.0 * mass));
  const cplx b(2.0 * sigma * sigma * k0, u);
  return sigma / std::sqrt(a) * std::exp(b * b / (4.0 * a) - sigma * sigma * k0 * k0);
}

/// Periodically wrapped exact free-gaussian solution sampled on a grid,
/// normalised to unit discrete norm.
inline dglab::WaveFunction free_gaussian_exact(const dglab::GridSpec& grid, double sigma,
                                               double x0, double k0, double t, double hbar,
                                               double mass) {
  dglab::WaveFunction psi;
  psi.grid = grid;
  psi.time = t;
  psi.values.resize(grid.points());
  const double L = grid.length[0];
  const int images = std::max(1, static_cast<int>(std::ceil(45.0 * sigma / L)) + 1);
  for (int i = 0; i < grid.n[0]; ++i) {
    const double u = i * grid.spacing(0) - x0;
    cplx acc = 0.0;
    for (int w = -images; w <= images; ++w)
      acc += free_gaussian_image(u + w * L, sigma, k0, t, hbar, mass);
    psi.values[i] = acc;
  }
  const double nrm = dglab::norm(psi);
  for (auto& z : psi.values) z /= nrm;
  return psi;
}

/// Exact coherent-state evolution in the well V = m w^2 (x-c)^2 / 2 for the
/// displaced ground state psi0 ~ exp(-(x-c-A)^2 m w/(2 hbar)):
///   psi(u,t) ~ exp(-(m w/2 hbar)(u-q)^2 + (i/hbar) p (u - q/2) - i w t/2),
///   q = A cos(w t), p = -m w A sin(w t), u = x - c.
inline dglab::WaveFunction coherent_state_exact(const dglab::GridSpec& grid, double center,
                                                double amplitude, double omega, double t,
                                                double hbar, double mass) {
  const double q = amplitude * std::cos(omega * t);
  const double p = -mass * omega * amplitude * std::sin(omega * t);
  const double alpha = mass * omega / (2.0 * hbar);
  const double L = grid.length[0];
  const double sigma_psi = std::sqrt(hbar / (2.0 * mass * omega));
  const int images = std::max(1, static_cast<int>(std::ceil(45.0 * sigma_psi / L)) + 1);

  dglab::WaveFunction psi;
  psi.grid = grid;
  psi.time = t;
  psi.values.resize(grid.points());
  for (int i = 0; i < grid.n[0]; ++i) {
    cplx acc = 0.0;
    for (int w = -images; w <= images; ++w) {
      const double u = i * grid.spacing(0) - center + w * L;
      const double re = -alpha * (u - q) * (u - q);
      if (re < -745.0) continue;
      const double im = p * (u - q / 2.0) / hbar - omega * t / 2.0;
      acc += std::exp(cplx(re, im));
    }
    psi.values[i] = acc;
  }
  const double nrm = dglab::norm(psi);
  for (auto& z : psi.values) z /= nrm;
  return psi;
}

/// Density std dev of the oscillator ground state, hbar/(2 m w) under the
/// |psi|^2 convention used by the gaussian sampler.
inline double ground_state_sigma(double omega, double hbar, double mass) {
  return std::sqrt(hbar / (2.0 * mass * omega));
}

}  // namespace oracles
