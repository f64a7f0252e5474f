#include <numbers>

#include "doctest.h"
#include "dglab/checks.hpp"
#include "dglab/grid.hpp"

using namespace dglab;
namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE_BEGIN("grid");

TEST_CASE("make_grid basics") {
  const auto g = make_grid(1, 8, 2 * pi);
  CHECK(g.spacing(0) == doctest::Approx(pi / 4).epsilon(1e-15));
  const auto k = g.wavenumbers(0);
  const std::vector<double> expect = {0, 1, 2, 3, 4, -3, -2, -1};
  REQUIRE(k.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(k[i] == doctest::Approx(expect[i]).epsilon(1e-14));

  CHECK(make_grid(1, 8, 1.0).spacing(0) == doctest::Approx(0.125));

  const auto g2 = make_grid(2, 64, 10.0);
  CHECK(g2.points() == 4096);
  CHECK(g2.spacing(0) == doctest::Approx(0.15625));
  CHECK(g2.spacing(1) == doctest::Approx(0.15625));
}

TEST_CASE("make_grid rejects bad arguments") {
  CHECK_THROWS_AS(make_grid(3, 64, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0, 64, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 64, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 64, -2.0), std::invalid_argument);
}

TEST_CASE("plane wave sampling") {
  const auto g = make_grid(1, 256, 2 * pi);
  const auto psi = sample(g, InitialSpec::plane_wave(1.0));
  CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-13));
  const double amp = 1.0 / std::sqrt(2 * pi);
  for (int i = 0; i < 256; i += 37) {
    const double x = i * g.spacing(0);
    CHECK(psi.values[i].real() == doctest::Approx(amp * std::cos(x)).epsilon(1e-12));
    CHECK(psi.values[i].imag() == doctest::Approx(amp * std::sin(x)).epsilon(1e-12));
  }
  CHECK_THROWS_WITH_AS(sample(g, InitialSpec::plane_wave(1.5)),
                       doctest::Contains("incommensurate"), std::invalid_argument);
}

TEST_CASE("gaussian sampling") {
  const auto g = make_grid(1, 256, 40.0);
  const auto psi = sample(g, InitialSpec::gaussian(1.0, 20.0));
  CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& z : psi.values) {
    CHECK(z.imag() == 0.0);
    CHECK(z.real() >= 0.0);
  }
}

TEST_CASE("zero-norm explicit samples rejected") {
  const auto g = make_grid(1, 8, 1.0);
  std::vector<cplx> zeros(8, cplx(0.0));
  CHECK_THROWS_WITH_AS(sample(g, InitialSpec::explicit_samples(zeros)),
                       doctest::Contains("zero norm"), std::invalid_argument);
}

TEST_CASE("spectral derivative on analytic fields") {
  const auto g = make_grid(1, 64, 2 * pi);
  std::vector<cplx> sinx(64), e3(64), ones(64, cplx(1.0));
  for (int i = 0; i < 64; ++i) {
    const double x = i * g.spacing(0);
    sinx[i] = std::sin(x);
    e3[i] = std::exp(cplx(0.0, 3.0 * x));
  }

  const auto d1 = spectral_derivative(g, sinx, 0, 1);
  for (int i = 0; i < 64; ++i)
    CHECK(std::abs(d1[i] - cplx(std::cos(i * g.spacing(0)))) < 1e-12);

  const auto d2 = spectral_derivative(g, e3, 0, 2);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(d2[i] + 9.0 * e3[i]) < 1e-11);

  const auto dc = spectral_derivative(g, ones, 0, 1);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(dc[i]) < 1e-14);

  std::vector<cplx> bad(64, cplx(1.0));
  bad[5] = cplx(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_THROWS_AS(spectral_derivative(g, bad, 0, 1), std::invalid_argument);
}

TEST_CASE("derivative linearity and composition on band-limited fields") {
  const auto g = make_grid(1, 128, 2 * pi);
  RandomFields gen(911);
  const auto psi = gen.band_limited_state(g, 20);
  const auto phi = gen.band_limited_state(g, 20);
  const cplx a(0.7, -0.3), b(-1.1, 0.4);

  std::vector<cplx> mix(g.points());
  for (int i = 0; i < g.points(); ++i) mix[i] = a * psi.values[i] + b * phi.values[i];
  const auto d_mix = spectral_derivative(g, mix, 0, 1);
  const auto d_psi = spectral_derivative(g, psi.values, 0, 1);
  const auto d_phi = spectral_derivative(g, phi.values, 0, 1);
  for (int i = 0; i < g.points(); ++i)
    CHECK(std::abs(d_mix[i] - (a * d_psi[i] + b * d_phi[i])) < 1e-11);

  const auto dd = spectral_derivative(g, d_psi, 0, 1);
  const auto d2 = spectral_derivative(g, psi.values, 0, 2);
  for (int i = 0; i < g.points(); ++i) CHECK(std::abs(dd[i] - d2[i]) < 1e-10);
}

TEST_CASE("inner products and norms") {
  const auto g = make_grid(1, 64, 2 * pi);
  const auto e1 = sample(g, InitialSpec::plane_wave(1.0));
  const auto e2 = sample(g, InitialSpec::plane_wave(2.0));
  CHECK(std::abs(inner_product(e1, e2)) < 1e-14);
  CHECK(inner_product(e1, e1).real() == doctest::Approx(1.0).epsilon(1e-13));

  WaveFunction scaled = e1;
  for (auto& z : scaled.values) z *= 2.0;
  CHECK(norm(scaled) == doctest::Approx(2.0).epsilon(1e-13));

  // conjugate linearity in the first slot
  WaveFunction i_e1 = e1;
  for (auto& z : i_e1.values) z *= cplx(0.0, 1.0);
  CHECK(std::abs(inner_product(i_e1, e1) - cplx(0.0, -1.0)) < 1e-13);

  const auto other = make_grid(1, 32, 2 * pi);
  const auto psi_other = sample(other, InitialSpec::plane_wave(1.0));
  CHECK_THROWS_AS(inner_product(e1, psi_other), std::invalid_argument);
}

TEST_CASE("Parseval identity") {
  const auto g = make_grid(1, 128, 5.0);
  RandomFields gen(17);
  const auto psi = gen.band_limited_state(g, 40);
  const auto spec = fft_forward(g, psi.values);
  double acc = 0.0;
  for (const auto& z : spec) acc += std::norm(z);
  const double spectral_norm = std::sqrt(acc * g.cell_volume() / g.points());
  CHECK(std::abs(spectral_norm - norm(psi)) < 1e-12);
}

TEST_CASE("2d spectral calculus") {
  const auto g = make_grid(2, 32, 2 * pi);
  std::vector<cplx> f(g.points());
  for (int i0 = 0; i0 < 32; ++i0)
    for (int i1 = 0; i1 < 32; ++i1) {
      const double x = i0 * g.spacing(0), y = i1 * g.spacing(1);
      f[i0 * 32 + i1] = std::sin(x) * std::cos(2 * y);
    }
  const auto dy = spectral_derivative(g, f, 1, 1);
  const auto lap = spectral_laplacian(g, f);
  for (int i0 = 0; i0 < 32; ++i0)
    for (int i1 = 0; i1 < 32; ++i1) {
      const double x = i0 * g.spacing(0), y = i1 * g.spacing(1);
      CHECK(std::abs(dy[i0 * 32 + i1] - cplx(-2.0 * std::sin(x) * std::sin(2 * y))) < 1e-12);
      CHECK(std::abs(lap[i0 * 32 + i1] - cplx(-5.0 * std::sin(x) * std::cos(2 * y))) < 1e-11);
    }

  const auto pw = sample(g, InitialSpec::plane_wave(1.0, 2.0));
  CHECK(norm(pw) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wf snapshot round trip") {
  const auto g = make_grid(1, 64, 12.5);
  RandomFields gen(5);
  auto psi = gen.band_limited_state(g, 10);
  psi.time = 0.75;

  const std::string path = "roundtrip_test.wf";
  write_wf(path, psi, 1.5, 2.5);
  const auto snap = read_wf(path);
  CHECK(snap.hbar == 1.5);
  CHECK(snap.mass == 2.5);
  CHECK(snap.psi.time == 0.75);
  CHECK(snap.psi.grid == g);
  REQUIRE(snap.psi.values.size() == psi.values.size());
  for (size_t i = 0; i < psi.values.size(); ++i) CHECK(snap.psi.values[i] == psi.values[i]);
  std::remove(path.c_str());
}

TEST_CASE("json snapshot round trip and size limit") {
  const auto g = make_grid(1, 64, 3.0);
  RandomFields gen(6);
  auto psi = gen.band_limited_state(g, 10);
  psi.time = 1.25;
  const auto text = write_wf_json(psi, 1.0, 1.0);
  const auto snap = read_wf_json(text);
  CHECK(snap.psi.grid == g);
  for (size_t i = 0; i < psi.values.size(); ++i)
    CHECK(std::abs(snap.psi.values[i] - psi.values[i]) == 0.0);

  const auto big = make_grid(2, 128, 1.0);  // 16384 points
  WaveFunction big_psi;
  big_psi.grid = big;
  big_psi.values.assign(big.points(), cplx(1.0));
  CHECK_THROWS_AS(write_wf_json(big_psi, 1.0, 1.0), std::invalid_argument);
}

TEST_SUITE_END();
