#include <numbers>

#include "doctest.h"
#include "dglab/checks.hpp"
#include "dglab/functionals.hpp"

using namespace dglab;
namespace {
constexpr double pi = std::numbers::pi;
const Regularisation kReg;

// indices of the region |x - x0| <= span where gaussian formulas are clean
std::vector<int> core_region(const GridSpec& g, double x0, double span) {
  std::vector<int> idx;
  for (int i = 0; i < g.n[0]; ++i)
    if (std::abs(i * g.spacing(0) - x0) <= span) idx.push_back(i);
  return idx;
}
}  // namespace

TEST_SUITE_BEGIN("functionals");

TEST_CASE("hydro fields of a plane wave") {
  const auto g = make_grid(1, 128, 2 * pi);
  DGParams params;
  params.D = 0.4;
  const auto psi = sample(g, InitialSpec::plane_wave(1.0));
  const auto h = hydro_fields(psi, params);

  const double L = 2 * pi;
  for (int i = 0; i < g.points(); ++i) {
    CHECK(h.rho[i] == doctest::Approx(1.0 / L).epsilon(1e-12));
    CHECK(h.j0[0][i] == doctest::Approx(1.0 / L).epsilon(1e-10));
    CHECK(h.jD[0][i] == doctest::Approx(1.0 / L).epsilon(1e-10));  // grad rho = 0
  }

  // integral of rho is the squared norm
  double mass = 0.0;
  for (double r : h.rho) mass += r;
  CHECK(mass * g.cell_volume() == doctest::Approx(norm(psi) * norm(psi)).epsilon(1e-13));
}

TEST_CASE("hydro fields of a real gaussian") {
  const auto g = make_grid(1, 256, 40.0);
  DGParams params;
  params.D = 0.2;
  const auto psi = sample(g, InitialSpec::gaussian(1.0, 20.0));
  const auto h = hydro_fields(psi, params);

  std::vector<cplx> rho_c(h.rho.begin(), h.rho.end());
  const auto grad_rho = spectral_derivative(g, rho_c, 0, 1);
  for (int i = 0; i < g.points(); ++i) {
    CHECK(std::abs(h.j0[0][i]) < 1e-13);  // real state carries no current
    CHECK(std::abs(h.jD[0][i] + 0.2 * grad_rho[i].real()) < 1e-12);
  }
}

TEST_CASE("hydro fields ignore a constant phase") {
  const auto g = make_grid(1, 128, 20.0);
  DGParams params;
  params.D = 0.1;
  RandomFields gen(3);
  const auto psi = gen.band_limited_state(g, 20);
  WaveFunction rotated = psi;
  for (auto& z : rotated.values) z *= std::exp(cplx(0.0, 0.77));

  const auto ha = hydro_fields(psi, params);
  const auto hb = hydro_fields(rotated, params);
  for (int i = 0; i < g.points(); ++i) {
    CHECK(std::abs(ha.rho[i] - hb.rho[i]) < 1e-13);
    CHECK(std::abs(ha.j0[0][i] - hb.j0[0][i]) < 1e-12);
  }
}

TEST_CASE("R functionals on a plane wave") {
  const auto g = make_grid(1, 128, 2 * pi);
  DGParams params;
  const auto psi = sample(g, InitialSpec::plane_wave(2.0));  // k = 2

  for (int which : {1, 2, 4, 5}) {
    const auto r = r_functional(which, psi, params, kReg);
    for (double v : r) CHECK(std::abs(v) < 1e-9);
  }
  const auto r3 = r_functional(3, psi, params, kReg);
  for (double v : r3) CHECK(v == doctest::Approx(4.0).epsilon(1e-9));

  CHECK_THROWS_AS(r_functional(0, psi, params, kReg), std::invalid_argument);
  CHECK_THROWS_AS(r_functional(6, psi, params, kReg), std::invalid_argument);
}

TEST_CASE("R functionals on a real gaussian match analytic derivatives") {
  const double sigma = 1.0, x0 = 20.0;
  const auto g = make_grid(1, 256, 40.0);
  DGParams params;
  const auto psi = sample(g, InitialSpec::gaussian(sigma, x0));

  const auto r2 = r_functional(2, psi, params, kReg);
  const auto r5 = r_functional(5, psi, params, kReg);
  const auto idx = core_region(g, x0, 4.0 * sigma);
  REQUIRE(idx.size() > 20);

  double max2 = 0.0, max5 = 0.0, err2 = 0.0, err5 = 0.0;
  for (int i : idx) {
    const double u = i * g.spacing(0) - x0;
    const double a2 = u * u / std::pow(sigma, 4) - 1.0 / (sigma * sigma);
    const double a5 = u * u / std::pow(sigma, 4);
    max2 = std::max(max2, std::abs(a2));
    max5 = std::max(max5, std::abs(a5));
    err2 = std::max(err2, std::abs(r2[i] - a2));
    err5 = std::max(err5, std::abs(r5[i] - a5));
  }
  CHECK(err2 / max2 < 1e-6);
  CHECK(err5 / max5 < 1e-6);

  for (int which : {1, 3, 4}) {
    const auto r = r_functional(which, psi, params, kReg);
    for (int i : idx) CHECK(std::abs(r[i]) < 1e-9);
  }
}

TEST_CASE("homogeneity of order zero") {
  const auto g = make_grid(1, 128, 20.0);
  DGParams params;
  params.D = 0.3;
  RandomFields gen(11);
  const auto psi = gen.node_free_state(g);
  WaveFunction scaled = psi;
  for (auto& z : scaled.values) z *= 3.0 * std::exp(cplx(0.0, 1.1));

  for (int which = 1; which <= 5; ++which) {
    const auto a = r_functional(which, psi, params, kReg);
    const auto b = r_functional(which, scaled, params, kReg);
    double scale = 1.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < g.points(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12 * scale);
  }
  const auto ia = imaginary_term(psi, params, kReg);
  const auto ib = imaginary_term(scaled, params, kReg);
  for (int i = 0; i < g.points(); ++i) CHECK(std::abs(ia[i] - ib[i]) < 1e-11);
}

TEST_CASE("imaginary term") {
  const auto g = make_grid(1, 256, 40.0);
  DGParams params;

  SUBCASE("vanishes for D = 0") {
    const auto psi = sample(g, InitialSpec::gaussian(1.0, 20.0));
    const auto v = imaginary_term(psi, params, kReg);
    for (double x : v) CHECK(x == 0.0);
  }
  SUBCASE("vanishes on a plane wave") {
    DGParams pd;
    pd.D = 0.7;
    const auto psi = sample(make_grid(1, 128, 2 * pi), InitialSpec::plane_wave(1.0));
    const auto v = imaginary_term(psi, pd, kReg);
    for (double x : v) CHECK(std::abs(x) < 1e-9);
  }
  SUBCASE("gaussian with D = 1 gives (x^2/s^4 - 1/s^2)/2") {
    DGParams pd;
    pd.D = 1.0;
    const auto psi = sample(g, InitialSpec::gaussian(1.0, 20.0));
    const auto v = imaginary_term(psi, pd, kReg);
    const auto idx = core_region(g, 20.0, 4.0);
    double maxa = 0.0, err = 0.0;
    for (int i : idx) {
      const double u = i * g.spacing(0) - 20.0;
      const double a = 0.5 * (u * u - 1.0);
      maxa = std::max(maxa, std::abs(a));
      err = std::max(err, std::abs(v[i] - a));
    }
    CHECK(err / maxa < 1e-6);
  }
}

TEST_CASE("dg_rhs on plane waves") {
  const auto g = make_grid(1, 128, 2 * pi);
  const auto psi = sample(g, InitialSpec::plane_wave(2.0));  // k = 2

  SUBCASE("free linear case") {
    DGParams params;
    const auto rhs = dg_rhs(psi, params, kReg);
    for (int i = 0; i < g.points(); ++i)
      CHECK(std::abs(rhs[i] - cplx(0.0, -2.0) * psi.values[i]) < 1e-10);  // hbar k^2/2m = 2
  }
  SUBCASE("c3 channel shifts the dispersion") {
    DGParams params;
    params.Dprime = 0.5;
    params.c[2] = 0.4;
    const auto rhs = dg_rhs(psi, params, kReg);
    const double w = 2.0 + 0.5 * 0.4 * 4.0;  // hbar k^2/2m + D'c3 k^2
    for (int i = 0; i < g.points(); ++i)
      CHECK(std::abs(rhs[i] - cplx(0.0, -w) * psi.values[i]) < 1e-9);
  }
  SUBCASE("D does not act on constant density") {
    DGParams params, pd;
    pd.D = 0.8;
    const auto a = dg_rhs(psi, params, kReg);
    const auto b = dg_rhs(psi, pd, kReg);
    for (int i = 0; i < g.points(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
  }
}

TEST_CASE("continuity algebra div jD = div j0 - D lap rho") {
  const auto g = make_grid(1, 128, 20.0);
  DGParams params;
  params.D = 0.35;
  RandomFields gen(21);
  const auto psi = gen.band_limited_state(g, 20);
  const auto h = hydro_fields(psi, params);

  std::vector<cplx> jD(h.jD[0].begin(), h.jD[0].end());
  std::vector<cplx> j0(h.j0[0].begin(), h.j0[0].end());
  std::vector<cplx> rho(h.rho.begin(), h.rho.end());
  const auto div_jD = spectral_derivative(g, jD, 0, 1);
  const auto div_j0 = spectral_derivative(g, j0, 0, 1);
  const auto lap_rho = spectral_laplacian(g, rho);
  double scale = 0.0;
  for (int i = 0; i < g.points(); ++i) scale = std::max(scale, std::abs(div_j0[i].real()));
  for (int i = 0; i < g.points(); ++i)
    CHECK(std::abs(div_jD[i].real() - (div_j0[i].real() - 0.35 * lap_rho[i].real())) <
          1e-12 * std::max(1.0, scale));
}

TEST_CASE("grid translation covariance") {
  const auto g = make_grid(1, 128, 20.0);
  DGParams params;
  params.D = 0.2;
  RandomFields gen(33);
  const auto psi = gen.node_free_state(g);
  WaveFunction shifted = psi;
  for (int i = 0; i < g.points(); ++i)
    shifted.values[i] = psi.values[(i + g.points() - 1) % g.points()];

  for (int which : {1, 2, 3, 4, 5}) {
    const auto a = r_functional(which, psi, params, kReg);
    const auto b = r_functional(which, shifted, params, kReg);
    double scale = 1.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < g.points(); ++i)
      CHECK(std::abs(b[i] - a[(i + g.points() - 1) % g.points()]) < 1e-11 * scale);
  }
}

TEST_CASE("linear limit matches the operator assembly") {
  const auto g = make_grid(1, 128, 2 * pi);
  DGParams params;
  params.potential = ScalarFieldSpec::from_trig(TrigPoly::cosine(0, 1, 0.5, g.length), 1);
  RandomFields gen(41);
  const auto psi = gen.band_limited_state(g, 20);

  const auto rhs = dg_rhs(psi, params, kReg);
  const auto lap = spectral_laplacian(g, psi.values);
  const auto vpsi = apply_position(params.potential, psi);
  for (int i = 0; i < g.points(); ++i) {
    const cplx hpsi = -0.5 * lap[i] + vpsi.values[i];
    const cplx expect = cplx(0.0, -1.0) * hpsi;  // 1/(i hbar) with hbar = 1
    CHECK(std::abs(rhs[i] - expect) < 1e-12);
  }
}

TEST_CASE("r3 variant switch") {
  const auto g = make_grid(1, 128, 2 * pi);
  const auto psi = sample(g, InitialSpec::plane_wave(2.0));
  DGParams params;
  params.r3 = R3Variant::DivergenceSquared;
  const auto r3 = r_functional(3, psi, params, kReg);
  for (double v : r3) CHECK(std::abs(v) < 1e-9);  // div j0 = 0 on a plane wave
}

TEST_CASE("non-finite input is reported") {
  const auto g = make_grid(1, 64, 2 * pi);
  WaveFunction bad;
  bad.grid = g;
  bad.values.assign(g.points(), cplx(1.0));
  bad.values[3] = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  DGParams params;
  params.D = 0.1;
  CHECK_THROWS(dg_rhs(bad, params, kReg));
}

TEST_SUITE_END();
