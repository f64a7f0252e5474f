#include "dglab/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>

#include "json.hpp"

namespace dglab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// FFTW planning is not thread-safe; execution through the new-array interface
// is.  Plans are cached per shape and created with FFTW_UNALIGNED so they can
// run on any heap buffer.
class PlanCache {
 public:
  struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
  };

  Plans& get(const GridSpec& g) {
    std::scoped_lock lock(mutex_);
    auto key = std::pair{g.n[0], g.n[1]};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    std::vector<cplx> a(g.points()), b(g.points());
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    if (g.dim == 1) {
      p.fwd = fftw_plan_dft_1d(g.n[0], in, out, FFTW_FORWARD, flags);
      p.bwd = fftw_plan_dft_1d(g.n[0], in, out, FFTW_BACKWARD, flags);
    } else {
      p.fwd = fftw_plan_dft_2d(g.n[0], g.n[1], in, out, FFTW_FORWARD, flags);
      p.bwd = fftw_plan_dft_2d(g.n[0], g.n[1], in, out, FFTW_BACKWARD, flags);
    }
    return cache_.emplace(key, p).first->second;
  }

  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, Plans> cache_;
};

void check_finite(const std::vector<cplx>& v, const char* what) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument(std::string("non-finite sample in ") + what);
}

void le_store(std::string& out, std::uint64_t bits) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint64_t le_load(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return bits;
}

void put_f64(std::string& out, double x) { le_store(out, std::bit_cast<std::uint64_t>(x)); }
void put_i64(std::string& out, std::int64_t x) { le_store(out, std::bit_cast<std::uint64_t>(x)); }

}  // namespace

std::vector<double> GridSpec::wavenumbers(int axis) const {
  const int m = n[axis];
  const double base = 2.0 * std::numbers::pi / length[axis];
  std::vector<double> k(m);
  for (int j = 0; j < m; ++j) k[j] = base * (j <= m / 2 ? j : j - m);
  return k;
}

GridSpec make_grid(int dim, int n_points, double length) {
  std::array<int, 2> n = {n_points, dim == 2 ? n_points : 1};
  std::array<double, 2> len = {length, dim == 2 ? length : 0.0};
  return make_grid(dim, n, len);
}

GridSpec make_grid(int dim, std::array<int, 2> n, std::array<double, 2> length) {
  require(dim == 1 || dim == 2, "grid dim must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    require(n[a] >= 8, "n_points must be >= 8");
    require(length[a] > 0.0, "box length must be positive");
  }
  GridSpec g;
  g.dim = dim;
  g.n = {n[0], dim == 2 ? n[1] : 1};
  g.length = {length[0], dim == 2 ? length[1] : 0.0};
  return g;
}

std::vector<double> axis_coordinates(const GridSpec& grid, int axis) {
  std::vector<double> x(grid.n[axis]);
  for (int i = 0; i < grid.n[axis]; ++i) x[i] = i * grid.spacing(axis);
  return x;
}

InitialSpec InitialSpec::plane_wave(double k0x, double k0y) {
  InitialSpec s;
  s.kind = Kind::PlaneWave;
  s.k = {k0x, k0y};
  return s;
}

InitialSpec InitialSpec::gaussian(double sigma, double x0, double k0) {
  InitialSpec s;
  s.kind = Kind::Gaussian;
  s.sigma = {sigma, sigma};
  s.x0 = {x0, x0};
  s.k0 = {k0, 0.0};
  return s;
}

InitialSpec InitialSpec::gaussian2d(std::array<double, 2> sigma, std::array<double, 2> x0,
                                    std::array<double, 2> k0) {
  InitialSpec s;
  s.kind = Kind::Gaussian;
  s.sigma = sigma;
  s.x0 = x0;
  s.k0 = k0;
  return s;
}

InitialSpec InitialSpec::explicit_samples(std::vector<cplx> v, bool normalise) {
  InitialSpec s;
  s.kind = Kind::Explicit;
  s.values = std::move(v);
  s.normalise = normalise;
  return s;
}

namespace {

// Periodically wrapped complex gaussian: sum over images of
// exp(-(u+wL)^2/(4 sigma^2) + i k0 (u+wL)).  Each image is an L-translate of
// the same function, so the sum is exactly periodic for any k0.
cplx wrapped_gaussian_1d(double u, double L, double sigma, double k0) {
  cplx acc = 0.0;
  const int images = std::max(1, static_cast<int>(std::ceil(45.0 * sigma / L)) + 1);
  for (int w = -images; w <= images; ++w) {
    const double v = u + w * L;
    const double e = -v * v / (4.0 * sigma * sigma);
    if (e < -745.0) continue;  // exp underflows to 0
    acc += std::exp(cplx(e, k0 * v));
  }
  return acc;
}

}  // namespace

WaveFunction sample(const GridSpec& grid, const InitialSpec& spec) {
  WaveFunction psi;
  psi.grid = grid;
  psi.values.assign(grid.points(), cplx(0.0));

  switch (spec.kind) {
    case InitialSpec::Kind::PlaneWave: {
      std::array<double, 2> k = {0.0, 0.0};
      for (int a = 0; a < grid.dim; ++a) {
        const double base = 2.0 * std::numbers::pi / grid.length[a];
        const double mode = spec.k[a] / base;
        if (std::abs(mode - std::round(mode)) > 1e-9)
          throw std::invalid_argument(
              "plane-wave k is incommensurate with the box (k*L/2pi = " + std::to_string(mode) +
              ")");
        k[a] = std::round(mode) * base;
      }
      for (int i0 = 0; i0 < grid.n[0]; ++i0)
        for (int i1 = 0; i1 < grid.n[1]; ++i1) {
          const double phase = k[0] * i0 * grid.spacing(0) +
                               (grid.dim == 2 ? k[1] * i1 * grid.spacing(1) : 0.0);
          psi.values[i0 * grid.n[1] + i1] = std::exp(cplx(0.0, phase));
        }
      break;
    }
    case InitialSpec::Kind::Gaussian: {
      for (int a = 0; a < grid.dim; ++a)
        require(spec.sigma[a] > 0.0, "gaussian sigma must be positive");
      for (int i0 = 0; i0 < grid.n[0]; ++i0) {
        const cplx f0 = wrapped_gaussian_1d(i0 * grid.spacing(0) - spec.x0[0], grid.length[0],
                                            spec.sigma[0], spec.k0[0]);
        for (int i1 = 0; i1 < grid.n[1]; ++i1) {
          cplx f = f0;
          if (grid.dim == 2)
            f *= wrapped_gaussian_1d(i1 * grid.spacing(1) - spec.x0[1], grid.length[1],
                                     spec.sigma[1], spec.k0[1]);
          psi.values[i0 * grid.n[1] + i1] = f;
        }
      }
      break;
    }
    case InitialSpec::Kind::Explicit: {
      require(static_cast<int>(spec.values.size()) == grid.points(),
              "explicit sample count does not match grid");
      check_finite(spec.values, "explicit samples");
      psi.values = spec.values;
      break;
    }
  }

  if (spec.normalise) {
    const double nrm = norm(psi);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw std::invalid_argument("cannot normalise state with zero norm");
    for (auto& z : psi.values) z /= nrm;
  }
  return psi;
}

std::vector<cplx> fft_forward(const GridSpec& grid, const std::vector<cplx>& field) {
  auto& plans = PlanCache::instance().get(grid);
  std::vector<cplx> in(field), out(field.size());
  fftw_execute_dft(plans.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<cplx> fft_backward(const GridSpec& grid, const std::vector<cplx>& spectrum) {
  auto& plans = PlanCache::instance().get(grid);
  std::vector<cplx> in(spectrum), out(spectrum.size());
  fftw_execute_dft(plans.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double inv = 1.0 / static_cast<double>(grid.points());
  for (auto& z : out) z *= inv;
  return out;
}

std::vector<cplx> spectral_derivative(const GridSpec& grid, const std::vector<cplx>& field,
                                      int axis, int order) {
  require(axis >= 0 && axis < grid.dim, "derivative axis out of range");
  require(order == 1 || order == 2, "derivative order must be 1 or 2");
  require(static_cast<int>(field.size()) == grid.points(), "field size does not match grid");
  check_finite(field, "spectral_derivative input");

  auto spec = fft_forward(grid, field);
  const auto k = grid.wavenumbers(axis);
  const int n0 = grid.n[0], n1 = grid.n[1];
  const int nyq = grid.n[axis] / 2;

  for (int i0 = 0; i0 < n0; ++i0)
    for (int i1 = 0; i1 < n1; ++i1) {
      const int j = axis == 0 ? i0 : i1;
      cplx w;
      if (order == 1)
        w = (j == nyq) ? cplx(0.0) : cplx(0.0, k[j]);
      else
        w = cplx(-k[j] * k[j], 0.0);
      spec[i0 * n1 + i1] *= w;
    }
  return fft_backward(grid, spec);
}

std::vector<cplx> spectral_laplacian(const GridSpec& grid, const std::vector<cplx>& field) {
  auto out = spectral_derivative(grid, field, 0, 2);
  if (grid.dim == 2) {
    auto d2y = spectral_derivative(grid, field, 1, 2);
    for (size_t i = 0; i < out.size(); ++i) out[i] += d2y[i];
  }
  return out;
}

cplx inner_product(const WaveFunction& psi, const WaveFunction& phi) {
  if (!(psi.grid == phi.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  cplx acc = 0.0;
  for (size_t i = 0; i < psi.values.size(); ++i) acc += std::conj(psi.values[i]) * phi.values[i];
  return acc * psi.grid.cell_volume();
}

double norm(const GridSpec& grid, const std::vector<cplx>& values) {
  double acc = 0.0;
  for (const auto& z : values) acc += std::norm(z);
  return std::sqrt(acc * grid.cell_volume());
}

double norm(const WaveFunction& psi) { return norm(psi.grid, psi.values); }

void write_wf(const std::string& path, const WaveFunction& psi, double hbar, double mass) {
  std::string buf;
  buf.reserve(64 + 16 * psi.values.size());
  put_i64(buf, psi.grid.dim);
  for (int a = 0; a < psi.grid.dim; ++a) put_i64(buf, psi.grid.n[a]);
  for (int a = 0; a < psi.grid.dim; ++a) put_f64(buf, psi.grid.length[a]);
  put_f64(buf, psi.time);
  put_f64(buf, hbar);
  put_f64(buf, mass);
  for (const auto& z : psi.values) {
    put_f64(buf, z.real());
    put_f64(buf, z.imag());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw std::runtime_error("short write to " + path);
}

WfSnapshot read_wf(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  size_t pos = 0;
  auto next_u64 = [&]() {
    if (pos + 8 > buf.size()) throw std::runtime_error("truncated .wf file: " + path);
    const std::uint64_t v = le_load(buf.data() + pos);
    pos += 8;
    return v;
  };
  auto next_i64 = [&]() { return std::bit_cast<std::int64_t>(next_u64()); };
  auto next_f64 = [&]() { return std::bit_cast<double>(next_u64()); };

  const int dim = static_cast<int>(next_i64());
  if (dim != 1 && dim != 2) throw std::runtime_error("bad dim in .wf file: " + path);
  std::array<int, 2> n = {1, 1};
  std::array<double, 2> len = {0.0, 0.0};
  for (int a = 0; a < dim; ++a) n[a] = static_cast<int>(next_i64());
  for (int a = 0; a < dim; ++a) len[a] = next_f64();

  WfSnapshot snap;
  snap.psi.grid = make_grid(dim, n, len);
  snap.psi.time = next_f64();
  snap.hbar = next_f64();
  snap.mass = next_f64();
  const int total = snap.psi.grid.points();
  snap.psi.values.resize(total);
  for (int i = 0; i < total; ++i) {
    const double re = next_f64();
    const double im = next_f64();
    snap.psi.values[i] = cplx(re, im);
  }
  return snap;
}

std::string write_wf_json(const WaveFunction& psi, double hbar, double mass) {
  if (psi.grid.points() > 4096)
    throw std::invalid_argument("JSON snapshots are limited to 4096 points");
  nlohmann::json j;
  j["dim"] = psi.grid.dim;
  j["n"] = std::vector<int>(psi.grid.n.begin(), psi.grid.n.begin() + psi.grid.dim);
  j["length"] =
      std::vector<double>(psi.grid.length.begin(), psi.grid.length.begin() + psi.grid.dim);
  j["time"] = psi.time;
  j["hbar"] = hbar;
  j["mass"] = mass;
  std::vector<double> re(psi.values.size()), im(psi.values.size());
  for (size_t i = 0; i < psi.values.size(); ++i) {
    re[i] = psi.values[i].real();
    im[i] = psi.values[i].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

WfSnapshot read_wf_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int dim = j.at("dim").get<int>();
  std::array<int, 2> n = {1, 1};
  std::array<double, 2> len = {0.0, 0.0};
  const auto jn = j.at("n");
  const auto jl = j.at("length");
  for (int a = 0; a < dim; ++a) {
    n[a] = jn.at(a).get<int>();
    len[a] = jl.at(a).get<double>();
  }
  WfSnapshot snap;
  snap.psi.grid = make_grid(dim, n, len);
  snap.psi.time = j.at("time").get<double>();
  snap.hbar = j.at("hbar").get<double>();
  snap.mass = j.at("mass").get<double>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (static_cast<int>(re.size()) != snap.psi.grid.points() || re.size() != im.size())
    throw std::runtime_error("JSON snapshot sample count mismatch");
  snap.psi.values.resize(re.size());
  for (size_t i = 0; i < re.size(); ++i) snap.psi.values[i] = cplx(re[i], im[i]);
  return snap;
}

void write_wf_json_file(const std::string& path, const WaveFunction& psi, double hbar,
                        double mass) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << write_wf_json(psi, hbar, mass) << "\n";
}

}  // namespace dglab
