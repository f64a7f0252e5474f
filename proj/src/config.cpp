#include "dglab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace dglab {

namespace {

struct KeyedValue {
  std::string value;
  std::string where;  // "line 12" or "override 1"
};

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw std::invalid_argument(where + ": " + msg);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "grid.dim", "grid.n", "grid.n_y", "grid.length", "grid.length_y",
      "physics.hbar", "physics.mass", "physics.D", "physics.Dprime",
      "physics.c1", "physics.c2", "physics.c3", "physics.c4", "physics.c5",
      "physics.potential", "physics.r3_variant",
      "initial.kind", "initial.sigma", "initial.sigma_y", "initial.x0", "initial.x0_y",
      "initial.k0", "initial.k0_y", "initial.mode", "initial.mode_y", "initial.file",
      "time.dt", "time.steps", "time.record_every", "time.scheme",
      "regularisation.epsilon",
      "output.csv", "output.snapshot_prefix", "output.snapshot_every", "output.snapshot_format",
      "run.seed",
      "gauge.kappa", "gauge.gamma", "gauge.lambda", "gauge.theta", "gauge.amp",
      "gauge.tolerance",
  };
  return keys;
}

bool key_known(const std::string& key) {
  for (const auto& k : known_keys())
    if (k == key) return true;
  return false;
}

class Resolver {
 public:
  explicit Resolver(std::map<std::string, KeyedValue> kv) : kv_(std::move(kv)) {}

  double real(const std::string& key, double dflt) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    char* end = nullptr;
    const std::string& v = it->second.value;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
      fail(it->second.where, key + ": expected a real number, got '" + v + "'");
    return x;
  }

  long integer(const std::string& key, long dflt) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return dflt;
    char* end = nullptr;
    const std::string& v = it->second.value;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || v.empty())
      fail(it->second.where, key + ": expected an integer, got '" + v + "'");
    return x;
  }

  std::string text(const std::string& key, const std::string& dflt) {
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second.value;
  }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string where(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? "config" : it->second.where;
  }

  void check(const std::string& key, bool ok, const std::string& msg) {
    if (!ok) fail(where(key), key + ": " + msg);
  }

 private:
  std::map<std::string, KeyedValue> kv_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  std::map<std::string, KeyedValue> kv;

  auto add_pair = [&](const std::string& raw, const std::string& where) {
    const size_t eq = raw.find('=');
    if (eq == std::string::npos) fail(where, "expected 'section.key = value'");
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty() || key.find('.') == std::string::npos)
      fail(where, "expected 'section.key = value', got key '" + key + "'");
    if (!key_known(key)) fail(where, "unknown key '" + key + "'");
    if (value.empty()) fail(where, key + ": empty value");
    kv[key] = {value, where};
  };

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    add_pair(line, "line " + std::to_string(line_no));
  }
  for (size_t i = 0; i < overrides.size(); ++i)
    add_pair(overrides[i], "override " + std::to_string(i + 1));

  Resolver r(std::move(kv));
  RunConfig cfg;

  cfg.dim = static_cast<int>(r.integer("grid.dim", 1));
  r.check("grid.dim", cfg.dim == 1 || cfg.dim == 2, "dim must be 1 or 2");
  cfg.n = static_cast<int>(r.integer("grid.n", 256));
  r.check("grid.n", cfg.n >= 8, "n_points must be >= 8");
  cfg.n_y = static_cast<int>(r.integer("grid.n_y", cfg.n));
  r.check("grid.n_y", cfg.n_y >= 8, "n_points must be >= 8");
  cfg.length = r.real("grid.length", 40.0);
  r.check("grid.length", cfg.length > 0.0, "box length must be positive");
  cfg.length_y = r.real("grid.length_y", cfg.length);
  r.check("grid.length_y", cfg.length_y > 0.0, "box length must be positive");

  cfg.hbar = r.real("physics.hbar", 1.0);
  r.check("physics.hbar", cfg.hbar > 0.0, "hbar must be positive");
  cfg.mass = r.real("physics.mass", 1.0);
  r.check("physics.mass", cfg.mass > 0.0, "mass must be positive");
  cfg.D = r.real("physics.D", 0.0);        // any real: the D-family covers all of R
  cfg.Dprime = r.real("physics.Dprime", 0.0);
  for (int i = 0; i < 5; ++i)
    cfg.c[i] = r.real("physics.c" + std::to_string(i + 1), 0.0);
  cfg.potential = r.text("physics.potential", "none");
  cfg.r3_variant = r.text("physics.r3_variant", "current");
  r.check("physics.r3_variant", cfg.r3_variant == "current" || cfg.r3_variant == "divergence",
          "r3_variant must be 'current' or 'divergence'");

  cfg.initial_kind = r.text("initial.kind", "gaussian");
  r.check("initial.kind",
          cfg.initial_kind == "gaussian" || cfg.initial_kind == "plane-wave" ||
              cfg.initial_kind == "file",
          "kind must be gaussian, plane-wave, or file");
  cfg.sigma = r.real("initial.sigma", 1.0);
  cfg.sigma_y = r.real("initial.sigma_y", cfg.sigma);
  if (cfg.initial_kind == "gaussian") {
    r.check("initial.sigma", cfg.sigma > 0.0, "sigma must be positive");
    r.check("initial.sigma_y", cfg.sigma_y > 0.0, "sigma must be positive");
  }
  cfg.x0 = r.real("initial.x0", cfg.length / 2.0);
  cfg.x0_y = r.real("initial.x0_y", cfg.length_y / 2.0);
  cfg.k0 = r.real("initial.k0", 0.0);
  cfg.k0_y = r.real("initial.k0_y", 0.0);
  cfg.mode = static_cast<int>(r.integer("initial.mode", 1));
  cfg.mode_y = static_cast<int>(r.integer("initial.mode_y", 0));
  cfg.initial_file = r.text("initial.file", "");
  if (cfg.initial_kind == "file")
    r.check("initial.file", !cfg.initial_file.empty(), "file kind needs initial.file");

  cfg.dt = r.real("time.dt", 1e-3);
  r.check("time.dt", cfg.dt > 0.0 && std::isfinite(cfg.dt), "dt must be positive");
  cfg.steps = r.integer("time.steps", 1000);
  r.check("time.steps", cfg.steps >= 0, "steps must be >= 0");
  cfg.record_every = r.integer("time.record_every", 10);
  r.check("time.record_every", cfg.record_every >= 1, "record_every must be >= 1");
  if (cfg.steps > 0)
    r.check("time.record_every", cfg.record_every <= cfg.steps,
            "record_every must be <= steps");
  cfg.scheme = r.text("time.scheme", "strang");
  r.check("time.scheme", cfg.scheme == "strang" || cfg.scheme == "rk4",
          "scheme must be 'strang' or 'rk4'");

  cfg.epsilon = r.real("regularisation.epsilon", 1e-12);
  r.check("regularisation.epsilon", cfg.epsilon > 0.0 && cfg.epsilon <= 1e-6,
          "epsilon must be in (0, 1e-6]");

  cfg.csv = r.text("output.csv", "observables.csv");
  cfg.snapshot_prefix = r.text("output.snapshot_prefix", "");
  cfg.snapshot_every = r.integer("output.snapshot_every", 0);
  r.check("output.snapshot_every", cfg.snapshot_every >= 0, "snapshot_every must be >= 0");
  cfg.snapshot_format = r.text("output.snapshot_format", "wf");
  r.check("output.snapshot_format", cfg.snapshot_format == "wf" || cfg.snapshot_format == "json",
          "snapshot_format must be 'wf' or 'json'");

  cfg.seed = static_cast<std::uint64_t>(r.integer("run.seed", 42));

  cfg.gauge_kappa = r.real("gauge.kappa", 0.0);
  cfg.gauge_gamma = r.real("gauge.gamma", 0.0);
  cfg.gauge_lambda = r.real("gauge.lambda", 1.0);
  r.check("gauge.lambda", cfg.gauge_lambda != 0.0, "lambda must be nonzero");
  cfg.gauge_theta = r.real("gauge.theta", 0.0);
  cfg.gauge_amp = r.real("gauge.amp", 1.0);
  r.check("gauge.amp", cfg.gauge_amp > 0.0, "amp must be positive");
  cfg.gauge_tolerance = r.real("gauge.tolerance", 1e-4);
  r.check("gauge.tolerance", cfg.gauge_tolerance > 0.0, "tolerance must be positive");

  // the potential must parse against the resolved grid
  try {
    (void)parse_field_expr(cfg.potential, cfg.grid());
  } catch (const std::invalid_argument& e) {
    fail(r.where("physics.potential"), "physics.potential: " + std::string(e.what()));
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return parse_config(text, overrides);
}

GridSpec RunConfig::grid() const {
  return make_grid(dim, {n, dim == 2 ? n_y : 1}, {length, dim == 2 ? length_y : 0.0});
}

DGParams RunConfig::params() const {
  DGParams p;
  p.hbar = hbar;
  p.mass = mass;
  p.D = D;
  p.Dprime = Dprime;
  p.c = c;
  p.potential = parse_field_expr(potential, grid());
  p.r3 = r3_variant == "current" ? R3Variant::CurrentSquared : R3Variant::DivergenceSquared;
  return p;
}

InitialSpec RunConfig::initial() const {
  if (initial_kind == "gaussian")
    return InitialSpec::gaussian2d({sigma, sigma_y}, {x0, x0_y}, {k0, k0_y});
  if (initial_kind == "plane-wave") {
    const double kx = mode * 2.0 * std::numbers::pi / length;
    const double ky = dim == 2 ? mode_y * 2.0 * std::numbers::pi / length_y : 0.0;
    return InitialSpec::plane_wave(kx, ky);
  }
  throw std::invalid_argument("initial.kind 'file' is resolved by the caller");
}

Schedule RunConfig::schedule() const { return Schedule{dt, steps, record_every}; }

Regularisation RunConfig::regularisation() const { return Regularisation{epsilon}; }

Scheme RunConfig::scheme_enum() const {
  return scheme == "strang" ? Scheme::Strang : Scheme::Rk4;
}

GaugeParams RunConfig::gauge() const {
  GaugeParams gp;
  gp.kappa = gauge_kappa;
  gp.gamma = gauge_gamma;
  gp.lambda = gauge_lambda;
  gp.theta = gauge_theta;
  gp.amp_scale = gauge_amp;
  return gp;
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream os;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  os << "grid.dim = " << cfg.dim << "\n";
  os << "grid.n = " << cfg.n << "\n";
  os << "grid.n_y = " << cfg.n_y << "\n";
  os << "grid.length = " << num(cfg.length) << "\n";
  os << "grid.length_y = " << num(cfg.length_y) << "\n";
  os << "physics.hbar = " << num(cfg.hbar) << "\n";
  os << "physics.mass = " << num(cfg.mass) << "\n";
  os << "physics.D = " << num(cfg.D) << "\n";
  os << "physics.Dprime = " << num(cfg.Dprime) << "\n";
  for (int i = 0; i < 5; ++i)
    os << "physics.c" << (i + 1) << " = " << num(cfg.c[i]) << "\n";
  os << "physics.potential = " << cfg.potential << "\n";
  os << "physics.r3_variant = " << cfg.r3_variant << "\n";
  os << "initial.kind = " << cfg.initial_kind << "\n";
  os << "initial.sigma = " << num(cfg.sigma) << "\n";
  os << "initial.sigma_y = " << num(cfg.sigma_y) << "\n";
  os << "initial.x0 = " << num(cfg.x0) << "\n";
  os << "initial.x0_y = " << num(cfg.x0_y) << "\n";
  os << "initial.k0 = " << num(cfg.k0) << "\n";
  os << "initial.k0_y = " << num(cfg.k0_y) << "\n";
  os << "initial.mode = " << cfg.mode << "\n";
  os << "initial.mode_y = " << cfg.mode_y << "\n";
  if (!cfg.initial_file.empty()) os << "initial.file = " << cfg.initial_file << "\n";
  os << "time.dt = " << num(cfg.dt) << "\n";
  os << "time.steps = " << cfg.steps << "\n";
  os << "time.record_every = " << cfg.record_every << "\n";
  os << "time.scheme = " << cfg.scheme << "\n";
  os << "regularisation.epsilon = " << num(cfg.epsilon) << "\n";
  os << "output.csv = " << cfg.csv << "\n";
  if (!cfg.snapshot_prefix.empty())
    os << "output.snapshot_prefix = " << cfg.snapshot_prefix << "\n";
  os << "output.snapshot_every = " << cfg.snapshot_every << "\n";
  os << "output.snapshot_format = " << cfg.snapshot_format << "\n";
  os << "run.seed = " << cfg.seed << "\n";
  os << "gauge.kappa = " << num(cfg.gauge_kappa) << "\n";
  os << "gauge.gamma = " << num(cfg.gauge_gamma) << "\n";
  os << "gauge.lambda = " << num(cfg.gauge_lambda) << "\n";
  os << "gauge.theta = " << num(cfg.gauge_theta) << "\n";
  os << "gauge.amp = " << num(cfg.gauge_amp) << "\n";
  os << "gauge.tolerance = " << num(cfg.gauge_tolerance) << "\n";
  return os.str();
}

}  // namespace dglab
