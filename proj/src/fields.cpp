#include "dglab/fields.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

namespace dglab {

namespace {
constexpr double kDropTol = 0.0;  // keep all modes; algebra stays exact

double axis_omega(const std::array<double, 2>& lengths, int axis) {
  return 2.0 * std::numbers::pi / lengths[axis];
}
}  // namespace

void TrigPoly::require_same_box(const TrigPoly& o) const {
  if (lengths_ != o.lengths_)
    throw std::invalid_argument("trig polynomials built for different boxes");
}

void TrigPoly::add_term(Key m, cplx c) {
  auto it = coef_.find(m);
  if (it == coef_.end())
    coef_.emplace(m, c);
  else {
    it->second += c;
    if (std::abs(it->second) <= kDropTol) coef_.erase(it);
  }
}

void TrigPoly::prune() {
  for (auto it = coef_.begin(); it != coef_.end();)
    it = (it->second == cplx(0.0)) ? coef_.erase(it) : std::next(it);
}

TrigPoly TrigPoly::constant(double c, std::array<double, 2> lengths) {
  TrigPoly p(lengths);
  if (c != 0.0) p.coef_[{0, 0}] = c;
  return p;
}

TrigPoly TrigPoly::cosine(int axis, int mode, double amp, std::array<double, 2> lengths) {
  TrigPoly p(lengths);
  if (amp == 0.0) return p;
  if (mode == 0) return constant(amp, lengths);
  Key plus = axis == 0 ? Key{mode, 0} : Key{0, mode};
  Key minus = axis == 0 ? Key{-mode, 0} : Key{0, -mode};
  p.coef_[plus] = amp * 0.5;
  p.coef_[minus] = amp * 0.5;
  return p;
}

TrigPoly TrigPoly::sine(int axis, int mode, double amp, std::array<double, 2> lengths) {
  TrigPoly p(lengths);
  if (amp == 0.0 || mode == 0) return p;
  Key plus = axis == 0 ? Key{mode, 0} : Key{0, mode};
  Key minus = axis == 0 ? Key{-mode, 0} : Key{0, -mode};
  p.coef_[plus] = cplx(0.0, -0.5) * amp;
  p.coef_[minus] = cplx(0.0, 0.5) * amp;
  return p;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const {
  require_same_box(o);
  TrigPoly out = *this;
  for (const auto& [m, c] : o.coef_) out.add_term(m, c);
  out.prune();
  return out;
}

TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return *this + o.scaled(-1.0); }

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
  require_same_box(o);
  TrigPoly out(lengths_);
  for (const auto& [ma, ca] : coef_)
    for (const auto& [mb, cb] : o.coef_)
      out.add_term({ma.first + mb.first, ma.second + mb.second}, ca * cb);
  out.prune();
  return out;
}

TrigPoly TrigPoly::scaled(double s) const {
  TrigPoly out(lengths_);
  if (s == 0.0) return out;
  for (const auto& [m, c] : coef_) out.coef_[m] = c * s;
  return out;
}

TrigPoly TrigPoly::derivative(int axis) const {
  TrigPoly out(lengths_);
  const double w = axis_omega(lengths_, axis);
  for (const auto& [m, c] : coef_) {
    const int ma = axis == 0 ? m.first : m.second;
    if (ma == 0) continue;
    out.coef_[m] = c * cplx(0.0, ma * w);
  }
  return out;
}

double TrigPoly::evaluate(double x, double y) const {
  const double w0 = lengths_[0] > 0.0 ? axis_omega(lengths_, 0) : 0.0;
  const double w1 = lengths_[1] > 0.0 ? axis_omega(lengths_, 1) : 0.0;
  cplx acc = 0.0;
  for (const auto& [m, c] : coef_)
    acc += c * std::exp(cplx(0.0, m.first * w0 * x + m.second * w1 * y));
  return acc.real();
}

std::vector<double> TrigPoly::sample(const GridSpec& grid) const {
  for (int a = 0; a < grid.dim; ++a)
    if (lengths_[a] != grid.length[a])
      throw std::invalid_argument("trig polynomial box does not match grid");
  std::vector<double> out(grid.points());
  for (int i0 = 0; i0 < grid.n[0]; ++i0)
    for (int i1 = 0; i1 < grid.n[1]; ++i1)
      out[i0 * grid.n[1] + i1] =
          evaluate(i0 * grid.spacing(0), grid.dim == 2 ? i1 * grid.spacing(1) : 0.0);
  return out;
}

bool TrigPoly::is_constant() const {
  for (const auto& [m, c] : coef_)
    if (m != Key{0, 0} && c != cplx(0.0)) return false;
  return true;
}

double TrigPoly::constant_value() const {
  auto it = coef_.find({0, 0});
  return it == coef_.end() ? 0.0 : it->second.real();
}

int TrigPoly::max_abs_mode(int axis) const {
  int m = 0;
  for (const auto& [key, c] : coef_)
    m = std::max(m, std::abs(axis == 0 ? key.first : key.second));
  return m;
}

bool TrigPoly::near_zero(double tol) const {
  for (const auto& [m, c] : coef_)
    if (std::abs(c) > tol) return false;
  return true;
}

ScalarFieldSpec ScalarFieldSpec::zero(const GridSpec& grid) { return constant(0.0, grid); }

ScalarFieldSpec ScalarFieldSpec::constant(double c, const GridSpec& grid) {
  ScalarFieldSpec f;
  f.kind = Kind::Constant;
  f.dim = grid.dim;
  f.lengths = grid.length;
  f.trig = TrigPoly::constant(c, grid.length);
  return f;
}

ScalarFieldSpec ScalarFieldSpec::from_trig(TrigPoly p, int dim) {
  ScalarFieldSpec f;
  f.kind = p.is_constant() ? Kind::Constant : Kind::Trig;
  f.dim = dim;
  f.lengths = p.lengths();
  f.trig = std::move(p);
  return f;
}

ScalarFieldSpec ScalarFieldSpec::gaussian(double amp, std::array<double, 2> sigma,
                                          std::array<double, 2> center, const GridSpec& grid) {
  ScalarFieldSpec f;
  f.kind = Kind::Gaussian;
  f.dim = grid.dim;
  f.lengths = grid.length;
  f.g_amp = amp;
  f.g_sigma = sigma;
  f.g_center = center;
  for (int a = 0; a < grid.dim; ++a)
    if (!(sigma[a] > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
  return f;
}

ScalarFieldSpec ScalarFieldSpec::harmonic(double omega, std::array<double, 2> center,
                                          const GridSpec& grid) {
  ScalarFieldSpec f;
  f.kind = Kind::Harmonic;
  f.dim = grid.dim;
  f.lengths = grid.length;
  f.h_omega = omega;
  f.h_center = center;
  return f;
}

ScalarFieldSpec ScalarFieldSpec::derivative(int axis) const {
  if (!is_trig())
    throw std::invalid_argument("field spec is not closed under differentiation (not trig)");
  auto out = from_trig(trig.derivative(axis), dim);
  return out;
}

double ScalarFieldSpec::evaluate(double x, double y) const {
  switch (kind) {
    case Kind::Constant:
    case Kind::Trig:
      return trig.evaluate(x, y);
    case Kind::Gaussian: {
      double acc = 0.0;
      // wrapped sum; box lengths taken from construction
      auto folded = [](double u, double L) {
        double v = std::fmod(u, L);
        if (v < 0) v += L;
        if (v > L / 2) v -= L;
        return v;
      };
      const double u0 = folded(x - g_center[0], lengths[0]);
      double q = u0 * u0 / (2.0 * g_sigma[0] * g_sigma[0]);
      if (dim == 2) {
        const double u1 = folded(y - g_center[1], lengths[1]);
        q += u1 * u1 / (2.0 * g_sigma[1] * g_sigma[1]);
      }
      // nearest image only; the next image is exp(-(L/sigma)^2/8) smaller
      acc = g_amp * std::exp(-q);
      return acc;
    }
    case Kind::Harmonic: {
      double q = (x - h_center[0]) * (x - h_center[0]);
      if (dim == 2) q += (y - h_center[1]) * (y - h_center[1]);
      return 0.5 * h_omega * h_omega * q;
    }
  }
  return 0.0;
}

std::vector<double> ScalarFieldSpec::sample(const GridSpec& grid) const {
  if (is_trig()) return trig.sample(grid);
  std::vector<double> out(grid.points());
  for (int i0 = 0; i0 < grid.n[0]; ++i0)
    for (int i1 = 0; i1 < grid.n[1]; ++i1) {
      const double v =
          evaluate(i0 * grid.spacing(0), grid.dim == 2 ? i1 * grid.spacing(1) : 0.0);
      if (!std::isfinite(v)) throw std::invalid_argument("scalar field evaluates to non-finite");
      out[i0 * grid.n[1] + i1] = v;
    }
  return out;
}

VectorFieldSpec VectorFieldSpec::from_trig_components(std::vector<TrigPoly> comps, int dim) {
  if (static_cast<int>(comps.size()) != dim)
    throw std::invalid_argument("component count does not match dim");
  VectorFieldSpec X;
  X.dim = dim;
  TrigPoly div = comps[0].derivative(0);
  X.comp[0] = ScalarFieldSpec::from_trig(comps[0], dim);
  if (dim == 2) {
    div = div + comps[1].derivative(1);
    X.comp[1] = ScalarFieldSpec::from_trig(comps[1], dim);
  }
  X.divergence = ScalarFieldSpec::from_trig(div, dim);
  return X;
}

VectorFieldSpec VectorFieldSpec::from_components(std::vector<ScalarFieldSpec> comps,
                                                 ScalarFieldSpec divergence) {
  VectorFieldSpec X;
  X.dim = static_cast<int>(comps.size());
  for (int a = 0; a < X.dim; ++a) X.comp[a] = comps[a];
  X.divergence = std::move(divergence);
  return X;
}

VectorFieldSpec VectorFieldSpec::constant_field(std::array<double, 2> g, const GridSpec& grid) {
  VectorFieldSpec X;
  X.dim = grid.dim;
  for (int a = 0; a < grid.dim; ++a) X.comp[a] = ScalarFieldSpec::constant(g[a], grid);
  X.divergence = ScalarFieldSpec::zero(grid);
  return X;
}

bool VectorFieldSpec::is_trig() const {
  for (int a = 0; a < dim; ++a)
    if (!comp[a].is_trig()) return false;
  return divergence.is_trig();
}

double VectorFieldSpec::divergence_defect(const GridSpec& grid) const {
  std::vector<cplx> div_spectral(grid.points(), cplx(0.0));
  for (int a = 0; a < dim; ++a) {
    const auto ga = comp[a].sample(grid);
    std::vector<cplx> gz(ga.begin(), ga.end());
    const auto d = spectral_derivative(grid, gz, a, 1);
    for (int i = 0; i < grid.points(); ++i) div_spectral[i] += d[i];
  }
  const auto div_analytic = divergence.sample(grid);
  double defect = 0.0;
  for (int i = 0; i < grid.points(); ++i)
    defect = std::max(defect, std::abs(div_spectral[i].real() - div_analytic[i]));
  return defect;
}

ScalarFieldSpec directional_derivative(const VectorFieldSpec& X, const ScalarFieldSpec& f) {
  if (!X.is_trig() || !f.is_trig())
    throw std::invalid_argument("directional derivative needs trig specs");
  TrigPoly acc = X.comp[0].trig * f.trig.derivative(0);
  if (X.dim == 2) acc = acc + X.comp[1].trig * f.trig.derivative(1);
  return ScalarFieldSpec::from_trig(acc, X.dim);
}

ScalarFieldSpec trig_laplacian(const ScalarFieldSpec& f) {
  if (!f.is_trig()) throw std::invalid_argument("trig_laplacian needs a trig spec");
  TrigPoly acc = f.trig.derivative(0).derivative(0);
  if (f.dim == 2) acc = acc + f.trig.derivative(1).derivative(1);
  return ScalarFieldSpec::from_trig(acc, f.dim);
}

// ---------------------------------------------------------------------------
// Field expression parser (recursive descent).

namespace {

struct FieldParser {
  const std::string& text;
  const GridSpec& grid;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("column " + std::to_string(pos + 1) + ": " + msg);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool peek_alpha() {
    skip_ws();
    return pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]));
  }

  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos += static_cast<size_t>(end - begin);
    return v;
  }

  std::vector<double> arg_list(size_t min_args, size_t max_args, const char* what) {
    if (!eat('(')) fail(std::string("expected '(' after ") + what);
    std::vector<double> args;
    if (!eat(')')) {
      do {
        args.push_back(number());
      } while (eat(','));
      if (!eat(')')) fail("expected ')'");
    }
    if (args.size() < min_args || args.size() > max_args)
      fail(std::string(what) + ": wrong number of arguments");
    return args;
  }

  // trig primitive: sin(3x), cos(y), sin(x)
  TrigPoly trig_fn(bool is_sin) {
    if (!eat('(')) fail("expected '(' after sin/cos");
    skip_ws();
    int mode = 1;
    if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])))) {
      size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      mode = std::stoi(text.substr(start, pos - start));
    }
    skip_ws();
    int axis;
    if (pos < text.size() && (text[pos] == 'x' || text[pos] == 'y')) {
      axis = text[pos] == 'x' ? 0 : 1;
      ++pos;
    } else {
      fail("expected axis 'x' or 'y'");
    }
    if (axis >= grid.dim) fail("axis 'y' used on a 1d grid");
    if (!eat(')')) fail("expected ')'");
    return is_sin ? TrigPoly::sine(axis, mode, 1.0, grid.length)
                  : TrigPoly::cosine(axis, mode, 1.0, grid.length);
  }

  // factor := NUMBER | sin(..) | cos(..); factors multiply within a term
  struct Term {
    bool named = false;  // gaussian/harmonic/none: whole-expression forms
    ScalarFieldSpec spec;
    TrigPoly trig;
  };

  Term term() {
    TrigPoly acc = TrigPoly::constant(1.0, grid.length);
    bool first = true;
    for (;;) {
      skip_ws();
      if (peek_alpha()) {
        size_t save = pos;
        std::string name = ident();
        if (name == "sin" || name == "cos") {
          acc = acc * trig_fn(name == "sin");
        } else if (name == "harmonic") {
          if (!first) fail("harmonic(...) cannot be combined with other factors");
          auto args = arg_list(1, 3, "harmonic");
          std::array<double, 2> center = {0.0, 0.0};
          for (size_t i = 1; i < args.size(); ++i) center[i - 1] = args[i];
          Term t;
          t.named = true;
          t.spec = ScalarFieldSpec::harmonic(args[0], center, grid);
          return t;
        } else if (name == "gaussian") {
          if (!first) fail("gaussian(...) cannot be combined with other factors");
          auto args = arg_list(3, 5, "gaussian");
          std::array<double, 2> sigma = {args[1], args[1]};
          std::array<double, 2> center = {args[2], args.size() > 3 ? args[3] : args[2]};
          if (args.size() >= 5) sigma[1] = args[4];
          Term t;
          t.named = true;
          t.spec = ScalarFieldSpec::gaussian(args[0], sigma, center, grid);
          return t;
        } else if (name == "none" || name == "zero") {
          if (!first) fail("'none' cannot be combined with other factors");
          Term t;
          t.named = true;
          t.spec = ScalarFieldSpec::zero(grid);
          return t;
        } else {
          pos = save;
          fail("unknown function '" + name + "'");
        }
      } else {
        acc = acc * TrigPoly::constant(number(), grid.length);
      }
      first = false;
      if (!eat('*')) break;
    }
    Term t;
    t.trig = acc;
    return t;
  }

  ScalarFieldSpec parse() {
    skip_ws();
    if (pos >= text.size()) fail("empty field expression");
    TrigPoly acc = TrigPoly::constant(0.0, grid.length);
    bool have_trig = false;
    bool negate = eat('-');
    if (!negate) eat('+');
    for (;;) {
      Term t = term();
      if (t.named) {
        if (have_trig || negate) fail("named fields cannot appear in a sum");
        skip_ws();
        if (pos != text.size()) fail("trailing input after named field");
        return t.spec;
      }
      acc = acc + (negate ? t.trig.scaled(-1.0) : t.trig);
      have_trig = true;
      skip_ws();
      if (eat('+'))
        negate = false;
      else if (eat('-'))
        negate = true;
      else
        break;
    }
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return ScalarFieldSpec::from_trig(acc, grid.dim);
  }
};

}  // namespace

ScalarFieldSpec parse_field_expr(const std::string& text, const GridSpec& grid) {
  FieldParser p{text, grid};
  return p.parse();
}

}  // namespace dglab
