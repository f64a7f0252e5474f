#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dglab/checks.hpp"
#include "dglab/commands.hpp"
#include "dglab/gauge.hpp"

namespace py = pybind11;
using namespace dglab;

namespace {

py::array values_array(const WaveFunction& psi) {
  if (psi.grid.dim == 1) {
    py::array_t<cplx> out(psi.grid.n[0]);
    std::copy(psi.values.begin(), psi.values.end(), out.mutable_data());
    return out;
  }
  py::array_t<cplx> out({psi.grid.n[0], psi.grid.n[1]});
  std::copy(psi.values.begin(), psi.values.end(), out.mutable_data());
  return out;
}

py::array real_array(const GridSpec& grid, const std::vector<double>& v) {
  if (grid.dim == 1) {
    py::array_t<double> out(grid.n[0]);
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
  }
  py::array_t<double> out({grid.n[0], grid.n[1]});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<cplx> values_from_array(const GridSpec& grid, const py::array& arr) {
  auto a = py::array_t<cplx, py::array::c_style | py::array::forcecast>::ensure(arr);
  if (!a) throw std::invalid_argument("expected a complex array");
  if (a.size() != grid.points()) throw std::invalid_argument("array size does not match grid");
  std::vector<cplx> out(a.data(), a.data() + a.size());
  return out;
}

DGParams make_params(const GridSpec& grid, double hbar, double mass, double D, double Dprime,
                     const std::array<double, 5>& c, const std::string& potential,
                     const std::string& r3_variant) {
  DGParams p;
  p.hbar = hbar;
  p.mass = mass;
  p.D = D;
  p.Dprime = Dprime;
  p.c = c;
  p.potential = parse_field_expr(potential, grid);
  if (r3_variant == "current")
    p.r3 = R3Variant::CurrentSquared;
  else if (r3_variant == "divergence")
    p.r3 = R3Variant::DivergenceSquared;
  else
    throw std::invalid_argument("r3_variant must be 'current' or 'divergence'");
  return p;
}

VectorFieldSpec make_vector_field(const GridSpec& grid,
                                  const std::vector<std::string>& components) {
  if (static_cast<int>(components.size()) != grid.dim)
    throw std::invalid_argument("need one component expression per axis");
  std::vector<TrigPoly> comps;
  for (const auto& expr : components) {
    const auto f = parse_field_expr(expr, grid);
    if (!f.is_trig())
      throw std::invalid_argument("vector field components must be trig expressions");
    comps.push_back(f.trig);
  }
  return VectorFieldSpec::from_trig_components(std::move(comps), grid.dim);
}

py::dict entry_dict(const CatalogEntry& e) {
  py::dict d;
  d["name"] = e.name;
  d["configuration_space"] = e.configuration_space;
  d["pi1"] = e.pi1;
  d["H1"] = e.homology_h1;
  d["H2"] = e.cohomology_h2;
  py::list qs;
  for (const auto& q : e.quantum_numbers) {
    py::dict qd;
    qd["symbol"] = q.symbol;
    qd["domain"] = q.domain;
    qs.append(qd);
  }
  d["quantum_numbers"] = qs;
  return d;
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "strang") return Scheme::Strang;
  if (name == "rk4") return Scheme::Rk4;
  throw std::invalid_argument("scheme must be 'strang' or 'rk4'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "quantum Borel kinematics and Doebner-Goldin nonlinear dynamics";

  py::class_<GridSpec>(m, "Grid")
      .def(py::init([](int dim, int n, double length) { return make_grid(dim, n, length); }),
           py::arg("dim") = 1, py::arg("n") = 256, py::arg("length") = 40.0)
      .def_readonly("dim", &GridSpec::dim)
      .def_property_readonly("n", [](const GridSpec& g) {
        return std::vector<int>(g.n.begin(), g.n.begin() + g.dim);
      })
      .def_property_readonly("length", [](const GridSpec& g) {
        return std::vector<double>(g.length.begin(), g.length.begin() + g.dim);
      })
      .def("spacing", &GridSpec::spacing, py::arg("axis") = 0)
      .def("points", &GridSpec::points)
      .def("wavenumbers", &GridSpec::wavenumbers, py::arg("axis") = 0)
      .def("coordinates", &axis_coordinates, py::arg("axis") = 0)
      .def("__repr__", [](const GridSpec& g) {
        return "Grid(dim=" + std::to_string(g.dim) + ", n=" + std::to_string(g.n[0]) +
               ", length=" + std::to_string(g.length[0]) + ")";
      });

  py::class_<WaveFunction>(m, "WaveFunction")
      .def_readonly("grid", &WaveFunction::grid)
      .def_readwrite("time", &WaveFunction::time)
      .def_property_readonly("values", &values_array)
      .def("norm", [](const WaveFunction& psi) { return norm(psi); });

  py::class_<DGParams>(m, "DGParams")
      .def_readwrite("hbar", &DGParams::hbar)
      .def_readwrite("mass", &DGParams::mass)
      .def_readwrite("D", &DGParams::D)
      .def_readwrite("Dprime", &DGParams::Dprime)
      .def_readwrite("c", &DGParams::c)
      .def("is_linear", &DGParams::is_linear);
  m.def("params", &make_params, py::arg("grid"), py::arg("hbar") = 1.0, py::arg("mass") = 1.0,
        py::arg("D") = 0.0, py::arg("Dprime") = 0.0,
        py::arg("c") = std::array<double, 5>{0, 0, 0, 0, 0}, py::arg("potential") = "none",
        py::arg("r3_variant") = "current");

  py::class_<VectorFieldSpec>(m, "VectorField")
      .def("divergence_defect", &VectorFieldSpec::divergence_defect);
  m.def("vector_field", &make_vector_field, py::arg("grid"), py::arg("components"));
  m.def("lie_bracket", &lie_bracket);

  py::class_<LinearOperatorSpec>(m, "LinearOperator")
      .def("apply", &LinearOperatorSpec::apply);

  m.def(
      "sample_plane_wave",
      [](const GridSpec& g, double kx, double ky) {
        return sample(g, InitialSpec::plane_wave(kx, ky));
      },
      py::arg("grid"), py::arg("k"), py::arg("ky") = 0.0);
  m.def(
      "sample_gaussian",
      [](const GridSpec& g, double sigma, double x0, double k0) {
        return sample(g, InitialSpec::gaussian(sigma, x0, k0));
      },
      py::arg("grid"), py::arg("sigma"), py::arg("x0"), py::arg("k0") = 0.0);
  m.def(
      "from_values",
      [](const GridSpec& g, const py::array& arr, bool normalise) {
        return sample(g, InitialSpec::explicit_samples(values_from_array(g, arr), normalise));
      },
      py::arg("grid"), py::arg("values"), py::arg("normalise") = true);

  m.def("norm", py::overload_cast<const WaveFunction&>(&norm));
  m.def("inner_product", &inner_product);
  m.def(
      "spectral_derivative",
      [](const WaveFunction& psi, int axis, int order) {
        WaveFunction out = psi;
        out.values = spectral_derivative(psi.grid, psi.values, axis, order);
        return values_array(out);
      },
      py::arg("psi"), py::arg("axis") = 0, py::arg("order") = 1);

  m.def(
      "apply_position",
      [](const std::string& expr, const WaveFunction& psi) {
        return apply_position(parse_field_expr(expr, psi.grid), psi);
      },
      py::arg("f"), py::arg("psi"));
  m.def("apply_momentum", &apply_momentum, py::arg("X"), py::arg("psi"), py::arg("params"));
  m.def("momentum_operator", &momentum_operator, py::arg("X"), py::arg("params"));
  m.def(
      "homomorphism_residual",
      [](const std::string& kind, const std::vector<WaveFunction>& states,
         const DGParams& params, const std::string& f, const std::string& h,
         const VectorFieldSpec* X, const VectorFieldSpec* Y) {
        if (states.empty()) throw std::invalid_argument("empty test state list");
        const GridSpec& grid = states.front().grid;
        HomomorphismCheck check;
        if (kind == "position-position") {
          check.kind = HomKind::PositionPosition;
          check.f = parse_field_expr(f, grid);
          check.h = parse_field_expr(h, grid);
        } else if (kind == "momentum-position") {
          check.kind = HomKind::MomentumPosition;
          if (!X) throw std::invalid_argument("momentum-position needs X");
          check.X = *X;
          check.f = parse_field_expr(f, grid);
        } else if (kind == "momentum-momentum") {
          check.kind = HomKind::MomentumMomentum;
          if (!X || !Y) throw std::invalid_argument("momentum-momentum needs X and Y");
          check.X = *X;
          check.Y = *Y;
        } else {
          throw std::invalid_argument(
              "kind must be position-position, momentum-position, or momentum-momentum");
        }
        return homomorphism_residual(check, params, states);
      },
      py::arg("kind"), py::arg("states"), py::arg("params"), py::arg("f") = "none",
      py::arg("h") = "none", py::arg("X") = nullptr, py::arg("Y") = nullptr);
  m.def(
      "dynamics_commutator_residual",
      [](const std::string& f, const WaveFunction& psi, const DGParams& params) {
        return dynamics_commutator_residual(parse_field_expr(f, psi.grid), psi, params);
      },
      py::arg("f"), py::arg("psi"), py::arg("params"));

  m.def(
      "hydro_fields",
      [](const WaveFunction& psi, const DGParams& params) {
        const auto h = hydro_fields(psi, params);
        py::dict d;
        d["rho"] = real_array(psi.grid, h.rho);
        py::list j0, jD;
        for (int a = 0; a < psi.grid.dim; ++a) {
          j0.append(real_array(psi.grid, h.j0[a]));
          jD.append(real_array(psi.grid, h.jD[a]));
        }
        d["j0"] = j0;
        d["jD"] = jD;
        return d;
      },
      py::arg("psi"), py::arg("params"));
  m.def(
      "r_functional",
      [](int i, const WaveFunction& psi, const DGParams& params, double eps) {
        return real_array(psi.grid, r_functional(i, psi, params, Regularisation{eps}));
      },
      py::arg("i"), py::arg("psi"), py::arg("params"), py::arg("eps") = 1e-12);
  m.def(
      "imaginary_term",
      [](const WaveFunction& psi, const DGParams& params, double eps) {
        return real_array(psi.grid, imaginary_term(psi, params, Regularisation{eps}));
      },
      py::arg("psi"), py::arg("params"), py::arg("eps") = 1e-12);
  m.def(
      "dg_rhs",
      [](const WaveFunction& psi, const DGParams& params, double eps) {
        WaveFunction out = psi;
        out.values = dg_rhs(psi, params, Regularisation{eps});
        return values_array(out);
      },
      py::arg("psi"), py::arg("params"), py::arg("eps") = 1e-12);

  py::class_<ObsRow>(m, "ObsRow")
      .def_readonly("t", &ObsRow::t)
      .def_readonly("norm", &ObsRow::norm)
      .def_readonly("mean_x", &ObsRow::mean_x)
      .def_readonly("mean_p", &ObsRow::mean_p)
      .def_readonly("sigma_x", &ObsRow::sigma_x)
      .def_readonly("energy", &ObsRow::energy)
      .def_readonly("continuity_residual", &ObsRow::continuity_residual);
  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("snapshots", &Trajectory::snapshots)
      .def_readonly("observables", &Trajectory::observables)
      .def_readonly("final_state", &Trajectory::final_state)
      .def_readonly("record_dt", &Trajectory::record_dt);

  m.def(
      "step",
      [](const WaveFunction& psi, double dt, const DGParams& params, double eps,
         const std::string& scheme) {
        return step(psi, dt, params, Regularisation{eps}, scheme_from_name(scheme));
      },
      py::arg("psi"), py::arg("dt"), py::arg("params"), py::arg("eps") = 1e-12,
      py::arg("scheme") = "strang");
  m.def(
      "evolve",
      [](const WaveFunction& psi, double dt, long steps, long record_every,
         const DGParams& params, double eps, const std::string& scheme) {
        return evolve(psi, Schedule{dt, steps, record_every}, params, Regularisation{eps},
                      scheme_from_name(scheme));
      },
      py::arg("psi"), py::arg("dt"), py::arg("steps"), py::arg("record_every") = 1,
      py::arg("params"), py::arg("eps") = 1e-12, py::arg("scheme") = "strang");
  m.def(
      "continuity_residual",
      [](const Trajectory& traj, const DGParams& params, double eps) {
        return continuity_residual(traj, params, Regularisation{eps});
      },
      py::arg("trajectory"), py::arg("params"), py::arg("eps") = 1e-12);

  py::class_<GaugeParams>(m, "GaugeParams")
      .def(py::init([](double kappa, double gamma, double lam, double theta, double amp) {
             GaugeParams gp;
             gp.kappa = kappa;
             gp.gamma = gamma;
             gp.lambda = lam;
             gp.theta = theta;
             gp.amp_scale = amp;
             return gp;
           }),
           py::arg("kappa") = 0.0, py::arg("gamma") = 0.0, py::arg("lam") = 1.0,
           py::arg("theta") = 0.0, py::arg("amp") = 1.0)
      .def_readwrite("kappa", &GaugeParams::kappa)
      .def_readwrite("gamma", &GaugeParams::gamma)
      .def_readwrite("lambda_", &GaugeParams::lambda)
      .def_readwrite("theta", &GaugeParams::theta)
      .def_readwrite("amp", &GaugeParams::amp_scale)
      .def("rho_preserving", &GaugeParams::rho_preserving);
  m.def("gauge_compose", &gauge_compose, py::arg("second"), py::arg("first"));
  m.def("gauge_inverse", &gauge_inverse);
  m.def(
      "gauge_apply",
      [](const GaugeParams& gp, const WaveFunction& psi, double eps, bool force) {
        return gauge_apply(gp, psi, Regularisation{eps}, force);
      },
      py::arg("gp"), py::arg("psi"), py::arg("eps") = 1e-12, py::arg("force") = false);
  m.def("transformed_momentum", &transformed_momentum, py::arg("gp"), py::arg("X"),
        py::arg("params"));
  py::class_<GeneratorSpec>(m, "Generator");
  m.def(
      "generator_from_momentum",
      [](const VectorFieldSpec& X, const DGParams& params) {
        return GeneratorSpec::from_operator(momentum_operator(X, params));
      },
      py::arg("X"), py::arg("params"));
  m.def("generator_hamiltonian",
        [](const DGParams& params) { return GeneratorSpec::hamiltonian(params); });
  m.def(
      "tangent_map_numeric",
      [](const GaugeParams& gp, const GeneratorSpec& gen, const WaveFunction& psi, double delta,
         double eps) {
        WaveFunction out = psi;
        out.values = tangent_map_numeric(gp, gen, psi, delta, Regularisation{eps});
        return values_array(out);
      },
      py::arg("gp"), py::arg("generator"), py::arg("psi"), py::arg("delta") = 1e-5,
      py::arg("eps") = 1e-12);
  m.def("derive_dg_coefficients", &derive_dg_coefficients, py::arg("gp"), py::arg("params"));
  m.def("operator_gamma_from_polar", &operator_gamma_from_polar, py::arg("polar_gamma"),
        py::arg("hbar") = 1.0);
  m.def("polar_gamma_from_operator", &polar_gamma_from_operator, py::arg("operator_gamma"),
        py::arg("hbar") = 1.0);
  m.def("diffusion_from_operator_gamma", &diffusion_from_operator_gamma);
  m.def("diffusion_from_polar_gamma", &diffusion_from_polar_gamma, py::arg("polar_gamma"),
        py::arg("hbar") = 1.0, py::arg("mass") = 1.0);
  m.def(
      "gauge_covariance_residual",
      [](const GaugeParams& gp, const WaveFunction& psi0, double dt, long steps,
         long record_every, const DGParams& params, double eps) {
        const auto r = gauge_covariance_residual(gp, psi0, Schedule{dt, steps, record_every},
                                                 params, Regularisation{eps});
        return r.max_residual;
      },
      py::arg("gp"), py::arg("psi0"), py::arg("dt"), py::arg("steps"),
      py::arg("record_every") = 1, py::arg("params"), py::arg("eps") = 1e-12);

  m.def("catalog_list", [] {
    py::list out;
    for (const auto& e : catalog_list()) out.append(entry_dict(e));
    return out;
  });
  m.def("catalog_lookup", [](const std::string& name) { return entry_dict(catalog_lookup(name)); });

  m.def(
      "write_wf",
      [](const std::string& path, const WaveFunction& psi, double hbar, double mass) {
        write_wf(path, psi, hbar, mass);
      },
      py::arg("path"), py::arg("psi"), py::arg("hbar") = 1.0, py::arg("mass") = 1.0);
  m.def("read_wf", [](const std::string& path) {
    const auto snap = read_wf(path);
    return py::make_tuple(snap.psi, snap.hbar, snap.mass);
  });

  py::register_exception<InstabilityError>(m, "InstabilityError", PyExc_RuntimeError);
  py::register_exception<NodeError>(m, "NodeError", PyExc_ValueError);
}
