#include "dglab/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "json.hpp"

namespace dglab {

namespace {

std::string snapshot_path(const RunConfig& cfg, const std::string& tag) {
  const std::string base = cfg.snapshot_prefix.empty() ? "state" : cfg.snapshot_prefix;
  return base + "_" + tag + (cfg.snapshot_format == "json" ? ".wf.json" : ".wf");
}

void write_snapshot(const RunConfig& cfg, const WaveFunction& psi, const std::string& tag) {
  const std::string path = snapshot_path(cfg, tag);
  if (cfg.snapshot_format == "json")
    write_wf_json_file(path, psi, cfg.hbar, cfg.mass);
  else
    write_wf(path, psi, cfg.hbar, cfg.mass);
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%11.4e", v);
  return buf;
}

}  // namespace

void print_check_report(const CheckReport& report, std::ostream& out) {
  out << "suite: " << report.suite << "\n";
  size_t width = 0;
  for (const auto& r : report.results) width = std::max(width, r.name.size());
  for (const auto& r : report.results)
    out << "  " << std::left << std::setw(static_cast<int>(width + 2)) << r.name
        << fmt_sci(r.value) << "  (tol " << fmt_sci(r.tolerance) << ")  "
        << (r.pass ? "pass" : "FAIL") << "\n";
}

int cmd_simulate(const RunConfig& cfg, bool dry_run, std::ostream& out, std::ostream& err) {
  if (dry_run) {
    out << render_config(cfg);
    return kExitOk;
  }

  const GridSpec grid = cfg.grid();
  const DGParams params = cfg.params();
  WaveFunction psi0;
  if (cfg.initial_kind == "file") {
    const auto snap = read_wf(cfg.initial_file);
    if (!(snap.psi.grid == grid))
      throw std::invalid_argument("initial.file grid does not match the configured grid");
    psi0 = snap.psi;
  } else {
    psi0 = sample(grid, cfg.initial());
  }

  try {
    const auto traj =
        evolve(psi0, cfg.schedule(), params, cfg.regularisation(), cfg.scheme_enum());
    write_observables_csv(cfg.csv, traj.observables);
    if (!cfg.snapshot_prefix.empty()) {
      if (cfg.snapshot_every > 0)
        for (size_t i = 0; i < traj.snapshots.size(); i += cfg.snapshot_every)
          write_snapshot(cfg, traj.snapshots[i], "t" + std::to_string(i));
      write_snapshot(cfg, traj.final_state, "final");
    }
    out << "wrote " << cfg.csv << " (" << traj.observables.size() << " rows)\n";
    return kExitOk;
  } catch (const InstabilityError& e) {
    err << "instability: " << e.what() << "\n";
    const std::string last_good = snapshot_path(cfg, "last_good");
    try {
      if (cfg.snapshot_format == "json")
        write_wf_json_file(last_good, e.last_good_state, cfg.hbar, cfg.mass);
      else
        write_wf(last_good, e.last_good_state, cfg.hbar, cfg.mass);
      err << "last good state written to " << last_good << "\n";
    } catch (const std::exception& io) {
      err << "could not preserve last good state: " << io.what() << "\n";
    }
    return kExitInstability;
  }
}

int cmd_check(const RunConfig& cfg, const std::string& suite, std::ostream& out,
              std::ostream& err) {
  std::vector<std::string> suites;
  if (suite == "all")
    suites = check_suite_names();
  else
    suites.push_back(suite);

  bool all_pass = true;
  std::vector<CheckReport> reports(suites.size());
  try {
    std::vector<std::function<void()>> tasks;
    for (size_t i = 0; i < suites.size(); ++i)
      tasks.push_back([&, i] { reports[i] = run_check_suite(suites[i], cfg); });
    run_parallel(std::move(tasks));
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitConfigError;
  }
  for (const auto& report : reports) {
    print_check_report(report, out);
    all_pass = all_pass && report.all_pass();
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_gauge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.D != 0.0 || cfg.Dprime != 0.0) {
    err << "gauge covariance needs a linear reference run "
           "(physics.D = physics.Dprime = 0)\n";
    return kExitConfigError;
  }
  const GridSpec grid = cfg.grid();
  const DGParams params = cfg.params();
  const Regularisation reg = cfg.regularisation();
  const GaugeParams gp = cfg.gauge();
  const auto psi0 = sample(grid, cfg.initial());

  const DGParams derived = derive_dg_coefficients(gp, params);
  out << "derived DG coefficients: D = " << derived.D << ", D' = " << derived.Dprime
      << ", c = [" << derived.c[0] << ", " << derived.c[1] << ", " << derived.c[2] << ", "
      << derived.c[3] << ", " << derived.c[4] << "]\n";

  const Schedule coarse = cfg.schedule();
  const auto r_coarse = gauge_covariance_residual(gp, psi0, coarse, params, reg);
  Schedule fine = coarse;  // same horizon, half the step and recording interval
  fine.dt /= 2.0;
  fine.steps *= 2;
  const auto r_fine = gauge_covariance_residual(gp, psi0, fine, params, reg);
  const double ratio = r_coarse.max_residual / r_fine.max_residual;

  out << "covariance residual at dt   = " << fmt_sci(r_coarse.max_residual) << "\n";
  out << "covariance residual at dt/2 = " << fmt_sci(r_fine.max_residual) << "\n";
  out << "refinement ratio            = " << fmt_sci(ratio) << " (expect ~4)\n";

  bool pass = r_coarse.max_residual < cfg.gauge_tolerance && ratio > 2.5;
  if (derived.D != 0.0) {
    DGParams wrong = derived;
    wrong.D *= 1.5;
    const auto r_wrong = gauge_covariance_residual(gp, psi0, coarse, params, reg, &wrong);
    const double inflation = r_wrong.max_residual / r_coarse.max_residual;
    out << "negative control (D x 1.5)  = " << fmt_sci(r_wrong.max_residual) << " ("
        << fmt_sci(inflation) << "x)\n";
    pass = pass && inflation > 5.0;
  }
  out << (pass ? "gauge covariance: pass\n" : "gauge covariance: FAIL\n");
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_catalog(const std::optional<std::string>& name, bool list, bool as_json,
                std::ostream& out, std::ostream& err) {
  const auto& entries = catalog_list();

  auto print_text = [&](const CatalogEntry& e) {
    out << e.name << "\n";
    out << "  M   = " << e.configuration_space << "\n";
    out << "  pi1 = " << e.pi1 << "\n";
    out << "  H1  = " << e.homology_h1 << "\n";
    out << "  H2  = " << e.cohomology_h2 << "\n";
    out << "  quantum numbers: ";
    if (e.quantum_numbers.empty()) out << "-";
    for (size_t i = 0; i < e.quantum_numbers.size(); ++i) {
      if (i) out << ", ";
      out << e.quantum_numbers[i].symbol << " in " << e.quantum_numbers[i].domain;
    }
    out << "\n";
  };

  if (list) {
    if (as_json) {
      out << catalog_json_resource() << "\n";
    } else {
      for (const auto& e : entries) print_text(e);
    }
    return kExitOk;
  }
  if (!name) {
    err << "catalog: give an entry name or --list\n";
    return kExitConfigError;
  }
  try {
    const auto& e = catalog_lookup(*name);
    if (as_json)
      out << catalog_entry_to_json(e) << "\n";
    else
      print_text(e);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitConfigError;
  }
}

int cmd_plot_data(const std::string& path, std::ostream& out, std::ostream& err) {
  try {
    const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    WfSnapshot snap;
    if (json) {
      std::ifstream is(path);
      if (!is) throw std::runtime_error("cannot open " + path);
      std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
      snap = read_wf_json(text);
    } else {
      snap = read_wf(path);
    }
    const auto& psi = snap.psi;
    const auto& g = psi.grid;
    char buf[160];
    if (g.dim == 1) {
      out << "# x re im rho phase\n";
      for (int i = 0; i < g.n[0]; ++i) {
        const cplx z = psi.values[i];
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g\n", i * g.spacing(0),
                      z.real(), z.imag(), std::norm(z), std::arg(z));
        out << buf;
      }
    } else {
      out << "# x y re im rho phase\n";
      for (int i0 = 0; i0 < g.n[0]; ++i0) {
        for (int i1 = 0; i1 < g.n[1]; ++i1) {
          const cplx z = psi.values[i0 * g.n[1] + i1];
          std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g %.17g\n",
                        i0 * g.spacing(0), i1 * g.spacing(1), z.real(), z.imag(), std::norm(z),
                        std::arg(z));
          out << buf;
        }
        out << "\n";  // gnuplot splot block separator
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace dglab
