#include <iostream>

#include "CLI11.hpp"
#include "dglab/commands.hpp"

using namespace dglab;

int main(int argc, char** argv) {
  CLI::App app{"dg-lab: quantum Borel kinematics and Doebner-Goldin dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  bool dry_run = false;
  std::string suite = "all";
  std::string catalog_name;
  bool catalog_list_flag = false;
  bool as_json = false;
  std::string plot_file;

  auto add_config_opts = [&](CLI::App* cmd, bool config_required = true) {
    auto* opt = cmd->add_option("config", config_path, "run configuration file");
    if (config_required) opt->required();
    cmd->add_option("--set", overrides, "override a key, e.g. --set physics.D=0.1");
  };

  auto* sim = app.add_subcommand("simulate", "integrate a configured run and write observables");
  add_config_opts(sim);
  sim->add_flag("--dry-run", dry_run, "validate and echo the resolved config, touch no files");

  auto* check = app.add_subcommand("check", "run a residual suite and print the table");
  add_config_opts(check);
  check->add_option("--suite", suite,
                    "kinematics | dynamics-obstruction | gauge-equivalence | continuity | all");

  auto* gauge = app.add_subcommand("gauge", "gauge covariance of a linear run ([gauge] section)");
  add_config_opts(gauge);

  auto* catalog = app.add_subcommand("catalog", "query the Borel kinematics catalog");
  catalog->add_option("name", catalog_name, "entry name");
  catalog->add_flag("--list", catalog_list_flag, "print every entry");
  catalog->add_flag("--json", as_json, "emit JSON");

  auto* plot = app.add_subcommand("plot-data", "dump a .wf snapshot as gnuplot columns");
  plot->add_option("file", plot_file, "snapshot file (.wf or .wf.json)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(parse_config_file(config_path, overrides), dry_run, std::cout,
                          std::cerr);
    if (check->parsed())
      return cmd_check(parse_config_file(config_path, overrides), suite, std::cout, std::cerr);
    if (gauge->parsed())
      return cmd_gauge(parse_config_file(config_path, overrides), std::cout, std::cerr);
    if (catalog->parsed()) {
      std::optional<std::string> name;
      if (!catalog_name.empty()) name = catalog_name;
      return cmd_catalog(name, catalog_list_flag, as_json, std::cout, std::cerr);
    }
    if (plot->parsed()) return cmd_plot_data(plot_file, std::cout, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
