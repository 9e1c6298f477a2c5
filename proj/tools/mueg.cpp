#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mueg/cli/cli.hpp"
#include "mueg/errors.hpp"

namespace {

// Command-line options that override config keys.
struct Override {
  const char* flag;
  const char* key;
  const char* help;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Representability constructions, bound verification and uniform electron gas surrogates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::string> values;
  app.add_option("--config", config_path, "Job file with key = value lines and [section] headers");
  app.add_option("--seed", values["job.seed"], "Random seed recorded in every report");
  app.add_option("--workers", values["job.workers"], "Worker threads for point loops");
  app.add_option("--out", values["job.out"], "Directory for report files");
  bool strict = false;
  app.add_flag("--strict-vorticity", strict, "Integrated bound with constant 1");

  const std::map<std::string, std::vector<Override>> table = {
      {"construct",
       {{"--rho", "rho", "Density field file"},
        {"--w", "w", "Velocity field file"},
        {"--g", "g", "Gauge field file"},
        {"--delta", "delta", "Width for the constant policy"},
        {"--epsilon", "epsilon", "Profile parameter"},
        {"--width", "width", "pointwise or constant"},
        {"--dump-kernel", "dump_kernel", "Write gamma(x, anchor) as a field file (true/false)"}}},
      {"verify",
       {{"--suite", "suite", "pointwise, integrated or all"},
        {"--states", "states", "Number of random states"},
        {"--orbitals", "orbitals", "Comma-separated orbital field files"},
        {"--tolerance", "tolerance", "Pointwise tolerance"}}},
      {"tile",
       {{"--l", "l", "Tetrahedron scale"},
        {"--delta", "delta", "Mollifier width"},
        {"--target", "target", "tetra or box"},
        {"--mc-samples", "mc_samples", "Monte-Carlo samples"},
        {"--off", "off", "Write the tiling as an OFF mesh (true/false)"}}},
      {"ueg-scan",
       {{"--rho0", "rho0", "Density"},
        {"--nu0", "nu0", "Vorticity as x,y,z"},
        {"--domain", "domain", "tetra or box"},
        {"--delta-policy", "delta_policy", "fixed or thermodynamic"},
        {"--delta", "delta", "Width for the fixed policy"},
        {"--scales", "scales", "Comma-separated domain scales"},
        {"--points", "points", "Grid points per axis"},
        {"--exchange", "exchange", "Add the exchange refinement (true/false)"}}},
      {"acceptance", {{"--only", "only", "Comma-separated criterion numbers"}}},
  };
  const std::map<std::string, std::string> descriptions = {
      {"construct", "Build the density matrix for field inputs and report marginals and the kinetic bound"},
      {"verify", "Check the pointwise and integrated inequalities on orbital sets"},
      {"tile", "Report the tetrahedral tiling, index classification and partition-of-unity residuals"},
      {"ueg-scan", "Per-volume surrogate energies of the vortex trial state over domain scales"},
      {"acceptance", "Run the acceptance criteria"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const std::string& name : mueg::cli_commands()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    subs[name] = sub;
    const auto it = table.find(name);
    if (it == table.end()) continue;
    for (const Override& o : it->second) sub->add_option(o.flag, values[name + "." + o.key], o.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mueg::exit_usage;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  mueg::JobConfig cfg;
  try {
    if (!config_path.empty()) cfg = mueg::JobConfig::from_file(config_path);
    for (const auto& [key, value] : values)
      if (!value.empty()) cfg.set(key, value);
    if (strict) cfg.set("job.strict_vorticity", "true");
  } catch (const mueg::Error& e) {
    std::cerr << "error: " << command << ": reading configuration: " << e.what() << "\n";
    return mueg::exit_usage;
  }
  return mueg::run_job(command, cfg, std::cout, std::cerr);
}
