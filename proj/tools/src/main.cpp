#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ladder_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Three-level ladder coupled to an oscillator: dressed energies, resonances and "
               "anticrossing splittings"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  unsigned threads = 1;
  const std::map<std::string, std::string> about{
      {"levels", "Adiabatic levels E1, E2, E3 across y"},
      {"wkb", "Dressed energies on a (g1, g2) grid, optionally checked against exact and FD"},
      {"contours", "Resonance contours E_k - E_j = dn in the (g1, g2) quadrant"},
      {"resonance-map", "Inverse detuning from the nearest odd resonance, exact eigenvalues"},
      {"splittings", "Perturbative vs exact anticrossing splittings along a ray"},
      {"validate", "Invariant suite"},
  };
  for (const std::string& name : ladder::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    CLI::Option* opt = sub->add_option("--config", config, "Configuration file");
    if (name != "validate") opt->required();
    sub->add_option("--out", out, "Output directory (overrides [output] dir)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  ladder::cli::Invocation inv;
  if (!config.empty()) inv.config = config;
  if (!out.empty()) inv.out = out;
  inv.threads = threads;
  return ladder::cli::run_command(chosen->get_name(), inv, std::cout, std::cerr);
}
