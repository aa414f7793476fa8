#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "fglab/reports.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for formal group laws over unramified p-adic rings"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_help_flag("--help", "print this help");

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value file; flags override its keys");
  std::map<std::string, std::string> flags;
  std::map<std::string, CLI::Option*> opts;
  const std::map<std::string, std::string> help{
      {"p", "odd prime"},
      {"f", "residue degree of K"},
      {"N", "p-adic precision"},
      {"group", "lubin_tate | multiplicative | honda | custom"},
      {"u", "Honda coefficients, comma separated"},
      {"d", "Lubin-Tate coefficient subfield degree"},
      {"h", "Lubin-Tate reduction degree exponent"},
      {"file", "custom group: 'degree coefficient' lines of a Frobenius polynomial"},
      {"nmax", "highest torsion level"},
      {"dcap", "cap on N*e per level"},
      {"jobs", "worker threads"},
      {"seed", "seed for the property suites"},
      {"out", "report path ('-' writes the JSON to stdout)"}};
  for (const auto& key : fglab::RunConfig::keys())
    opts[key] = app.add_option("--" + key, flags[key], help.at(key));

  for (const char* name : {"construct", "torsion", "endo", "matrices", "verify"}) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  fglab::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg.apply(fglab::read_config_file(config_path));
    std::map<std::string, std::string> given;
    for (const auto& [key, opt] : opts)
      if (opt->count() > 0) given[key] = flags[key];
    cfg.apply(given);
  } catch (const fglab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const fglab::RunResult r = fglab::run_command(command, cfg);
  const std::string json = r.report.dump(2) + "\n";
  if (cfg.out == "-") {
    std::cout << json;
  } else {
    std::cout << fglab::render_summary(r);
    if (!cfg.out.empty()) {
      std::ofstream out(cfg.out);
      if (!out) {
        std::cerr << "error: cannot write " << cfg.out << "\n";
        return 2;
      }
      out << json;
    }
  }
  if (r.exit_code == 2 && cfg.out == "-") std::cerr << "error: " << r.report["summary"]["error"].get<std::string>() << "\n";
  return r.exit_code;
}
