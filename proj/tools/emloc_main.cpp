// SPDX-FileCopyrightText: Copyright (c) 2026 The emloc Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "emloc/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--set", args.sets,
                  "override a config value, e.g. --set solver.k=2.5");
}

int run(const std::string& kind, const CommonArgs& args) {
  std::ifstream file(args.config_path);
  std::stringstream buffer;
  buffer << file.rdbuf();

  std::vector<std::pair<std::string, std::string>> overrides;
  overrides.emplace_back("experiment.kind", kind);
  for (const auto& s : args.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::cerr << "error: --set expects key=value, got '" << s << "'\n";
      return 2;
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }

  const emloc::ParseResult parsed = emloc::parse_config(buffer.str(), overrides);
  if (!parsed.ok()) {
    for (const auto& err : parsed.errors) {
      std::cerr << args.config_path;
      if (err.line > 0) std::cerr << ":" << err.line;
      std::cerr << ": error: " << err.message << "\n";
    }
    return 2;
  }
  return emloc::run_experiment(*parsed.config, std::cout, args.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localized electromagnetic fields and Runge approximation "
               "on edge-element Maxwell discretizations"};
  app.require_subcommand(1);

  const std::vector<std::string> kinds = {"verify", "resonances", "localize",
                                          "runge", "runge-localize"};
  const std::vector<std::string> descriptions = {
      "solver verification against closed-form solutions",
      "cavity resonance wavenumbers",
      "energy localization from partial boundary data",
      "Runge approximation of a prescribed local solution",
      "localization through the Runge approximation route"};

  std::vector<CommonArgs> args(kinds.size());
  for (size_t i = 0; i < kinds.size(); ++i)
    add_common(app.add_subcommand(kinds[i], descriptions[i]), args[i]);

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < kinds.size(); ++i)
    if (app.get_subcommand(kinds[i])->parsed()) return run(kinds[i], args[i]);
  return 2;
}
