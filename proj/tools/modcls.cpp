#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modcls/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact computations for algebroids, modular classes, Courant algebroids and Dirac structures"};
  std::string path;
  std::string verb;
  std::vector<std::string> args;
  std::string gauge;
  int bound = -1;
  app.add_option("file", path, "problem file")->required();
  app.add_option("verb", verb, "one of: check-jacobi modular exact morphism-check morphism-mod courant-check dorfman "
                               "projectable project quasi-poisson twisted-bracket dirac-check relative-modular "
                               "verify-cor53")
      ->required();
  app.add_option("args", args, "names and expressions for the verb");
  auto* gauge_opt = app.add_option("--gauge", gauge, "gauge factor for `modular`");
  auto* bound_opt = app.add_option("--bound", bound, "degree bound for `exact`")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : modcls::kExitInput;
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return modcls::kExitInput;
  }
  std::ostringstream text;
  text << in.rdbuf();

  modcls::Command cmd{verb, args, {}, {}};
  if (*gauge_opt) cmd.gauge = gauge;
  if (*bound_opt) cmd.bound = bound;
  const modcls::Report report = modcls::run(path, text.str(), cmd);
  std::cout << report.out;
  std::cerr << report.err;
  return report.exit;
}
