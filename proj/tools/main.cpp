#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace snowlab::cli;
  RunConfig cfg;
  int exit_code = kExitOk;
  std::string selftest_module;

  CLI::App app{"Snowflake metrics, isometric embeddings into normed spaces, and refutation certificates.",
               "snowflake-lab"};
  // "-h" is left free: subcommands take the snowflake function as --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", "snowflake-lab 1.0");
  auto* top_selftest = app.add_option("--selftest", selftest_module,
                                      "Run the example tables of a module (or 'all') and exit")
                           ->expected(0, 1)
                           ->default_str("all");
  register_commands(app, cfg, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  } catch (const snowlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (*top_selftest) {
    if (selftest_module.empty()) selftest_module = "all";
    const int failed = run_selftest(selftest_module);
    if (failed < 0) {
      std::cerr << "error: unknown module '" << selftest_module << "'\n";
      return kExitError;
    }
    return failed == 0 ? kExitOk : kExitError;
  }
  if (app.get_subcommands().empty()) {
    std::cout << app.help();
    return kExitError;
  }
  return exit_code;
}
