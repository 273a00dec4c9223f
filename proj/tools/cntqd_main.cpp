#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cntqd/cli.hpp"
#include "cntqd/kernels.hpp"

namespace {

struct CommandArgs {
  std::string config;
  std::string out;
  bool validate_only = false;
};

int run_command(const std::string& name, const CommandArgs& args) {
  cntqd::cli::Scenario scenario = cntqd::cli::parse_scenario_file(args.config);
  if (scenario.command != name)
    throw cntqd::ValidationError("scenario command '" + scenario.command +
                                 "' does not match subcommand '" + name + "'");
  if (args.validate_only) {
    std::cout << "ok: " << name << " scenario is valid\n";
    return 0;
  }
  std::string out = args.out.empty() ? scenario.output_path : args.out;
  if (out.empty())
    throw cntqd::ValidationError(
        "no output path: pass --out or set 'out' in the scenario");
  const cntqd::cli::ResultTable table = cntqd::cli::run_scenario(scenario);
  cntqd::cli::emit_csv(table, out);
  std::cout << "wrote " << out << " (" << table.rows.size() << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carbon-nanotube quantum-dot qubit simulator"};
  app.require_subcommand(0, 1);

  bool show_lane = false;
  app.add_flag("--simd-lane", show_lane,
               "print the active kernel lane and exit");

  const std::vector<std::string> names = {"spectrum", "gate", "two-qubit",
                                          "memory", "trap"};
  std::vector<CommandArgs> args(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i]);
    sub->add_option("--config", args[i].config, "scenario file (JSON)")
        ->required();
    sub->add_option("--out", args[i].out, "output CSV path");
    sub->add_flag("--validate-only", args[i].validate_only,
                  "validate the scenario and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (show_lane) {
    std::cout << cntqd::kernels::lane_name(cntqd::kernels::active_lane())
              << "\n";
    return 0;
  }

  try {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (app.got_subcommand(names[i])) return run_command(names[i], args[i]);
    std::cerr << "error: ValidationError: a subcommand is required "
                 "(spectrum|gate|two-qubit|memory|trap)\n";
    return 2;
  } catch (const cntqd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: Unhandled: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
