#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mdiw/numeric.hpp"

using namespace mdiw;
using namespace mdiw::cli;

int main(int argc, char** argv) {
  if (const char* tol = std::getenv("MDIW_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(tol, &end);
    if (end == tol || v <= 0.0) {
      std::cerr << "error: MDIW_TOL must be a positive number\n";
      return kExitValidation;
    }
    numeric_policy().decision_tol = v;
  }

  CLI::App app{"mdiw: measurement-device-independent entanglement witness laboratory"};
  app.require_subcommand(1);

  WitnessArgs witness_args;
  CLI::App* witness = app.add_subcommand(
      "witness", "Coefficient ladder and NPT verdict for a bipartite state file");
  witness->add_option("file", witness_args.state_path, "state JSON file")->required();
  witness->add_option("--copies", witness_args.copies, "highest coefficient index (default: full)");
  witness->add_option("--method", witness_args.method, "eigen|power-sum|witness")
      ->default_val("eigen");
  witness->add_flag("--json", witness_args.json, "emit a JSON report");

  MdiRunArgs run_args;
  CLI::App* mdi = app.add_subcommand("mdi", "Referee games");
  mdi->require_subcommand(1);
  CLI::App* run = mdi->add_subcommand("run", "Play the witness game on a state file");
  run->add_option("--state", run_args.state_path, "state JSON file")->required();
  run->add_flag("--universal", run_args.universal, "four-copy determinant game");
  run->add_option("--ensemble", run_args.ensemble, "table1|gellmann-frame")
      ->default_val("table1");
  run->add_option("--witness", run_args.witness, "auto or a witness JSON file")
      ->default_val("auto");
  run->add_option("--shots", run_args.shots, "shots per input pair (0: exact only)");
  run->add_option("--seed", run_args.seed, "sampling seed");

  SweepConfig sweep_config;
  CLI::App* noise = app.add_subcommand("noise", "Noise studies");
  noise->require_subcommand(1);
  CLI::App* sweep = noise->add_subcommand("sweep", "Grid sweep of the modified game value");
  sweep->add_option("--family", sweep_config.family, "werner|timeshift")->required();
  sweep->add_option("--param", sweep_config.param, "family parameter grid lo:hi:step")
      ->required();
  sweep->add_option("--xi", sweep_config.xi, "detector-efficiency grid")->default_val("1");
  sweep->add_option("--mu", sweep_config.mu, "visibility grid")->default_val("1");
  sweep->add_option("--delta", sweep_config.delta, "plate-error grid (radians)")
      ->default_val("0");
  sweep->add_option("--out", sweep_config.out_path, "output CSV path")->required();

  ReproduceArgs repro_args;
  CLI::App* repro = app.add_subcommand("reproduce", "Canned studies with asserted targets");
  repro->add_option("name", repro_args.name, "werner-mdiew|timeshift-attack|tomography-cost")
      ->required();
  repro->add_option("--out", repro_args.out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*witness) return cmd_witness(witness_args, std::cout);
    if (*run) return cmd_mdi_run(run_args, std::cout);
    if (*sweep) return cmd_noise_sweep(sweep_config, std::cout);
    if (*repro) return cmd_reproduce(repro_args, std::cout);
  } catch (const AssertionFailure& e) {
    std::cerr << "assertion: " << e.what() << "\n";
    return kExitAssertion;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
