// tcsplit: split-operator propagation of the driven Tavis-Cummings model.
//
//   tcsplit simulate --config run.cfg
//   tcsplit validate --config run.cfg
//   tcsplit bench --sweep "d=1e3:1e5:6;methods=linear,exp" --out bench/

#include <iostream>

#include "CLI11.hpp"
#include "tcsplit/app.hpp"
#include "tcsplit/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Split-operator propagation for the driven Tavis-Cummings model"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "propagate and write a trajectory CSV");
  simulate->add_option("--config", config_path, "key=value run configuration")->required();

  auto* validate = app.add_subcommand("validate", "check the propagators against the dense oracle");
  validate->add_option("--config", config_path, "key=value run configuration")->required();

  std::string sweep;
  std::string out_dir = "bench";
  auto* bench = app.add_subcommand("bench", "time one step versus dimension and fit exponents");
  bench->add_option("--sweep", sweep, "e.g. d=1e3:1e5:6;methods=linear,exp;reps=7")->required();
  bench->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? tcsplit::kExitOk : tcsplit::kExitUsage;
  }

  try {
    if (*simulate || *validate) {
      const tcsplit::RunConfig config = tcsplit::load_config(config_path);
      return *simulate ? tcsplit::run_simulate(config, std::cout, std::cerr)
                       : tcsplit::run_validate(config, std::cout, std::cerr);
    }
    return tcsplit::run_bench(tcsplit::parse_sweep(sweep), out_dir, std::cout, std::cerr);
  } catch (const tcsplit::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tcsplit::kExitUsage;
  }
}
