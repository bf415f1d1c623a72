#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumeric = 3;
constexpr int kIo = 4;

}  // namespace

int main(int argc, char** argv) {
  using namespace corrpic;
  using namespace corrpic::app;

  CLI::App cli{"Correlation-picture open-system dynamics"};
  cli.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = cli.add_subcommand("run", "Run a scenario and write one CSV per method");
  run->add_option("--config", config_path, "Scenario file")->required();
  run->add_option("--out-dir", out_dir, "Overrides output.dir");

  ValidationOptions vopts;
  std::vector<std::string> dims;
  auto* val = cli.add_subcommand("validate", "Check the exact generator on random instances");
  val->add_option("--seed", vopts.seed, "RNG seed")->capture_default_str();
  val->add_option("--instances", vopts.instances, "Number of instances")->capture_default_str();
  val->add_option("--dims", dims, "Comma-separated <dS>x<dB> pairs (default: all of 2..4)")->delimiter(',');
  val->add_option("--max-coupling", vopts.max_coupling, "Largest ||H_I||/||H_S||")->capture_default_str();
  val->add_flag("--mutate", vopts.mutate, "Corrupt chi with a traceful term (harness self-test)");

  auto* asym = cli.add_subcommand("asymptotic", "Print rho*_11 for a damped_ho scenario");
  asym->add_option("--config", config_path, "Scenario file")->required();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*val) {
      Config cfg;
      cfg.set("model", "random_validate");
      if (!dims.empty()) {
        std::string joined;
        for (const auto& d : dims) joined += (joined.empty() ? "" : ",") + d;
        cfg.set("validate.dims", joined);
      }
      auto s = load_scenario(cfg);
      s.validation.seed = vopts.seed;
      s.validation.instances = vopts.instances;
      s.validation.max_coupling = vopts.max_coupling;
      s.validation.mutate = vopts.mutate;
      const auto report = run_validation(s);
      std::cout << report.to_string();
      return report.pass() ? kOk : kNumeric;
    }

    auto s = load_scenario(Config::load(config_path));
    if (*asym) {
      if (s.model != "damped_ho") throw ConfigError("asymptotic needs a damped_ho scenario");
      bool degenerate = false;
      const double value = damped_ho_asymptotic(s.damped_ho, &degenerate);
      if (degenerate) std::cerr << "warning: degenerate sector spectrum; blocks dephased as a whole\n";
      std::printf("%.17g\n", value);
      return kOk;
    }

    if (!out_dir.empty()) s.out_dir = out_dir;
    if (s.model == "random_validate") {
      const auto report = run_validation(s);
      write_file((std::filesystem::path(s.out_dir) / (s.prefix + "_validation.txt")).string(), report.to_string());
      std::cout << report.to_string();
      return report.pass() ? kOk : kNumeric;
    }
    for (const auto& path : run_scenario(s, thread_cap())) std::cout << path << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what();
    if (e.step() != NumericError::npos) std::cerr << " (step " << e.step() << ")";
    std::cerr << '\n';
    return kNumeric;
  } catch (const corrpic::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }
}
