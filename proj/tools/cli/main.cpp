#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "biphoton/errors.hpp"
#include "scenario.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kPreconditionError = 3;
constexpr int kIoError = 4;

const char* kUsage =
    "usage: biphoton <command> --config FILE [--out DIR] [--oracle] [--threads N] [--quarter-phase]\n"
    "commands: hom mz nlmz gmz wigner stft reconstruct fermion list-models\n";

}  // namespace

int main(int argc, char** argv) {
  using namespace biphoton;

  CLI::App app{"Two-photon interferometry simulator"};
  app.require_subcommand(1);
  app.usage(kUsage);

  struct Options {
    std::string config;
    std::string out = "out";
    bool oracle = false;
    bool quarter = false;
    unsigned threads = 0;
  } opt;

  for (const auto& name : cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output directory");
    sub->add_flag("--oracle", opt.oracle, "use the brute-force linear-optics oracle");
    sub->add_option("--threads", opt.threads, "worker threads (0 = hardware concurrency)");
    sub->add_flag("--quarter-phase", opt.quarter, "add a pi/2 biphoton phase in arm a (gmz)");
  }
  app.add_subcommand("list-models", "list spectral models and their parameters");

  if (argc > 1 && argv[1][0] != '-') {
    const std::string first = argv[1];
    const auto& known = cli::commands();
    if (first != "list-models" && std::find(known.begin(), known.end(), first) == known.end()) {
      std::cerr << "error: unknown command '" << first << "'\n" << kUsage;
      return kConfigError;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return kConfigError;
  }

  auto* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  if (command == "list-models") {
    std::cout << cli::list_models();
    return 0;
  }

  try {
    auto scenario = cli::load_scenario(opt.config, command);
    scenario.out = opt.out;
    scenario.threads = opt.threads;
    scenario.oracle = scenario.oracle || opt.oracle;
    scenario.quarter_phase = scenario.quarter_phase || opt.quarter;
    if (scenario.quarter_phase && command != "gmz") throw ConfigError("--quarter-phase only applies to gmz");
    const auto report = cli::run(scenario);
    for (const auto& f : report.files) std::cout << f.string() << "\n";
    for (const auto& n : report.notes) std::cerr << "note: " << n << "\n";
    std::fprintf(stderr, "max clip %.3g, wall %.3f s\n", report.max_clip, report.wall_seconds);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  }
}
