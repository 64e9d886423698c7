#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "biphoton/pipeline.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton::cli {

struct ModelSpec {
  std::string model;
  double center = 0.0;
  double sigma = 1.0;
  std::optional<double> a;  // sign_alpha, power_alpha, split_phase
  double chirp = 0.0;       // linear spectral phase e^{i chirp w}
  std::string describe() const;
};

struct Range {
  double min;
  double max;
  std::size_t points;
};

struct Scenario {
  std::string command;  // hom, mz, nlmz, gmz, wigner, stft, reconstruct, fermion
  std::string name = "scenario";
  std::size_t grid_points = 513;
  double grid_span = 16.0;
  Range tau{-15.0, 15.0, 801};
  std::optional<Range> mu;
  std::optional<Range> wigner_tau;  // hom: Wigner map written next to each trace
  std::optional<Range> wigner_mu;
  std::vector<std::optional<double>> a_values{std::nullopt};  // one run per entry
  std::map<std::string, ModelSpec> spectra;  // f_plus, f_minus, gamma, beta, spectrum
  std::vector<std::string> states;           // mz / gmz reductions to run
  Port port = Port::A;
  std::optional<std::filesystem::path> input_trace;

  bool oracle = false;
  bool quarter_phase = false;
  unsigned threads = 0;
  std::filesystem::path out = "out";
};

/// Validates `config` against the schema for `command`; throws ConfigError.
Scenario parse_scenario(const nlohmann::json& config, const std::string& command);
/// Reads and parses a JSON file; unreadable files raise IoError, bad JSON ConfigError.
Scenario load_scenario(const std::filesystem::path& path, const std::string& command);

struct RunReport {
  std::vector<std::filesystem::path> files;
  double max_clip = 0.0;
  double clipped_mass = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> notes;
};

/// Builds one spectral model; `a_override` replaces the model's own a.
SpectralAmplitude build_model(const ModelSpec& spec, const FrequencyGrid& grid,
                              std::optional<double> a_override = std::nullopt);

/// Runs the scenario, writing CSVs, sidecars and summary.txt under scenario.out.
RunReport run(const Scenario& scenario);

std::string list_models();

const std::vector<std::string>& commands();

}  // namespace biphoton::cli
