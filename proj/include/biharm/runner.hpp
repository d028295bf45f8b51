#pragma once

// Experiment orchestration behind the biharm CLI.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace biharm {

enum ExitStatus : int { exit_ok = 0, exit_internal = 1, exit_config = 2, exit_numerical = 3, exit_io = 4, exit_unknown_suite = 5 };

const std::vector<std::string>& suite_names();

struct ExperimentConfig {
  std::string experiment;
  int level_min = 3;
  int level_max = 3;
  std::vector<double> gammas{1.0};
  int cutoff = 16;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "biharm-out";
  unsigned threads = 0;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key, double fallback) const;
};

/// Parses the JSON config format; unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& c);
/// CRC-32 of the canonical JSON echo (threads excluded: it never changes outputs).
std::string config_hash(const ExperimentConfig& c);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NumericalBreach : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnknownSuite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  bool error = true;  // false: warning only
  std::string message;
};

/// All violated config invariants and warnings; the run starts iff no entry is an error.
std::vector<Violation> validate(const ExperimentConfig& c);

struct OutputFile {
  std::string name;
  std::string crc32;
  std::uintmax_t bytes = 0;
};

struct StageTiming {
  std::string name;
  double seconds = 0.0;
};

struct RunManifest {
  std::string config_json;
  std::string config_hash;
  std::string version;
  std::vector<StageTiming> stages;
  std::vector<OutputFile> outputs;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

/// Runs the named suite, writes outputs and manifest.json into c.out_dir.
/// Throws UnknownSuite, ConfigError, NumericalBreach, or IoError.
RunManifest run(const ExperimentConfig& c);

/// Maps an exception from run() to its exit status.
int exit_status_for(const std::exception& e);

}  // namespace biharm
