#include <boost/crc.hpp>
#include <cmath>
#include <cstdio>
#include <json.hpp>

#include "biharm/io.hpp"
#include "biharm/liouville.hpp"
#include "biharm/runner.hpp"

namespace biharm {

using nlohmann::ordered_json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kernel-eval", "sample-field", "discrete-field", "liouville", "conformal-check", "convergence-report"};
  return names;
}

double ExperimentConfig::tolerance(const std::string& key, double fallback) const {
  auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const auto& v = it.value();
      if (k == "experiment") c.experiment = v.get<std::string>();
      else if (k == "level") c.level_min = c.level_max = v.get<int>();
      else if (k == "levels") {
        const auto r = v.get<std::vector<int>>();
        if (r.size() != 2) throw ConfigError("levels must be [min, max]");
        c.level_min = r[0];
        c.level_max = r[1];
      } else if (k == "gammas") c.gammas = v.get<std::vector<double>>();
      else if (k == "cutoff") c.cutoff = v.get<int>();
      else if (k == "samples") {
        if (v.get<long long>() < 0) throw ConfigError("samples must be nonnegative");
        c.samples = v.get<std::size_t>();
      } else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "out_dir") c.out_dir = v.get<std::string>();
      else if (k == "threads") c.threads = v.get<unsigned>();
      else if (k == "tolerances") c.tolerances = v.get<std::map<std::string, double>>();
      else throw ConfigError("unknown config key: " + k);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

namespace {

ordered_json echo(const ExperimentConfig& c, bool with_threads) {
  ordered_json j;
  j["experiment"] = c.experiment;
  j["levels"] = {c.level_min, c.level_max};
  j["gammas"] = c.gammas;
  j["cutoff"] = c.cutoff;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir.string();
  if (with_threads) j["threads"] = c.threads;
  j["tolerances"] = c.tolerances;
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) { return echo(c, true).dump(); }

std::string config_hash(const ExperimentConfig& c) {
  ordered_json j = echo(c, false);
  j.erase("out_dir");
  const std::string s = j.dump();
  boost::crc_32_type crc;
  crc.process_bytes(s.data(), s.size());
  char out[9];
  std::snprintf(out, sizeof out, "%08x", crc.checksum());
  return out;
}

std::vector<Violation> validate(const ExperimentConfig& c) {
  std::vector<Violation> v;
  const auto err = [&](std::string m) { v.push_back({true, std::move(m)}); };
  const auto warn = [&](std::string m) { v.push_back({false, std::move(m)}); };

  bool known = false;
  for (const auto& s : suite_names()) known = known || s == c.experiment;
  if (!known) err("unknown experiment name: '" + c.experiment + "'");

  if (c.level_min < 1) err("level must be >= 1");
  if (c.level_max < c.level_min) err("level range is empty");
  if (c.level_max > 7) err("level above 7 exceeds memory limits");
  else if (c.level_max > 5) warn("level above desk-scale budget (l <= 5)");
  if (c.level_max >= 0 && c.level_max < 30 && static_cast<long long>(c.cutoff) < (1LL << (c.level_max + 1)))
    err("cutoff below Haar resolution (need N >= 2^(l+1) = " + std::to_string(1LL << (c.level_max + 1)) + ")");
  if (c.cutoff > 64) warn("cutoff above desk-scale budget (N <= 64)");
  if (c.samples < 1) err("sample count must be >= 1");
  const bool monte_carlo = c.experiment == "liouville" || c.experiment == "conformal-check";
  if (monte_carlo && c.samples < 2) err("Monte Carlo suites need at least 2 samples");
  if (c.gammas.empty()) err("gamma list is empty");
  for (double g : c.gammas) {
    if (!std::isfinite(g)) err("gamma must be finite");
    else if (c.experiment == "liouville" && std::abs(g) >= kCriticalGamma)
      warn("gamma=" + std::to_string(g) + " outside |gamma|<sqrt(8) convergence regime");
  }
  for (const auto& [k, t] : c.tolerances)
    if (!(t > 0.0)) err("tolerance '" + k + "' must be positive");
  if (c.experiment == "sample-field" && c.cutoff > 16) warn("spectral dump capped at N=16 (dense (2N+1)^4 storage)");
  return v;
}

std::string RunManifest::to_json() const {
  ordered_json j;
  j["config"] = ordered_json::parse(config_json);
  j["config_hash"] = config_hash;
  j["version"] = version;
  ordered_json st = ordered_json::array();
  for (const auto& s : stages) st.push_back({{"stage", s.name}, {"seconds", s.seconds}});
  j["stages"] = st;
  ordered_json out = ordered_json::array();
  for (const auto& o : outputs) out.push_back({{"file", o.name}, {"crc32", o.crc32}, {"bytes", o.bytes}});
  j["outputs"] = out;
  j["warnings"] = warnings;
  return j.dump(2);
}

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const UnknownSuite*>(&e)) return exit_unknown_suite;
  if (dynamic_cast<const ConfigError*>(&e)) return exit_config;
  if (dynamic_cast<const NumericalBreach*>(&e)) return exit_numerical;
  if (dynamic_cast<const IoError*>(&e)) return exit_io;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return exit_io;
  return exit_internal;
}

}  // namespace biharm
