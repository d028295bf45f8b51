#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "biharm/fields.hpp"
#include "biharm/io.hpp"
#include "biharm/runner.hpp"

using namespace biharm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("biharm_test_" + name);
  fs::remove_all(p);
  return p;
}

bool has(const std::vector<Violation>& v, const std::string& text, bool error) {
  for (const auto& x : v)
    if (x.error == error && x.message.find(text) != std::string::npos) return true;
  return false;
}

std::map<std::string, std::string> checksums(const RunManifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& o : m.outputs) out[o.name] = o.crc32;
  return out;
}

}  // namespace

TEST_CASE("dump round trip") {
  GridField g(2);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 0.5 * static_cast<double>(i) - 3.0;
  std::stringstream ss;
  const Dump d = to_dump(g, 99);
  write_dump(ss, d.header, d.values);
  CHECK(ss.str().size() == 40 + 8 * g.size());
  CHECK(ss.str().substr(0, 4) == "BHRM");
  const Dump r = read_dump(ss);
  CHECK(r.header.seed == 99);
  const GridField back = grid_from_dump(r);
  CHECK(back.level() == 2);
  CHECK(back.values() == g.values());
  CHECK_THROWS_AS(discrete_from_dump(r), IoError);

  const SpectralField u = sample_spectral_field(3, SeededStream(2));
  const SpectralField v = spectral_from_dump(to_dump(u));
  CHECK(v.coefficients() == u.coefficients());
  CHECK(v.grounded() == u.grounded());
}

TEST_CASE("dump reader rejects bad input") {
  std::stringstream bad("XXXX0000");
  CHECK_THROWS_AS(read_dump(bad), IoError);
  std::stringstream ss;
  write_dump(ss, {DumpKind::grid, 1, 0, 0.0, 16}, std::vector<double>(16, 1.0));
  std::string s = ss.str();
  std::stringstream cut(s.substr(0, s.size() - 3));
  CHECK_THROWS_AS(read_dump(cut), IoError);
  CHECK_THROWS_AS(read_dump(fs::path("/nonexistent/biharm.bin")), IoError);
}

TEST_CASE("crc32 check value") {
  const fs::path p = scratch("crc.txt");
  std::ofstream(p) << "123456789";
  CHECK(file_crc32(p) == "cbf43926");
  fs::remove(p);
}

TEST_CASE("config parsing and validation") {
  const ExperimentConfig c = config_from_json(R"({"experiment":"liouville","levels":[2,3],"gammas":[0.5,3],"samples":10,"tolerances":{"x":1e-3}})");
  CHECK(c.level_min == 2);
  CHECK(c.level_max == 3);
  CHECK(c.gammas.size() == 2);
  CHECK(c.tolerance("x", 1.0) == 1e-3);
  CHECK(c.tolerance("y", 2.0) == 2.0);
  const auto v = validate(c);
  CHECK(has(v, "outside |gamma|<sqrt(8)", false));
  for (const auto& x : v) CHECK(!x.error);

  CHECK_THROWS_AS(config_from_json(R"({"bogus":1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1,2"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"samples":-3})"), ConfigError);

  ExperimentConfig d;
  d.experiment = "kernel-eval";
  d.cutoff = 2;
  d.level_min = d.level_max = 3;
  CHECK(has(validate(d), "cutoff below Haar resolution", true));
  d.cutoff = 16;
  CHECK(validate(d).empty());
  d.gammas.clear();
  CHECK(has(validate(d), "gamma list is empty", true));
  d.gammas = {1.0};
  d.samples = 0;
  CHECK(has(validate(d), "sample count", true));
  d.samples = 1;
  d.level_min = d.level_max = 6;
  d.cutoff = 128;
  CHECK(has(validate(d), "desk-scale", false));
  d.level_min = 0;
  CHECK(has(validate(d), "level must be >= 1", true));
}

TEST_CASE("config hash ignores threads and output directory") {
  ExperimentConfig a;
  a.experiment = "kernel-eval";
  ExperimentConfig b = a;
  b.threads = 7;
  b.out_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  const ExperimentConfig c = config_from_json(config_to_json(a));
  CHECK(config_hash(c) == config_hash(a));
}

TEST_CASE("run is deterministic and worker-count independent") {
  ExperimentConfig c;
  c.experiment = "liouville";
  c.level_min = c.level_max = 2;
  c.cutoff = 8;
  c.samples = 50;
  c.seed = 7;
  c.threads = 1;
  c.out_dir = scratch("run1");
  const RunManifest m1 = run(c);
  c.threads = 3;
  c.out_dir = scratch("run2");
  const RunManifest m2 = run(c);
  CHECK(checksums(m1) == checksums(m2));
  CHECK(!m1.outputs.empty());
  for (const auto& o : m1.outputs) CHECK(o.bytes > 0);
  const auto man = nlohmann::json::parse(std::ifstream(c.out_dir / "manifest.json"));
  CHECK(man["config_hash"] == m2.config_hash);
  CHECK(man["outputs"].size() == m2.outputs.size());
  // every report row carries provenance
  std::ifstream rows(c.out_dir / "liouville.jsonl");
  for (std::string line; std::getline(rows, line);) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["config_hash"] == m2.config_hash);
    CHECK(j.contains("stage"));
  }
  fs::remove_all(scratch("run1"));
  fs::remove_all(scratch("run2"));
}

TEST_CASE("run errors map to distinct exit statuses") {
  ExperimentConfig c;
  c.experiment = "no-such-suite";
  try {
    run(c);
    FAIL("expected UnknownSuite");
  } catch (const std::exception& e) {
    CHECK(exit_status_for(e) == exit_unknown_suite);
  }
  c.experiment = "kernel-eval";
  c.cutoff = 2;
  try {
    run(c);
    FAIL("expected ConfigError");
  } catch (const std::exception& e) {
    CHECK(exit_status_for(e) == exit_config);
  }
  c.cutoff = 16;
  c.out_dir = "/proc/biharm-cannot-write";
  try {
    run(c);
    FAIL("expected IoError");
  } catch (const std::exception& e) {
    CHECK(exit_status_for(e) == exit_io);
  }
  c.out_dir = scratch("breach");
  c.tolerances["kernel.green_band"] = 1e-9;
  try {
    run(c);
    FAIL("expected NumericalBreach");
  } catch (const std::exception& e) {
    CHECK(exit_status_for(e) == exit_numerical);
  }
  CHECK(fs::exists(c.out_dir / "manifest.json"));
  fs::remove_all(c.out_dir);
  CHECK(exit_status_for(std::runtime_error("x")) == exit_internal);
}
