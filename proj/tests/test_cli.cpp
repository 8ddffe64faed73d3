#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "noongen/commands.hpp"
#include "noongen/config.hpp"

using namespace noongen;
namespace fs = std::filesystem;

namespace {

const fs::path kScratch = "cli_scratch";

fs::path write_json(const std::string& name, const nlohmann::json& doc) {
  fs::create_directories(kScratch);
  const fs::path path = kScratch / name;
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json base_config() {
  return {
      {"schema_version", 1},
      {"pumps",
       {{"pump1", {{{"l", 0}, {"p", 0}, {"re", 1.0}, {"im", 0.0}}}},
        {"pump2", {{{"l", 0}, {"p", 0}, {"re", 1.0}, {"im", 0.0}}}}}},
      {"waists", {{"pump1", 1.0}, {"pump2", 1.0}, {"signal", 1.0}, {"idler", 1.0}}},
      {"truncation", {{"l_max", 3}, {"p_max", 0}}},
      {"quadrature", {{"nodes", 128}, {"cutoff_multiplier", 8.0}, {"rel_tol", 1e-9}}},
      {"projectors",
       {{"D", {{{"l", -1}, {"re", 1.0}, {"im", 0.0}}}},
        {"A", {{{"l", -1}, {"re", 1.0}, {"im", 0.0}}}}}},
      {"seed", 1},
  };
}

nlohmann::json unit_table_config(std::initializer_list<int> modes) {
  nlohmann::json doc = base_config();
  nlohmann::json t1 = nlohmann::json::array(), t2 = nlohmann::json::array();
  for (const int m : modes) {
    t1.push_back({{"l_s", -m}, {"l_i", m}, {"re", 1.0}, {"im", 0.0}});
    t2.push_back({{"l_s", -m}, {"l_i", m}, {"re", 1.0}, {"im", 0.0}});
  }
  doc["overrides"] = {{"replace", true}, {"table1", t1}, {"table2", t2}};
  return doc;
}

nlohmann::json mes3d_config() {
  nlohmann::json doc = base_config();
  const double s = std::sqrt(2.5);
  doc["pumps"]["pump1"] = {{{"l", -2}, {"p", 0}, {"re", s}, {"im", 0.0}},
                           {{"l", 0}, {"p", 0}, {"re", 1.0}, {"im", 0.0}},
                           {{"l", 2}, {"p", 0}, {"re", s}, {"im", 0.0}}};
  return doc;
}

}  // namespace

TEST_CASE("config loading and diagnostics") {
  const fs::path good = write_json("good.json", base_config());
  const ScenarioConfig cfg = load_config(good);
  CHECK(cfg.l_max == 3);
  CHECK(cfg.proj_D.weight_for(-1) == Cplx{1.0, 0.0});

  nlohmann::json missing = base_config();
  missing.erase("truncation");
  CHECK_THROWS_WITH_AS(load_config(write_json("missing.json", missing)),
                       doctest::Contains("truncation"), ConfigError);

  nlohmann::json empty_pump = base_config();
  empty_pump["pumps"]["pump1"] = nlohmann::json::array();
  CHECK_THROWS_AS(load_config(write_json("empty_pump.json", empty_pump)), ConfigError);

  nlohmann::json bad_version = base_config();
  bad_version["schema_version"] = 9;
  CHECK_THROWS_AS(load_config(write_json("bad_version.json", bad_version)), ConfigError);

  CHECK_THROWS_AS(load_config(kScratch / "does_not_exist.json"), ConfigError);
}

TEST_CASE("cmd_spectrum writes the expected support and is byte stable") {
  const fs::path cfg = write_json("mes3d.json", mes3d_config());
  const fs::path out = kScratch / "spectrum.csv";
  REQUIRE(cmd_spectrum(cfg, out) == kExitOk);

  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "l_s,l_i,probability");
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string ls, li, p;
    std::getline(row, ls, ',');
    std::getline(row, li, ',');
    std::getline(row, p, ',');
    if (std::stod(p) > 0.0) {
      const int sum = std::stoi(ls) + std::stoi(li);
      CHECK((sum == -2 || sum == 0 || sum == 2));
    }
  }

  const std::string first = slurp(out);
  REQUIRE(cmd_spectrum(cfg, out) == kExitOk);
  CHECK(slurp(out) == first);

  const nlohmann::json meta =
      nlohmann::json::parse(slurp(kScratch / "spectrum.meta.json"));
  CHECK(meta["flatness"].get<double>() > 0.9);
  CHECK(meta["flatness_cells"].size() == 3);
}

TEST_CASE("cmd_spectrum rejects bad configs with exit code 2") {
  nlohmann::json empty_pump = mes3d_config();
  empty_pump["pumps"]["pump1"] = nlohmann::json::array();
  const fs::path cfg = write_json("empty_pump2.json", empty_pump);
  CHECK(cmd_spectrum(cfg, kScratch / "never.csv") == kExitConfigError);
}

TEST_CASE("cmd_spectrum maps quadrature failure to exit code 3") {
  nlohmann::json starved = mes3d_config();
  starved["quadrature"] = {{"nodes", 16}, {"cutoff_multiplier", 600.0}, {"rel_tol", 1e-9}};
  const fs::path cfg = write_json("starved.json", starved);
  CHECK(cmd_spectrum(cfg, kScratch / "never2.csv") == kExitNoConvergence);
}

TEST_CASE("cmd_evolve reports the heralded state") {
  const fs::path single = write_json("single.json", unit_table_config({1}));
  const fs::path out = kScratch / "evolve.json";
  REQUIRE(cmd_evolve(single, out) == kExitOk);
  nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["term_counts"]["psi_f"] == 2);

  nlohmann::json flip = unit_table_config({1, 2});
  flip["projectors"]["D"] = {{{"l", -1}, {"re", 1.0}, {"im", 0.0}},
                             {{"l", -2}, {"re", 1.0}, {"im", 0.0}}};
  flip["projectors"]["A"] = {{{"l", -1}, {"re", 1.0}, {"im", 0.0}},
                             {{"l", -2}, {"re", -1.0}, {"im", 0.0}}};
  const fs::path flip_path = write_json("flip.json", flip);
  REQUIRE(cmd_evolve(flip_path, out) == kExitOk);
  doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["term_counts"]["psi_f"] == 4);
  CHECK(doc["schmidt_bc"]["schmidt_rank"] == 2);
  CHECK(doc["schmidt_bc"]["term_dimension"] == 4);

  nlohmann::json outside = unit_table_config({1});
  outside["projectors"]["D"] = {{{"l", -7}, {"re", 1.0}, {"im", 0.0}}};
  CHECK(cmd_evolve(write_json("outside.json", outside), out) == kExitConfigError);
}

TEST_CASE("cmd_verify runs named scenarios") {
  const fs::path out = kScratch / "verify.json";
  CHECK(cmd_verify("three-mode-gr", out) == kExitOk);
  nlohmann::json doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["verification"]["pass"] == true);

  CHECK(cmd_verify("two-mode-noon", out) == kExitOk);
  doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["verification"]["pass"] == true);
  CHECK(doc["stages"]["term_counts"]["psi_f"] == 4);

  CHECK(cmd_verify("no-such-scenario", out) == kExitConfigError);
}

TEST_CASE("cmd_optimize recovers the target and honors its threshold") {
  nlohmann::json doc = unit_table_config({1, 2});
  doc["projectors"]["D"] = {{{"l", -1}, {"re", 1.0}, {"im", 0.0}},
                            {{"l", -2}, {"re", 1.0}, {"im", 0.0}}};
  doc["projectors"]["A"] = {{{"l", -1}, {"re", 1.0}, {"im", 0.0}},
                            {{"l", -2}, {"re", 1.0}, {"im", 0.0}}};
  doc["tolerances"] = {{"optimize_threshold", 0.99}};
  const fs::path cfg = write_json("optimize.json", doc);
  const fs::path out = kScratch / "search.json";

  CHECK(cmd_optimize(cfg, "two-mode-noon", 0, {}, out) == kExitConfigError);

  REQUIRE(cmd_optimize(cfg, "two-mode-noon", 300, 11, out) == kExitOk);
  const nlohmann::json result = nlohmann::json::parse(slurp(out));
  CHECK(result["best_objective"].get<double>() >= 0.99);
  CHECK(result["passed"] == true);
  CHECK(result["seed"] == 11);
  CHECK(fs::exists(kScratch / "search.trace.csv"));

  const std::string first = slurp(out);
  REQUIRE(cmd_optimize(cfg, "two-mode-noon", 300, 11, out) == kExitOk);
  CHECK(slurp(out) == first);
}

TEST_CASE("dispatch maps argv to subcommands and exit codes") {
  const fs::path out = kScratch / "dispatch.json";
  const std::vector<std::string> ok = {"verify", "--scenario", "two-mode-noon", "--out",
                                       out.string()};
  CHECK(dispatch(ok) == kExitOk);

  const std::vector<std::string> unknown_flag = {"verify", "--nope", "x"};
  CHECK(dispatch(unknown_flag) == kExitConfigError);

  const std::vector<std::string> help = {"--help"};
  CHECK(dispatch(help) == kExitOk);

  const std::vector<std::string> nothing = {};
  CHECK(dispatch(nothing) == kExitConfigError);

  const std::vector<std::string> missing_cfg = {"evolve", "--config",
                                                (kScratch / "ghost.json").string(),
                                                "--out", out.string()};
  CHECK(dispatch(missing_cfg) == kExitConfigError);
}
