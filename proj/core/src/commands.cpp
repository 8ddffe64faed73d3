#include "noongen/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "noongen/analysis.hpp"
#include "noongen/config.hpp"
#include "noongen/search.hpp"

namespace noongen {

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

std::filesystem::path sidecar(const std::filesystem::path& out, const char* suffix) {
  std::filesystem::path p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "  coarse estimate: " << e.coarse_estimate.real() << "\n"
              << "  fine estimate:   " << e.fine_estimate.real() << "\n";
    return kExitNoConvergence;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int cmd_spectrum(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_path) {
  return run_guarded([&] {
    const ScenarioConfig cfg = load_config(config_path);
    const auto [table1, table2] = build_tables(cfg);
    const SpiralSpectrum spectrum = spiral_spectrum(table1);

    std::ostringstream csv;
    write_spectrum_csv(spectrum, csv);
    write_text_file(out_path, csv.str());

    nlohmann::json meta = {{"config", config_to_json(cfg)},
                           {"table_entries", table1.entries.size()},
                           {"l_max", spectrum.l_max}};
    const auto cells = cfg.resolved_flatness_cells();
    if (!cells.empty()) {
      nlohmann::json cell_list = nlohmann::json::array();
      for (const auto& [ls, li] : cells) cell_list.push_back({ls, li});
      meta["flatness_cells"] = std::move(cell_list);
      meta["flatness"] = mes_flatness(spectrum, cells);
    }
    write_text_file(sidecar(out_path, ".meta.json"), dump_json(meta));
    return kExitOk;
  });
}

int cmd_evolve(const std::filesystem::path& config_path,
               const std::filesystem::path& out_path) {
  return run_guarded([&] {
    const ScenarioConfig cfg = load_config(config_path);
    const StageStates stages = run_pipeline(cfg);
    nlohmann::json report = stages_to_json(stages);
    report["config"] = config_to_json(cfg);
    if (!stages.psi_f.is_zero()) {
      const Path left[] = {Path::B};
      const Path right[] = {Path::C};
      report["schmidt_bc"] =
          schmidt_to_json(schmidt_decomposition(stages.psi_f, left, right));
    }
    write_text_file(out_path, dump_json(report));
    return kExitOk;
  });
}

int cmd_verify(const std::string& scenario, const std::filesystem::path& out_path,
               const std::optional<std::filesystem::path>& config_path) {
  return run_guarded([&] {
    std::optional<ScenarioConfig> base;
    if (config_path) base = load_config(*config_path);
    const ScenarioOutcome outcome = run_named_scenario(scenario, base);

    nlohmann::json report = {{"scenario", scenario},
                             {"verification", verification_to_json(outcome.report)},
                             {"stages", stages_to_json(outcome.stages)}};
    write_text_file(out_path, dump_json(report));
    std::cout << (outcome.report.pass ? "PASS " : "FAIL ") << scenario << "\n";
    return outcome.report.pass ? kExitOk : kExitVerificationFailed;
  });
}

int cmd_optimize(const std::filesystem::path& config_path,
                 const std::string& target_spec, int budget,
                 std::optional<std::uint64_t> seed,
                 const std::filesystem::path& out_path) {
  return run_guarded([&] {
    const ScenarioConfig cfg = load_config(config_path);
    if (budget < 1) throw ConfigError("optimize: budget must be >= 1");

    FockState target;
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), target_spec) != names.end()) {
      const ScenarioOutcome outcome = run_named_scenario(target_spec, cfg);
      if (outcome.stages.psi_f.is_zero())
        throw ConfigError("target scenario heralds the zero state on this config");
      target = outcome.stages.psi_f;
    } else {
      std::ifstream in(target_spec);
      if (!in)
        throw ConfigError("target '" + target_spec +
                          "' is neither a scenario name nor a readable state file");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(target_spec + ": " + e.what());
      }
      target = normalize(state_from_json(doc)).first;
    }

    SearchSpace space;
    for (const auto& [l, w] : cfg.proj_D.weights) space.modes_D.push_back(l);
    for (const auto& [l, w] : cfg.proj_A.weights) space.modes_A.push_back(l);

    const std::uint64_t used_seed = seed.value_or(cfg.seed);
    const SearchResult result = optimize(cfg, target, space, budget, used_seed);

    nlohmann::json report = search_result_to_json(result, budget);
    report["target"] = target_spec;
    report["threshold"] = cfg.tolerances.optimize_threshold;
    report["passed"] = result.best_objective >= cfg.tolerances.optimize_threshold;
    write_text_file(out_path, dump_json(report));

    std::ostringstream trace;
    write_trace_csv(result, trace);
    write_text_file(sidecar(out_path, ".trace.csv"), trace.str());

    std::cout << "best objective " << result.best_objective << " after "
              << result.evaluations << " evaluations\n";
    return result.best_objective >= cfg.tolerances.optimize_threshold
               ? kExitOk
               : kExitVerificationFailed;
  });
}

int dispatch(std::span<const std::string> args) {
  CLI::App app{"two-crystal OAM interference device simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, scenario, target;
  std::string verify_config;
  int budget = 2000;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto* spectrum = app.add_subcommand("spectrum", "joint OAM spectrum of crystal 1");
  spectrum->add_option("--config", config_path, "run configuration (JSON)")->required();
  spectrum->add_option("--out", out_path, "output CSV path")->required();

  auto* evolve = app.add_subcommand("evolve", "run the full device pipeline");
  evolve->add_option("--config", config_path, "run configuration (JSON)")->required();
  evolve->add_option("--out", out_path, "output report path")->required();

  auto* verify = app.add_subcommand("verify", "check a named detection-basis scenario");
  verify->add_option("--scenario", scenario, "scenario name")->required();
  verify->add_option("--out", out_path, "output report path")->required();
  verify->add_option("--config", verify_config, "optional base configuration");

  auto* optimize_cmd = app.add_subcommand("optimize", "search projector weights");
  optimize_cmd->add_option("--config", config_path, "run configuration (JSON)")->required();
  optimize_cmd->add_option("--target", target, "scenario name or state-JSON path")->required();
  optimize_cmd->add_option("--budget", budget, "objective evaluation budget");
  optimize_cmd->add_option("--seed", seed, "search seed (defaults to config seed)")
      ->each([&](const std::string&) { seed_set = true; });
  optimize_cmd->add_option("--out", out_path, "output report path")->required();

  std::vector<std::string> argv(args.begin(), args.end());
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (spectrum->parsed()) return cmd_spectrum(config_path, out_path);
  if (evolve->parsed()) return cmd_evolve(config_path, out_path);
  if (verify->parsed()) {
    std::optional<std::filesystem::path> base;
    if (!verify_config.empty()) base = verify_config;
    return cmd_verify(scenario, out_path, base);
  }
  if (optimize_cmd->parsed()) {
    return cmd_optimize(config_path, target, budget,
                        seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                        out_path);
  }
  return kExitConfigError;
}

}  // namespace noongen
