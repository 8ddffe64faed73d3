#pragma once
#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace noongen {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitNoConvergence = 3,
};

/// spectrum: writes the spiral-spectrum CSV for pump 1 plus a metadata
/// sidecar (<out>.meta.json) with the pump, waists and flatness score.
int cmd_spectrum(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_path);

/// evolve: runs the full device pipeline and writes a JSON report with
/// per-stage term counts, the heralded state in both conventions and the
/// success probability.
int cmd_evolve(const std::filesystem::path& config_path,
               const std::filesystem::path& out_path);

/// verify: runs a named detection-basis scenario and writes its
/// verification report. Exit 0 iff the report passes.
int cmd_verify(const std::string& scenario,
               const std::filesystem::path& out_path,
               const std::optional<std::filesystem::path>& config_path = {});

/// optimize: searches projector weights for the given target (a scenario
/// name or a state-JSON path). Writes the search result JSON plus a
/// <out>.trace.csv improvement trace. Exit 0 iff the best objective meets
/// tolerances.optimize_threshold.
int cmd_optimize(const std::filesystem::path& config_path,
                 const std::string& target_spec, int budget,
                 std::optional<std::uint64_t> seed,
                 const std::filesystem::path& out_path);

/// Full argv-style dispatch (arguments after the program name).
int dispatch(std::span<const std::string> args);

}  // namespace noongen
