#pragma once
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "json.hpp"
#include "noongen/analysis.hpp"
#include "noongen/protocol.hpp"

namespace noongen {

/// Search space over heralding-projector weights, optionally extended by
/// the pump-1 component amplitudes. The first ket of each projector (and
/// the first pump component, when enabled) is the gauge reference with its
/// weight pinned to 1 (real, non-negative); every further weight
/// contributes a magnitude in [0, max_magnitude] and a phase in [0, 2*pi).
/// Dimension: 2*(modes_D - 1) + 2*(modes_A - 1) [+ 2*(pump1_components - 1)].
struct SearchSpace {
  std::vector<int> modes_D;
  std::vector<int> modes_A;
  double max_magnitude = 4.0;
  std::optional<std::vector<double>> initial;  // optional start point

  /// Pump-coefficient block: when enabled, the trailing parameters reweight
  /// the pump-1 LG components (their count must match the configuration).
  bool optimize_pump1 = false;
  int pump1_components = 0;

  void validate() const;
  int dimension() const;
  /// Clamps magnitudes and wraps phases, then builds the projector pair
  /// from the leading parameters.
  std::pair<Projector, Projector> decode(std::span<const double> params) const;
  /// Decoded pump-1 amplitudes (unnormalized), or empty when the block is
  /// disabled.
  std::vector<Cplx> decode_pump(std::span<const double> params) const;
};

struct TracePoint {
  int evaluation = 0;
  double objective = 0.0;
};

struct SearchResult {
  Projector best_D;
  Projector best_A;
  std::vector<double> best_params;
  double best_objective = 0.0;
  int evaluations = 0;
  std::vector<TracePoint> trace;  // recorded at improvements, non-decreasing
  std::uint64_t seed = 0;
  double success_probability = 0.0;  // at the best point
};

/// Fidelity of the heralded state to `target` for one projector pair;
/// zero when the heralding amplitude vanishes.
double herald_fidelity(const PipelinePrefix& prefix, const Projector& proj_D,
                       const Projector& proj_A, const FockState& target);

/// Objective for one parameter vector: runs the cached pipeline with the
/// decoded projectors installed. Only valid for spaces without the pump
/// block (the prefix bakes the tables in).
double objective(std::span<const double> params, const SearchSpace& space,
                 const PipelinePrefix& prefix, const FockState& target);

/// Objective that honors the pump block: rebuilds the tables with the
/// decoded pump-1 amplitudes before heralding.
double objective(std::span<const double> params, const SearchSpace& space,
                 const ScenarioConfig& cfg, const FockState& target);

/// The configuration with the decoded point installed (projectors, and
/// pump-1 amplitudes when the block is enabled).
ScenarioConfig apply_point(std::span<const double> params, const SearchSpace& space,
                           const ScenarioConfig& cfg);

/// Derivative-free maximization of the fidelity objective: a seeded
/// population sweep over sign/off corners followed by Nelder-Mead descent
/// with random restarts on stagnation. Deterministic for fixed
/// (cfg, target, space, budget, seed).
SearchResult optimize(const ScenarioConfig& cfg, const FockState& target,
                      const SearchSpace& space, int budget, std::uint64_t seed);

nlohmann::json search_result_to_json(const SearchResult& result, int budget);

/// CSV trace with columns evaluation,best_objective.
void write_trace_csv(const SearchResult& result, std::ostream& out);

}  // namespace noongen
