#pragma once
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "noongen/fock.hpp"
#include "noongen/lg.hpp"

namespace noongen {

/// Joint OAM probability matrix |C^{l_s,l_i}|^2, normalized, with radial
/// indices summed out.
struct SpiralSpectrum {
  int l_max = 0;
  std::vector<double> prob;  // (2 l_max + 1)^2 entries, row-major in (l_s, l_i)

  double at(int l_s, int l_i) const;
  double& at(int l_s, int l_i);
};

SpiralSpectrum spiral_spectrum(const CoincidenceTable& table);

/// min/max probability ratio over the listed cells; 1 means perfectly flat,
/// 0 when any listed cell is empty.
double mes_flatness(const SpiralSpectrum& spectrum,
                    std::span<const std::pair<int, int>> cells);

struct SchmidtReport {
  std::vector<double> singular_values;  // descending, sum of squares = 1
  int schmidt_rank = 0;                 // count above threshold
  double schmidt_number = 0.0;          // K = 1 / sum lambda^4
  int term_dimension = 0;               // orthogonal product patterns above threshold
  double threshold = 1e-10;
};

/// Schmidt decomposition of a normalized state across a path bipartition.
/// Local bases are enumerated from the state's own support.
SchmidtReport schmidt_decomposition(const FockState& state,
                                    std::span<const Path> left_paths,
                                    std::span<const Path> right_paths);

/// |<target|state>|^2. Both states must be normalized (unit norm within 1e-8).
double noon_fidelity(const FockState& state, const FockState& target);

/// CSV export with columns l_s,l_i,probability.
void write_spectrum_csv(const SpiralSpectrum& spectrum, std::ostream& out);

nlohmann::json schmidt_to_json(const SchmidtReport& report);

}  // namespace noongen
