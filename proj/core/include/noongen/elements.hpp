#pragma once
#include <span>
#include <vector>

#include "noongen/fock.hpp"
#include "noongen/lg.hpp"

namespace noongen {

/// A heralding projector on one detection path: the detector fires for the
/// single-photon superposition sum_j w_j^* |j>, and a firing multiplies the
/// heralded amplitude by w_j. Weights are stored as given; herald() uses the
/// unit-normalized copy.
struct Projector {
  Path path = Path::D;
  std::vector<std::pair<int, Cplx>> weights;  // (l, weight), distinct l
  bool normalized = false;

  void validate() const;
  double weight_norm() const;
  Projector normalized_copy() const;
  /// Weight for OAM l, zero when l is not in the superposition.
  Cplx weight_for(int l) const;
  int max_abs_l() const;
};

/// How a coincidence-table key maps onto the created pair. `as_stored`
/// creates the signal photon with OAM l_s exactly as keyed; `negated` is for
/// tables keyed by magnitude, where the signal physically carries -l_s.
enum class SignalSign { as_stored, negated };

/// First-order pair creation: sum over table entries of
/// C^{l_s,l_i} a^dag_{signal,l_s} a^dag_{idler,l_i} applied to every input
/// term. Exactly one pair is added. The table must be pure azimuthal
/// (p_s = p_i = 0): radial indices have no mode slot in the device state.
FockState apply_spdc(const FockState& state, const CoincidenceTable& table,
                     Path signal_path, Path idler_path,
                     SignalSign sign = SignalSign::as_stored);

/// 50:50 beam splitter between two paths with the convention
/// x^dag -> (x^dag - i y^dag)/sqrt(2), y^dag -> (y^dag - i x^dag)/sqrt(2),
/// acting mode-by-mode in l. Unitary: preserves norm and photon number.
FockState apply_beamsplitter(const FockState& state, Path path_x, Path path_y);

/// The inverse map (reflection phase +i). Undoes apply_beamsplitter.
FockState apply_beamsplitter_inverse(const FockState& state, Path path_x, Path path_y);

struct PathRequirement {
  Path path;
  int count;
};

/// Keeps only terms whose per-path photon totals match every requirement
/// exactly. No renormalization.
FockState coincidence_filter(const FockState& state,
                             std::span<const PathRequirement> required);

struct HeraldResult {
  FockState residual;    ///< unnormalized state on the surviving paths
  double success_norm;   ///< norm of the residual
  FockState normalized;  ///< residual / success_norm; zero state if norm is 0
};

/// Contracts the single photons on paths A and D against the two projectors.
/// Every input term must hold exactly one photon in A and one in D (run
/// coincidence_filter first); otherwise throws std::invalid_argument.
HeraldResult herald(const FockState& state, const Projector& proj_D,
                    const Projector& proj_A);

}  // namespace noongen
