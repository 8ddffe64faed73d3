#pragma once
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "noongen/lg.hpp"

namespace noongen {

/// Device paths, in storage order.
enum class Path : std::uint8_t { A = 0, B = 1, C = 2, D = 3 };

char path_name(Path p);
Path path_from_name(char c);

/// One bosonic mode of the device: a path carrying one OAM index.
struct ModeLabel {
  Path path = Path::A;
  int l = 0;
  auto operator<=>(const ModeLabel&) const = default;
};

/// Canonical occupation pattern: sorted (mode, count) pairs with count >= 1.
/// The empty vector is the vacuum configuration.
using Occupation = std::vector<std::pair<ModeLabel, int>>;

int total_photons(const Occupation& occ);
int photons_on_path(const Occupation& occ, Path p);
std::string occupation_to_string(const Occupation& occ);

/// Sparse multimode Fock state: a map from occupation configurations to
/// complex amplitudes in the standard bosonic normalization (|n> has unit
/// norm; a^dag |n> = sqrt(n+1) |n+1>). Terms below prune_epsilon are dropped
/// whenever linear combinations are formed.
class FockState {
public:
  static constexpr double kDefaultPruneEpsilon = 1e-14;

  FockState() = default;

  static FockState vacuum();
  /// The zero state: empty term map. Distinct from vacuum.
  static FockState zero();
  static FockState single_term(Occupation occ, Cplx amplitude);

  const std::map<Occupation, Cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  Cplx amplitude(const Occupation& occ) const;

  double prune_epsilon() const { return prune_epsilon_; }

  /// Adds c * occ to the term map, merging and pruning cancellations.
  void accumulate(const Occupation& occ, Cplx c);

  friend FockState prune(const FockState& state, double eps);

private:
  std::map<Occupation, Cplx> terms_;
  double prune_epsilon_ = kDefaultPruneEpsilon;
};

/// a^dag on `mode`: every term's count for the mode grows by one and its
/// amplitude picks up sqrt(n+1).
FockState apply_creation(const FockState& state, ModeLabel mode);

Cplx inner_product(const FockState& lhs, const FockState& rhs);
double norm(const FockState& state);

/// Coefficients of the creation-operator monomials: each amplitude divided
/// by sqrt(prod_modes n!). In this view a state written as a polynomial in
/// creation operators acting on vacuum reads off coefficient by coefficient.
std::map<Occupation, Cplx> monomial_coefficients(const FockState& state);

/// Inverse of monomial_coefficients.
FockState from_monomial_coefficients(const std::map<Occupation, Cplx>& coeffs);

/// Linear combination sum_k c_k |state_k> with canonical merging.
FockState scale_add(const std::vector<std::pair<Cplx, FockState>>& parts);

/// Returns (state / norm, norm). Throws DegenerateError on the zero state.
std::pair<FockState, double> normalize(const FockState& state);

FockState prune(const FockState& state, double eps);

enum class StateConvention { fock, monomial };

nlohmann::json state_to_json(const FockState& state, StateConvention convention);

}  // namespace noongen
