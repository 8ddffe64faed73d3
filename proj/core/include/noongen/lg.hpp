#pragma once
#include <compare>
#include <complex>
#include <map>
#include <ostream>
#include <vector>

#include "noongen/errors.hpp"

namespace noongen {

using Cplx = std::complex<double>;

/// One Laguerre-Gauss mode: azimuthal index l (OAM per photon in units of
/// hbar), radial index p, and the beam waist radius w0 at the crystal plane.
struct LgMode {
  int l = 0;
  int p = 0;
  double w0 = 1.0;

  void validate() const;
};

struct PumpComponent {
  LgMode mode;
  Cplx amplitude{1.0, 0.0};
};

/// A pump in a superposition of LG modes. Components must have distinct
/// (l, p) indices and share one waist. `normalized` records whether the
/// amplitudes have been scaled to unit total probability.
struct PumpSpec {
  std::vector<PumpComponent> components;
  bool normalized = false;

  /// Validates and rescales amplitudes so that sum |a|^2 = 1.
  static PumpSpec make(std::vector<PumpComponent> components);

  void validate() const;
  double waist() const;
  int max_abs_l() const;
};

/// Radial quadrature controls for the overlap integrals. The azimuthal
/// integral is always handled analytically.
struct QuadratureSpec {
  int node_count = 128;
  double radial_cutoff_multiplier = 8.0;
  double relative_tolerance = 1e-9;

  void validate() const;
};

struct Waists {
  double pump = 1.0;
  double signal = 1.0;
  double idler = 1.0;
};

struct TableKey {
  int l_s = 0;
  int p_s = 0;
  int l_i = 0;
  int p_i = 0;
  auto operator<=>(const TableKey&) const = default;
};

/// Joint signal/idler pair amplitudes for one pump, truncated to
/// |l| <= l_max, p <= p_max. Entries below 1e-12 of the largest magnitude
/// are pruned at construction.
struct CoincidenceTable {
  std::map<TableKey, Cplx> entries;
  int l_max = 0;
  int p_max = 0;
  Waists waists{};
  PumpSpec pump{};

  Cplx at(int l_s, int l_i, int p_s = 0, int p_i = 0) const;
  double max_abs() const;
  bool pure_azimuthal() const;  // true when every entry has p_s = p_i = 0

  void validate() const;
};

/// LG_p^l(rho, phi) including the exp(i l phi) phase.
Cplx eval_lg(const LgMode& mode, double rho, double phi);

/// The real radial profile of eval_lg (everything except exp(i l phi)).
double lg_radial(const LgMode& mode, double rho);

/// OAM conservation in the overlap integral: true iff l_p = l_s + l_i.
bool azimuthal_selection(int l_p, int l_s, int l_i);

/// Pair amplitude B = ∫∫ rho drho dphi LG_pump conj(LG_signal) conj(LG_idler).
/// The azimuthal factor is 2*pi when the selection rule holds and exactly
/// zero otherwise; only the radial factor is integrated numerically. Throws
/// ConvergenceError when doubling the node count moves the estimate by more
/// than quad.relative_tolerance.
Cplx overlap_B(const LgMode& pump, const LgMode& signal, const LgMode& idler,
               const QuadratureSpec& quad);

/// Full coincidence amplitudes C = sum over pump components of a * B,
/// on the truncated (l_s, p_s, l_i, p_i) grid. Pump components are
/// evaluated at waists.pump, signal modes at waists.signal, idler modes at
/// waists.idler.
CoincidenceTable coincidence_table(const PumpSpec& pump, int l_max, int p_max,
                                   const Waists& waists, const QuadratureSpec& quad);

/// CSV export with columns l_s,p_s,l_i,p_i,re,im,abs2.
void write_table_csv(const CoincidenceTable& table, std::ostream& out);

}  // namespace noongen
