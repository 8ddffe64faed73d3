#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "noongen/elements.hpp"
#include "noongen/fock.hpp"
#include "noongen/lg.hpp"

namespace noongen {

struct DeviceWaists {
  double pump1 = 1.0;
  double pump2 = 1.0;
  double signal = 1.0;
  double idler = 1.0;
};

struct OverrideEntry {
  int l_s = 0;
  int l_i = 0;
  Cplx value{1.0, 0.0};
};

/// Exact-value substitutions for the two coincidence tables. With `replace`
/// set, the tables consist solely of the listed entries; otherwise entries
/// are patched into the physically computed tables.
struct TableOverrides {
  bool replace = false;
  std::vector<OverrideEntry> table1;  // crystal 1, paths A (signal) / B (idler)
  std::vector<OverrideEntry> table2;  // crystal 2, paths A (signal) / C (idler)

  bool empty() const { return table1.empty() && table2.empty(); }
};

struct Tolerances {
  double verify_overridden = 1e-10;
  double verify_physical = 1e-6;
  double extra_term = 1e-12;
  double optimize_threshold = 0.0;
  std::optional<double> verify_explicit;  // overrides the per-mode default

  double verify_for(bool overridden_tables) const {
    if (verify_explicit) return *verify_explicit;
    return overridden_tables ? verify_overridden : verify_physical;
  }
};

/// Complete device description for one run.
struct ScenarioConfig {
  PumpSpec pump1;
  PumpSpec pump2;
  DeviceWaists waists;
  int l_max = 3;
  int p_max = 0;
  QuadratureSpec quad;
  Projector proj_D{Path::D, {{-1, Cplx{1.0, 0.0}}}, false};
  Projector proj_A{Path::A, {{-1, Cplx{1.0, 0.0}}}, false};
  TableOverrides overrides;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  std::vector<std::pair<int, int>> flatness_cells;  // empty = derive from pump1

  void validate() const;
  /// Flatness target cells: explicit list, or the diagonal cells (l, l)
  /// with 2l equal to a pump-1 component index.
  std::vector<std::pair<int, int>> resolved_flatness_cells() const;
};

/// Everything in the device that does not depend on the heralding
/// projectors: tables, stages psi0..psi3 and the coincidence-filtered state.
/// Cached by the optimizer so that one projector evaluation costs one herald.
struct PipelinePrefix {
  CoincidenceTable table1;
  CoincidenceTable table2;
  FockState psi0, psi1, psi2, psi3, psi_filtered;
  double psi3_norm = 0.0;
};

struct StageStates {
  FockState psi0, psi1, psi2, psi3, psi_filtered, psi_f;
  Cplx success_amplitude{0.0, 0.0};

  double success_probability() const { return std::norm(success_amplitude); }
};

std::pair<CoincidenceTable, CoincidenceTable> build_tables(const ScenarioConfig& cfg);

PipelinePrefix build_prefix(const ScenarioConfig& cfg);

/// psi1 = SPDC into (A,B); psi2 = SPDC into (A,C); psi3 = both beam
/// splitters (A|D then B|C); filter on one photon each in A and D; herald.
StageStates run_pipeline(const ScenarioConfig& cfg);
StageStates run_pipeline(const PipelinePrefix& prefix, const Projector& proj_D,
                         const Projector& proj_A);

struct TemplateTerm {
  Occupation pattern;
  Cplx expected{0.0, 0.0};
};

/// A closed-form target for the heralded state, as monomial coefficients on
/// B/C occupation patterns, valid up to one global constant.
struct ClosedFormTemplate {
  std::string name;
  std::vector<TemplateTerm> terms;
};

ClosedFormTemplate template_single_mode(int m, Cplx gamma_m, Cplx c_m, Cplx f_m,
                                        Cplx g_m);
ClosedFormTemplate template_two_mode(int m, int n, Cplx gamma_m, Cplx gamma_n,
                                     Cplx c_m, Cplx c_n, Cplx f_m, Cplx f_n,
                                     Cplx g_m, Cplx g_n);
ClosedFormTemplate template_three_mode(int m, int n, int r,
                                       const std::array<Cplx, 3>& gammas,
                                       const std::array<Cplx, 3>& cs,
                                       const std::array<Cplx, 3>& fs,
                                       const std::array<Cplx, 3>& gs);

struct VerificationRow {
  Occupation pattern;
  Cplx expected{0.0, 0.0};
  Cplx measured{0.0, 0.0};
  Cplx ratio{0.0, 0.0};  // measured / expected, zero rows excluded
  bool ok = false;
};

struct VerificationReport {
  std::string scenario;
  bool pass = false;
  double tolerance = 0.0;
  double extra_tolerance = 0.0;
  Cplx global_constant{0.0, 0.0};
  double ratio_spread = 0.0;
  std::vector<VerificationRow> rows;
  std::vector<std::pair<Occupation, Cplx>> extra_terms;
};

/// Compares the state's monomial coefficients against the template. Passes
/// iff every nonzero-expected ratio agrees with one global constant within
/// tol, every zero-expected pattern and every unmatched monomial stays below
/// extra_tol (relative to the scaled template).
VerificationReport verify_against_closed_form(const FockState& state,
                                              const ClosedFormTemplate& tmpl,
                                              double tol, double extra_tol);

struct ScenarioOutcome {
  StageStates stages;
  VerificationReport report;
};

/// Two-mode detection-basis scenario: projectors on kets |-m>, |-n> with
/// weights (f_m, f_n) on D and (g_m, g_n) on A, verified against the
/// two-mode closed form with gamma/C read from the built tables.
ScenarioOutcome scenario_two_mode(int m, int n, Cplx f_m, Cplx f_n, Cplx g_m,
                                  Cplx g_n, const ScenarioConfig& base);

/// Three-mode scenario; weights ordered (f_m, f_n, f_r, g_m, g_n, g_r).
ScenarioOutcome scenario_three_mode(int m, int n, int r,
                                    const std::array<Cplx, 6>& weights,
                                    const ScenarioConfig& base);

ScenarioOutcome scenario_single_mode(int m, Cplx f_m, Cplx g_m,
                                     const ScenarioConfig& base);

/// A ready-to-run configuration with Gaussian pumps and both tables replaced
/// by unit entries at (-x, x) for every x in `modes`.
ScenarioConfig unit_override_config(std::span<const int> modes, int l_max = 0);

std::vector<std::string> scenario_names();

/// Runs one of the named detection-basis scenarios. When `base` is given its
/// tables, truncation and quadrature are used; otherwise the canonical
/// unit-override configuration. Throws ConfigError on an unknown name.
ScenarioOutcome run_named_scenario(const std::string& name,
                                   const std::optional<ScenarioConfig>& base = {});

nlohmann::json verification_to_json(const VerificationReport& report);
nlohmann::json stages_to_json(const StageStates& stages);

}  // namespace noongen
