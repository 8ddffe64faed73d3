#include "noongen/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace noongen {

namespace {

Occupation occ_bc(std::initializer_list<std::pair<Path, int>> photons) {
  std::map<ModeLabel, int> counts;
  for (const auto& [path, l] : photons) counts[ModeLabel{path, l}] += 1;
  return Occupation(counts.begin(), counts.end());
}

void append_noon_pair(ClosedFormTemplate& tmpl, int l_first, int l_second,
                      Cplx coefficient) {
  tmpl.terms.push_back({occ_bc({{Path::B, l_first}, {Path::B, l_second}}), coefficient});
  tmpl.terms.push_back({occ_bc({{Path::C, l_first}, {Path::C, l_second}}), coefficient});
}

CoincidenceTable override_only_table(const std::vector<OverrideEntry>& entries,
                                     const PumpSpec& pump, int l_max,
                                     const Waists& waists) {
  CoincidenceTable table;
  table.l_max = l_max;
  table.p_max = 0;
  table.waists = waists;
  table.pump = pump;
  for (const auto& e : entries)
    table.entries[TableKey{e.l_s, 0, e.l_i, 0}] = e.value;
  table.validate();
  return table;
}

void patch_table(CoincidenceTable& table, const std::vector<OverrideEntry>& entries) {
  for (const auto& e : entries) table.entries[TableKey{e.l_s, 0, e.l_i, 0}] = e.value;
  table.validate();
}

Projector make_projector(Path path, std::initializer_list<std::pair<int, Cplx>> w) {
  Projector p;
  p.path = path;
  p.weights.assign(w.begin(), w.end());
  return p;
}

}  // namespace

void ScenarioConfig::validate() const {
  pump1.validate();
  pump2.validate();
  if (!(waists.pump1 > 0) || !(waists.pump2 > 0) || !(waists.signal > 0) ||
      !(waists.idler > 0))
    throw ConfigError("waists must be positive");
  if (l_max < 0 || p_max < 0) throw ConfigError("truncation bounds must be >= 0");
  if (l_max < pump1.max_abs_l() || l_max < pump2.max_abs_l())
    throw ConfigError("truncation l_max must cover every pump component");
  quad.validate();
  proj_D.validate();
  proj_A.validate();
  if (proj_D.path != Path::D || proj_A.path != Path::A)
    throw ConfigError("projectors must sit on paths D and A");
  if (proj_D.max_abs_l() > l_max || proj_A.max_abs_l() > l_max)
    throw ConfigError("projector OAM index outside truncation l_max");
  for (const auto* entries : {&overrides.table1, &overrides.table2})
    for (const auto& e : *entries)
      if (std::abs(e.l_s) > l_max || std::abs(e.l_i) > l_max)
        throw ConfigError("override entry outside truncation l_max");
  for (const auto& [ls, li] : flatness_cells)
    if (std::abs(ls) > l_max || std::abs(li) > l_max)
      throw ConfigError("flatness cell outside truncation l_max");
}

std::vector<std::pair<int, int>> ScenarioConfig::resolved_flatness_cells() const {
  if (!flatness_cells.empty()) return flatness_cells;
  std::vector<std::pair<int, int>> cells;
  for (const auto& comp : pump1.components)
    if (comp.mode.l % 2 == 0) cells.emplace_back(comp.mode.l / 2, comp.mode.l / 2);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

std::pair<CoincidenceTable, CoincidenceTable> build_tables(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.overrides.replace) {
    if (cfg.overrides.empty())
      throw ConfigError("overrides.replace set but no override entries given");
    const Waists w1{cfg.waists.pump1, cfg.waists.signal, cfg.waists.idler};
    const Waists w2{cfg.waists.pump2, cfg.waists.signal, cfg.waists.idler};
    return {override_only_table(cfg.overrides.table1, cfg.pump1, cfg.l_max, w1),
            override_only_table(cfg.overrides.table2, cfg.pump2, cfg.l_max, w2)};
  }
  auto t1 = coincidence_table(cfg.pump1, cfg.l_max, cfg.p_max,
                              Waists{cfg.waists.pump1, cfg.waists.signal, cfg.waists.idler},
                              cfg.quad);
  auto t2 = coincidence_table(cfg.pump2, cfg.l_max, cfg.p_max,
                              Waists{cfg.waists.pump2, cfg.waists.signal, cfg.waists.idler},
                              cfg.quad);
  patch_table(t1, cfg.overrides.table1);
  patch_table(t2, cfg.overrides.table2);
  return {std::move(t1), std::move(t2)};
}

PipelinePrefix build_prefix(const ScenarioConfig& cfg) {
  if (cfg.p_max != 0)
    throw ConfigError(
        "the device pipeline carries pure azimuthal kets; set truncation "
        "p_max to 0 (radial indices are supported for spectra only)");
  PipelinePrefix prefix;
  std::tie(prefix.table1, prefix.table2) = build_tables(cfg);
  prefix.psi0 = FockState::vacuum();
  prefix.psi1 = apply_spdc(prefix.psi0, prefix.table1, Path::A, Path::B);
  prefix.psi2 = apply_spdc(prefix.psi1, prefix.table2, Path::A, Path::C);
  prefix.psi3 = apply_beamsplitter(apply_beamsplitter(prefix.psi2, Path::A, Path::D),
                                   Path::B, Path::C);
  const PathRequirement coincidence[] = {{Path::A, 1}, {Path::D, 1}};
  prefix.psi_filtered = coincidence_filter(prefix.psi3, coincidence);
  prefix.psi3_norm = norm(prefix.psi3);
  return prefix;
}

StageStates run_pipeline(const PipelinePrefix& prefix, const Projector& proj_D,
                         const Projector& proj_A) {
  StageStates stages;
  stages.psi0 = prefix.psi0;
  stages.psi1 = prefix.psi1;
  stages.psi2 = prefix.psi2;
  stages.psi3 = prefix.psi3;
  stages.psi_filtered = prefix.psi_filtered;
  const HeraldResult hr = herald(prefix.psi_filtered, proj_D, proj_A);
  stages.psi_f = hr.normalized;
  // Success amplitude is quoted against the normalized four-photon state.
  stages.success_amplitude =
      prefix.psi3_norm > 0.0 ? Cplx{hr.success_norm / prefix.psi3_norm, 0.0}
                             : Cplx{0.0, 0.0};
  return stages;
}

StageStates run_pipeline(const ScenarioConfig& cfg) {
  return run_pipeline(build_prefix(cfg), cfg.proj_D, cfg.proj_A);
}

ClosedFormTemplate template_single_mode(int m, Cplx gamma_m, Cplx c_m, Cplx f_m,
                                        Cplx g_m) {
  ClosedFormTemplate tmpl;
  tmpl.name = "single-mode";
  append_noon_pair(tmpl, m, m, gamma_m * c_m * f_m * g_m);
  return tmpl;
}

ClosedFormTemplate template_two_mode(int m, int n, Cplx gamma_m, Cplx gamma_n,
                                     Cplx c_m, Cplx c_n, Cplx f_m, Cplx f_n,
                                     Cplx g_m, Cplx g_n) {
  if (m == n) throw std::invalid_argument("template_two_mode: modes must differ");
  ClosedFormTemplate tmpl;
  tmpl.name = "two-mode";
  append_noon_pair(tmpl, m, m, gamma_m * c_m * f_m * g_m);
  append_noon_pair(tmpl, n, n, gamma_n * c_n * f_n * g_n);
  append_noon_pair(tmpl, n, m, gamma_m * c_n * f_m * g_n + gamma_n * c_m * f_n * g_m);
  return tmpl;
}

ClosedFormTemplate template_three_mode(int m, int n, int r,
                                       const std::array<Cplx, 3>& gammas,
                                       const std::array<Cplx, 3>& cs,
                                       const std::array<Cplx, 3>& fs,
                                       const std::array<Cplx, 3>& gs) {
  if (m == n || m == r || n == r)
    throw std::invalid_argument("template_three_mode: modes must be pairwise distinct");
  ClosedFormTemplate tmpl;
  tmpl.name = "three-mode";
  const int mode[3] = {m, n, r};
  for (int x = 0; x < 3; ++x)
    append_noon_pair(tmpl, mode[x], mode[x], gammas[x] * cs[x] * fs[x] * gs[x]);
  for (int x = 0; x < 3; ++x) {
    for (int y = x + 1; y < 3; ++y) {
      const Cplx cross = gammas[x] * cs[y] * fs[x] * gs[y] + gammas[y] * cs[x] * fs[y] * gs[x];
      append_noon_pair(tmpl, mode[y], mode[x], cross);
    }
  }
  return tmpl;
}

VerificationReport verify_against_closed_form(const FockState& state,
                                              const ClosedFormTemplate& tmpl,
                                              double tol, double extra_tol) {
  if (tmpl.terms.empty())
    throw std::invalid_argument("verify_against_closed_form: empty template");

  VerificationReport report;
  report.scenario = tmpl.name;
  report.tolerance = tol;
  report.extra_tolerance = extra_tol;

  const auto measured = monomial_coefficients(state);
  const auto measured_of = [&](const Occupation& occ) {
    const auto it = measured.find(occ);
    return it == measured.end() ? Cplx{0.0, 0.0} : it->second;
  };

  // Reference: the largest-magnitude expected coefficient fixes the global
  // constant every other term must reproduce.
  double max_expected = 0.0;
  const TemplateTerm* ref = nullptr;
  for (const auto& term : tmpl.terms) {
    if (std::abs(term.expected) > max_expected) {
      max_expected = std::abs(term.expected);
      ref = &term;
    }
  }
  if (ref == nullptr)
    throw std::invalid_argument("verify_against_closed_form: all-zero template");

  report.global_constant = measured_of(ref->pattern) / ref->expected;
  const double scale = std::abs(report.global_constant) * max_expected;
  bool pass = std::abs(report.global_constant) > 0.0;

  for (const auto& term : tmpl.terms) {
    VerificationRow row;
    row.pattern = term.pattern;
    row.expected = term.expected;
    row.measured = measured_of(term.pattern);
    if (std::abs(term.expected) > 0.0) {
      row.ratio = row.measured / term.expected;
      const double spread = std::abs(row.ratio - report.global_constant);
      row.ok = spread <= tol * std::abs(report.global_constant);
      report.ratio_spread =
          std::max(report.ratio_spread,
                   std::abs(report.global_constant) > 0.0
                       ? spread / std::abs(report.global_constant)
                       : std::numeric_limits<double>::infinity());
    } else {
      // The template predicts exact cancellation here.
      row.ok = std::abs(row.measured) <= extra_tol * scale;
    }
    pass = pass && row.ok;
    report.rows.push_back(std::move(row));
  }

  std::set<Occupation> covered;
  for (const auto& term : tmpl.terms) covered.insert(term.pattern);
  for (const auto& [occ, coeff] : measured) {
    if (covered.count(occ)) continue;
    if (std::abs(coeff) > extra_tol * scale) {
      report.extra_terms.emplace_back(occ, coeff);
      pass = false;
    }
  }

  report.pass = pass;
  return report;
}

ScenarioOutcome scenario_single_mode(int m, Cplx f_m, Cplx g_m,
                                     const ScenarioConfig& base) {
  ScenarioConfig cfg = base;
  cfg.proj_D = make_projector(Path::D, {{-m, f_m}});
  cfg.proj_A = make_projector(Path::A, {{-m, g_m}});
  cfg.validate();

  const PipelinePrefix prefix = build_prefix(cfg);
  ScenarioOutcome out;
  out.stages = run_pipeline(prefix, cfg.proj_D, cfg.proj_A);
  auto tmpl = template_single_mode(m, prefix.table2.at(-m, m), prefix.table1.at(-m, m),
                                   f_m, g_m);
  out.report = verify_against_closed_form(
      out.stages.psi_f, tmpl, cfg.tolerances.verify_for(cfg.overrides.replace),
      cfg.tolerances.extra_term);
  return out;
}

ScenarioOutcome scenario_two_mode(int m, int n, Cplx f_m, Cplx f_n, Cplx g_m,
                                  Cplx g_n, const ScenarioConfig& base) {
  if (m == n)
    throw std::invalid_argument(
        "scenario_two_mode: degenerate projector, modes must differ");
  ScenarioConfig cfg = base;
  cfg.proj_D = make_projector(Path::D, {{-m, f_m}, {-n, f_n}});
  cfg.proj_A = make_projector(Path::A, {{-m, g_m}, {-n, g_n}});
  cfg.validate();

  const PipelinePrefix prefix = build_prefix(cfg);
  ScenarioOutcome out;
  out.stages = run_pipeline(prefix, cfg.proj_D, cfg.proj_A);
  auto tmpl = template_two_mode(m, n, prefix.table2.at(-m, m), prefix.table2.at(-n, n),
                                prefix.table1.at(-m, m), prefix.table1.at(-n, n),
                                f_m, f_n, g_m, g_n);
  out.report = verify_against_closed_form(
      out.stages.psi_f, tmpl, cfg.tolerances.verify_for(cfg.overrides.replace),
      cfg.tolerances.extra_term);
  return out;
}

ScenarioOutcome scenario_three_mode(int m, int n, int r,
                                    const std::array<Cplx, 6>& weights,
                                    const ScenarioConfig& base) {
  if (m == n || m == r || n == r)
    throw std::invalid_argument(
        "scenario_three_mode: degenerate projector, modes must be pairwise distinct");
  ScenarioConfig cfg = base;
  cfg.proj_D = make_projector(Path::D,
                              {{-m, weights[0]}, {-n, weights[1]}, {-r, weights[2]}});
  cfg.proj_A = make_projector(Path::A,
                              {{-m, weights[3]}, {-n, weights[4]}, {-r, weights[5]}});
  cfg.validate();

  const PipelinePrefix prefix = build_prefix(cfg);
  ScenarioOutcome out;
  out.stages = run_pipeline(prefix, cfg.proj_D, cfg.proj_A);
  auto tmpl = template_three_mode(
      m, n, r,
      {prefix.table2.at(-m, m), prefix.table2.at(-n, n), prefix.table2.at(-r, r)},
      {prefix.table1.at(-m, m), prefix.table1.at(-n, n), prefix.table1.at(-r, r)},
      {weights[0], weights[1], weights[2]}, {weights[3], weights[4], weights[5]});
  out.report = verify_against_closed_form(
      out.stages.psi_f, tmpl, cfg.tolerances.verify_for(cfg.overrides.replace),
      cfg.tolerances.extra_term);
  return out;
}

ScenarioConfig unit_override_config(std::span<const int> modes, int l_max) {
  if (modes.empty())
    throw std::invalid_argument("unit_override_config: need at least one mode");
  ScenarioConfig cfg;
  cfg.pump1 = PumpSpec::make({{LgMode{0, 0, 1.0}, Cplx{1.0, 0.0}}});
  cfg.pump2 = cfg.pump1;
  int needed = 0;
  for (const int m : modes) needed = std::max(needed, std::abs(m));
  cfg.l_max = std::max(l_max, needed);
  cfg.overrides.replace = true;
  for (const int m : modes) {
    cfg.overrides.table1.push_back({-m, m, Cplx{1.0, 0.0}});
    cfg.overrides.table2.push_back({-m, m, Cplx{1.0, 0.0}});
  }
  cfg.proj_D = make_projector(Path::D, {{-modes[0], Cplx{1.0, 0.0}}});
  cfg.proj_A = make_projector(Path::A, {{-modes[0], Cplx{1.0, 0.0}}});
  return cfg;
}

std::vector<std::string> scenario_names() {
  return {"single-mode",      "two-mode-all-ones",  "two-mode-noon",
          "three-mode-all-ones", "three-mode-gr",   "three-mode-gn",
          "three-mode-gm"};
}

ScenarioOutcome run_named_scenario(const std::string& name,
                                   const std::optional<ScenarioConfig>& base) {
  const Cplx one{1.0, 0.0};
  const Cplx minus_one{-1.0, 0.0};
  const int m = 1, n = 2, r = 3;

  const auto cfg_for = [&](std::initializer_list<int> modes) {
    if (base) return *base;
    const std::vector<int> mode_list(modes);
    return unit_override_config(mode_list);
  };

  if (name == "single-mode") return scenario_single_mode(m, one, one, cfg_for({m}));
  if (name == "two-mode-all-ones")
    return scenario_two_mode(m, n, one, one, one, one, cfg_for({m, n}));
  if (name == "two-mode-noon")
    return scenario_two_mode(m, n, one, one, one, minus_one, cfg_for({m, n}));
  if (name == "three-mode-all-ones")
    return scenario_three_mode(m, n, r, {one, one, one, one, one, one},
                               cfg_for({m, n, r}));
  if (name == "three-mode-gr")
    return scenario_three_mode(m, n, r, {one, one, one, one, one, minus_one},
                               cfg_for({m, n, r}));
  if (name == "three-mode-gn")
    return scenario_three_mode(m, n, r, {one, one, one, one, minus_one, one},
                               cfg_for({m, n, r}));
  if (name == "three-mode-gm")
    return scenario_three_mode(m, n, r, {one, one, one, minus_one, one, one},
                               cfg_for({m, n, r}));
  throw ConfigError("unknown scenario '" + name + "'");
}

namespace {

nlohmann::json complex_json(Cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

nlohmann::json occupation_json(const Occupation& occ) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [mode, count] : occ)
    a.push_back({std::string(1, path_name(mode.path)), mode.l, count});
  return a;
}

}  // namespace

nlohmann::json verification_to_json(const VerificationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"pattern", occupation_to_string(row.pattern)},
                    {"occupations", occupation_json(row.pattern)},
                    {"expected", complex_json(row.expected)},
                    {"measured", complex_json(row.measured)},
                    {"ratio", complex_json(row.ratio)},
                    {"ok", row.ok}});
  }
  nlohmann::json extras = nlohmann::json::array();
  for (const auto& [occ, coeff] : report.extra_terms) {
    extras.push_back({{"pattern", occupation_to_string(occ)},
                      {"coefficient", complex_json(coeff)}});
  }
  return {{"scenario", report.scenario},
          {"pass", report.pass},
          {"tolerance", report.tolerance},
          {"extra_tolerance", report.extra_tolerance},
          {"global_constant", complex_json(report.global_constant)},
          {"ratio_spread", report.ratio_spread},
          {"terms", std::move(rows)},
          {"extra_terms", std::move(extras)}};
}

nlohmann::json stages_to_json(const StageStates& stages) {
  return {{"term_counts",
           {{"psi0", stages.psi0.term_count()},
            {"psi1", stages.psi1.term_count()},
            {"psi2", stages.psi2.term_count()},
            {"psi3", stages.psi3.term_count()},
            {"psi_filtered", stages.psi_filtered.term_count()},
            {"psi_f", stages.psi_f.term_count()}}},
          {"success_amplitude", complex_json(stages.success_amplitude)},
          {"success_probability", stages.success_probability()},
          {"psi_f", state_to_json(stages.psi_f, StateConvention::fock)},
          {"psi_f_monomial", state_to_json(stages.psi_f, StateConvention::monomial)}};
}

}  // namespace noongen
