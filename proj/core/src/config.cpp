#include "noongen/config.hpp"

#include <fstream>

namespace noongen {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view source, std::string_view field,
                       std::string_view what) {
  throw ConfigError(std::string(source) + ": " + std::string(field) + ": " +
                    std::string(what));
}

const json& member(const json& j, std::string_view source, const std::string& field) {
  if (!j.is_object()) fail(source, field, "parent is not an object");
  const auto it = j.find(field);
  if (it == j.end()) fail(source, field, "missing");
  return *it;
}

double get_double(const json& j, std::string_view source, const std::string& field) {
  const json& v = member(j, source, field);
  if (!v.is_number()) fail(source, field, "expected a number");
  return v.get<double>();
}

int get_int(const json& j, std::string_view source, const std::string& field) {
  const json& v = member(j, source, field);
  if (!v.is_number_integer()) fail(source, field, "expected an integer");
  return v.get<int>();
}

Cplx get_complex(const json& j, std::string_view source, const std::string& ctx) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") ||
      !j["re"].is_number() || !j["im"].is_number())
    fail(source, ctx, "expected an object with numeric re/im");
  return {j["re"].get<double>(), j["im"].get<double>()};
}

PumpSpec parse_pump(const json& j, std::string_view source, const std::string& ctx,
                    double waist) {
  if (!j.is_array() || j.empty()) fail(source, ctx, "expected a nonempty array");
  std::vector<PumpComponent> components;
  for (const auto& c : j) {
    PumpComponent comp;
    comp.mode.l = get_int(c, source, "l");
    comp.mode.p = get_int(c, source, "p");
    comp.mode.w0 = waist;
    comp.amplitude = get_complex(c, source, ctx);
    components.push_back(comp);
  }
  try {
    return PumpSpec::make(std::move(components));
  } catch (const std::exception& e) {
    fail(source, ctx, e.what());
  }
}

Projector parse_projector(const json& j, std::string_view source,
                          const std::string& ctx, Path path) {
  if (!j.is_array() || j.empty()) fail(source, ctx, "expected a nonempty array");
  Projector p;
  p.path = path;
  for (const auto& w : j)
    p.weights.emplace_back(get_int(w, source, "l"), get_complex(w, source, ctx));
  try {
    p.validate();
  } catch (const std::exception& e) {
    fail(source, ctx, e.what());
  }
  return p;
}

std::vector<OverrideEntry> parse_override_entries(const json& j,
                                                  std::string_view source,
                                                  const std::string& ctx) {
  if (!j.is_array()) fail(source, ctx, "expected an array");
  std::vector<OverrideEntry> entries;
  for (const auto& e : j) {
    OverrideEntry entry;
    entry.l_s = get_int(e, source, "l_s");
    entry.l_i = get_int(e, source, "l_i");
    entry.value = get_complex(e, source, ctx);
    entries.push_back(entry);
  }
  return entries;
}

}  // namespace

ScenarioConfig parse_config(const json& doc, std::string_view source) {
  if (!doc.is_object()) throw ConfigError(std::string(source) + ": not a JSON object");
  const int version = get_int(doc, source, "schema_version");
  if (version != 1)
    fail(source, "schema_version", "unsupported version " + std::to_string(version));

  ScenarioConfig cfg;

  const json& waists = member(doc, source, "waists");
  cfg.waists.pump1 = get_double(waists, source, "pump1");
  cfg.waists.pump2 = get_double(waists, source, "pump2");
  cfg.waists.signal = get_double(waists, source, "signal");
  cfg.waists.idler = get_double(waists, source, "idler");

  const json& pumps = member(doc, source, "pumps");
  cfg.pump1 = parse_pump(member(pumps, source, "pump1"), source, "pumps.pump1",
                         cfg.waists.pump1);
  cfg.pump2 = parse_pump(member(pumps, source, "pump2"), source, "pumps.pump2",
                         cfg.waists.pump2);

  const json& trunc = member(doc, source, "truncation");
  cfg.l_max = get_int(trunc, source, "l_max");
  cfg.p_max = get_int(trunc, source, "p_max");

  if (doc.contains("quadrature")) {
    const json& quad = doc["quadrature"];
    cfg.quad.node_count = get_int(quad, source, "nodes");
    cfg.quad.radial_cutoff_multiplier = get_double(quad, source, "cutoff_multiplier");
    cfg.quad.relative_tolerance = get_double(quad, source, "rel_tol");
  }

  const json& projectors = member(doc, source, "projectors");
  cfg.proj_D = parse_projector(member(projectors, source, "D"), source,
                               "projectors.D", Path::D);
  cfg.proj_A = parse_projector(member(projectors, source, "A"), source,
                               "projectors.A", Path::A);

  if (doc.contains("overrides")) {
    const json& ov = doc["overrides"];
    if (ov.contains("replace")) {
      if (!ov["replace"].is_boolean()) fail(source, "overrides.replace", "expected a boolean");
      cfg.overrides.replace = ov["replace"].get<bool>();
    }
    if (ov.contains("table1"))
      cfg.overrides.table1 = parse_override_entries(ov["table1"], source, "overrides.table1");
    if (ov.contains("table2"))
      cfg.overrides.table2 = parse_override_entries(ov["table2"], source, "overrides.table2");
  }

  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    if (tol.contains("verify"))
      cfg.tolerances.verify_explicit = get_double(tol, source, "verify");
    if (tol.contains("extra_term"))
      cfg.tolerances.extra_term = get_double(tol, source, "extra_term");
    if (tol.contains("optimize_threshold"))
      cfg.tolerances.optimize_threshold = get_double(tol, source, "optimize_threshold");
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      fail(source, "seed", "expected an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("flatness_cells")) {
    const json& cells = doc["flatness_cells"];
    if (!cells.is_array()) fail(source, "flatness_cells", "expected an array of [l_s, l_i]");
    for (const auto& c : cells) {
      if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() ||
          !c[1].is_number_integer())
        fail(source, "flatness_cells", "expected [l_s, l_i] integer pairs");
      cfg.flatness_cells.emplace_back(c[0].get<int>(), c[1].get<int>());
    }
  }

  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.string());
}

FockState state_from_json(const nlohmann::json& doc) {
  const std::string convention = doc.at("convention").get<std::string>();
  if (convention != "fock" && convention != "monomial")
    throw ConfigError("state: unknown convention '" + convention + "'");
  std::map<Occupation, Cplx> terms;
  for (const auto& t : doc.at("terms")) {
    Occupation occ;
    for (const auto& o : t.at("occupations")) {
      const std::string path = o.at(0).get<std::string>();
      if (path.size() != 1) throw ConfigError("state: bad path label");
      occ.push_back({ModeLabel{path_from_name(path[0]), o.at(1).get<int>()},
                     o.at(2).get<int>()});
    }
    std::sort(occ.begin(), occ.end());
    terms[occ] += Cplx{t.at("re").get<double>(), t.at("im").get<double>()};
  }
  if (convention == "monomial") return from_monomial_coefficients(terms);
  FockState state;
  for (const auto& [occ, amp] : terms) state.accumulate(occ, amp);
  return state;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  const auto pump_json = [](const PumpSpec& pump) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : pump.components)
      a.push_back({{"l", c.mode.l},
                   {"p", c.mode.p},
                   {"re", c.amplitude.real()},
                   {"im", c.amplitude.imag()}});
    return a;
  };
  const auto projector_json = [](const Projector& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [l, w] : p.weights)
      a.push_back({{"l", l}, {"re", w.real()}, {"im", w.imag()}});
    return a;
  };
  return {{"pumps", {{"pump1", pump_json(cfg.pump1)}, {"pump2", pump_json(cfg.pump2)}}},
          {"waists",
           {{"pump1", cfg.waists.pump1},
            {"pump2", cfg.waists.pump2},
            {"signal", cfg.waists.signal},
            {"idler", cfg.waists.idler}}},
          {"truncation", {{"l_max", cfg.l_max}, {"p_max", cfg.p_max}}},
          {"quadrature",
           {{"nodes", cfg.quad.node_count},
            {"cutoff_multiplier", cfg.quad.radial_cutoff_multiplier},
            {"rel_tol", cfg.quad.relative_tolerance}}},
          {"projectors", {{"D", projector_json(cfg.proj_D)}, {"A", projector_json(cfg.proj_A)}}},
          {"seed", cfg.seed}};
}

}  // namespace noongen
