#include "noongen/lg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "noongen/quadrature.hpp"

namespace noongen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Associated Laguerre polynomial L_p^a(x) by the three-term recurrence.
double assoc_laguerre(int p, int a, double x) {
  if (p == 0) return 1.0;
  double lkm1 = 1.0;
  double lk = 1.0 + a - x;
  for (int k = 1; k < p; ++k) {
    const double lkp1 = ((2 * k + 1 + a - x) * lk - (k + a) * lkm1) / (k + 1);
    lkm1 = lk;
    lk = lkp1;
  }
  return lk;
}

// sqrt(2 p! / (pi (p+|l|)!)) without forming large factorials.
double lg_norm(int p, int abs_l) {
  double ratio = 1.0;  // p! / (p+|l|)!
  for (int k = p + 1; k <= p + abs_l; ++k) ratio /= k;
  return std::sqrt(2.0 * ratio / std::numbers::pi);
}

struct RadialIntegral {
  double value = 0.0;
  double envelope = 0.0;  // integral of |integrand|, for the zero test
};

RadialIntegral radial_triple(const LgMode& pump, const LgMode& signal,
                             const LgMode& idler, double upper, int nodes) {
  const auto rule = gauss_legendre(nodes);
  const double c = 0.5 * upper;
  RadialIntegral out;
  for (int i = 0; i < nodes; ++i) {
    const double rho = c * (rule.nodes[i] + 1.0);
    const double f =
        rho * lg_radial(pump, rho) * lg_radial(signal, rho) * lg_radial(idler, rho);
    out.value += rule.weights[i] * f;
    out.envelope += rule.weights[i] * std::abs(f);
  }
  out.value *= c;
  out.envelope *= c;
  return out;
}

}  // namespace

void LgMode::validate() const {
  if (p < 0) throw std::invalid_argument("LgMode: radial index p must be >= 0");
  if (!(w0 > 0.0)) throw std::invalid_argument("LgMode: waist w0 must be > 0");
}

PumpSpec PumpSpec::make(std::vector<PumpComponent> components) {
  PumpSpec spec;
  spec.components = std::move(components);
  if (spec.components.empty())
    throw std::invalid_argument("PumpSpec: at least one component required");
  double total = 0.0;
  std::set<std::pair<int, int>> seen;
  for (const auto& c : spec.components) {
    c.mode.validate();
    if (!seen.insert({c.mode.l, c.mode.p}).second)
      throw std::invalid_argument("PumpSpec: duplicate (l, p) component");
    total += std::norm(c.amplitude);
  }
  if (total <= 0.0) throw DegenerateError("PumpSpec: all amplitudes are zero");
  const double scale = 1.0 / std::sqrt(total);
  for (auto& c : spec.components) c.amplitude *= scale;
  spec.normalized = true;
  spec.validate();
  return spec;
}

void PumpSpec::validate() const {
  if (components.empty())
    throw std::invalid_argument("PumpSpec: at least one component required");
  const double w = components.front().mode.w0;
  double total = 0.0;
  for (const auto& c : components) {
    c.mode.validate();
    if (c.mode.w0 != w)
      throw std::invalid_argument("PumpSpec: components must share one waist");
    total += std::norm(c.amplitude);
  }
  if (normalized && std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("PumpSpec: marked normalized but sum |a|^2 != 1");
}

double PumpSpec::waist() const {
  validate();
  return components.front().mode.w0;
}

int PumpSpec::max_abs_l() const {
  int m = 0;
  for (const auto& c : components) m = std::max(m, std::abs(c.mode.l));
  return m;
}

void QuadratureSpec::validate() const {
  if (node_count < 16)
    throw std::invalid_argument("QuadratureSpec: node_count must be >= 16");
  if (!(radial_cutoff_multiplier > 0.0))
    throw std::invalid_argument("QuadratureSpec: radial_cutoff_multiplier must be > 0");
  if (!(relative_tolerance > 0.0))
    throw std::invalid_argument("QuadratureSpec: relative_tolerance must be > 0");
}

Cplx CoincidenceTable::at(int ls, int li, int ps, int pi) const {
  const auto it = entries.find(TableKey{ls, ps, li, pi});
  return it == entries.end() ? Cplx{0.0, 0.0} : it->second;
}

double CoincidenceTable::max_abs() const {
  double m = 0.0;
  for (const auto& [k, v] : entries) m = std::max(m, std::abs(v));
  return m;
}

bool CoincidenceTable::pure_azimuthal() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const auto& e) { return e.first.p_s == 0 && e.first.p_i == 0; });
}

void CoincidenceTable::validate() const {
  for (const auto& [k, v] : entries) {
    if (std::abs(k.l_s) > l_max || std::abs(k.l_i) > l_max || k.p_s < 0 ||
        k.p_s > p_max || k.p_i < 0 || k.p_i > p_max)
      throw std::invalid_argument("CoincidenceTable: entry outside truncation");
  }
}

Cplx eval_lg(const LgMode& mode, double rho, double phi) {
  mode.validate();
  if (rho < 0.0) throw std::invalid_argument("eval_lg: rho must be >= 0");
  return lg_radial(mode, rho) * std::polar(1.0, mode.l * phi);
}

double lg_radial(const LgMode& mode, double rho) {
  mode.validate();
  const int abs_l = std::abs(mode.l);
  const double u = rho / mode.w0;
  return (1.0 / mode.w0) * lg_norm(mode.p, abs_l) *
         std::pow(u * std::numbers::sqrt2, abs_l) *
         assoc_laguerre(mode.p, abs_l, 2.0 * u * u) * std::exp(-u * u);
}

bool azimuthal_selection(int l_p, int l_s, int l_i) { return l_p == l_s + l_i; }

Cplx overlap_B(const LgMode& pump, const LgMode& signal, const LgMode& idler,
               const QuadratureSpec& quad) {
  pump.validate();
  signal.validate();
  idler.validate();
  quad.validate();
  // The phase integral is 2*pi*delta(l_p, l_s + l_i): the selection rule is
  // enforced exactly, before any numerics.
  if (!azimuthal_selection(pump.l, signal.l, idler.l)) return {0.0, 0.0};

  const double upper =
      quad.radial_cutoff_multiplier * std::max({pump.w0, signal.w0, idler.w0});
  const auto coarse = radial_triple(pump, signal, idler, upper, quad.node_count);
  const auto fine = radial_triple(pump, signal, idler, upper, 2 * quad.node_count);

  const double drift = std::abs(fine.value - coarse.value);
  // Integrals that cancel down to roundoff of their envelope count as
  // converged zeros; the relative test would never terminate on them.
  const bool converged = drift <= quad.relative_tolerance * std::abs(fine.value) ||
                         drift <= 1e-13 * fine.envelope;
  if (!converged) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "overlap_B: radial quadrature did not converge "
                  "(%d nodes: %.9e, %d nodes: %.9e)",
                  quad.node_count, coarse.value, 2 * quad.node_count, fine.value);
    throw ConvergenceError(msg, Cplx{coarse.value, 0.0}, Cplx{fine.value, 0.0});
  }
  return {kTwoPi * fine.value, 0.0};
}

CoincidenceTable coincidence_table(const PumpSpec& pump, int l_max, int p_max,
                                   const Waists& waists, const QuadratureSpec& quad) {
  pump.validate();
  quad.validate();
  if (l_max < pump.max_abs_l())
    throw std::invalid_argument("coincidence_table: l_max must cover every pump l");
  if (p_max < 0) throw std::invalid_argument("coincidence_table: p_max must be >= 0");
  if (pump.waist() != waists.pump)
    throw std::invalid_argument("coincidence_table: pump component waist differs from waists.pump");

  CoincidenceTable table;
  table.l_max = l_max;
  table.p_max = p_max;
  table.waists = waists;
  table.pump = pump;

  for (int ls = -l_max; ls <= l_max; ++ls) {
    for (int li = -l_max; li <= l_max; ++li) {
      const bool allowed = std::any_of(
          pump.components.begin(), pump.components.end(),
          [&](const PumpComponent& c) { return azimuthal_selection(c.mode.l, ls, li); });
      if (!allowed) continue;
      for (int ps = 0; ps <= p_max; ++ps) {
        for (int pi = 0; pi <= p_max; ++pi) {
          Cplx c_total{0.0, 0.0};
          for (const auto& comp : pump.components) {
            if (!azimuthal_selection(comp.mode.l, ls, li)) continue;
            c_total += comp.amplitude *
                       overlap_B(comp.mode, LgMode{ls, ps, waists.signal},
                                 LgMode{li, pi, waists.idler}, quad);
          }
          if (c_total != Cplx{0.0, 0.0})
            table.entries.emplace(TableKey{ls, ps, li, pi}, c_total);
        }
      }
    }
  }

  const double threshold = 1e-12 * table.max_abs();
  std::erase_if(table.entries,
                [&](const auto& e) { return std::abs(e.second) < threshold; });
  return table;
}

void write_table_csv(const CoincidenceTable& table, std::ostream& out) {
  out << "l_s,p_s,l_i,p_i,re,im,abs2\n";
  char buf[128];
  for (const auto& [k, v] : table.entries) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%.17g,%.17g,%.17g\n", k.l_s, k.p_s,
                  k.l_i, k.p_i, v.real(), v.imag(), std::norm(v));
    out << buf;
  }
}

}  // namespace noongen
