#include "noongen/elements.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace noongen {

namespace {

// Adds one photon on `mode`, returning the bosonic sqrt(n+1) factor.
double add_photon(Occupation& occ, ModeLabel mode) {
  auto it = std::lower_bound(occ.begin(), occ.end(), mode,
                             [](const auto& e, const ModeLabel& m) { return e.first < m; });
  if (it != occ.end() && it->first == mode) {
    it->second += 1;
    return std::sqrt(double(it->second));
  }
  occ.insert(it, {mode, 1});
  return 1.0;
}

double sqrt_factorials(const std::map<ModeLabel, int>& counts) {
  double prod = 1.0;
  for (const auto& [mode, n] : counts)
    for (int k = 2; k <= n; ++k) prod *= k;
  return std::sqrt(prod);
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

Cplx i_pow(int k, double sign) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, sign};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -sign};
  }
}

FockState beamsplitter_impl(const FockState& state, Path path_x, Path path_y,
                            double reflect_sign) {
  if (path_x == path_y)
    throw std::invalid_argument("apply_beamsplitter: paths must differ");

  FockState out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (const auto& [occ, amp] : state.terms()) {
    // Work in the monomial picture: expand each splitter-mode power
    // binomially, then restore bosonic normalization at the end.
    double in_factorials = 1.0;
    for (const auto& [mode, n] : occ)
      for (int k = 2; k <= n; ++k) in_factorials *= k;
    const Cplx c0 = amp / std::sqrt(in_factorials);

    std::vector<std::pair<std::map<ModeLabel, int>, Cplx>> partial;
    partial.push_back({{}, c0});

    for (const auto& [mode, n] : occ) {
      if (mode.path != path_x && mode.path != path_y) {
        for (auto& [counts, c] : partial) counts[mode] += n;
        continue;
      }
      const ModeLabel keep{mode.path, mode.l};
      const ModeLabel cross{mode.path == path_x ? path_y : path_x, mode.l};
      std::vector<std::pair<std::map<ModeLabel, int>, Cplx>> next;
      next.reserve(partial.size() * (n + 1));
      const double scale = std::pow(inv_sqrt2, n);
      for (const auto& [counts, c] : partial) {
        for (int k = 0; k <= n; ++k) {
          auto grown = counts;
          if (n - k > 0) grown[keep] += n - k;
          if (k > 0) grown[cross] += k;
          next.push_back(
              {std::move(grown), c * scale * binomial(n, k) * i_pow(k, reflect_sign)});
        }
      }
      partial = std::move(next);
    }

    for (const auto& [counts, c] : partial) {
      Occupation result(counts.begin(), counts.end());
      out.accumulate(result, c * sqrt_factorials(counts));
    }
  }
  return out;
}

}  // namespace

void Projector::validate() const {
  if (path != Path::A && path != Path::D)
    throw std::invalid_argument("Projector: heralding path must be A or D");
  if (weights.empty())
    throw std::invalid_argument("Projector: at least one weight required");
  std::set<int> seen;
  for (const auto& [l, w] : weights)
    if (!seen.insert(l).second)
      throw std::invalid_argument("Projector: duplicate OAM index");
  if (normalized) {
    double total = 0.0;
    for (const auto& [l, w] : weights) total += std::norm(w);
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("Projector: marked normalized but sum |w|^2 != 1");
  }
}

double Projector::weight_norm() const {
  double total = 0.0;
  for (const auto& [l, w] : weights) total += std::norm(w);
  return std::sqrt(total);
}

Projector Projector::normalized_copy() const {
  validate();
  const double n = weight_norm();
  if (n <= 0.0) throw DegenerateError("Projector: all weights are zero");
  Projector out = *this;
  for (auto& [l, w] : out.weights) w /= n;
  out.normalized = true;
  return out;
}

Cplx Projector::weight_for(int l) const {
  for (const auto& [wl, w] : weights)
    if (wl == l) return w;
  return {0.0, 0.0};
}

int Projector::max_abs_l() const {
  int m = 0;
  for (const auto& [l, w] : weights) m = std::max(m, std::abs(l));
  return m;
}

FockState apply_spdc(const FockState& state, const CoincidenceTable& table,
                     Path signal_path, Path idler_path, SignalSign sign) {
  if (signal_path == idler_path)
    throw std::invalid_argument("apply_spdc: signal and idler paths must differ");
  if (table.entries.empty()) throw DegenerateError("apply_spdc: empty coincidence table");
  if (!table.pure_azimuthal())
    throw std::invalid_argument(
        "apply_spdc: table carries radial (p > 0) entries, which have no mode "
        "slot in the device state; build it with p_max = 0");

  FockState out;
  for (const auto& [key, value] : table.entries) {
    const int ls = sign == SignalSign::negated ? -key.l_s : key.l_s;
    const ModeLabel signal{signal_path, ls};
    const ModeLabel idler{idler_path, key.l_i};
    for (const auto& [occ, amp] : state.terms()) {
      Occupation next = occ;
      double factor = add_photon(next, signal);
      factor *= add_photon(next, idler);
      out.accumulate(next, amp * value * factor);
    }
  }
  return out;
}

FockState apply_beamsplitter(const FockState& state, Path path_x, Path path_y) {
  return beamsplitter_impl(state, path_x, path_y, -1.0);
}

FockState apply_beamsplitter_inverse(const FockState& state, Path path_x, Path path_y) {
  return beamsplitter_impl(state, path_x, path_y, +1.0);
}

FockState coincidence_filter(const FockState& state,
                             std::span<const PathRequirement> required) {
  FockState out;
  for (const auto& [occ, amp] : state.terms()) {
    const bool keep = std::all_of(required.begin(), required.end(),
                                  [&](const PathRequirement& r) {
                                    return photons_on_path(occ, r.path) == r.count;
                                  });
    if (keep) out.accumulate(occ, amp);
  }
  return out;
}

HeraldResult herald(const FockState& state, const Projector& proj_D,
                    const Projector& proj_A) {
  proj_D.validate();
  proj_A.validate();
  if (proj_D.path != Path::D || proj_A.path != Path::A)
    throw std::invalid_argument("herald: projectors must sit on paths D and A");
  const Projector pd = proj_D.normalized_copy();
  const Projector pa = proj_A.normalized_copy();

  FockState residual;
  for (const auto& [occ, amp] : state.terms()) {
    if (photons_on_path(occ, Path::A) != 1 || photons_on_path(occ, Path::D) != 1)
      throw std::invalid_argument(
          "herald: input must hold exactly one photon in A and one in D per "
          "term; run coincidence_filter first");
    Cplx weight{1.0, 0.0};
    Occupation rest;
    rest.reserve(occ.size());
    for (const auto& [mode, count] : occ) {
      if (mode.path == Path::A) {
        weight *= pa.weight_for(mode.l);
      } else if (mode.path == Path::D) {
        weight *= pd.weight_for(mode.l);
      } else {
        rest.push_back({mode, count});
      }
    }
    if (weight != Cplx{0.0, 0.0}) residual.accumulate(rest, amp * weight);
  }

  HeraldResult out;
  out.success_norm = norm(residual);
  if (out.success_norm > 0.0) {
    for (const auto& [occ, amp] : residual.terms())
      out.normalized.accumulate(occ, amp / out.success_norm);
  }
  out.residual = std::move(residual);
  return out;
}

}  // namespace noongen
