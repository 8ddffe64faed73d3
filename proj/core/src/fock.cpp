#include "noongen/fock.hpp"

#include <algorithm>
#include <cmath>

namespace noongen {

char path_name(Path p) {
  switch (p) {
    case Path::A: return 'A';
    case Path::B: return 'B';
    case Path::C: return 'C';
    case Path::D: return 'D';
  }
  throw std::invalid_argument("path_name: bad path");
}

Path path_from_name(char c) {
  switch (c) {
    case 'A': return Path::A;
    case 'B': return Path::B;
    case 'C': return Path::C;
    case 'D': return Path::D;
  }
  throw std::invalid_argument(std::string("path_from_name: bad path '") + c + "'");
}

int total_photons(const Occupation& occ) {
  int n = 0;
  for (const auto& [mode, count] : occ) n += count;
  return n;
}

int photons_on_path(const Occupation& occ, Path p) {
  int n = 0;
  for (const auto& [mode, count] : occ)
    if (mode.path == p) n += count;
  return n;
}

std::string occupation_to_string(const Occupation& occ) {
  if (occ.empty()) return "vac";
  std::string s;
  Path current{};
  bool open = false;
  for (const auto& [mode, count] : occ) {
    if (!open || mode.path != current) {
      if (open) s += "] ";
      s += path_name(mode.path);
      s += '[';
      current = mode.path;
      open = true;
    } else {
      s += ' ';
    }
    for (int k = 0; k < count; ++k) {
      if (k > 0) s += ' ';
      s += std::to_string(mode.l);
    }
  }
  s += ']';
  return s;
}

namespace {

void check_canonical(const Occupation& occ) {
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i].second < 1)
      throw std::invalid_argument("Occupation: counts must be >= 1");
    if (i > 0 && !(occ[i - 1].first < occ[i].first))
      throw std::invalid_argument("Occupation: modes must be strictly sorted");
  }
}

double sqrt_factorial_product(const Occupation& occ) {
  double prod = 1.0;
  for (const auto& [mode, count] : occ)
    for (int k = 2; k <= count; ++k) prod *= k;
  return std::sqrt(prod);
}

}  // namespace

FockState FockState::vacuum() {
  FockState s;
  s.terms_.emplace(Occupation{}, Cplx{1.0, 0.0});
  return s;
}

FockState FockState::zero() { return FockState{}; }

FockState FockState::single_term(Occupation occ, Cplx amplitude) {
  std::sort(occ.begin(), occ.end());
  check_canonical(occ);
  FockState s;
  if (std::abs(amplitude) >= s.prune_epsilon_) s.terms_.emplace(std::move(occ), amplitude);
  return s;
}

Cplx FockState::amplitude(const Occupation& occ) const {
  const auto it = terms_.find(occ);
  return it == terms_.end() ? Cplx{0.0, 0.0} : it->second;
}

void FockState::accumulate(const Occupation& occ, Cplx c) {
  auto [it, inserted] = terms_.try_emplace(occ, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < prune_epsilon_) terms_.erase(it);
}

FockState apply_creation(const FockState& state, ModeLabel mode) {
  FockState out;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation next = occ;
    auto it = std::lower_bound(next.begin(), next.end(), mode,
                               [](const auto& e, const ModeLabel& m) { return e.first < m; });
    int n = 0;
    if (it != next.end() && it->first == mode) {
      n = it->second;
      it->second = n + 1;
    } else {
      next.insert(it, {mode, 1});
    }
    out.accumulate(next, amp * std::sqrt(double(n + 1)));
  }
  return out;
}

Cplx inner_product(const FockState& lhs, const FockState& rhs) {
  // Iterate the smaller map; occupation configs are orthonormal.
  const auto& a = lhs.terms().size() <= rhs.terms().size() ? lhs : rhs;
  const auto& b = (&a == &lhs) ? rhs : lhs;
  Cplx acc{0.0, 0.0};
  for (const auto& [occ, amp] : a.terms()) {
    const auto it = b.terms().find(occ);
    if (it == b.terms().end()) continue;
    if (&a == &lhs)
      acc += std::conj(amp) * it->second;
    else
      acc += std::conj(it->second) * amp;
  }
  return acc;
}

double norm(const FockState& state) {
  double acc = 0.0;
  for (const auto& [occ, amp] : state.terms()) acc += std::norm(amp);
  return std::sqrt(acc);
}

std::map<Occupation, Cplx> monomial_coefficients(const FockState& state) {
  std::map<Occupation, Cplx> out;
  for (const auto& [occ, amp] : state.terms())
    out.emplace(occ, amp / sqrt_factorial_product(occ));
  return out;
}

FockState from_monomial_coefficients(const std::map<Occupation, Cplx>& coeffs) {
  FockState out;
  for (const auto& [occ, coeff] : coeffs) {
    check_canonical(occ);
    out.accumulate(occ, coeff * sqrt_factorial_product(occ));
  }
  return out;
}

FockState scale_add(const std::vector<std::pair<Cplx, FockState>>& parts) {
  FockState out;
  for (const auto& [c, state] : parts)
    for (const auto& [occ, amp] : state.terms()) out.accumulate(occ, c * amp);
  return out;
}

std::pair<FockState, double> normalize(const FockState& state) {
  const double n = norm(state);
  if (n <= 0.0) throw DegenerateError("normalize: zero state");
  FockState out;
  for (const auto& [occ, amp] : state.terms()) out.accumulate(occ, amp / n);
  return {std::move(out), n};
}

FockState prune(const FockState& state, double eps) {
  if (eps < 0.0) throw std::invalid_argument("prune: eps must be >= 0");
  FockState out;
  out.prune_epsilon_ = state.prune_epsilon_;
  for (const auto& [occ, amp] : state.terms())
    if (std::abs(amp) >= eps) out.terms_.emplace(occ, amp);
  return out;
}

nlohmann::json state_to_json(const FockState& state, StateConvention convention) {
  nlohmann::json terms = nlohmann::json::array();
  const auto emit = [&](const Occupation& occ, Cplx value) {
    nlohmann::json occs = nlohmann::json::array();
    for (const auto& [mode, count] : occ)
      occs.push_back({std::string(1, path_name(mode.path)), mode.l, count});
    terms.push_back({{"occupations", std::move(occs)},
                     {"re", value.real()},
                     {"im", value.imag()}});
  };
  if (convention == StateConvention::fock) {
    for (const auto& [occ, amp] : state.terms()) emit(occ, amp);
  } else {
    for (const auto& [occ, coeff] : monomial_coefficients(state)) emit(occ, coeff);
  }
  return {{"convention", convention == StateConvention::fock ? "fock" : "monomial"},
          {"terms", std::move(terms)}};
}

}  // namespace noongen
