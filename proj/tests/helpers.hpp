#pragma once
#include <cmath>
#include <complex>
#include <random>

#include "noongen/fock.hpp"

namespace test_helpers {

using noongen::Cplx;
using noongen::FockState;
using noongen::ModeLabel;
using noongen::Occupation;
using noongen::Path;

inline bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

inline bool close(Cplx a, Cplx b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

inline Occupation occ(std::initializer_list<std::pair<ModeLabel, int>> items) {
  Occupation o(items);
  std::sort(o.begin(), o.end());
  return o;
}

/// A random normalized state with exactly `photons` photons per term,
/// spread over all four paths and |l| <= l_span.
inline FockState random_state(std::mt19937_64& rng, int photons, int terms,
                              int l_span = 3) {
  std::uniform_int_distribution<int> path_dist(0, 3);
  std::uniform_int_distribution<int> l_dist(-l_span, l_span);
  std::uniform_real_distribution<double> amp_dist(-1.0, 1.0);
  FockState state;
  for (int t = 0; t < terms; ++t) {
    std::map<ModeLabel, int> counts;
    for (int k = 0; k < photons; ++k)
      counts[ModeLabel{static_cast<Path>(path_dist(rng)), l_dist(rng)}] += 1;
    state.accumulate(Occupation(counts.begin(), counts.end()),
                     Cplx{amp_dist(rng), amp_dist(rng)});
  }
  if (state.is_zero()) state.accumulate(occ({{ModeLabel{Path::A, 0}, photons}}), 1.0);
  return noongen::normalize(state).first;
}

}  // namespace test_helpers
