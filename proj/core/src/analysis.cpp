#include "noongen/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace noongen {

double SpiralSpectrum::at(int l_s, int l_i) const {
  if (std::abs(l_s) > l_max || std::abs(l_i) > l_max)
    throw std::invalid_argument("SpiralSpectrum: cell outside axis bounds");
  const int n = 2 * l_max + 1;
  return prob[(l_s + l_max) * n + (l_i + l_max)];
}

double& SpiralSpectrum::at(int l_s, int l_i) {
  if (std::abs(l_s) > l_max || std::abs(l_i) > l_max)
    throw std::invalid_argument("SpiralSpectrum: cell outside axis bounds");
  const int n = 2 * l_max + 1;
  return prob[(l_s + l_max) * n + (l_i + l_max)];
}

SpiralSpectrum spiral_spectrum(const CoincidenceTable& table) {
  SpiralSpectrum spec;
  spec.l_max = table.l_max;
  const int n = 2 * table.l_max + 1;
  spec.prob.assign(std::size_t(n) * n, 0.0);
  double total = 0.0;
  for (const auto& [key, value] : table.entries) {
    const double p = std::norm(value);
    spec.at(key.l_s, key.l_i) += p;
    total += p;
  }
  if (total <= 0.0) throw DegenerateError("spiral_spectrum: all-zero table");
  for (double& p : spec.prob) p /= total;
  return spec;
}

double mes_flatness(const SpiralSpectrum& spectrum,
                    std::span<const std::pair<int, int>> cells) {
  if (cells.empty()) throw std::invalid_argument("mes_flatness: no cells listed");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& [ls, li] : cells) {
    const double p = spectrum.at(ls, li);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (hi <= 0.0 || lo <= 0.0) return 0.0;
  return lo / hi;
}

SchmidtReport schmidt_decomposition(const FockState& state,
                                    std::span<const Path> left_paths,
                                    std::span<const Path> right_paths) {
  if (state.is_zero()) throw DegenerateError("schmidt_decomposition: zero state");

  const auto side_of = [&](Path p) -> int {
    if (std::find(left_paths.begin(), left_paths.end(), p) != left_paths.end()) return 0;
    if (std::find(right_paths.begin(), right_paths.end(), p) != right_paths.end()) return 1;
    return -1;
  };

  // Split every term into its left/right local patterns; index the local
  // occupation bases lazily from the support.
  std::map<Occupation, int> left_index, right_index;
  struct Entry {
    int row, col;
    Cplx value;
  };
  std::vector<Entry> entries;
  for (const auto& [occ, amp] : state.terms()) {
    Occupation left, right;
    for (const auto& [mode, count] : occ) {
      const int side = side_of(mode.path);
      if (side < 0)
        throw std::invalid_argument(
            "schmidt_decomposition: state has support outside the bipartition");
      (side == 0 ? left : right).push_back({mode, count});
    }
    const int row = left_index.try_emplace(left, int(left_index.size())).first->second;
    const int col = right_index.try_emplace(right, int(right_index.size())).first->second;
    entries.push_back({row, col, amp});
  }

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(left_index.size(), right_index.size());
  for (const auto& e : entries) m(e.row, e.col) += e.value;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  SchmidtReport report;
  report.singular_values.assign(svd.singularValues().data(),
                                svd.singularValues().data() + svd.singularValues().size());
  std::sort(report.singular_values.begin(), report.singular_values.end(),
            std::greater<>());

  double quartic = 0.0;
  for (const double s : report.singular_values) {
    if (s > report.threshold) ++report.schmidt_rank;
    quartic += s * s * s * s;
  }
  report.schmidt_number = quartic > 0.0 ? 1.0 / quartic : 0.0;
  for (const auto& e : entries)
    if (std::abs(e.value) > report.threshold) ++report.term_dimension;
  return report;
}

double noon_fidelity(const FockState& state, const FockState& target) {
  if (std::abs(norm(state) - 1.0) > 1e-8 || std::abs(norm(target) - 1.0) > 1e-8)
    throw std::invalid_argument("noon_fidelity: inputs must be normalized");
  return std::norm(inner_product(target, state));
}

void write_spectrum_csv(const SpiralSpectrum& spectrum, std::ostream& out) {
  out << "l_s,l_i,probability\n";
  char buf[96];
  for (int ls = -spectrum.l_max; ls <= spectrum.l_max; ++ls) {
    for (int li = -spectrum.l_max; li <= spectrum.l_max; ++li) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", ls, li, spectrum.at(ls, li));
      out << buf;
    }
  }
}

nlohmann::json schmidt_to_json(const SchmidtReport& report) {
  return {{"singular_values", report.singular_values},
          {"schmidt_rank", report.schmidt_rank},
          {"schmidt_number", report.schmidt_number},
          {"term_dimension", report.term_dimension},
          {"threshold", report.threshold}};
}

}  // namespace noongen
