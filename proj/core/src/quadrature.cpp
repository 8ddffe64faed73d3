#include "noongen/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace noongen {

namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on P_n with the Chebyshev-like initial guess; standard
// construction, accurate to machine precision for the node counts used here.
Rule build_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: node count must be >= 1");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence up to degree n at x.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

std::map<int, Rule>& rule_cache() {
  static std::map<int, Rule> cache;
  return cache;
}

std::mutex cache_mutex;

}  // namespace

GaussLegendreRule gauss_legendre(int n) {
  std::lock_guard lock(cache_mutex);
  auto& cache = rule_cache();
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return {it->second.nodes, it->second.weights};
}

double integrate(const std::function<double(double)>& f, double upper, int n) {
  const auto rule = gauss_legendre(n);
  const double c = 0.5 * upper;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += rule.weights[i] * f(c * (rule.nodes[i] + 1.0));
  }
  return c * acc;
}

}  // namespace noongen
