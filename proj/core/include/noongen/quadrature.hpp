#pragma once
#include <functional>
#include <span>
#include <vector>

namespace noongen {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
/// Results are cached per n; the returned spans stay valid for the
/// lifetime of the program.
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// ∫_0^upper f(x) dx with an n-point Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double upper, int n);

}  // namespace noongen
