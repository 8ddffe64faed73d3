#include "noongen/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>

namespace noongen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::pair<int, Cplx>> decode_block(std::span<const int> modes,
                                               std::span<const double> block,
                                               double max_magnitude) {
  std::vector<std::pair<int, Cplx>> weights;
  weights.reserve(modes.size());
  weights.emplace_back(modes[0], Cplx{1.0, 0.0});
  for (std::size_t i = 1; i < modes.size(); ++i) {
    const double mag = std::clamp(block[2 * (i - 1)], 0.0, max_magnitude);
    const double phase = block[2 * (i - 1) + 1];
    weights.emplace_back(modes[i], std::polar(mag, std::fmod(phase, kTwoPi)));
  }
  return weights;
}

}  // namespace

void SearchSpace::validate() const {
  if (modes_D.empty() || modes_A.empty())
    throw std::invalid_argument("SearchSpace: projector mode lists must be nonempty");
  for (const auto* modes : {&modes_D, &modes_A}) {
    std::set<int> seen(modes->begin(), modes->end());
    if (seen.size() != modes->size())
      throw std::invalid_argument("SearchSpace: duplicate projector mode");
  }
  if (!(max_magnitude > 0.0))
    throw std::invalid_argument("SearchSpace: max_magnitude must be > 0");
  if (optimize_pump1 && pump1_components < 1)
    throw std::invalid_argument("SearchSpace: pump block enabled without components");
  if (initial && int(initial->size()) != dimension())
    throw std::invalid_argument("SearchSpace: initial point has wrong dimension");
}

int SearchSpace::dimension() const {
  return 2 * (int(modes_D.size()) - 1) + 2 * (int(modes_A.size()) - 1) +
         (optimize_pump1 ? 2 * (pump1_components - 1) : 0);
}

std::pair<Projector, Projector> SearchSpace::decode(std::span<const double> params) const {
  if (int(params.size()) != dimension())
    throw std::invalid_argument("SearchSpace::decode: wrong parameter count");
  const std::size_t d_block = 2 * (modes_D.size() - 1);
  const std::size_t a_block = 2 * (modes_A.size() - 1);
  Projector pd{Path::D, decode_block(modes_D, params.subspan(0, d_block), max_magnitude),
               false};
  Projector pa{Path::A,
               decode_block(modes_A, params.subspan(d_block, a_block), max_magnitude),
               false};
  return {std::move(pd), std::move(pa)};
}

std::vector<Cplx> SearchSpace::decode_pump(std::span<const double> params) const {
  if (int(params.size()) != dimension())
    throw std::invalid_argument("SearchSpace::decode_pump: wrong parameter count");
  if (!optimize_pump1) return {};
  std::vector<Cplx> amplitudes;
  amplitudes.reserve(pump1_components);
  amplitudes.emplace_back(1.0, 0.0);
  const std::size_t offset = 2 * (modes_D.size() - 1) + 2 * (modes_A.size() - 1);
  for (int i = 1; i < pump1_components; ++i) {
    const double mag = std::clamp(params[offset + 2 * (i - 1)], 0.0, max_magnitude);
    const double phase = params[offset + 2 * (i - 1) + 1];
    amplitudes.push_back(std::polar(mag, std::fmod(phase, kTwoPi)));
  }
  return amplitudes;
}

ScenarioConfig apply_point(std::span<const double> params, const SearchSpace& space,
                           const ScenarioConfig& cfg) {
  ScenarioConfig out = cfg;
  std::tie(out.proj_D, out.proj_A) = space.decode(params);
  if (space.optimize_pump1) {
    if (int(cfg.pump1.components.size()) != space.pump1_components)
      throw std::invalid_argument(
          "apply_point: pump block size does not match the configuration");
    const auto amplitudes = space.decode_pump(params);
    std::vector<PumpComponent> components = cfg.pump1.components;
    for (std::size_t i = 0; i < components.size(); ++i)
      components[i].amplitude = amplitudes[i];
    out.pump1 = PumpSpec::make(std::move(components));
  }
  return out;
}

double herald_fidelity(const PipelinePrefix& prefix, const Projector& proj_D,
                       const Projector& proj_A, const FockState& target) {
  const HeraldResult hr = herald(prefix.psi_filtered, proj_D, proj_A);
  if (hr.success_norm <= 0.0) return 0.0;
  return noon_fidelity(hr.normalized, target);
}

double objective(std::span<const double> params, const SearchSpace& space,
                 const PipelinePrefix& prefix, const FockState& target) {
  if (space.optimize_pump1)
    throw std::invalid_argument(
        "objective: the cached-prefix path cannot honor a pump block");
  const auto [pd, pa] = space.decode(params);
  return herald_fidelity(prefix, pd, pa, target);
}

double objective(std::span<const double> params, const SearchSpace& space,
                 const ScenarioConfig& cfg, const FockState& target) {
  const ScenarioConfig point = apply_point(params, space, cfg);
  return herald_fidelity(build_prefix(point), point.proj_D, point.proj_A, target);
}

namespace {

class Evaluator {
public:
  Evaluator(const SearchSpace& space, const ScenarioConfig& cfg,
            const PipelinePrefix& prefix, const FockState& target, int budget)
      : space_(space), cfg_(cfg), prefix_(prefix), target_(target), budget_(budget) {}

  bool exhausted() const { return count_ >= budget_; }
  int count() const { return count_; }
  double best() const { return best_; }
  const std::vector<double>& best_params() const { return best_params_; }
  const std::vector<TracePoint>& trace() const { return trace_; }

  // Returns the objective, or nullopt once the budget is spent. Evaluation
  // failures score zero and still consume budget.
  std::optional<double> operator()(const std::vector<double>& params) {
    if (exhausted()) return std::nullopt;
    ++count_;
    double value = 0.0;
    try {
      value = space_.optimize_pump1 ? objective(params, space_, cfg_, target_)
                                    : objective(params, space_, prefix_, target_);
    } catch (const std::exception&) {
      value = 0.0;
    }
    if (value > best_ || best_params_.empty()) {
      best_ = value;
      best_params_ = params;
      trace_.push_back({count_, best_});
    }
    return value;
  }

private:
  const SearchSpace& space_;
  const ScenarioConfig& cfg_;
  const PipelinePrefix& prefix_;
  const FockState& target_;
  int budget_;
  int count_ = 0;
  double best_ = -1.0;
  std::vector<double> best_params_;
  std::vector<TracePoint> trace_;
};

// Nelder-Mead descent from x0; stops on budget, stagnation or collapse.
void nelder_mead(Evaluator& eval, const std::vector<double>& x0,
                 const SearchSpace& space) {
  const int dim = space.dimension();
  if (dim == 0) {
    eval(x0);
    return;
  }

  struct Vertex {
    std::vector<double> x;
    double f;
  };
  std::vector<Vertex> simplex;
  const auto push_vertex = [&](std::vector<double> x) -> bool {
    const auto f = eval(x);
    if (!f) return false;
    simplex.push_back({std::move(x), -*f});  // minimize -fidelity
    return true;
  };

  if (!push_vertex(x0)) return;
  for (int i = 0; i < dim; ++i) {
    auto x = x0;
    x[i] += (i % 2 == 0) ? 0.25 : 0.5;  // magnitude step, phase step
    if (!push_vertex(std::move(x))) return;
  }

  const int max_iter = 60 * dim;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double spread = simplex.back().f - simplex.front().f;
    double radius = 0.0;
    for (int i = 0; i < dim; ++i)
      radius = std::max(radius,
                        std::abs(simplex.back().x[i] - simplex.front().x[i]));
    if (spread < 1e-14 || radius < 1e-10) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v + 1 < simplex.size(); ++v)
      for (int i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i];
    for (int i = 0; i < dim; ++i) centroid[i] /= dim;

    const auto blend = [&](double t) {
      std::vector<double> x(dim);
      for (int i = 0; i < dim; ++i)
        x[i] = centroid[i] + t * (simplex.back().x[i] - centroid[i]);
      return x;
    };

    const auto reflected = blend(-1.0);
    const auto fr = eval(reflected);
    if (!fr) return;
    const double fr_min = -*fr;

    if (fr_min < simplex.front().f) {
      const auto expanded = blend(-2.0);
      const auto fe = eval(expanded);
      if (!fe) return;
      if (-*fe < fr_min)
        simplex.back() = {expanded, -*fe};
      else
        simplex.back() = {reflected, fr_min};
      continue;
    }
    if (fr_min < simplex[simplex.size() - 2].f) {
      simplex.back() = {reflected, fr_min};
      continue;
    }
    const auto contracted = blend(0.5);
    const auto fc = eval(contracted);
    if (!fc) return;
    if (-*fc < simplex.back().f) {
      simplex.back() = {contracted, -*fc};
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      for (int i = 0; i < dim; ++i)
        simplex[v].x[i] = 0.5 * (simplex[v].x[i] + simplex.front().x[i]);
      const auto fs = eval(simplex[v].x);
      if (!fs) return;
      simplex[v].f = -*fs;
    }
  }
}

}  // namespace

SearchResult optimize(const ScenarioConfig& cfg, const FockState& target,
                      const SearchSpace& space, int budget, std::uint64_t seed) {
  space.validate();
  if (budget < 1) throw std::invalid_argument("optimize: budget must be >= 1");
  if (std::abs(norm(target) - 1.0) > 1e-8)
    throw std::invalid_argument("optimize: target must be normalized");

  const PipelinePrefix prefix = build_prefix(cfg);
  Evaluator eval(space, cfg, prefix, target, budget);
  std::mt19937_64 rng(seed);
  const int dim = space.dimension();

  if (space.initial) eval(*space.initial);

  // Population sweep: every combination of {off, +1, -1} for the free
  // weights, the natural corners of the detection-basis space. Capped and
  // deterministic.
  const int slots = dim / 2;
  long corner_count = 1;
  for (int i = 0; i < slots && corner_count <= 1024; ++i) corner_count *= 3;
  if (!eval.exhausted() && corner_count <= 1024) {
    for (long code = 0; code < corner_count && !eval.exhausted(); ++code) {
      std::vector<double> x(dim, 0.0);
      long rest = code;
      for (int s = 0; s < slots; ++s) {
        const int trit = rest % 3;
        rest /= 3;
        if (trit == 0) {
          x[2 * s] = 0.0;
          x[2 * s + 1] = 0.0;
        } else {
          x[2 * s] = 1.0;
          x[2 * s + 1] = trit == 1 ? 0.0 : std::numbers::pi;
        }
      }
      eval(x);
    }
  }

  // Nelder-Mead polish of the best point so far, then random restarts.
  std::uniform_real_distribution<double> mag_dist(0.0, space.max_magnitude);
  std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
  bool first_descent = true;
  while (!eval.exhausted()) {
    std::vector<double> start;
    if (first_descent && !eval.best_params().empty()) {
      start = eval.best_params();
      first_descent = false;
    } else {
      start.resize(dim);
      for (int s = 0; s < dim / 2; ++s) {
        start[2 * s] = mag_dist(rng);
        start[2 * s + 1] = phase_dist(rng);
      }
    }
    nelder_mead(eval, start, space);
    if (dim == 0) break;
  }

  SearchResult result;
  result.seed = seed;
  result.evaluations = eval.count();
  result.best_objective = eval.best();
  result.best_params = eval.best_params();
  result.trace = eval.trace();
  std::tie(result.best_D, result.best_A) = space.decode(result.best_params);
  try {
    const StageStates best_stages =
        space.optimize_pump1
            ? run_pipeline(apply_point(result.best_params, space, cfg))
            : run_pipeline(prefix, result.best_D, result.best_A);
    result.success_probability = best_stages.success_probability();
  } catch (const std::exception&) {
    result.success_probability = 0.0;  // the best point itself failed to evaluate
  }
  return result;
}

nlohmann::json search_result_to_json(const SearchResult& result, int budget) {
  const auto weights_json = [](const Projector& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [l, w] : p.weights)
      a.push_back({{"l", l}, {"re", w.real()}, {"im", w.imag()}});
    return a;
  };
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& point : result.trace)
    trace.push_back({{"evaluation", point.evaluation}, {"objective", point.objective}});
  return {{"seed", result.seed},
          {"budget", budget},
          {"evaluations", result.evaluations},
          {"best_objective", result.best_objective},
          {"best_weights", {{"D", weights_json(result.best_D)}, {"A", weights_json(result.best_A)}}},
          {"best_params", result.best_params},
          {"success_probability", result.success_probability},
          {"trace", std::move(trace)}};
}

void write_trace_csv(const SearchResult& result, std::ostream& out) {
  out << "evaluation,best_objective\n";
  char buf[64];
  for (const auto& point : result.trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g\n", point.evaluation, point.objective);
    out << buf;
  }
}

}  // namespace noongen
