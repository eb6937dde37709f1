#include "gaa/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "gaa/error.hpp"
#include "gaa/rng.hpp"

namespace gaa {

LayeredGraph::LayeredGraph(std::vector<int> layer_sizes, std::int64_t max_weight,
                           std::uint64_t seed, std::vector<std::vector<std::int64_t>> weights)
    : layer_sizes_(std::move(layer_sizes)),
      max_weight_(max_weight),
      seed_(seed),
      weights_(std::move(weights)) {
  if (layer_sizes_.size() < 2) throw InvalidInput("a layered graph needs at least 2 layers");
  for (int n : layer_sizes_) {
    if (n <= 0) throw InvalidInput("layer sizes must be positive");
  }
  if (max_weight_ < 0) throw InvalidInput("max weight must be non-negative");
  if (weights_.size() != layer_sizes_.size() - 1) {
    throw InvalidInput("expected one weight table per adjacent layer pair");
  }
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    const auto expected = static_cast<std::size_t>(layer_sizes_[l]) *
                          static_cast<std::size_t>(layer_sizes_[l + 1]);
    if (weights_[l].size() != expected) {
      throw InvalidInput("weight table " + std::to_string(l) + " has wrong size");
    }
    for (auto w : weights_[l]) {
      if (w < 0 || w > max_weight_) throw InvalidInput("edge weight outside [0, R]");
    }
  }
}

std::uint64_t LayeredGraph::edge_count() const {
  std::uint64_t edges = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    edges += static_cast<std::uint64_t>(layer_sizes_[l]) *
             static_cast<std::uint64_t>(layer_sizes_[l + 1]);
  }
  return edges;
}

std::uint64_t LayeredGraph::path_count() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t paths = 1;
  for (int n : layer_sizes_) {
    const auto size = static_cast<std::uint64_t>(n);
    if (paths > kMax / size) return kMax;
    paths *= size;
  }
  return paths;
}

bool LayeredGraph::is_uniform() const {
  return std::all_of(layer_sizes_.begin(), layer_sizes_.end(),
                     [&](int n) { return n == layer_sizes_.front(); });
}

LayeredGraph generate_graph(std::vector<int> layer_sizes, std::int64_t max_weight,
                            std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw InvalidInput("a layered graph needs at least 2 layers");
  for (int n : layer_sizes) {
    if (n <= 0) throw InvalidInput("layer sizes must be positive");
  }
  if (max_weight < 0) throw InvalidInput("max weight must be non-negative");
  WeightRng rng(seed);
  std::vector<std::vector<std::int64_t>> weights(layer_sizes.size() - 1);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    auto& table = weights[l];
    table.resize(static_cast<std::size_t>(layer_sizes[l]) *
                 static_cast<std::size_t>(layer_sizes[l + 1]));
    for (auto& w : table) w = rng.uniform(max_weight);
  }
  return LayeredGraph(std::move(layer_sizes), max_weight, seed, std::move(weights));
}

std::int64_t path_weight(const LayeredGraph& g, const Path& p) {
  if (p.nodes.size() != g.layer_count()) throw InvalidInput("path length differs from layer count");
  for (std::size_t l = 0; l < p.nodes.size(); ++l) {
    if (p.nodes[l] < 0 || p.nodes[l] >= g.layer_size(l)) {
      throw InvalidInput("node index out of range in layer " + std::to_string(l));
    }
  }
  std::int64_t total = 0;
  for (std::size_t l = 0; l + 1 < p.nodes.size(); ++l) {
    total += g.weight(l, p.nodes[l], p.nodes[l + 1]);
  }
  return total;
}

SolveResult classical_solve(const LayeredGraph& g, Objective objective) {
  const bool minimize = objective == Objective::minimize;
  const auto better = [minimize](std::int64_t a, std::int64_t b) {
    return minimize ? a < b : a > b;
  };
  const std::size_t layers = g.layer_count();

  // best[l][a]: optimal weight of the remaining path starting at node a of
  // layer l. Sweeping from the last layer lets the forward reconstruction
  // pick the smallest node index at every layer, which is the
  // lexicographically smallest optimal path.
  std::vector<std::vector<std::int64_t>> best(layers);
  best[layers - 1].assign(static_cast<std::size_t>(g.layer_size(layers - 1)), 0);
  SolveResult result;
  for (std::size_t l = layers - 1; l-- > 0;) {
    const auto& next = best[l + 1];
    auto& cur = best[l];
    cur.assign(static_cast<std::size_t>(g.layer_size(l)), 0);
    for (int a = 0; a < g.layer_size(l); ++a) {
      bool first = true;
      for (int b = 0; b < g.layer_size(l + 1); ++b) {
        const std::int64_t candidate = g.weight(l, a, b) + next[static_cast<std::size_t>(b)];
        ++result.queries;
        if (first || better(candidate, cur[static_cast<std::size_t>(a)])) {
          cur[static_cast<std::size_t>(a)] = candidate;
          first = false;
        }
      }
    }
  }

  const auto& start = best[0];
  int node = 0;
  for (int a = 1; a < g.layer_size(0); ++a) {
    if (better(start[static_cast<std::size_t>(a)], start[static_cast<std::size_t>(node)])) node = a;
  }
  result.best_weight = start[static_cast<std::size_t>(node)];
  result.best_path.nodes.push_back(node);
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const std::int64_t remaining = best[l][static_cast<std::size_t>(node)];
    for (int b = 0; b < g.layer_size(l + 1); ++b) {
      if (g.weight(l, node, b) + best[l + 1][static_cast<std::size_t>(b)] == remaining) {
        node = b;
        break;
      }
    }
    result.best_path.nodes.push_back(node);
  }
  return result;
}

PhaseSpectrum enumerate_spectrum(const LayeredGraph& g, std::uint64_t path_cap) {
  if (g.path_count() > path_cap) {
    throw CapExceeded("path count exceeds cap of " + std::to_string(path_cap));
  }
  // counts[a][w]: number of partial paths ending at node a of the current
  // layer with accumulated weight w.
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(g.layer_size(0)),
                                                 std::vector<std::uint64_t>(1, 1));
  std::size_t width = 1;
  for (std::size_t l = 0; l + 1 < g.layer_count(); ++l) {
    const std::size_t next_width = width + static_cast<std::size_t>(g.max_weight());
    std::vector<std::vector<std::uint64_t>> next(
        static_cast<std::size_t>(g.layer_size(l + 1)), std::vector<std::uint64_t>(next_width, 0));
    for (int a = 0; a < g.layer_size(l); ++a) {
      const auto& src = counts[static_cast<std::size_t>(a)];
      for (int b = 0; b < g.layer_size(l + 1); ++b) {
        const auto shift = static_cast<std::size_t>(g.weight(l, a, b));
        auto* dst = next[static_cast<std::size_t>(b)].data() + shift;
        for (std::size_t w = 0; w < width; ++w) dst[w] += src[w];
      }
    }
    counts = std::move(next);
    width = next_width;
  }

  std::vector<std::uint64_t> histogram(width, 0);
  for (const auto& row : counts) {
    for (std::size_t w = 0; w < width; ++w) histogram[w] += row[w];
  }
  std::vector<SpectrumClass> classes;
  for (std::size_t w = 0; w < width; ++w) {
    if (histogram[w] > 0) classes.push_back({static_cast<double>(w), histogram[w]});
  }
  return PhaseSpectrum(std::move(classes), ScaleMode::weights);
}

double expected_mean(const LayeredGraph& g) {
  return static_cast<double>(g.max_weight()) / 2.0 * static_cast<double>(g.layer_count() - 1);
}

double gaussian_residual(const PhaseSpectrum& s, double alpha, double mu, double sigma) {
  double sum = 0.0;
  const double two_var = 2.0 * sigma * sigma;
  for (const auto& c : s.classes()) {
    const double d = c.value - mu;
    const double r = alpha * std::exp(-d * d / two_var) - static_cast<double>(c.population);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(s.total()));
}

namespace {

struct GaussianResiduals {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::vector<double> x;
  std::vector<double> y;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(x.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& fvec) const {
    const double two_var = 2.0 * p[2] * p[2];
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - p[1];
      fvec[static_cast<Eigen::Index>(i)] = p[0] * std::exp(-d * d / two_var) - y[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    const double s = p[2];
    const double two_var = 2.0 * s * s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double d = x[i] - p[1];
      const double e = std::exp(-d * d / two_var);
      jac(row, 0) = e;
      jac(row, 1) = p[0] * e * d / (s * s);
      jac(row, 2) = p[0] * e * d * d / (s * s * s);
    }
    return 0;
  }
};

}  // namespace

GaussianFit fit_gaussian(const PhaseSpectrum& s) {
  if (s.size() < 3) throw InvalidInput("gaussian fit needs at least 3 classes");
  GaussianResiduals f;
  double alpha0 = 0.0;
  for (const auto& c : s.classes()) {
    f.x.push_back(c.value);
    f.y.push_back(static_cast<double>(c.population));
    alpha0 = std::max(alpha0, static_cast<double>(c.population));
  }
  const double mu0 = weighted_mean(s);
  const double sigma0 = std::max(weighted_stddev(s), 1e-9);

  GaussianFit best;
  best.r_corr = std::numeric_limits<double>::infinity();
  const double sigma_scales[] = {1.0, 0.5, 2.0};
  const double mu_shifts[] = {0.0, -0.5, 0.5};
  for (double ss : sigma_scales) {
    for (double ms : mu_shifts) {
      Eigen::VectorXd p(3);
      p << alpha0, mu0 + ms * sigma0, sigma0 * ss;
      Eigen::LevenbergMarquardt<GaussianResiduals> lm(f);
      lm.parameters.maxfev = 2000;
      lm.minimize(p);
      const double sigma = std::abs(p[2]);
      if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !(sigma > 0.0)) continue;
      const double r = gaussian_residual(s, p[0], p[1], sigma);
      if (r < best.r_corr) best = {p[0], p[1], sigma, r};
    }
  }
  if (!std::isfinite(best.r_corr)) throw Error("gaussian fit did not converge");
  return best;
}

}  // namespace gaa
