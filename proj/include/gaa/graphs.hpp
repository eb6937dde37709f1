#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaa/spectrum.hpp"

namespace gaa {

/// Sequentially connected bipartite graph: every node of layer l has a
/// directed edge to every node of layer l+1, with an integer weight in
/// [0, max_weight]. A path touches exactly one node per layer.
class LayeredGraph {
 public:
  /// `weights[l]` is the row-major table for layer pair (l, l+1), of size
  /// layer_sizes[l] * layer_sizes[l+1].
  LayeredGraph(std::vector<int> layer_sizes, std::int64_t max_weight, std::uint64_t seed,
               std::vector<std::vector<std::int64_t>> weights);

  std::span<const int> layer_sizes() const { return layer_sizes_; }
  std::size_t layer_count() const { return layer_sizes_.size(); }
  int layer_size(std::size_t layer) const { return layer_sizes_[layer]; }
  std::int64_t max_weight() const { return max_weight_; }
  std::uint64_t seed() const { return seed_; }

  std::int64_t weight(std::size_t layer, int from, int to) const {
    return weights_[layer][static_cast<std::size_t>(from) *
                               static_cast<std::size_t>(layer_sizes_[layer + 1]) +
                           static_cast<std::size_t>(to)];
  }
  std::span<const std::int64_t> weight_table(std::size_t layer) const { return weights_[layer]; }

  std::uint64_t edge_count() const;
  /// Product of layer sizes, saturating at UINT64_MAX.
  std::uint64_t path_count() const;
  bool is_uniform() const;

  friend bool operator==(const LayeredGraph&, const LayeredGraph&) = default;

 private:
  std::vector<int> layer_sizes_;
  std::int64_t max_weight_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::vector<std::int64_t>> weights_;
};

struct Path {
  std::vector<int> nodes;  // one node index per layer

  friend bool operator==(const Path&, const Path&) = default;
};

enum class Objective { minimize, maximize };

struct SolveResult {
  std::int64_t best_weight = 0;
  Path best_path;
  std::uint64_t queries = 0;  // edge weights inspected
};

struct GaussianFit {
  double alpha = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double r_corr = 0.0;
};

inline constexpr std::uint64_t kDefaultPathCap = 100'000'000;

LayeredGraph generate_graph(std::vector<int> layer_sizes, std::int64_t max_weight,
                            std::uint64_t seed);

std::int64_t path_weight(const LayeredGraph& g, const Path& p);

/// Layer-by-layer dynamic program, one inspection per edge. Among optimal
/// paths the lexicographically smallest node sequence is returned.
SolveResult classical_solve(const LayeredGraph& g, Objective objective);

/// Histogram of path weights, built by convolving per-node weight-count
/// tables layer by layer instead of visiting paths.
PhaseSpectrum enumerate_spectrum(const LayeredGraph& g,
                                 std::uint64_t path_cap = kDefaultPathCap);

/// R/2 * (L-1): mean path weight under uniform random edge weights.
double expected_mean(const LayeredGraph& g);

/// sqrt(sum_c (G(W_c) - pop_c)^2 / total) for G(x) = alpha*exp(-(x-mu)^2/(2 sigma^2)).
double gaussian_residual(const PhaseSpectrum& s, double alpha, double mu, double sigma);

/// Least-squares gaussian through the histogram, Levenberg-Marquardt from
/// several starts around the moment estimates.
GaussianFit fit_gaussian(const PhaseSpectrum& s);

}  // namespace gaa
