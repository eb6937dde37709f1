#include "gaa/tsp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "gaa/error.hpp"
#include "gaa/rng.hpp"

namespace gaa {

TspInstance::TspInstance(int n, std::int64_t max_weight, std::uint64_t seed,
                         std::vector<std::int64_t> weights)
    : n_(n), max_weight_(max_weight), seed_(seed), weights_(std::move(weights)) {
  if (n_ < 2) throw InvalidInput("a TSP instance needs at least 2 cities");
  if (max_weight_ < 0) throw InvalidInput("max weight must be non-negative");
  if (weights_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_)) {
    throw InvalidInput("weight table must be n x n");
  }
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      const auto w = weight(j, k);
      if (j == k ? w != 0 : (w < 0 || w > max_weight_)) {
        throw InvalidInput("TSP weight outside [0, R] or non-zero diagonal");
      }
    }
  }
}

std::uint64_t QuditShape::dimension() const {
  std::uint64_t d = 1;
  for (int x : dims) d *= static_cast<std::uint64_t>(x);
  return d;
}

TspInstance generate_tsp(int n, std::int64_t max_weight, std::uint64_t seed) {
  if (n < 3) throw InvalidInput("generate_tsp needs n >= 3");
  if (max_weight < 0) throw InvalidInput("max weight must be non-negative");
  WeightRng rng(seed);
  std::vector<std::int64_t> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j != k) w[static_cast<std::size_t>(j * n + k)] = rng.uniform(max_weight);
    }
  }
  return TspInstance(n, max_weight, seed, std::move(w));
}

namespace {

void check_permutation(const std::vector<int>& order, int n) {
  if (static_cast<int>(order.size()) != n) throw InvalidInput("path length differs from n");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int c : order) {
    if (c < 0 || c >= n || seen[static_cast<std::size_t>(c)]) {
      throw InvalidInput("path is not a permutation of the cities");
    }
    seen[static_cast<std::size_t>(c)] = true;
  }
}

}  // namespace

std::int64_t tsp_path_weight(const TspInstance& inst, const TspPath& p) {
  check_permutation(p.order, inst.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i + 1 < p.order.size(); ++i) total += inst.weight(p.order[i], p.order[i + 1]);
  return total;
}

std::uint64_t factorial(int n) {
  if (n < 0 || n > 20) throw InvalidInput("factorial argument outside [0, 20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

PhaseSpectrum enumerate_tsp_spectrum(const TspInstance& inst, int city_cap) {
  const int n = inst.size();
  if (n > city_cap) throw CapExceeded("city count exceeds cap of " + std::to_string(city_cap));
  const auto width = static_cast<std::size_t>(inst.max_weight() * (n - 1) + 1);
  std::vector<std::uint64_t> histogram(width, 0);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  do {
    std::int64_t w = 0;
    for (int i = 0; i + 1 < n; ++i) {
      w += inst.weight(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i + 1)]);
    }
    ++histogram[static_cast<std::size_t>(w)];
  } while (std::next_permutation(order.begin(), order.end()));

  std::vector<SpectrumClass> classes;
  for (std::size_t w = 0; w < width; ++w) {
    if (histogram[w] > 0) classes.push_back({static_cast<double>(w), histogram[w]});
  }
  return PhaseSpectrum(std::move(classes), ScaleMode::weights);
}

QuditShape qudit_shape(int n) {
  if (n < 2) throw InvalidInput("qudit shape needs n >= 2");
  QuditShape shape;
  for (int d = n; d >= 2; --d) shape.dims.push_back(d);
  return shape;
}

namespace {

// Unvisited cities ordered clockwise from `previous`.
std::vector<int> clockwise_candidates(const std::vector<bool>& visited, int previous) {
  const int n = static_cast<int>(visited.size());
  std::vector<int> out;
  for (int step = 1; step < n; ++step) {
    const int city = (previous + step) % n;
    if (!visited[static_cast<std::size_t>(city)]) out.push_back(city);
  }
  return out;
}

}  // namespace

std::uint64_t encode_path(const TspPath& p) {
  const int n = static_cast<int>(p.order.size());
  if (n < 2 || n > 20) throw InvalidInput("path length must lie in [2, 20]");
  check_permutation(p.order, n);
  const QuditShape shape = qudit_shape(n);
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  std::uint64_t index = static_cast<std::uint64_t>(p.order[0]);
  visited[static_cast<std::size_t>(p.order[0])] = true;
  for (std::size_t k = 1; k < shape.dims.size(); ++k) {
    const auto candidates = clockwise_candidates(visited, p.order[k - 1]);
    const auto it = std::find(candidates.begin(), candidates.end(), p.order[k]);
    const auto digit = static_cast<std::uint64_t>(it - candidates.begin());
    index = index * static_cast<std::uint64_t>(shape.dims[k]) + digit;
    visited[static_cast<std::size_t>(p.order[k])] = true;
  }
  return index;
}

TspPath decode_index(int n, std::uint64_t index) {
  if (n < 2 || n > 20) throw InvalidInput("n must lie in [2, 20]");
  if (index >= factorial(n)) throw InvalidInput("index outside [0, n!)");
  const QuditShape shape = qudit_shape(n);
  std::vector<std::uint64_t> digits(shape.dims.size());
  for (std::size_t k = shape.dims.size(); k-- > 0;) {
    const auto radix = static_cast<std::uint64_t>(shape.dims[k]);
    digits[k] = index % radix;
    index /= radix;
  }
  TspPath p;
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  p.order.push_back(static_cast<int>(digits[0]));
  visited[digits[0]] = true;
  for (std::size_t k = 1; k < digits.size(); ++k) {
    const auto candidates = clockwise_candidates(visited, p.order.back());
    const int city = candidates[digits[k]];
    p.order.push_back(city);
    visited[static_cast<std::size_t>(city)] = true;
  }
  for (int c = 0; c < n; ++c) {
    if (!visited[static_cast<std::size_t>(c)]) p.order.push_back(c);
  }
  return p;
}

}  // namespace gaa
