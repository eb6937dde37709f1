#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gaa/spectrum.hpp"

namespace gaa {

/// Asymmetric travelling-salesman instance: w[j][k] is the cost of going
/// from city j to city k; the diagonal is unused and stored as 0.
class TspInstance {
 public:
  TspInstance(int n, std::int64_t max_weight, std::uint64_t seed,
              std::vector<std::int64_t> weights);

  int size() const { return n_; }
  std::int64_t max_weight() const { return max_weight_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t weight(int from, int to) const {
    return weights_[static_cast<std::size_t>(from) * static_cast<std::size_t>(n_) +
                    static_cast<std::size_t>(to)];
  }
  std::span<const std::int64_t> weights() const { return weights_; }

  friend bool operator==(const TspInstance&, const TspInstance&) = default;

 private:
  int n_ = 0;
  std::int64_t max_weight_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::int64_t> weights_;  // row-major n x n
};

/// Open path visiting every city once, no return edge.
struct TspPath {
  std::vector<int> order;

  friend bool operator==(const TspPath&, const TspPath&) = default;
};

/// Mixed-radix register (n, n-1, ..., 2) whose basis states index the n!
/// open paths.
struct QuditShape {
  std::vector<int> dims;

  std::uint64_t dimension() const;
};

inline constexpr int kDefaultCityCap = 11;

TspInstance generate_tsp(int n, std::int64_t max_weight, std::uint64_t seed);

std::int64_t tsp_path_weight(const TspInstance& inst, const TspPath& p);

/// Histogram of all n! open-path weights.
PhaseSpectrum enumerate_tsp_spectrum(const TspInstance& inst, int city_cap = kDefaultCityCap);

QuditShape qudit_shape(int n);
std::uint64_t factorial(int n);

/// Path -> basis index. The first digit is the start city; every later digit
/// ranks the chosen city among the unvisited ones ordered clockwise from the
/// previous city, i.e. by (label - previous) mod n.
std::uint64_t encode_path(const TspPath& p);
TspPath decode_index(int n, std::uint64_t index);

}  // namespace gaa
