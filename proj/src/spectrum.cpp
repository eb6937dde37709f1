#include "gaa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "gaa/error.hpp"

namespace gaa {

PhaseSpectrum::PhaseSpectrum(std::vector<SpectrumClass> classes, ScaleMode mode)
    : PhaseSpectrum(std::move(classes), mode, true) {}

PhaseSpectrum PhaseSpectrum::with_coincident_values(std::vector<SpectrumClass> classes,
                                                    ScaleMode mode) {
  return PhaseSpectrum(std::move(classes), mode, false);
}

PhaseSpectrum::PhaseSpectrum(std::vector<SpectrumClass> classes, ScaleMode mode, bool strict)
    : classes_(std::move(classes)), mode_(mode) {
  if (classes_.empty()) throw InvalidInput("spectrum needs at least one class");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (!std::isfinite(c.value)) throw InvalidInput("spectrum value is not finite");
    if (c.population == 0) throw InvalidInput("spectrum class with zero population");
    if (mode_ == ScaleMode::phases && (c.value < 0.0 || c.value > kTwoPi)) {
      throw InvalidInput("phase value outside [0, 2pi]: " + std::to_string(c.value));
    }
    if (i > 0) {
      const double prev = classes_[i - 1].value;
      if (strict ? !(c.value > prev) : c.value < prev) {
        throw InvalidInput("spectrum values must be increasing");
      }
    }
    total_ += c.population;
  }
}

double phase_grid_point(int i, int n_phases) {
  return kTwoPi * static_cast<double>(i) / static_cast<double>(n_phases);
}

namespace {

// Unnormalized gaussian centred at pi sampled on the phase grid.
std::vector<double> gaussian_profile(double sigma, int n_phases) {
  std::vector<double> g(static_cast<std::size_t>(n_phases), 0.0);
  if (sigma == 0.0) {
    // Delta at the grid point nearest pi; the lower one on an odd grid.
    g[static_cast<std::size_t>(n_phases / 2)] = 1.0;
    return g;
  }
  const double two_var = 2.0 * sigma * sigma;
  for (int i = 0; i < n_phases; ++i) {
    const double d = phase_grid_point(i, n_phases) - std::numbers::pi;
    g[static_cast<std::size_t>(i)] = std::exp(-d * d / two_var);
  }
  return g;
}

using Rounding = std::function<std::uint64_t(double)>;

std::uint64_t population_sum(const std::vector<double>& g, double k, const Rounding& round) {
  std::uint64_t sum = 0;
  for (double v : g) sum += round(k * v);
  return sum;
}

// Finds the scale k whose rounded population sum lands closest to target.
// The sum is monotone in k, so a bracket [lo, hi] with sum(lo) < target <=
// sum(hi) is bisected until the two ends are adjacent doubles; the closer
// end wins and ties go to the smaller k.
double find_scale(const std::vector<double>& g, std::uint64_t target, const Rounding& round) {
  double lo = 0.0;
  if (population_sum(g, lo, round) >= target) return lo;
  double hi = 1.0;
  while (population_sum(g, hi, round) < target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw InvalidInput("population scale search diverged");
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (population_sum(g, mid, round) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const std::uint64_t below = population_sum(g, lo, round);
  const std::uint64_t above = population_sum(g, hi, round);
  return (target - below) <= (above - target) ? lo : hi;
}

void check_synth_args(double sigma, int n_phases, std::uint64_t target_total) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be >= 0");
  if (n_phases < 2) throw InvalidInput("n_phases must be >= 2");
  if (target_total < static_cast<std::uint64_t>(n_phases)) {
    throw InvalidInput("target_total must be >= n_phases");
  }
}

}  // namespace

PhaseSpectrum synth_long_tail(double sigma, int n_phases, std::uint64_t target_total) {
  check_synth_args(sigma, n_phases, target_total);
  const auto g = gaussian_profile(sigma, n_phases);
  const Rounding up = [](double x) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(x)));
  };
  const double k = find_scale(g, target_total, up);
  std::vector<SpectrumClass> classes;
  classes.reserve(g.size());
  for (int i = 0; i < n_phases; ++i) {
    classes.push_back({phase_grid_point(i, n_phases), up(k * g[static_cast<std::size_t>(i)])});
  }
  return PhaseSpectrum(std::move(classes), ScaleMode::phases);
}

PhaseSpectrum synth_short_tail(double sigma, int n_phases, std::uint64_t target_total) {
  check_synth_args(sigma, n_phases, target_total);
  const auto g = gaussian_profile(sigma, n_phases);
  const Rounding down = [](double x) { return static_cast<std::uint64_t>(std::floor(x)); };
  const double k = find_scale(g, target_total, down);
  std::vector<SpectrumClass> classes;
  for (int i = 0; i < n_phases; ++i) {
    const std::uint64_t pop = down(k * g[static_cast<std::size_t>(i)]);
    if (pop > 0) classes.push_back({phase_grid_point(i, n_phases), pop});
  }
  if (classes.empty()) throw InvalidInput("all populations rounded to zero");
  return PhaseSpectrum(std::move(classes), ScaleMode::phases);
}

Rescaled rescale_full_range(const PhaseSpectrum& s) {
  const double lo = s.min_value();
  const double span = s.max_value() - lo;
  if (s.size() < 2 || !(span > 0.0)) {
    throw InvalidInput("cannot rescale a spectrum with zero span");
  }
  const double p_s = kTwoPi / span;
  std::vector<SpectrumClass> out;
  out.reserve(s.size());
  for (const auto& c : s.classes()) {
    out.push_back({std::clamp(p_s * (c.value - lo), 0.0, kTwoPi), c.population});
  }
  out.front().value = 0.0;
  out.back().value = kTwoPi;
  return {PhaseSpectrum(std::move(out), ScaleMode::phases), p_s};
}

double weighted_mean(const PhaseSpectrum& s) {
  const double total = static_cast<double>(s.total());
  double mean = 0.0;
  for (const auto& c : s.classes()) mean += static_cast<double>(c.population) * c.value;
  return mean / total;
}

double weighted_stddev(const PhaseSpectrum& s) {
  const double mean = weighted_mean(s);
  const double total = static_cast<double>(s.total());
  double var = 0.0;
  for (const auto& c : s.classes()) {
    const double d = c.value - mean;
    var += static_cast<double>(c.population) * d * d;
  }
  return std::sqrt(var / total);
}

SpectrumStats stats(const PhaseSpectrum& s) {
  SpectrumStats out;
  out.sigma = weighted_stddev(s);
  out.n_classes = s.size();
  out.pop_min = s[0].population;
  out.w_min = s.min_value();
  out.w_max = s.max_value();
  if (s.size() >= 2 && s.max_value() > s.min_value()) {
    out.sigma_prime = weighted_stddev(rescale_full_range(s).spectrum);
  }
  return out;
}

}  // namespace gaa
