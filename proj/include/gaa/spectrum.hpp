#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace gaa {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit of PhaseSpectrum values: raw path weights, or phases in radians.
enum class ScaleMode { weights, phases };

struct SpectrumClass {
  double value = 0.0;
  std::uint64_t population = 0;

  friend bool operator==(const SpectrumClass&, const SpectrumClass&) = default;
};

/// Compressed solution space: one entry per distinct value with the number
/// of basis states carrying it. Every basis state inside a class evolves
/// with the same amplitude under the cost oracle and the diffusion, so this
/// is all the amplitude engine needs.
///
/// Values are strictly increasing and populations are at least 1. Phase
/// spectra keep every value inside [0, 2pi].
class PhaseSpectrum {
 public:
  PhaseSpectrum(std::vector<SpectrumClass> classes, ScaleMode mode);

  /// Same as the constructor but only requires non-decreasing values. Used
  /// by constructions whose classes are defined by oracle outcome rather
  /// than by value, where two outcomes may coincide at parameter endpoints.
  static PhaseSpectrum with_coincident_values(std::vector<SpectrumClass> classes,
                                              ScaleMode mode);

  std::span<const SpectrumClass> classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  const SpectrumClass& operator[](std::size_t i) const { return classes_[i]; }
  ScaleMode mode() const { return mode_; }
  std::uint64_t total() const { return total_; }
  double min_value() const { return classes_.front().value; }
  double max_value() const { return classes_.back().value; }

  friend bool operator==(const PhaseSpectrum&, const PhaseSpectrum&) = default;

 private:
  PhaseSpectrum(std::vector<SpectrumClass> classes, ScaleMode mode, bool strict);

  std::vector<SpectrumClass> classes_;
  ScaleMode mode_ = ScaleMode::weights;
  std::uint64_t total_ = 0;
};

struct SpectrumStats {
  double sigma = 0.0;        // population-weighted std dev of values
  double sigma_prime = 0.0;  // same, after rescale_full_range (0 for one class)
  std::size_t n_classes = 0;
  std::uint64_t pop_min = 0;  // population of the lowest-value class
  double w_min = 0.0;
  double w_max = 0.0;
};

struct Rescaled {
  PhaseSpectrum spectrum;
  double p_s = 1.0;
};

/// Phase of grid point i out of n: 2pi*i/n. The grid covers the circle
/// once, so 0 is the first point and pi is point n/2 for even n.
double phase_grid_point(int i, int n_phases);

/// Synthetic gaussian spectrum with every population rounded up, so each of
/// the n_phases grid points keeps at least one state. sigma == 0 is the
/// delta limit: the grid point nearest pi holds all but n_phases-1 states.
PhaseSpectrum synth_long_tail(double sigma, int n_phases, std::uint64_t target_total);

/// Synthetic gaussian spectrum with populations rounded down. Empty grid
/// points are dropped, so the retained values no longer span [0, 2pi].
PhaseSpectrum synth_short_tail(double sigma, int n_phases, std::uint64_t target_total);

/// Maps the spectrum onto [0, 2pi]: p_s = 2pi / (w_max - w_min), values
/// become p_s * (w - w_min).
Rescaled rescale_full_range(const PhaseSpectrum& s);

SpectrumStats stats(const PhaseSpectrum& s);

/// Population-weighted standard deviation of the values.
double weighted_stddev(const PhaseSpectrum& s);
double weighted_mean(const PhaseSpectrum& s);

}  // namespace gaa
