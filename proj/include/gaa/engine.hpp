#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaa/spectrum.hpp"

namespace gaa {

using Amplitude = std::complex<double>;

/// One amplitude per spectrum class. The probability of measuring a single
/// basis state of class c is |amplitudes[c]|^2; the class as a whole holds
/// populations[c] times that.
class AmplitudeState {
 public:
  AmplitudeState(std::vector<Amplitude> amplitudes, std::vector<std::uint64_t> populations);

  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  std::span<const std::uint64_t> populations() const { return populations_; }
  std::size_t size() const { return amplitudes_.size(); }
  std::uint64_t total() const { return total_; }

  double state_probability(std::size_t c) const { return std::norm(amplitudes_[c]); }
  double class_probability(std::size_t c) const {
    return static_cast<double>(populations_[c]) * std::norm(amplitudes_[c]);
  }
  /// sum_c pop_c |a_c|^2, which stays 1 up to rounding.
  double norm() const;
  /// Population-weighted mean amplitude.
  Amplitude mean() const;

  /// Multiplies class c by factors[c].
  void rotate(std::span<const Amplitude> factors);
  /// a_c <- 2m - a_c with m the current mean; returns m.
  Amplitude reflect_about_mean();

 private:
  std::vector<Amplitude> amplitudes_;
  std::vector<std::uint64_t> populations_;
  std::uint64_t total_ = 0;
};

/// Which class a run tracks.
struct Target {
  enum class Kind { lowest, second_lowest, highest, index };
  Kind kind = Kind::lowest;
  std::size_t class_index = 0;

  static Target lowest() { return {Kind::lowest, 0}; }
  static Target second_lowest() { return {Kind::second_lowest, 0}; }
  static Target highest() { return {Kind::highest, 0}; }
  static Target at(std::size_t index) { return {Kind::index, index}; }

  std::size_t resolve(const PhaseSpectrum& s) const;
};

/// Per-step phase scaling constants. Steps past the end reuse the last one.
class ScalingSchedule {
 public:
  explicit ScalingSchedule(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  /// p_s for 1-based step k.
  double at_step(std::size_t k) const {
    return values_[std::min(k, values_.size()) - 1];
  }

 private:
  std::vector<double> values_;
};

enum class Termination { rebound, step_cap };

/// rebound: stop at the first step whose target probability drops.
/// full_window: always run to the step cap and report the highest point,
/// for oracles whose target probability oscillates before its main peak.
enum class StopRule { rebound, full_window };

struct TraceStep {
  int step = 0;
  double p_s = 0.0;
  double prob_min_state = 0.0;  // one basis state of the target class
  double prob_min_class = 0.0;  // whole target class
  Amplitude mean_point;         // mean the diffusion reflected about
};

struct AmplificationTrace {
  std::vector<TraceStep> steps;
  double p_m = 0.0;  // peak prob_min_state
  int s_m = 0;       // step of the peak
  Termination terminated_by = Termination::step_cap;
  std::size_t target_class = 0;
  std::uint64_t target_population = 0;
};

struct RunOptions {
  /// Defaults to default_step_cap(total) when unset.
  std::optional<int> step_cap;
  Target target = Target::lowest();
  StopRule stop = StopRule::rebound;
  /// When false only the summary fields of the trace are filled.
  bool record_steps = true;
};

AmplitudeState init_uniform(const PhaseSpectrum& s);

/// Multiplies every class by exp(i p_s value).
AmplitudeState apply_oracle(AmplitudeState st, const PhaseSpectrum& s, double p_s);

/// Reflection of every amplitude about the population-weighted mean.
AmplitudeState apply_diffusion(AmplitudeState st);

/// ceil(2 * pi/4 * sqrt(total)).
int default_step_cap(std::uint64_t total);

/// Iterates oracle then diffusion, stopping at the first step whose target
/// probability drops below the previous one. A state whose target
/// probability does not move at step 1 cannot be amplified and also stops.
AmplificationTrace run(const PhaseSpectrum& s, double p_s, const RunOptions& options = {});
AmplificationTrace run(const PhaseSpectrum& s, const ScalingSchedule& schedule,
                       const RunOptions& options = {});

/// sin^2((2k+1) asin(sqrt(marked/total))).
double grover_reference(std::uint64_t total, std::uint64_t marked, std::int64_t k);

/// Two-class Grover spectrum: `marked` states at phase pi and the rest at 0.
/// Class 1 is the marked class.
PhaseSpectrum grover_spectrum(std::uint64_t total, std::uint64_t marked = 1);

/// Phase classes of the two-marked oracle on n qubits, in the fixed order
/// |0..0> (phase 0), G_theta (theta), |1..1> (pi), G_-theta (2pi - theta).
PhaseSpectrum synth_two_marked(int n_qubits, double theta);

namespace two_marked {
inline constexpr std::size_t kAllZeros = 0;
inline constexpr std::size_t kAllOnes = 2;
}  // namespace two_marked

struct TwoMarkedPoint {
  double theta = 0.0;
  double p_m_ones = 0.0;  // |1..1>
  int s_m_ones = 0;
  double p_m_zeros = 0.0;  // |0..0>
  int s_m_zeros = 0;
};

/// Step window for the two-marked study: three times default_step_cap, long
/// enough to contain the main peak of |1..1> for theta close to pi.
int two_marked_window(int n_qubits);

/// Peak probabilities of |1..1> and |0..0> over `theta_points` evenly
/// spaced theta in [0, pi], each taken over the full step window.
std::vector<TwoMarkedPoint> two_marked_curve(int n_qubits, int theta_points,
                                             std::optional<int> step_cap = std::nullopt);

}  // namespace gaa
