#include "gaa/engine.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gaa/error.hpp"

namespace gaa {

AmplitudeState::AmplitudeState(std::vector<Amplitude> amplitudes,
                               std::vector<std::uint64_t> populations)
    : amplitudes_(std::move(amplitudes)), populations_(std::move(populations)) {
  if (amplitudes_.size() != populations_.size()) {
    throw InvalidInput("amplitude and population counts differ");
  }
  if (amplitudes_.empty()) throw InvalidInput("empty amplitude state");
  for (auto p : populations_) {
    if (p == 0) throw InvalidInput("class with zero population");
    total_ += p;
  }
}

double AmplitudeState::norm() const {
  double sum = 0.0;
  for (std::size_t c = 0; c < amplitudes_.size(); ++c) sum += class_probability(c);
  return sum;
}

Amplitude AmplitudeState::mean() const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t c = 0; c < amplitudes_.size(); ++c) {
    const auto pop = static_cast<double>(populations_[c]);
    re += pop * amplitudes_[c].real();
    im += pop * amplitudes_[c].imag();
  }
  const auto total = static_cast<double>(total_);
  return {re / total, im / total};
}

void AmplitudeState::rotate(std::span<const Amplitude> factors) {
  if (factors.size() != amplitudes_.size()) throw InvalidInput("phase factor count mismatch");
  for (std::size_t c = 0; c < amplitudes_.size(); ++c) amplitudes_[c] *= factors[c];
}

Amplitude AmplitudeState::reflect_about_mean() {
  const Amplitude m = mean();
  const Amplitude twice = 2.0 * m;
  for (auto& a : amplitudes_) a = twice - a;
  return m;
}

std::size_t Target::resolve(const PhaseSpectrum& s) const {
  switch (kind) {
    case Kind::lowest:
      return 0;
    case Kind::second_lowest:
      if (s.size() < 2) throw InvalidInput("spectrum has no second-lowest class");
      return 1;
    case Kind::highest:
      return s.size() - 1;
    case Kind::index:
      if (class_index >= s.size()) throw InvalidInput("target class index out of range");
      return class_index;
  }
  return 0;
}

ScalingSchedule::ScalingSchedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("scaling schedule is empty");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("scaling values must be positive");
  }
}

AmplitudeState init_uniform(const PhaseSpectrum& s) {
  const double a = 1.0 / std::sqrt(static_cast<double>(s.total()));
  std::vector<std::uint64_t> pops;
  pops.reserve(s.size());
  for (const auto& c : s.classes()) pops.push_back(c.population);
  return AmplitudeState(std::vector<Amplitude>(s.size(), Amplitude(a, 0.0)), std::move(pops));
}

namespace {

void phase_factors(const PhaseSpectrum& s, double p_s, std::vector<Amplitude>& out) {
  out.resize(s.size());
  for (std::size_t c = 0; c < s.size(); ++c) out[c] = std::polar(1.0, p_s * s[c].value);
}

void check_aligned(const AmplitudeState& st, const PhaseSpectrum& s) {
  if (st.size() != s.size()) throw InvalidInput("state and spectrum are not class-aligned");
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (st.populations()[c] != s[c].population) {
      throw InvalidInput("state and spectrum populations differ");
    }
  }
}

template <typename ScaleAt>
AmplificationTrace run_impl(const PhaseSpectrum& s, ScaleAt scale_at, bool constant,
                            const RunOptions& options) {
  const int cap = options.step_cap.value_or(default_step_cap(s.total()));
  if (cap < 1) throw InvalidInput("step cap must be >= 1");
  AmplificationTrace trace;
  trace.target_class = options.target.resolve(s);
  trace.target_population = s[trace.target_class].population;
  if (options.record_steps) trace.steps.reserve(static_cast<std::size_t>(std::min(cap, 1 << 16)));

  AmplitudeState st = init_uniform(s);
  std::vector<Amplitude> factors;
  if (constant) phase_factors(s, scale_at(1), factors);

  const std::size_t t = trace.target_class;
  double previous = st.state_probability(t);
  trace.p_m = -1.0;
  for (int k = 1; k <= cap; ++k) {
    const double p_s = scale_at(static_cast<std::size_t>(k));
    if (!constant) phase_factors(s, p_s, factors);
    st.rotate(factors);
    const Amplitude m = st.reflect_about_mean();
    const double prob = st.state_probability(t);
    if (options.record_steps) {
      trace.steps.push_back({k, p_s, prob, static_cast<double>(trace.target_population) * prob, m});
    }
    if (prob > trace.p_m) {
      trace.p_m = prob;
      trace.s_m = k;
    }
    const bool stationary = k == 1 && std::abs(prob - previous) <= 1e-12 * previous;
    if (options.stop == StopRule::rebound && (prob < previous || stationary)) {
      trace.terminated_by = Termination::rebound;
      return trace;
    }
    previous = prob;
  }
  trace.terminated_by = Termination::step_cap;
  return trace;
}

}  // namespace

AmplitudeState apply_oracle(AmplitudeState st, const PhaseSpectrum& s, double p_s) {
  check_aligned(st, s);
  std::vector<Amplitude> factors;
  phase_factors(s, p_s, factors);
  st.rotate(factors);
  return st;
}

AmplitudeState apply_diffusion(AmplitudeState st) {
  st.reflect_about_mean();
  return st;
}

int default_step_cap(std::uint64_t total) {
  return static_cast<int>(
      std::ceil(2.0 * std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(total))));
}

AmplificationTrace run(const PhaseSpectrum& s, double p_s, const RunOptions& options) {
  if (!std::isfinite(p_s)) throw InvalidInput("p_s must be finite");
  return run_impl(s, [p_s](std::size_t) { return p_s; }, true, options);
}

AmplificationTrace run(const PhaseSpectrum& s, const ScalingSchedule& schedule,
                       const RunOptions& options) {
  return run_impl(s, [&schedule](std::size_t k) { return schedule.at_step(k); }, false, options);
}

double grover_reference(std::uint64_t total, std::uint64_t marked, std::int64_t k) {
  if (marked < 1 || marked >= total) throw InvalidInput("need 1 <= marked < total");
  const double theta =
      std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(total)));
  const double s = std::sin(static_cast<double>(2 * k + 1) * theta);
  return s * s;
}

PhaseSpectrum grover_spectrum(std::uint64_t total, std::uint64_t marked) {
  if (marked < 1 || marked >= total) throw InvalidInput("need 1 <= marked < total");
  return PhaseSpectrum({{0.0, total - marked}, {std::numbers::pi, marked}}, ScaleMode::phases);
}

PhaseSpectrum synth_two_marked(int n_qubits, double theta) {
  if (n_qubits < 2 || n_qubits > 62) throw InvalidInput("n_qubits must be in [2, 62]");
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw InvalidInput("theta must lie in [0, pi]");
  }
  const std::uint64_t half = (std::uint64_t{1} << (n_qubits - 1)) - 1;
  return PhaseSpectrum::with_coincident_values({{0.0, 1},
                                                {theta, half},
                                                {std::numbers::pi, 1},
                                                {kTwoPi - theta, half}},
                                               ScaleMode::phases);
}

int two_marked_window(int n_qubits) {
  if (n_qubits < 2 || n_qubits > 62) throw InvalidInput("n_qubits must be in [2, 62]");
  return 3 * default_step_cap(std::uint64_t{1} << n_qubits);
}

std::vector<TwoMarkedPoint> two_marked_curve(int n_qubits, int theta_points,
                                             std::optional<int> step_cap) {
  if (theta_points < 2) throw InvalidInput("need at least two theta points");
  RunOptions options;
  options.step_cap = step_cap.value_or(two_marked_window(n_qubits));
  options.stop = StopRule::full_window;
  options.record_steps = false;
  std::vector<TwoMarkedPoint> curve;
  for (int i = 0; i < theta_points; ++i) {
    // Last point pinned to pi exactly.
    const double theta =
        i + 1 == theta_points ? std::numbers::pi : std::numbers::pi * i / (theta_points - 1);
    const PhaseSpectrum s = synth_two_marked(n_qubits, theta);
    options.target = Target::at(two_marked::kAllOnes);
    const auto ones = run(s, 1.0, options);
    options.target = Target::at(two_marked::kAllZeros);
    const auto zeros = run(s, 1.0, options);
    curve.push_back({theta, ones.p_m, ones.s_m, zeros.p_m, zeros.s_m});
  }
  return curve;
}

}  // namespace gaa
