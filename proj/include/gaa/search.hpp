#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaa/engine.hpp"
#include "gaa/spectrum.hpp"

namespace gaa {

enum class TargetTag { min, second_min, max };

Target to_target(TargetTag tag);
std::string to_string(TargetTag tag);
TargetTag parse_target_tag(const std::string& text);

struct SweepRow {
  double p_s = 0.0;
  double p_m = 0.0;
  int s_m = 0;
  TargetTag target = TargetTag::min;
};

struct SweepResult {
  std::vector<SweepRow> grid;  // sorted by p_s, then target

  /// Row with the highest p_m for the target; the smallest p_s wins ties.
  SweepRow best(TargetTag target) const;
  std::vector<SweepRow> curve(TargetTag target) const;
};

struct SweepOptions {
  bool refine = true;
  unsigned threads = 0;  // 0: hardware concurrency
  std::optional<int> step_cap;
};

/// Runs the engine to rebound at `points` evenly spaced p_s in [lo, hi] for
/// each target, then repeats with `points` samples inside the bracket around
/// each target's best coarse point.
SweepResult sweep_ps(const PhaseSpectrum& s, double lo, double hi, int points,
                     std::span<const TargetTag> targets, const SweepOptions& options = {});

/// 2pi / (w_max - w_min) for a weight-valued spectrum.
double full_range_scale(const PhaseSpectrum& s);

struct StepwiseOptions {
  double window = 0.2;
  int resolution = 41;
  bool refine = true;
  std::optional<int> step_cap;
  Target target = Target::lowest();
};

struct StepwiseResult {
  ScalingSchedule schedule;
  AmplificationTrace trace;
};

/// Per-step p_s choice: at each step the candidate maximizing the distance
/// between the target amplitude and the mean amplitude right after the
/// oracle is applied, searched over +-window around the previous choice
/// (the first step centres on the full-range scale). Stops at the first
/// probability decrease.
StepwiseResult optimize_stepwise(const PhaseSpectrum& s, const StepwiseOptions& options = {});

/// 1 - (1 - p_m)^r.
double success_within(double p_m, std::int64_t rounds);

/// Success probability within the classical budget n^2 (l - 1):
/// r = floor(budget / q_steps) attempts.
double p_succ(double p_m, std::int64_t q_steps, std::int64_t n, std::int64_t l);

enum class InstanceFamily { layered, tsp };

struct Strategies {
  bool stepwise = true;
  bool single = true;
  bool average = true;
};

struct BatchConfig {
  InstanceFamily family = InstanceFamily::layered;
  int n = 6;  // nodes per layer, or cities
  int l = 10;
  std::int64_t r_weight = 100;
  int trials = 20;
  std::uint64_t seed = 1;
  Strategies strategies;
  int sweep_points = 401;
  double sweep_lo = 0.5;  // multiples of the full-range scale
  double sweep_hi = 1.5;
  StepwiseOptions stepwise;
  unsigned threads = 0;
};

struct StrategyOutcome {
  double p_m = 0.0;
  int s_m = 0;
  double p_s = 0.0;  // constant strategies only
  double p_succ = 0.0;
};

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t total = 0;
  std::size_t n_classes = 0;
  double w_min = 0.0;
  double w_max = 0.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;
  double full_range_p_s = 0.0;
  std::optional<StrategyOutcome> stepwise;
  std::optional<StrategyOutcome> single;
  std::optional<StrategyOutcome> average;
};

struct StrategySummary {
  std::string name;
  double mean_p_m = 0.0;
  double min_p_m = 0.0;
  double max_p_m = 0.0;
  double lo90_p_m = 0.0;  // lower end of the top-90% interval
  double fraction_below_half = 0.0;
  double mean_s_m = 0.0;
  double mean_p_succ = 0.0;
};

struct StudyReport {
  BatchConfig config;
  std::vector<TrialRow> trials;
  double average_p_s = 0.0;  // mean single-optimal p_s over the batch
  double mean_sigma_prime = 0.0;
  std::vector<StrategySummary> summaries;
};

PhaseSpectrum build_instance_spectrum(const BatchConfig& config, std::uint64_t trial_seed);
std::uint64_t trial_seed(std::uint64_t study_seed, int trial);

StudyReport batch_study(const BatchConfig& config);

}  // namespace gaa
