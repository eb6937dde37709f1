#include "gaa/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "gaa/error.hpp"
#include "gaa/graphs.hpp"
#include "gaa/rng.hpp"
#include "gaa/tsp.hpp"

namespace gaa {

Target to_target(TargetTag tag) {
  switch (tag) {
    case TargetTag::min: return Target::lowest();
    case TargetTag::second_min: return Target::second_lowest();
    case TargetTag::max: return Target::highest();
  }
  return Target::lowest();
}

std::string to_string(TargetTag tag) {
  switch (tag) {
    case TargetTag::min: return "min";
    case TargetTag::second_min: return "second_min";
    case TargetTag::max: return "max";
  }
  return "min";
}

TargetTag parse_target_tag(const std::string& text) {
  if (text == "min") return TargetTag::min;
  if (text == "second_min") return TargetTag::second_min;
  if (text == "max") return TargetTag::max;
  throw InvalidInput("unknown target '" + text + "' (expected min, second_min or max)");
}

namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// fn(i) for i in [0, n); work is claimed index by index so results land in
// fixed slots regardless of thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  }
  out.back() = hi;
  return out;
}

struct Job {
  double p_s;
  TargetTag target;
};

std::vector<SweepRow> run_jobs(const PhaseSpectrum& s, const std::vector<Job>& jobs,
                               const SweepOptions& options) {
  std::vector<SweepRow> rows(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
    RunOptions ro;
    ro.step_cap = options.step_cap;
    ro.target = to_target(jobs[i].target);
    ro.record_steps = false;
    const auto trace = run(s, jobs[i].p_s, ro);
    rows[i] = {jobs[i].p_s, trace.p_m, trace.s_m, jobs[i].target};
  });
  return rows;
}

std::size_t best_index(const std::vector<SweepRow>& rows) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].p_m > rows[best].p_m) best = i;
  }
  return best;
}

}  // namespace

SweepRow SweepResult::best(TargetTag target) const {
  const auto rows = curve(target);
  if (rows.empty()) throw InvalidInput("sweep holds no rows for target " + to_string(target));
  return rows[best_index(rows)];
}

std::vector<SweepRow> SweepResult::curve(TargetTag target) const {
  std::vector<SweepRow> out;
  for (const auto& r : grid) {
    if (r.target == target) out.push_back(r);
  }
  return out;
}

double full_range_scale(const PhaseSpectrum& s) {
  if (s.size() < 2) throw InvalidInput("full-range scale needs at least two classes");
  return kTwoPi / (s.max_value() - s.min_value());
}

SweepResult sweep_ps(const PhaseSpectrum& s, double lo, double hi, int points,
                     std::span<const TargetTag> targets, const SweepOptions& options) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InvalidInput("sweep range must satisfy 0 < lo < hi");
  }
  if (points < 2) throw InvalidInput("sweep needs at least two points");
  if (s.size() < 2) throw InvalidInput("sweep needs a spectrum with non-zero weight span");
  if (targets.empty()) throw InvalidInput("sweep needs at least one target");

  const auto coarse = linspace(lo, hi, points);
  std::vector<Job> jobs;
  for (double p : coarse) {
    for (auto t : targets) jobs.push_back({p, t});
  }
  SweepResult result;
  result.grid = run_jobs(s, jobs, options);

  if (options.refine && points >= 3) {
    std::vector<Job> fine;
    for (auto t : targets) {
      const auto rows = result.curve(t);
      const std::size_t b = best_index(rows);
      const double a = coarse[b == 0 ? 0 : b - 1];
      const double z = coarse[std::min(b + 1, coarse.size() - 1)];
      for (double p : linspace(a, z, points)) {
        if (std::binary_search(coarse.begin(), coarse.end(), p)) continue;
        fine.push_back({p, t});
      }
    }
    const auto extra = run_jobs(s, fine, options);
    result.grid.insert(result.grid.end(), extra.begin(), extra.end());
  }
  std::stable_sort(result.grid.begin(), result.grid.end(), [](const SweepRow& x, const SweepRow& y) {
    if (x.p_s != y.p_s) return x.p_s < y.p_s;
    return static_cast<int>(x.target) < static_cast<int>(y.target);
  });
  return result;
}

namespace {

// |mean after oracle - target amplitude after oracle| for `count` evenly
// spaced candidates first, first + h, ...; phase factors advance by
// recurrence instead of fresh sincos per candidate.
std::size_t best_candidate(const AmplitudeState& st, const PhaseSpectrum& s, std::size_t target,
                           double first, double h, int count, double& chosen) {
  const auto amps = st.amplitudes();
  const auto pops = st.populations();
  const auto n = static_cast<std::size_t>(count);
  std::vector<Amplitude> sum(n, Amplitude(0.0, 0.0));
  std::vector<Amplitude> target_amp(n);
  for (std::size_t c = 0; c < s.size(); ++c) {
    const double v = s[c].value;
    Amplitude z = amps[c] * std::polar(1.0, first * v);
    const Amplitude step = std::polar(1.0, h * v);
    const auto pop = static_cast<double>(pops[c]);
    for (std::size_t j = 0; j < n; ++j) {
      sum[j] += pop * z;
      if (c == target) target_amp[j] = z;
      z *= step;
    }
  }
  const auto total = static_cast<double>(st.total());
  std::size_t best = 0;
  double best_d = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = std::abs(sum[j] / total - target_amp[j]);
    if (d > best_d) {
      best_d = d;
      best = j;
    }
  }
  chosen = first + h * static_cast<double>(best);
  return best;
}

}  // namespace

StepwiseResult optimize_stepwise(const PhaseSpectrum& s, const StepwiseOptions& options) {
  if (!(options.window > 0.0) || options.window > 1.0) {
    throw InvalidInput("stepwise window must lie in (0, 1]");
  }
  if (options.resolution < 3) throw InvalidInput("stepwise resolution must be >= 3");
  const int cap = options.step_cap.value_or(default_step_cap(s.total()));
  if (cap < 1) throw InvalidInput("step cap must be >= 1");

  const std::size_t target = options.target.resolve(s);
  AmplitudeState st = init_uniform(s);
  double centre = full_range_scale(s);
  double previous = st.state_probability(target);

  std::vector<double> chosen;
  AmplificationTrace trace;
  trace.target_class = target;
  trace.target_population = s[target].population;
  trace.p_m = -1.0;
  std::vector<Amplitude> factors(s.size());

  for (int k = 1; k <= cap; ++k) {
    // window = 1 would offer p_s = 0, which no schedule may hold.
    const double lo = centre * std::max(1.0 - options.window, 1e-6);
    const double h = (centre * (1.0 + options.window) - lo) / (options.resolution - 1);
    double p = 0.0;
    best_candidate(st, s, target, lo, h, options.resolution, p);
    if (options.refine) {
      const double a = std::max(lo, p - h);
      const double z = std::min(centre * (1.0 + options.window), p + h);
      best_candidate(st, s, target, a, (z - a) / (options.resolution - 1), options.resolution, p);
    }
    chosen.push_back(p);

    for (std::size_t c = 0; c < s.size(); ++c) factors[c] = std::polar(1.0, p * s[c].value);
    st.rotate(factors);
    const Amplitude m = st.reflect_about_mean();
    const double prob = st.state_probability(target);
    trace.steps.push_back({k, p, prob, st.class_probability(target), m});
    if (prob > trace.p_m) {
      trace.p_m = prob;
      trace.s_m = k;
    }
    const bool stationary = k == 1 && std::abs(prob - previous) <= 1e-12 * previous;
    if (prob < previous || stationary) {
      trace.terminated_by = Termination::rebound;
      return {ScalingSchedule(std::move(chosen)), std::move(trace)};
    }
    previous = prob;
    centre = p;
  }
  trace.terminated_by = Termination::step_cap;
  return {ScalingSchedule(std::move(chosen)), std::move(trace)};
}

double success_within(double p_m, std::int64_t rounds) {
  if (p_m < 0.0 || p_m > 1.0) throw InvalidInput("probability outside [0, 1]");
  if (rounds < 0) throw InvalidInput("round count must be non-negative");
  return 1.0 - std::pow(1.0 - p_m, static_cast<double>(rounds));
}

double p_succ(double p_m, std::int64_t q_steps, std::int64_t n, std::int64_t l) {
  if (q_steps < 1) throw InvalidInput("step count must be >= 1");
  if (n < 1 || l < 2) throw InvalidInput("need n >= 1 and l >= 2");
  const std::int64_t budget = n * n * (l - 1);
  return success_within(p_m, budget / q_steps);
}

std::uint64_t trial_seed(std::uint64_t study_seed, int trial) {
  return mix_seed(study_seed, static_cast<std::uint64_t>(trial));
}

PhaseSpectrum build_instance_spectrum(const BatchConfig& config, std::uint64_t seed) {
  if (config.family == InstanceFamily::tsp) {
    return enumerate_tsp_spectrum(generate_tsp(config.n, config.r_weight, seed));
  }
  std::vector<int> sizes(static_cast<std::size_t>(config.l), config.n);
  return enumerate_spectrum(generate_graph(std::move(sizes), config.r_weight, seed));
}

namespace {

double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= xs.size()) return xs.back();
  return xs[i] + (pos - static_cast<double>(i)) * (xs[i + 1] - xs[i]);
}

StrategySummary summarize(const std::string& name, const std::vector<StrategyOutcome>& outs) {
  StrategySummary sum;
  sum.name = name;
  std::vector<double> pm;
  for (const auto& o : outs) pm.push_back(o.p_m);
  const auto n = static_cast<double>(outs.size());
  sum.mean_p_m = std::accumulate(pm.begin(), pm.end(), 0.0) / n;
  sum.min_p_m = *std::min_element(pm.begin(), pm.end());
  sum.max_p_m = *std::max_element(pm.begin(), pm.end());
  sum.lo90_p_m = quantile(pm, 0.1);
  sum.fraction_below_half =
      static_cast<double>(std::count_if(pm.begin(), pm.end(), [](double x) { return x < 0.5; })) / n;
  double s_m = 0.0;
  double ps = 0.0;
  for (const auto& o : outs) {
    s_m += o.s_m;
    ps += o.p_succ;
  }
  sum.mean_s_m = s_m / n;
  sum.mean_p_succ = ps / n;
  return sum;
}

}  // namespace

StudyReport batch_study(const BatchConfig& config) {
  if (config.trials < 1) throw InvalidInput("batch needs at least one trial");
  if (config.n < 2 || config.l < 2) throw InvalidInput("batch needs n >= 2 and l >= 2");
  const auto& st = config.strategies;
  if (!st.stepwise && !st.single && !st.average) throw InvalidInput("no strategy selected");
  const bool need_single = st.single || st.average;
  const auto budget_l = config.family == InstanceFamily::tsp ? config.n : config.l;

  StudyReport report;
  report.config = config;
  report.trials.resize(static_cast<std::size_t>(config.trials));
  std::vector<PhaseSpectrum> spectra;
  spectra.reserve(report.trials.size());

  SweepOptions sweep_options;
  sweep_options.threads = config.threads;
  const TargetTag min_tag[] = {TargetTag::min};

  for (int t = 0; t < config.trials; ++t) {
    auto& row = report.trials[static_cast<std::size_t>(t)];
    row.trial = t;
    row.seed = trial_seed(config.seed, t);
    spectra.push_back(build_instance_spectrum(config, row.seed));
    const auto& s = spectra.back();
    const auto info = stats(s);
    row.total = s.total();
    row.n_classes = s.size();
    row.w_min = s.min_value();
    row.w_max = s.max_value();
    row.sigma = info.sigma;
    row.sigma_prime = info.sigma_prime;
    row.full_range_p_s = full_range_scale(s);

    if (st.stepwise) {
      const auto r = optimize_stepwise(s, config.stepwise);
      row.stepwise = StrategyOutcome{r.trace.p_m, r.trace.s_m, 0.0,
                                     p_succ(r.trace.p_m, r.trace.s_m, config.n, budget_l)};
    }
    if (need_single) {
      const double p0 = row.full_range_p_s;
      const auto sweep = sweep_ps(s, config.sweep_lo * p0, config.sweep_hi * p0,
                                  config.sweep_points, min_tag, sweep_options);
      const auto best = sweep.best(TargetTag::min);
      row.single = StrategyOutcome{best.p_m, best.s_m, best.p_s,
                                   p_succ(best.p_m, best.s_m, config.n, budget_l)};
    }
  }

  double sp = 0.0;
  for (const auto& row : report.trials) sp += row.sigma_prime;
  report.mean_sigma_prime = sp / static_cast<double>(config.trials);

  if (need_single) {
    double sum = 0.0;
    for (const auto& row : report.trials) sum += row.single->p_s;
    report.average_p_s = sum / static_cast<double>(config.trials);
  }
  if (st.average) {
    parallel_for(report.trials.size(), config.threads, [&](std::size_t i) {
      RunOptions ro;
      ro.record_steps = false;
      const auto tr = run(spectra[i], report.average_p_s, ro);
      report.trials[i].average = StrategyOutcome{
          tr.p_m, tr.s_m, report.average_p_s, p_succ(tr.p_m, tr.s_m, config.n, budget_l)};
    });
  }

  auto collect = [&](auto member) {
    std::vector<StrategyOutcome> outs;
    for (const auto& row : report.trials) outs.push_back(*(row.*member));
    return outs;
  };
  if (st.stepwise) report.summaries.push_back(summarize("stepwise", collect(&TrialRow::stepwise)));
  if (st.single) report.summaries.push_back(summarize("single", collect(&TrialRow::single)));
  if (st.average) report.summaries.push_back(summarize("average", collect(&TrialRow::average)));
  return report;
}

}  // namespace gaa
