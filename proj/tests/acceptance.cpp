// Acceptance suite: one PASS/FAIL line per criterion, at the stated
// tolerances. The exit status reports whether every criterion could be
// evaluated; a criterion that evaluates to FAIL is printed, not hidden.
// Pass --strict to turn any FAIL into a nonzero exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gaa/circuitcheck.hpp"
#include "gaa/engine.hpp"
#include "gaa/graphs.hpp"
#include "gaa/rng.hpp"
#include "gaa/search.hpp"
#include "gaa/spectrum.hpp"
#include "gaa/tsp.hpp"

#include "oracles.hpp"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
auto timed(double& secs, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  secs = seconds_since(t0);
  return r;
}

// 1. Grover baseline.
Outcome grover_baseline() {
  constexpr std::uint64_t total = 60'466'176;
  double secs = 0.0;
  const auto trace = timed(secs, [] {
    gaa::RunOptions o;
    o.target = gaa::Target::at(1);
    return gaa::run(gaa::grover_spectrum(total), 1.0, o);
  });
  double worst = 0.0;
  for (const auto& st : trace.steps) {
    worst = std::max(worst, std::abs(st.prob_min_state - gaa::grover_reference(total, 1, st.step)));
  }
  const bool ok = std::abs(trace.s_m - 6083) <= 1 && trace.p_m > 0.99999 && worst <= 1e-9 && secs < 5.0;
  return {ok, fmt("S_M=%d (want 6083+-1) P_M=%.9f per-step dev=%.2e time=%.2fs", trace.s_m, trace.p_m,
                  worst, secs)};
}

// 2. Long tail at sigma 0.
Outcome long_tail_delta() {
  double secs = 0.0;
  const auto trace = timed(secs, [] { return gaa::run(gaa::synth_long_tail(0.0, 700, 60'000'000), 1.0); });
  const bool ok = trace.p_m >= 0.99 && trace.p_m <= 1.0 && trace.s_m >= 6050 && trace.s_m <= 6130 &&
                  secs < 10.0;
  return {ok, fmt("P_M=%.5f S_M=%d time=%.2fs", trace.p_m, trace.s_m, secs)};
}

// 3. Long-tail curve shape and where the lowest class stops being unique.
Outcome long_tail_curve() {
  std::vector<double> p_m;
  std::vector<int> s_m;
  for (int i = 0; i <= 6; ++i) {
    const auto t = gaa::run(gaa::synth_long_tail(0.1 * i, 700, 60'000'000), 1.0);
    p_m.push_back(t.p_m);
    s_m.push_back(t.s_m);
  }
  bool shape = true;
  for (std::size_t i = 1; i < p_m.size(); ++i) {
    shape = shape && p_m[i] <= p_m[i - 1] + 0.005 && s_m[i] >= s_m[i - 1] - 2;
  }
  double cutoff = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double sigma = 0.01 * i;
    if (gaa::stats(gaa::synth_long_tail(sigma, 700, 60'000'000)).pop_min > 1) {
      cutoff = sigma;
      break;
    }
  }
  const bool ok = shape && cutoff >= 0.55 && cutoff <= 0.75;
  std::string curve;
  for (std::size_t i = 0; i < p_m.size(); ++i) curve += fmt(" %.4f/%d", p_m[i], s_m[i]);
  return {ok, fmt("P_M/S_M over sigma 0..0.6:%s; pop_min>1 first at sigma=%.2f", curve.c_str(), cutoff)};
}

// 4. Short tail at sigma 0, rescaled.
Outcome short_tail_delta() {
  const auto s = gaa::synth_short_tail(0.0, 700, 60'000'000);
  const auto st = gaa::stats(s);
  if (s.size() < 2) {
    return {false, fmt("sigma=0 leaves %zu class (all %llu states on one phase); sigma'=%.3f; nothing to "
                       "rescale or amplify",
                       s.size(), static_cast<unsigned long long>(s.total()), st.sigma_prime)};
  }
  const auto r = gaa::rescale_full_range(s);
  const auto t = gaa::run(r.spectrum, 1.0);
  const bool ok = t.p_m >= 0.88 && t.p_m <= 0.94 && st.sigma_prime >= 0.50 && st.sigma_prime <= 0.65;
  return {ok, fmt("P_M=%.4f sigma'=%.4f", t.p_m, st.sigma_prime)};
}

std::string short_tail_context() {
  std::string out;
  for (double sigma : {0.1, 0.3, 0.6}) {
    const auto s = gaa::synth_short_tail(sigma, 700, 60'000'000);
    const auto r = gaa::rescale_full_range(s);
    const auto t = gaa::run(r.spectrum, 1.0);
    out += fmt(" sigma=%.1f: classes=%zu sigma'=%.3f P_M=%.4f (x2 with the coincident 2pi state %.4f);", sigma,
               s.size(), gaa::stats(s).sigma_prime, t.p_m, 2.0 * t.p_m);
  }
  return out;
}

// 5. Two-marked oracle curve.
Outcome two_marked() {
  constexpr int n = 20;
  double secs = 0.0;
  const auto curve = timed(secs, [] { return gaa::two_marked_curve(n, 25); });
  double worst = 0.0;
  for (const auto& p : curve) worst = std::max(worst, std::abs(p.p_m_ones - 0.5 * (std::cos(p.theta) + 1.0)));
  // Grover peak for one marked state out of 2^n over the same window.
  const std::uint64_t total = std::uint64_t{1} << n;
  double grover = 0.0;
  for (int k = 1; k <= gaa::two_marked_window(n); ++k) grover = std::max(grover, gaa::grover_reference(total, 1, k));
  const double end0 = std::abs(curve.front().p_m_ones - grover);
  const double end_pi = std::abs(curve.back().p_m_zeros - grover);
  const bool ok = worst <= 0.02 && end0 <= 1e-6 && end_pi <= 1e-6 && secs < 30.0;
  return {ok, fmt("max |P_M - (cos+1)/2|=%.4f; endpoint dev theta=0: %.2e theta=pi: %.2e; time=%.2fs", worst,
                  end0, end_pi, secs)};
}

// 6. Class compression is exact.
Outcome class_collapse() {
  double worst = 0.0;
  int graphs = 0;
  for (int i = 0; i < 50; ++i) {
    const bool two = i < 25;
    const int n = two ? 2 : 4;
    const int l = two ? 2 + i % 7 : 2 + i % 3;
    const auto g = gaa::generate_graph(std::vector<int>(static_cast<std::size_t>(l), n), 100,
                                       gaa::mix_seed(6, static_cast<std::uint64_t>(i)));
    const auto s = gaa::enumerate_spectrum(g);
    const double p_s = s.size() > 1 ? gaa::full_range_scale(s) : 0.01;
    worst = std::max(worst, oracle::flat_vs_engine(g, p_s, 2 * gaa::default_step_cap(s.total())));
    ++graphs;
  }
  return {worst <= 1e-10, fmt("%d graphs, max per-step probability gap %.2e", graphs, worst)};
}

// 7. Gate-level oracle and its inverse.
Outcome circuit_correctness() {
  double phase = 0.0;
  double inverse = 0.0;
  for (int l : {3, 4, 5}) {
    for (int i = 0; i < 20; ++i) {
      const auto g = gaa::generate_graph(std::vector<int>(static_cast<std::size_t>(l), 2), 100,
                                         gaa::mix_seed(7, static_cast<std::uint64_t>(100 * l + i)));
      const double p_s = 0.05;
      phase = std::max(phase, gaa::verify_oracle(g, p_s));
      const auto c = gaa::build_up_circuit(g, p_s);
      const auto start = gaa::QubitState::uniform(c.n_qubits);
      const auto back = gaa::apply_circuit(gaa::apply_circuit(start, c), c.inverse());
      for (std::size_t k = 0; k < back.amplitudes().size(); ++k) {
        inverse = std::max(inverse, std::abs(back.amplitudes()[k] - start.amplitudes()[k]));
      }
    }
  }
  return {phase < 1e-10 && inverse <= 1e-12,
          fmt("60 graphs, max phase error %.2e, max inverse round-trip error %.2e", phase, inverse)};
}

// 8. Classical solver against brute force.
Outcome classical_baseline() {
  int mismatches = 0;
  int bad_queries = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 4;
    const int l = 2 + (i / 4) % 5;
    const auto g = gaa::generate_graph(std::vector<int>(static_cast<std::size_t>(l), n), 100,
                                       gaa::mix_seed(8, static_cast<std::uint64_t>(i)));
    std::int64_t best = INT64_MAX;
    for (const auto& p : oracle::all_paths(g)) best = std::min(best, oracle::walk_weight(g, p));
    const auto r = gaa::classical_solve(g, gaa::Objective::minimize);
    if (r.best_weight != best || oracle::walk_weight(g, r.best_path) != best) ++mismatches;
    if (r.queries != static_cast<std::uint64_t>(n * n * (l - 1))) ++bad_queries;
  }
  return {mismatches == 0 && bad_queries == 0,
          fmt("100 graphs, %d weight mismatches, %d query-count mismatches", mismatches, bad_queries)};
}

// 9. Sweep structure on one N=6, L=10 instance.
Outcome sweep_structure() {
  const auto g = gaa::generate_graph(std::vector<int>(10, 6), 100, 1);
  double enum_secs = 0.0;
  const auto s = timed(enum_secs, [&] { return gaa::enumerate_spectrum(g); });
  const double p0 = gaa::full_range_scale(s);
  const gaa::TargetTag tags[] = {gaa::TargetTag::min, gaa::TargetTag::second_min};
  double sweep_secs = 0.0;
  const auto sweep = timed(sweep_secs, [&] { return gaa::sweep_ps(s, 0.5 * p0, 1.5 * p0, 1001, tags); });
  const auto a = sweep.best(gaa::TargetTag::min);
  const auto b = sweep.best(gaa::TargetTag::second_min);
  const double rel = std::abs(a.p_s - p0) / p0;
  const bool ok = a.p_m >= 0.5 && b.p_s > a.p_s && rel <= 0.2 && enum_secs < 60.0 && sweep_secs < 600.0;
  return {ok, fmt("min peak P_M=%.4f at p_s=%.7f; second-min peak P_M=%.4f at p_s=%.7f; full-range p_s=%.7f "
                  "(offset %.1f%%); enumeration %.2fs, sweep %.1fs",
                  a.p_m, a.p_s, b.p_m, b.p_s, p0, 100.0 * rel, enum_secs, sweep_secs)};
}

// 10. Stepwise never loses to the best constant p_s.
Outcome stepwise_dominance() {
  int worse = 0;
  int instances = 0;
  std::string where;
  struct Family {
    int n, l;
    std::int64_t r;
  };
  for (const Family f : {Family{30, 4, 200}, Family{6, 6, 100}}) {
    gaa::BatchConfig c;
    c.n = f.n;
    c.l = f.l;
    c.r_weight = f.r;
    c.trials = 10;
    c.seed = 1;
    c.strategies = {true, true, false};
    const auto report = gaa::batch_study(c);
    for (const auto& t : report.trials) {
      ++instances;
      if (t.stepwise->p_m < t.single->p_m) {
        ++worse;
        where += fmt(" N=%d L=%d trial %d: stepwise %.4f < single %.4f;", f.n, f.l, t.trial, t.stepwise->p_m,
                     t.single->p_m);
      }
    }
  }
  return {worse == 0, fmt("%d instances, stepwise below single-optimal on %d%s", instances, worse, where.c_str())};
}

// 11. Blind p_s.
Outcome blind_ps() {
  gaa::BatchConfig c;
  c.trials = 20;
  c.strategies = {false, true, true};
  const auto report = gaa::batch_study(c);
  double blind = 0.0;
  double single = 0.0;
  for (const auto& s : report.summaries) {
    if (s.name == "average") blind = s.mean_p_m;
    if (s.name == "single") single = s.mean_p_m;
  }
  return {blind >= 0.10 && blind <= 0.35,
          fmt("20 trials, average p_s=%.7f, mean P_M at average p_s=%.5f (single-optimal mean %.4f)",
              report.average_p_s, blind, single)};
}

// 12. TSP trend in n.
Outcome tsp_trend() {
  std::vector<double> sigma_prime;
  std::vector<double> p_m;
  std::string detail;
  double secs9 = 0.0;
  for (int n : {7, 8, 9}) {
    gaa::BatchConfig c;
    c.family = gaa::InstanceFamily::tsp;
    c.n = n;
    c.trials = 10;
    c.strategies = {false, true, false};
    double secs = 0.0;
    const auto report = timed(secs, [&] { return gaa::batch_study(c); });
    if (n == 9) secs9 = secs;
    sigma_prime.push_back(report.mean_sigma_prime);
    p_m.push_back(report.summaries.front().mean_p_m);
    detail += fmt(" n=%d: sigma'=%.4f P_M=%.4f (%.1fs);", n, sigma_prime.back(), p_m.back(), secs);
  }
  const bool ok = sigma_prime[0] > sigma_prime[1] && sigma_prime[1] > sigma_prime[2] && p_m[0] < p_m[1] &&
                  p_m[1] < p_m[2] && secs9 <= 900.0;
  return {ok, detail};
}

// 13. Mixed-radix codec bijection.
Outcome codec_bijection() {
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  for (int n = 2; n <= 8; ++n) {
    std::set<std::vector<int>> seen;
    for (std::uint64_t k = 0; k < gaa::factorial(n); ++k) {
      const auto p = gaa::decode_index(n, k);
      auto sorted = p.order;
      std::sort(sorted.begin(), sorted.end());
      bool perm = sorted.size() == static_cast<std::size_t>(n);
      for (int j = 0; perm && j < n; ++j) perm = sorted[static_cast<std::size_t>(j)] == j;
      if (!perm || gaa::encode_path(p) != k || !seen.insert(p.order).second) ++failures;
      ++checked;
    }
  }
  return {failures == 0, fmt("%llu indices over n=2..8 (40320 at n=8), %llu failures",
                             static_cast<unsigned long long>(checked), static_cast<unsigned long long>(failures))};
}

// 14. Dice example.
Outcome dice() {
  const double v = gaa::success_within(5.0 / 6.0, 4);
  return {std::abs(v - 0.9992284) <= 1e-7, fmt("P_succ=%.9f", v)};
}

}  // namespace

int main(int argc, char** argv) {
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, grover_baseline},     {2, long_tail_delta},     {3, long_tail_curve},    {4, short_tail_delta},
      {5, two_marked},          {6, class_collapse},      {7, circuit_correctness}, {8, classical_baseline},
      {9, sweep_structure},     {10, stepwise_dominance}, {11, blind_ps},          {12, tsp_trend},
      {13, codec_bijection},    {14, dice},
  };
  int failed = 0;
  int errors = 0;
  for (const auto& [id, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto r = fn();
      if (!r.pass) ++failed;
      std::printf("criterion %2d: %s  %s  [%.1fs]\n", id, r.pass ? "PASS" : "FAIL", r.detail.c_str(),
                  seconds_since(t0));
    } catch (const std::exception& e) {
      ++errors;
      ++failed;
      std::printf("criterion %2d: FAIL  error: %s\n", id, e.what());
    }
    if (id == 1) {
      gaa::RunOptions o;
      o.target = gaa::Target::at(1);
      const auto t = gaa::run(gaa::grover_spectrum(60'000'000), 1.0, o);
      std::printf("  info: total 60,000,000 gives S_M=%d; continuous optimum pi/(4 asin(1/sqrt(total))) - 1/2 "
                  "= %.2f for 60,466,176\n",
                  t.s_m, std::numbers::pi / (4.0 * std::asin(1.0 / std::sqrt(60'466'176.0))) - 0.5);
    }
    if (id == 4) std::printf("  info:%s\n", short_tail_context().c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu criteria, %zu PASS, %d FAIL, %d evaluation errors\n", criteria.size(),
              criteria.size() - static_cast<std::size_t>(failed), failed, errors);
  if (errors > 0) return 2;
  return strict && failed > 0 ? 1 : 0;
}
