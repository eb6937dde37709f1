#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "gaa/error.hpp"
#include "gaa/spectrum.hpp"

#include "generators.hpp"

using gaa::PhaseSpectrum;
using gaa::ScaleMode;

TEST_CASE("spectrum invariants are enforced") {
  CHECK_THROWS_AS(PhaseSpectrum({}, ScaleMode::weights), gaa::InvalidInput);
  CHECK_THROWS_AS(PhaseSpectrum({{1.0, 0}}, ScaleMode::weights), gaa::InvalidInput);
  CHECK_THROWS_AS(PhaseSpectrum({{2.0, 1}, {1.0, 1}}, ScaleMode::weights), gaa::InvalidInput);
  CHECK_THROWS_AS(PhaseSpectrum({{1.0, 1}, {1.0, 1}}, ScaleMode::weights), gaa::InvalidInput);
  CHECK_THROWS_AS(PhaseSpectrum({{7.0, 1}}, ScaleMode::phases), gaa::InvalidInput);
  CHECK_NOTHROW(PhaseSpectrum::with_coincident_values({{1.0, 1}, {1.0, 1}}, ScaleMode::phases));
  const PhaseSpectrum s({{1.0, 3}, {4.0, 5}}, ScaleMode::weights);
  CHECK(s.total() == 8);
  CHECK(s.min_value() == 1.0);
  CHECK(s.max_value() == 4.0);
}

TEST_CASE("phase grid is exclusive of 2pi") {
  CHECK(gaa::phase_grid_point(0, 700) == 0.0);
  CHECK(gaa::phase_grid_point(350, 700) == doctest::Approx(std::numbers::pi));
  CHECK(gaa::phase_grid_point(699, 700) < gaa::kTwoPi);
}

TEST_CASE("weighted moments by direct summation") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto s = gen::random_weight_spectrum(rng);
    double n = 0.0;
    double sum = 0.0;
    for (const auto& c : s.classes()) {
      n += static_cast<double>(c.population);
      sum += c.value * static_cast<double>(c.population);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& c : s.classes()) var += (c.value - mean) * (c.value - mean) * static_cast<double>(c.population);
    CHECK(gaa::weighted_mean(s) == doctest::Approx(mean));
    CHECK(gaa::weighted_stddev(s) == doctest::Approx(std::sqrt(var / n)));
  }
}

TEST_CASE("rescale maps the span onto the full circle") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto s = gen::random_weight_spectrum(rng);
    const auto r = gaa::rescale_full_range(s);
    CHECK(r.p_s == doctest::Approx(gaa::kTwoPi / (s.max_value() - s.min_value())));
    CHECK(r.spectrum.mode() == ScaleMode::phases);
    CHECK(r.spectrum.min_value() == 0.0);
    CHECK(r.spectrum.max_value() == doctest::Approx(gaa::kTwoPi));
    CHECK(r.spectrum.total() == s.total());
    const auto st = gaa::stats(s);
    CHECK(st.sigma_prime == doctest::Approx(st.sigma * r.p_s));
    CHECK(st.pop_min == s[0].population);
  }
  CHECK_THROWS_AS(gaa::rescale_full_range(PhaseSpectrum({{3.0, 5}}, ScaleMode::weights)), gaa::InvalidInput);
}

TEST_CASE("long tail keeps every grid point") {
  for (double sigma : {0.0, 0.2, 0.5, 1.0}) {
    const auto s = gaa::synth_long_tail(sigma, 700, 60'000'000);
    CHECK(s.size() == 700);
    CHECK(s.mode() == ScaleMode::phases);
    for (const auto& c : s.classes()) CHECK(c.population >= 1);
    CHECK(static_cast<double>(s.total()) == doctest::Approx(60'000'000.0).epsilon(1e-6));
  }
  const auto delta = gaa::synth_long_tail(0.0, 700, 60'000'000);
  CHECK(delta.total() == 60'000'000);
  CHECK(delta[350].population == 60'000'000 - 699);
  CHECK(delta[0].population == 1);
}

TEST_CASE("long tail lowest class becomes shared as sigma grows") {
  CHECK(gaa::stats(gaa::synth_long_tail(0.5, 700, 60'000'000)).pop_min == 1);
  CHECK(gaa::stats(gaa::synth_long_tail(0.9, 700, 60'000'000)).pop_min > 1);
}

TEST_CASE("short tail drops empty grid points") {
  const auto delta = gaa::synth_short_tail(0.0, 700, 60'000'000);
  CHECK(delta.size() == 1);
  CHECK(delta.total() == 60'000'000);
  for (double sigma : {0.1, 0.3, 0.6}) {
    const auto s = gaa::synth_short_tail(sigma, 700, 60'000'000);
    CHECK(s.size() < 700);
    CHECK(s.min_value() > 0.0);
    CHECK(s.max_value() < gaa::kTwoPi);
    CHECK(static_cast<double>(s.total()) == doctest::Approx(60'000'000.0).epsilon(1e-6));
  }
}

TEST_CASE("short tail sigma prime plateaus after rescaling") {
  // Truncated tails always end near the same number of standard deviations
  // out, so the rescaled width barely moves with sigma.
  for (int i = 1; i <= 12; ++i) {
    const double sigma = 0.05 * i;
    const auto st = gaa::stats(gaa::synth_short_tail(sigma, 700, 60'000'000));
    CAPTURE(sigma);
    CHECK(st.sigma_prime > 0.55);
    CHECK(st.sigma_prime < 0.65);
  }
}

TEST_CASE("synthetic spectra reject bad parameters") {
  CHECK_THROWS_AS(gaa::synth_long_tail(-0.1, 700, 1000), gaa::InvalidInput);
  CHECK_THROWS_AS(gaa::synth_long_tail(0.1, 1, 1000), gaa::InvalidInput);
  CHECK_THROWS_AS(gaa::synth_long_tail(0.1, 700, 10), gaa::InvalidInput);
  CHECK_THROWS_AS(gaa::synth_short_tail(std::nan(""), 700, 1000), gaa::InvalidInput);
}
