#include <cmath>
#include <random>
#include <set>

#include "doctest.h"

#include "gaa/circuitcheck.hpp"
#include "gaa/error.hpp"
#include "gaa/graphs.hpp"
#include "gaa/rng.hpp"
#include "gaa/search.hpp"

#include "oracles.hpp"

namespace {

gaa::LayeredGraph pow2_graph(int n, int l, std::uint64_t seed) {
  return gaa::generate_graph(std::vector<int>(static_cast<std::size_t>(l), n), 100, seed);
}

}  // namespace

TEST_CASE("qubit counts") {
  CHECK(gaa::qubits_per_layer(2) == 1);
  CHECK(gaa::qubits_per_layer(8) == 3);
  CHECK_THROWS_AS(gaa::qubits_per_layer(3), gaa::InvalidInput);
  CHECK(gaa::qubit_count(pow2_graph(4, 3, 1)) == 6);
}

TEST_CASE("basis codec covers every path once") {
  const auto g = pow2_graph(4, 3, 2);
  std::set<std::uint64_t> seen;
  for (const auto& p : oracle::all_paths(g)) {
    const auto b = gaa::encode_path_to_basis(g, p);
    CHECK(gaa::decode_basis(g, b) == p);
    seen.insert(b);
  }
  CHECK(seen.size() == 64);
  // First layer in the most significant bits.
  CHECK(gaa::encode_path_to_basis(g, {{1, 0, 0}}) == 16);
}

TEST_CASE("one gate per edge in two tranches") {
  const auto g = pow2_graph(2, 5, 3);
  const auto c = gaa::build_up_circuit(g, 0.1);
  CHECK(c.n_qubits == 5);
  CHECK(c.gate_count() == g.edge_count());
  CHECK(c.tranches.size() == 2);
  for (const auto& gate : c.gates()) CHECK(gate.pattern.size() == 2);
  const auto inv = c.inverse();
  const auto fwd = c.gates();
  const auto back = inv.gates();
  REQUIRE(fwd.size() == back.size());
  for (std::size_t k = 0; k < fwd.size(); ++k) CHECK(back[k].phase == -fwd[k].phase);
}

TEST_CASE("gate phases reproduce p_s times path weight") {
  for (int i = 0; i < 20; ++i) {
    const int n = i % 2 == 0 ? 2 : 4;
    const int l = 2 + i % 4;
    const auto g = pow2_graph(n, l, gaa::mix_seed(31, static_cast<std::uint64_t>(i)));
    CHECK(gaa::verify_oracle(g, 0.037) < 1e-10);
    const auto c = gaa::build_up_circuit(g, 0.037);
    const auto out = gaa::apply_circuit(gaa::QubitState::uniform(c.n_qubits), c);
    const double a = 1.0 / std::sqrt(static_cast<double>(g.path_count()));
    const auto p0 = oracle::all_paths(g).front();
    const auto ref = out.amplitudes()[gaa::encode_path_to_basis(g, p0)] /
                     std::polar(a, 0.037 * static_cast<double>(oracle::walk_weight(g, p0)));
    for (const auto& p : oracle::all_paths(g)) {
      const auto want = std::polar(a, 0.037 * static_cast<double>(oracle::walk_weight(g, p))) * ref;
      CHECK(std::abs(out.amplitudes()[gaa::encode_path_to_basis(g, p)] - want) < 1e-12);
    }
  }
}

TEST_CASE("gate application") {
  gaa::QubitState st = gaa::QubitState::uniform(2);
  gaa::apply_gate(st, {{{0, 1}, {1, 0}}, std::numbers::pi});
  CHECK(st.amplitudes()[2].real() == doctest::Approx(-0.5));
  CHECK(st.amplitudes()[0].real() == doctest::Approx(0.5));
  CHECK(st.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(gaa::apply_gate(st, {{{2, 1}}, 1.0}), gaa::InvalidInput);
  CHECK_THROWS_AS(gaa::apply_gate(st, {{}, 1.0}), gaa::InvalidInput);
}

TEST_CASE("flat simulation matches the compressed engine") {
  for (int i = 0; i < 12; ++i) {
    const auto g = pow2_graph(i < 6 ? 2 : 4, 2 + i % 3, gaa::mix_seed(32, static_cast<std::uint64_t>(i)));
    const auto s = gaa::enumerate_spectrum(g);
    if (s.size() < 2) continue;
    const double p = gaa::full_range_scale(s);
    CHECK(oracle::flat_vs_engine(g, p, 40) < 1e-12);
    const auto flat = gaa::flat_amplify(g, p);
    const auto packed = gaa::run(s, p);
    CHECK(flat.s_m == packed.s_m);
    CHECK(flat.p_m == doctest::Approx(packed.p_m).epsilon(1e-12));
  }
}

TEST_CASE("flat simulation is capped") {
  const auto g = pow2_graph(2, 21, 1);
  CHECK_THROWS_AS(gaa::flat_amplify(g, 0.1), gaa::CapExceeded);
}
