#include "gaa/circuitcheck.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "gaa/error.hpp"

namespace gaa {

QubitState::QubitState(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) throw InvalidInput("qubit count must lie in [1, 30]");
  amplitudes_.assign(std::size_t{1} << n_qubits, Amplitude(0.0, 0.0));
  amplitudes_[0] = 1.0;
}

QubitState QubitState::uniform(int n_qubits) {
  QubitState st(n_qubits);
  const double a = 1.0 / std::sqrt(static_cast<double>(st.amplitudes_.size()));
  std::fill(st.amplitudes_.begin(), st.amplitudes_.end(), Amplitude(a, 0.0));
  return st;
}

double QubitState::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return sum;
}

std::size_t PhaseCircuit::gate_count() const {
  std::size_t n = 0;
  for (const auto& t : tranches) n += t.size();
  return n;
}

std::vector<ControlledPhaseGate> PhaseCircuit::gates() const {
  std::vector<ControlledPhaseGate> out;
  for (const auto& t : tranches) out.insert(out.end(), t.begin(), t.end());
  return out;
}

PhaseCircuit PhaseCircuit::inverse() const {
  PhaseCircuit inv = *this;
  for (auto& t : inv.tranches) {
    for (auto& gate : t) gate.phase = -gate.phase;
  }
  return inv;
}

int qubits_per_layer(int layer_size) {
  if (layer_size < 2 || !std::has_single_bit(static_cast<unsigned>(layer_size))) {
    throw InvalidInput("layer size " + std::to_string(layer_size) +
                       " is not a power of two >= 2");
  }
  return std::countr_zero(static_cast<unsigned>(layer_size));
}

int qubit_count(const LayeredGraph& g) {
  int total = 0;
  for (int n : g.layer_sizes()) total += qubits_per_layer(n);
  return total;
}

namespace {

// First qubit of every layer's group.
std::vector<int> group_offsets(const LayeredGraph& g) {
  std::vector<int> offsets;
  int q = 0;
  for (int n : g.layer_sizes()) {
    offsets.push_back(q);
    q += qubits_per_layer(n);
  }
  return offsets;
}

}  // namespace

std::uint64_t encode_path_to_basis(const LayeredGraph& g, const Path& p) {
  if (p.nodes.size() != g.layer_count()) throw InvalidInput("path length differs from layer count");
  std::uint64_t basis = 0;
  for (std::size_t l = 0; l < p.nodes.size(); ++l) {
    const int width = qubits_per_layer(g.layer_size(l));
    if (p.nodes[l] < 0 || p.nodes[l] >= g.layer_size(l)) throw InvalidInput("node out of range");
    basis = (basis << width) | static_cast<std::uint64_t>(p.nodes[l]);
  }
  return basis;
}

Path decode_basis(const LayeredGraph& g, std::uint64_t basis) {
  Path p;
  p.nodes.resize(g.layer_count());
  for (std::size_t l = g.layer_count(); l-- > 0;) {
    const int width = qubits_per_layer(g.layer_size(l));
    p.nodes[l] = static_cast<int>(basis & ((std::uint64_t{1} << width) - 1));
    basis >>= width;
  }
  return p;
}

PhaseCircuit build_up_circuit(const LayeredGraph& g, double p_s) {
  const auto offsets = group_offsets(g);
  PhaseCircuit circuit;
  circuit.n_qubits = qubit_count(g);
  circuit.tranches.resize(2);
  for (std::size_t l = 0; l + 1 < g.layer_count(); ++l) {
    const int wa = qubits_per_layer(g.layer_size(l));
    const int wb = qubits_per_layer(g.layer_size(l + 1));
    for (int a = 0; a < g.layer_size(l); ++a) {
      for (int b = 0; b < g.layer_size(l + 1); ++b) {
        ControlledPhaseGate gate;
        for (int bit = 0; bit < wa; ++bit) {
          gate.pattern[offsets[l] + bit] = (a >> (wa - 1 - bit)) & 1;
        }
        for (int bit = 0; bit < wb; ++bit) {
          gate.pattern[offsets[l + 1] + bit] = (b >> (wb - 1 - bit)) & 1;
        }
        gate.phase = p_s * static_cast<double>(g.weight(l, a, b));
        circuit.tranches[l % 2].push_back(std::move(gate));
      }
    }
  }
  return circuit;
}

void apply_gate(QubitState& st, const ControlledPhaseGate& gate) {
  if (gate.pattern.empty()) throw InvalidInput("gate without controls");
  const int n = st.qubit_count();
  std::uint64_t mask = 0;
  std::uint64_t value = 0;
  for (const auto& [qubit, bit] : gate.pattern) {
    if (qubit < 0 || qubit >= n) throw InvalidInput("gate qubit out of range");
    const std::uint64_t position = std::uint64_t{1} << (n - 1 - qubit);
    mask |= position;
    if (bit) value |= position;
  }
  const Amplitude factor = std::polar(1.0, gate.phase);
  auto amps = st.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) == value) amps[i] *= factor;
  }
}

QubitState apply_gates(QubitState st, std::span<const ControlledPhaseGate> gates) {
  for (const auto& gate : gates) apply_gate(st, gate);
  return st;
}

QubitState apply_circuit(QubitState st, const PhaseCircuit& circuit) {
  if (circuit.n_qubits != st.qubit_count()) throw InvalidInput("circuit width mismatch");
  for (const auto& tranche : circuit.tranches) st = apply_gates(std::move(st), tranche);
  return st;
}

double verify_oracle(const LayeredGraph& g, double p_s) {
  const int n = qubit_count(g);
  const QubitState out = apply_circuit(QubitState::uniform(n), build_up_circuit(g, p_s));
  const auto amps = out.amplitudes();
  const double reference =
      std::arg(amps[0]) - p_s * static_cast<double>(path_weight(g, decode_basis(g, 0)));
  double worst = 0.0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const double expected = p_s * static_cast<double>(path_weight(g, decode_basis(g, i)));
    const double d = std::remainder(std::arg(amps[i]) - reference - expected, 2.0 * std::numbers::pi);
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

FlatSimulator::FlatSimulator(const LayeredGraph& g)
    : graph_(g), state_(QubitState::uniform(qubit_count(g))) {
  if (state_.qubit_count() > kFlatQubitCap) {
    throw CapExceeded("flat simulation limited to " + std::to_string(kFlatQubitCap) + " qubits");
  }
}

Amplitude FlatSimulator::step(double p_s) {
  if (diagonal_.empty() || p_s != cached_p_s_) {
    QubitState ones(state_.qubit_count());
    std::fill(ones.amplitudes().begin(), ones.amplitudes().end(), Amplitude(1.0, 0.0));
    ones = apply_circuit(std::move(ones), build_up_circuit(graph_, p_s));
    diagonal_.assign(ones.amplitudes().begin(), ones.amplitudes().end());
    cached_p_s_ = p_s;
  }
  auto amps = state_.amplitudes();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    amps[i] *= diagonal_[i];
    re += amps[i].real();
    im += amps[i].imag();
  }
  const auto size = static_cast<double>(amps.size());
  const Amplitude m(re / size, im / size);
  const Amplitude twice = 2.0 * m;
  for (auto& a : amps) a = twice - a;
  return m;
}

namespace {

template <typename ScaleAt>
AmplificationTrace flat_impl(const LayeredGraph& g, ScaleAt scale_at, std::optional<int> step_cap) {
  FlatSimulator sim(g);
  const auto size = std::uint64_t{1} << sim.state().qubit_count();
  const int cap = step_cap.value_or(default_step_cap(size));
  if (cap < 1) throw InvalidInput("step cap must be >= 1");

  const SolveResult best = classical_solve(g, Objective::minimize);
  const std::uint64_t target = encode_path_to_basis(g, best.best_path);
  std::vector<std::uint64_t> min_class;
  for (std::uint64_t i = 0; i < size; ++i) {
    if (path_weight(g, decode_basis(g, i)) == best.best_weight) min_class.push_back(i);
  }

  AmplificationTrace trace;
  trace.target_class = 0;
  trace.target_population = min_class.size();
  trace.p_m = -1.0;
  double previous = sim.state().probability(target);
  for (int k = 1; k <= cap; ++k) {
    const double p_s = scale_at(static_cast<std::size_t>(k));
    const Amplitude m = sim.step(p_s);
    const double prob = sim.state().probability(target);
    double class_prob = 0.0;
    for (auto i : min_class) class_prob += sim.state().probability(i);
    trace.steps.push_back({k, p_s, prob, class_prob, m});
    if (prob > trace.p_m) {
      trace.p_m = prob;
      trace.s_m = k;
    }
    const bool stationary = k == 1 && std::abs(prob - previous) <= 1e-12 * previous;
    if (prob < previous || stationary) {
      trace.terminated_by = Termination::rebound;
      return trace;
    }
    previous = prob;
  }
  trace.terminated_by = Termination::step_cap;
  return trace;
}

}  // namespace

AmplificationTrace flat_amplify(const LayeredGraph& g, double p_s, std::optional<int> step_cap) {
  return flat_impl(g, [p_s](std::size_t) { return p_s; }, step_cap);
}

AmplificationTrace flat_amplify(const LayeredGraph& g, const ScalingSchedule& schedule,
                                std::optional<int> step_cap) {
  return flat_impl(g, [&schedule](std::size_t k) { return schedule.at_step(k); }, step_cap);
}

}  // namespace gaa
