#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gaa/engine.hpp"
#include "gaa/graphs.hpp"

namespace gaa {

/// Dense statevector. Qubit 0 is the most significant bit of the basis
/// index, so a path's first layer reads leftmost in |...>.
class QubitState {
 public:
  explicit QubitState(int n_qubits);  // |0...0>
  static QubitState uniform(int n_qubits);

  int qubit_count() const { return n_qubits_; }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  std::span<Amplitude> amplitudes() { return amplitudes_; }
  double norm() const;
  double probability(std::uint64_t basis) const { return std::norm(amplitudes_[basis]); }

 private:
  int n_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// Multi-controlled phase: multiplies every basis state whose qubits match
/// `pattern` (qubit -> required bit) by exp(i phase). Open and closed
/// controls are both expressed through the required bit.
struct ControlledPhaseGate {
  std::map<int, int> pattern;
  double phase = 0.0;
};

/// Cost-oracle circuit, one gate per edge. Layer pairs alternate between two
/// tranches whose gates act on disjoint qubits; only depth accounting uses
/// the split, since every gate is diagonal.
struct PhaseCircuit {
  int n_qubits = 0;
  std::vector<std::vector<ControlledPhaseGate>> tranches;

  std::size_t gate_count() const;
  std::vector<ControlledPhaseGate> gates() const;
  /// Every phase negated: the inverse circuit.
  PhaseCircuit inverse() const;
};

/// Qubits for one layer of size n (a power of two).
int qubits_per_layer(int layer_size);
int qubit_count(const LayeredGraph& g);

std::uint64_t encode_path_to_basis(const LayeredGraph& g, const Path& p);
Path decode_basis(const LayeredGraph& g, std::uint64_t basis);

PhaseCircuit build_up_circuit(const LayeredGraph& g, double p_s);

void apply_gate(QubitState& st, const ControlledPhaseGate& gate);
QubitState apply_gates(QubitState st, std::span<const ControlledPhaseGate> gates);
QubitState apply_circuit(QubitState st, const PhaseCircuit& circuit);

/// Largest angular deviation, over all paths, between the circuit phase
/// and p_s * path_weight, after removing the global phase of path 0.
double verify_oracle(const LayeredGraph& g, double p_s);

inline constexpr int kFlatQubitCap = 20;

/// Full-statevector oracle + diffusion loop, tracking the lexicographically
/// first minimum-weight path. Same stop rule and trace layout as run().
AmplificationTrace flat_amplify(const LayeredGraph& g, double p_s,
                                std::optional<int> step_cap = std::nullopt);
AmplificationTrace flat_amplify(const LayeredGraph& g, const ScalingSchedule& schedule,
                                std::optional<int> step_cap = std::nullopt);

/// Step-at-a-time flat simulator, for comparing every basis probability
/// against the class-compressed engine.
class FlatSimulator {
 public:
  explicit FlatSimulator(const LayeredGraph& g);

  /// One oracle (built from the gate circuit) followed by the diffusion.
  /// Returns the mean amplitude that was reflected about.
  Amplitude step(double p_s);
  const QubitState& state() const { return state_; }

 private:
  LayeredGraph graph_;
  QubitState state_;
  double cached_p_s_ = 0.0;
  std::vector<Amplitude> diagonal_;
};

}  // namespace gaa
