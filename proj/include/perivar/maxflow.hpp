#pragma once

#include "perivar/energy.hpp"
#include "perivar/grid.hpp"
#include "perivar/rational.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace perivar {

/// Directed network with exact integer capacities. Node 0 is the source,
/// node 1 the sink. Hard arcs stand for infinite capacity and are solved with
/// the sentinel `hard_capacity()`.
class FlowNetwork {
 public:
  using Node = std::size_t;
  static constexpr Node kSource = 0;
  static constexpr Node kSink = 1;

  struct Arc {
    Node from = 0;
    Node to = 0;
    Integer capacity;
    bool hard = false;
  };

  explicit FlowNetwork(std::size_t inner_nodes = 0) : node_count_(2 + inner_nodes) {}

  Node add_node() { return node_count_++; }
  std::size_t node_count() const { return node_count_; }

  /// Throws std::invalid_argument on self-loops, unknown nodes or negative
  /// capacity.
  std::size_t add_arc(Node from, Node to, const Integer& capacity);
  std::size_t add_hard_arc(Node from, Node to);

  const std::vector<Arc>& arcs() const { return arcs_; }
  /// 1 + sum of all finite capacities.
  Integer hard_capacity() const;

 private:
  std::size_t node_count_;
  std::vector<Arc> arcs_;
};

struct CutResult {
  Integer value;
  /// Nodes reachable from the source in the final residual graph: the
  /// inclusion-minimal minimum cut.
  std::vector<std::uint8_t> source_side;
  /// Nodes that cannot reach the sink: the inclusion-maximal minimum cut.
  std::vector<std::uint8_t> maximal_source_side;
  /// Flow per arc of the input network.
  std::vector<Integer> flow;
};

/// Dinic's algorithm, run in 64-bit arithmetic when the total capacity fits
/// and in GMP integers otherwise. Flow conservation, capacity bounds and
/// flow value == cut capacity are checked before returning (std::logic_error).
CutResult max_flow(const FlowNetwork& network);

/// Integer network whose cut values are `scale · energy − offset`.
struct EnergyNetwork {
  FlowNetwork network;
  Integer scale;
  Integer offset;
  std::vector<FlowNetwork::Node> var_node;
};

/// Throws NonSubmodular when some pair table violates
/// E01 + E10 >= E00 + E11.
EnergyNetwork build_energy_network(const BinaryEnergy& energy);

struct MinimizeResult {
  CellSet minimizer;          ///< inclusion-minimal minimizer
  CellSet maximal_minimizer;  ///< inclusion-maximal minimizer
  Rational value;
};

MinimizeResult minimize(const BinaryEnergy& energy);

struct NonemptyResult {
  CellSet minimizer;
  Rational value;
};

/// Minimum over sets containing at least one free cell. Falls back to one
/// forced solve per free cell (in parallel) when ∅ is the unique
/// unconstrained minimizer; ties go to the lowest cell.
NonemptyResult minimize_nonempty(const BinaryEnergy& energy);

/// One exposed point of the lower envelope min_A [base(A) + λ|A|].
struct EnvelopePoint {
  Rational lambda;  ///< start of the λ-interval on which `set` is optimal
  CellSet set;
  Rational base_value;
};

/// Returns an optimal set for base(A) + λ|A| together with base(set).
using LagrangianOracle = std::function<std::pair<CellSet, Rational>(const Rational& lambda)>;

/// Exact breakpoints of the concave envelope on [lo, hi], by recursive line
/// intersection. The first entry starts at `lo`; volumes strictly decrease.
std::vector<EnvelopePoint> lower_envelope(const LagrangianOracle& oracle, const Rational& lo,
                                          const Rational& hi);

struct SweepEntry {
  Rational lambda;
  CellSet minimizer;
  Rational value;  ///< energy + λ|minimizer| at `lambda`
};

/// Breakpoints of λ ↦ min_A [E(A) + λ|A|] on [lo, hi] with the canonical
/// minimizers, which are checked to be nested (shrinking as λ grows).
std::vector<SweepEntry> parametric_sweep(const BinaryEnergy& energy, const Rational& lo, const Rational& hi);

}  // namespace perivar
