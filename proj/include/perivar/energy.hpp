#pragma once

// Pairwise pseudo-Boolean form of P(A, ·) + μ₊(A¹) − μ₋(A⁺).

#include "perivar/grid.hpp"
#include "perivar/measure.hpp"
#include "perivar/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

namespace perivar {

/// Cells outside `free` are frozen to 0; perimeter over every face.
struct FullSpace {
  Region free;
};
/// Cells outside Ω are frozen to A₀; perimeter over the closure faces of Ω.
struct Dirichlet {
  CellSet boundary_values;
  Region omega;
};
/// Cells outside Ω are frozen to 0; perimeter over the interior faces of Ω.
struct Relative {
  Region omega;
};
using AssemblyMode = std::variant<FullSpace, Dirichlet, Relative>;

/// Thrown when μ± charges cells or faces outside the closure of Ω in
/// Dirichlet mode.
struct SupportViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct FrozenMismatch : std::invalid_argument {
  FrozenMismatch() : std::invalid_argument("set disagrees with the frozen cell assignment") {}
};

/// Raw coefficient form shared by assembly and the enumeration oracle:
///
///   E(A) = w_p·#{f ∈ perimeter_faces separating A} + Σ_{f ∈ A¹} face_and[f]
///        + Σ_{f ∈ A⁺} face_or[f] + Σ_{c ∈ A} cell[c]
///
/// with frozen cells fixed by `state` (-1 free, 0 or 1 frozen).
struct EnergySpec {
  explicit EnergySpec(GridDomain domain);

  GridDomain domain;
  std::vector<std::int8_t> state;
  FaceSet perimeter_faces;
  Rational perimeter_weight{1};
  std::map<FaceId, Rational> face_and;
  std::map<FaceId, Rational> face_or;
  std::map<CellId, Rational> cell;

  std::size_t free_count() const;
  bool admits(const CellSet& a) const;
};

EnergySpec make_spec(const SignedPair& pair, const AssemblyMode& mode,
                     const Rational& perimeter_weight = 1);

/// Direct evaluation of the coefficient form (no folding).
Rational evaluate_spec(const EnergySpec& spec, const CellSet& a);

/// Direct formula via perimeter() and the mass functions:
/// perimeter + mass_on_interior(μ₊) − mass_on_closure(μ₋).
Rational functional_value(const SignedPair& pair, const AssemblyMode& mode, const CellSet& a,
                          const Rational& perimeter_weight = 1);

/// Pairwise term between two free cells; table indexed [x_u*2 + x_v].
struct PairTerm {
  std::size_t u = 0;
  std::size_t v = 0;
  FaceId face = 0;
  std::array<Rational, 4> table;
  Rational perimeter_weight;
  Rational w_plus;   // coefficient on [x_u ∧ x_v]
  Rational w_minus;  // negated coefficient on [x_u ∨ x_v]
};

class BinaryEnergy {
 public:
  const GridDomain& domain() const { return domain_; }
  /// Free cells, one variable each.
  const std::vector<CellId>& variables() const { return variables_; }
  /// -1 when free, otherwise the frozen value.
  std::int8_t frozen_value(CellId cell) const { return state_[cell]; }
  std::ptrdiff_t variable_of(CellId cell) const { return var_of_cell_[cell]; }
  const std::vector<std::array<Rational, 2>>& unary() const { return unary_; }
  const std::vector<PairTerm>& pairs() const { return pairs_; }
  const Rational& constant() const { return constant_; }

  /// Exact energy; throws FrozenMismatch.
  Rational evaluate(const CellSet& a) const;

  /// Same energy plus λ·|A| (frozen-1 cells go into the constant).
  BinaryEnergy with_volume_term(const Rational& lambda) const;

  /// Cell set with the frozen cells and the given variable assignment.
  CellSet to_cells(const std::vector<std::uint8_t>& assignment) const;

 private:
  friend BinaryEnergy build_energy(const EnergySpec& spec);
  explicit BinaryEnergy(GridDomain domain) : domain_(std::move(domain)) {}

  GridDomain domain_;
  std::vector<CellId> variables_;
  std::vector<std::ptrdiff_t> var_of_cell_;
  std::vector<std::int8_t> state_;
  std::vector<std::array<Rational, 2>> unary_;
  std::vector<PairTerm> pairs_;
  Rational constant_{0};
};

/// Folds grid-boundary and frozen-neighbour faces into unary terms and the
/// constant.
BinaryEnergy build_energy(const EnergySpec& spec);

BinaryEnergy assemble(const SignedPair& pair, const AssemblyMode& mode,
                      const Rational& perimeter_weight = 1);

inline Rational evaluate(const BinaryEnergy& energy, const CellSet& a) { return energy.evaluate(a); }

struct FaceViolation {
  FaceId face = 0;
  Rational w_plus;
  Rational w_minus;
  Rational perimeter_weight;
  Rational margin;  // E01 + E10 − E00 − E11, negative here
};

struct SubmodularityReport {
  bool submodular = true;
  std::vector<FaceViolation> violations;
};

SubmodularityReport check_submodular(const BinaryEnergy& energy);

struct NonSubmodular : std::runtime_error {
  explicit NonSubmodular(SubmodularityReport r)
      : std::runtime_error("energy is not submodular"), report(std::move(r)) {}
  SubmodularityReport report;
};

}  // namespace perivar
