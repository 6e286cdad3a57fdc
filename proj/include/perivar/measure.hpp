#pragma once

#include "perivar/grid.hpp"
#include "perivar/rational.hpp"

#include <map>

namespace perivar {

/// Finitely supported nonnegative measure: an absolutely continuous part as
/// cell weights and an (n-1)-dimensional singular part as face weights. There
/// is no representation for mass on edges or vertices.
class MeasureData {
 public:
  explicit MeasureData(GridDomain domain);

  const GridDomain& domain() const { return domain_; }

  /// Adds to the existing weight. Negative weights throw std::invalid_argument.
  void add_cell(CellId cell, const Rational& weight);
  void add_face(FaceId face, const Rational& weight);

  Rational cell_weight(CellId cell) const;
  Rational face_weight(FaceId face) const;
  /// Positive entries only, ordered by id.
  const std::map<CellId, Rational>& cell_weights() const { return cells_; }
  const std::map<FaceId, Rational>& face_weights() const { return faces_; }

  Rational total_mass() const;
  bool is_zero() const { return cells_.empty() && faces_.empty(); }
  bool operator==(const MeasureData& other) const;

 private:
  GridDomain domain_;
  std::map<CellId, Rational> cells_;
  std::map<FaceId, Rational> faces_;
};

/// The data pair (μ₊, μ₋) of the functional.
struct SignedPair {
  SignedPair(MeasureData plus, MeasureData minus);
  static SignedPair minus_only(MeasureData minus);
  static SignedPair zero(const GridDomain& domain);

  const GridDomain& domain() const { return plus.domain(); }

  MeasureData plus;
  MeasureData minus;
};

/// μ(A⁺): cells of A plus faces touching A.
Rational mass_on_closure(const MeasureData& mu, const CellSet& a);
/// μ(A¹): cells of A plus faces with both incident cells in A.
Rational mass_on_interior(const MeasureData& mu, const CellSet& a);

/// `weight` on every face of the given axis and slot.
MeasureData hyperplane_measure(const GridDomain& domain, int axis, int slot, const Rational& weight);
/// θ on every boundary face of E.
MeasureData boundary_measure(const CellSet& e, const Rational& theta);

MeasureData sum(const MeasureData& a, const MeasureData& b);
MeasureData scale(const MeasureData& mu, const Rational& factor);
/// μ restricted to the closed cell set: its cells and the faces touching it.
MeasureData restrict(const MeasureData& mu, const CellSet& cells);
MeasureData restrict(const MeasureData& mu, const FaceSet& faces);
/// Disjoint supports.
bool are_mutually_singular(const MeasureData& a, const MeasureData& b);

}  // namespace perivar
