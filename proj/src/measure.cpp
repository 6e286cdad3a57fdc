#include "perivar/measure.hpp"

#include <stdexcept>

namespace perivar {

MeasureData::MeasureData(GridDomain domain) : domain_(std::move(domain)) {}

void MeasureData::add_cell(CellId cell, const Rational& weight) {
  if (weight < 0) throw std::invalid_argument("measure weights must be nonnegative");
  if (cell >= domain_.cell_count()) throw std::out_of_range("cell index outside the grid");
  if (weight == 0) return;
  cells_[cell] += weight;
}

void MeasureData::add_face(FaceId face, const Rational& weight) {
  if (weight < 0) throw std::invalid_argument("measure weights must be nonnegative");
  if (face >= domain_.face_count()) throw std::out_of_range("face index outside the grid");
  if (weight == 0) return;
  faces_[face] += weight;
}

Rational MeasureData::cell_weight(CellId cell) const {
  auto it = cells_.find(cell);
  return it == cells_.end() ? Rational(0) : it->second;
}

Rational MeasureData::face_weight(FaceId face) const {
  auto it = faces_.find(face);
  return it == faces_.end() ? Rational(0) : it->second;
}

Rational MeasureData::total_mass() const {
  Rational total = 0;
  for (const auto& [c, w] : cells_) total += w;
  for (const auto& [f, w] : faces_) total += w;
  return total;
}

bool MeasureData::operator==(const MeasureData& other) const {
  return domain_ == other.domain_ && cells_ == other.cells_ && faces_ == other.faces_;
}

SignedPair::SignedPair(MeasureData p, MeasureData m) : plus(std::move(p)), minus(std::move(m)) {
  if (!(plus.domain() == minus.domain())) throw DomainMismatch();
}

SignedPair SignedPair::minus_only(MeasureData minus) {
  MeasureData plus(minus.domain());
  return SignedPair(std::move(plus), std::move(minus));
}

SignedPair SignedPair::zero(const GridDomain& domain) {
  return SignedPair(MeasureData(domain), MeasureData(domain));
}

namespace {

void require_same(const MeasureData& mu, const CellSet& a) {
  if (!(mu.domain() == a.domain())) throw DomainMismatch();
}

}  // namespace

Rational mass_on_closure(const MeasureData& mu, const CellSet& a) {
  require_same(mu, a);
  Rational total = 0;
  for (const auto& [c, w] : mu.cell_weights()) {
    if (a.contains(c)) total += w;
  }
  const auto& dom = a.domain();
  for (const auto& [f, w] : mu.face_weights()) {
    const auto& cells = dom.face_cells(f);
    if ((cells[0] != kExterior && a.contains(cells[0])) ||
        (cells[1] != kExterior && a.contains(cells[1]))) {
      total += w;
    }
  }
  return total;
}

Rational mass_on_interior(const MeasureData& mu, const CellSet& a) {
  require_same(mu, a);
  Rational total = 0;
  for (const auto& [c, w] : mu.cell_weights()) {
    if (a.contains(c)) total += w;
  }
  const auto& dom = a.domain();
  for (const auto& [f, w] : mu.face_weights()) {
    const auto& cells = dom.face_cells(f);
    if (cells[0] != kExterior && cells[1] != kExterior && a.contains(cells[0]) &&
        a.contains(cells[1])) {
      total += w;
    }
  }
  return total;
}

MeasureData hyperplane_measure(const GridDomain& domain, int axis, int slot, const Rational& weight) {
  if (axis < 0 || axis >= domain.dimension()) throw std::out_of_range("axis out of range");
  if (slot < 0 || slot > domain.dims()[axis]) throw std::out_of_range("hyperplane slot out of range");
  MeasureData mu(domain);
  for (FaceId f = 0; f < domain.face_count(); ++f) {
    const FaceRef ref = domain.face(f);
    if (ref.axis == axis && ref.slot() == slot) mu.add_face(f, weight);
  }
  return mu;
}

MeasureData boundary_measure(const CellSet& e, const Rational& theta) {
  if (theta < 0) throw std::invalid_argument("theta must be nonnegative");
  MeasureData mu(e.domain());
  for (FaceId f : boundary_faces(e).faces()) mu.add_face(f, theta);
  return mu;
}

MeasureData sum(const MeasureData& a, const MeasureData& b) {
  if (!(a.domain() == b.domain())) throw DomainMismatch();
  MeasureData out = a;
  for (const auto& [c, w] : b.cell_weights()) out.add_cell(c, w);
  for (const auto& [f, w] : b.face_weights()) out.add_face(f, w);
  return out;
}

MeasureData scale(const MeasureData& mu, const Rational& factor) {
  if (factor < 0) throw std::invalid_argument("scale factor must be nonnegative");
  MeasureData out(mu.domain());
  for (const auto& [c, w] : mu.cell_weights()) out.add_cell(c, w * factor);
  for (const auto& [f, w] : mu.face_weights()) out.add_face(f, w * factor);
  return out;
}

MeasureData restrict(const MeasureData& mu, const CellSet& cells) {
  require_same(mu, cells);
  MeasureData out(mu.domain());
  for (const auto& [c, w] : mu.cell_weights()) {
    if (cells.contains(c)) out.add_cell(c, w);
  }
  const FaceSet closure = closure_faces(cells);
  for (const auto& [f, w] : mu.face_weights()) {
    if (closure.contains(f)) out.add_face(f, w);
  }
  return out;
}

MeasureData restrict(const MeasureData& mu, const FaceSet& faces) {
  if (!(mu.domain() == faces.domain())) throw DomainMismatch();
  MeasureData out(mu.domain());
  for (const auto& [f, w] : mu.face_weights()) {
    if (faces.contains(f)) out.add_face(f, w);
  }
  return out;
}

bool are_mutually_singular(const MeasureData& a, const MeasureData& b) {
  if (!(a.domain() == b.domain())) throw DomainMismatch();
  for (const auto& [c, w] : a.cell_weights()) {
    if (b.cell_weights().count(c)) return false;
  }
  for (const auto& [f, w] : a.face_weights()) {
    if (b.face_weights().count(f)) return false;
  }
  return true;
}

}  // namespace perivar
