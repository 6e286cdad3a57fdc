#include "perivar/grid.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace perivar {

GridDomain::GridDomain(std::vector<int> dims) {
  if (dims.empty() || dims.size() > 3) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  }
  for (int n : dims) {
    if (n <= 0) throw std::invalid_argument("grid extents must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->dims = std::move(dims);
  const int d = static_cast<int>(impl->dims.size());
  impl->cell_count = 1;
  for (int n : impl->dims) impl->cell_count *= static_cast<std::size_t>(n);

  std::size_t offset = 0;
  for (int axis = 0; axis < d; ++axis) {
    impl->face_offset.push_back(offset);
    std::size_t count = 1;
    for (int b = 0; b < d; ++b) {
      count *= static_cast<std::size_t>(impl->dims[b] + (b == axis ? 1 : 0));
    }
    offset += count;
  }
  impl->face_cells.resize(offset);

  // Face arrays use axis 0 as the fastest-varying coordinate, like cells.
  for (int axis = 0; axis < d; ++axis) {
    std::vector<int> ext(impl->dims);
    ext[axis] += 1;
    const std::size_t base = impl->face_offset[axis];
    const std::size_t count =
        (axis + 1 < d ? impl->face_offset[axis + 1] : offset) - base;
    for (std::size_t k = 0; k < count; ++k) {
      Coord c{};
      std::size_t rem = k;
      for (int b = 0; b < d; ++b) {
        c[b] = static_cast<int>(rem % static_cast<std::size_t>(ext[b]));
        rem /= static_cast<std::size_t>(ext[b]);
      }
      auto index_of = [&](const Coord& cc) {
        std::size_t idx = 0, stride = 1;
        for (int b = 0; b < d; ++b) {
          idx += static_cast<std::size_t>(cc[b]) * stride;
          stride *= static_cast<std::size_t>(impl->dims[b]);
        }
        return idx;
      };
      const int slot = c[axis];
      std::array<CellId, 2> cells{kExterior, kExterior};
      if (slot >= 1) {
        Coord lo = c;
        lo[axis] = slot - 1;
        cells[0] = index_of(lo);
      }
      if (slot < impl->dims[axis]) cells[1] = index_of(c);
      impl->face_cells[base + k] = cells;
    }
  }
  impl_ = std::move(impl);
}

CellId GridDomain::cell_index(std::span<const int> coord) const {
  if (!contains_coord(coord)) throw std::out_of_range("cell coordinate outside the grid");
  std::size_t idx = 0, stride = 1;
  for (int b = 0; b < dimension(); ++b) {
    idx += static_cast<std::size_t>(coord[b]) * stride;
    stride *= static_cast<std::size_t>(impl_->dims[b]);
  }
  return idx;
}

bool GridDomain::contains_coord(std::span<const int> coord) const {
  if (static_cast<int>(coord.size()) != dimension()) return false;
  for (int b = 0; b < dimension(); ++b) {
    if (coord[b] < 0 || coord[b] >= impl_->dims[b]) return false;
  }
  return true;
}

Coord GridDomain::cell_coord(CellId cell) const {
  Coord c{};
  for (int b = 0; b < dimension(); ++b) {
    c[b] = static_cast<int>(cell % static_cast<std::size_t>(impl_->dims[b]));
    cell /= static_cast<std::size_t>(impl_->dims[b]);
  }
  return c;
}

FaceId GridDomain::face_index(int axis, std::span<const int> coord) const {
  const int d = dimension();
  if (axis < 0 || axis >= d || static_cast<int>(coord.size()) != d) {
    throw std::out_of_range("face axis or coordinate rank out of range");
  }
  std::size_t idx = 0, stride = 1;
  for (int b = 0; b < d; ++b) {
    const int ext = impl_->dims[b] + (b == axis ? 1 : 0);
    if (coord[b] < 0 || coord[b] >= ext) throw std::out_of_range("face coordinate outside the grid");
    idx += static_cast<std::size_t>(coord[b]) * stride;
    stride *= static_cast<std::size_t>(ext);
  }
  return impl_->face_offset[axis] + idx;
}

FaceRef GridDomain::face(FaceId face) const {
  const int d = dimension();
  int axis = d - 1;
  while (axis > 0 && face < impl_->face_offset[axis]) --axis;
  std::size_t rem = face - impl_->face_offset[axis];
  FaceRef ref;
  ref.axis = axis;
  for (int b = 0; b < d; ++b) {
    const auto ext = static_cast<std::size_t>(impl_->dims[b] + (b == axis ? 1 : 0));
    ref.coord[b] = static_cast<int>(rem % ext);
    rem /= ext;
  }
  return ref;
}

std::vector<FaceId> GridDomain::cell_faces(CellId cell) const {
  const Coord c = cell_coord(cell);
  std::vector<FaceId> out;
  out.reserve(2 * static_cast<std::size_t>(dimension()));
  for (int axis = 0; axis < dimension(); ++axis) {
    Coord fc = c;
    out.push_back(face_index(axis, std::span<const int>(fc.data(), dimension())));
    fc[axis] += 1;
    out.push_back(face_index(axis, std::span<const int>(fc.data(), dimension())));
  }
  return out;
}

CellId GridDomain::neighbor_across(CellId cell, FaceId face) const {
  const auto& c = face_cells(face);
  if (c[0] == cell) return c[1];
  if (c[1] == cell) return c[0];
  throw std::invalid_argument("face is not incident to cell");
}

bool GridDomain::operator==(const GridDomain& other) const {
  return impl_ == other.impl_ || impl_->dims == other.impl_->dims;
}

// ---------------------------------------------------------------- FaceSet

FaceSet::FaceSet(GridDomain domain) : domain_(std::move(domain)), bits_(domain_.face_count(), 0) {}

FaceSet FaceSet::all(GridDomain domain) {
  FaceSet s(std::move(domain));
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  return s;
}

std::size_t FaceSet::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<FaceId> FaceSet::faces() const {
  std::vector<FaceId> out;
  for (FaceId f = 0; f < bits_.size(); ++f) {
    if (bits_[f]) out.push_back(f);
  }
  return out;
}

FaceSet FaceSet::operator-(const FaceSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  FaceSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] && !other.bits_[i];
  return out;
}

FaceSet FaceSet::operator|(const FaceSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  FaceSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] || other.bits_[i];
  return out;
}

FaceSet FaceSet::operator&(const FaceSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  FaceSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] && other.bits_[i];
  return out;
}

bool FaceSet::is_subset_of(const FaceSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

bool FaceSet::operator==(const FaceSet& other) const {
  return domain_ == other.domain_ && bits_ == other.bits_;
}

// ---------------------------------------------------------------- CellSet

CellSet::CellSet(GridDomain domain) : domain_(std::move(domain)), bits_(domain_.cell_count(), 0) {}

CellSet CellSet::full(GridDomain domain) {
  CellSet s(std::move(domain));
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  return s;
}

CellSet CellSet::from_cells(GridDomain domain, std::span<const CellId> cells) {
  CellSet s(std::move(domain));
  for (CellId c : cells) {
    if (c >= s.bits_.size()) throw std::out_of_range("cell index outside the grid");
    s.bits_[c] = 1;
  }
  return s;
}

std::size_t CellSet::volume() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::vector<CellId> CellSet::cells() const {
  std::vector<CellId> out;
  for (CellId c = 0; c < bits_.size(); ++c) {
    if (bits_[c]) out.push_back(c);
  }
  return out;
}

CellSet CellSet::operator|(const CellSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  CellSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] || other.bits_[i];
  return out;
}

CellSet CellSet::operator&(const CellSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  CellSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] && other.bits_[i];
  return out;
}

CellSet CellSet::operator-(const CellSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  CellSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] && !other.bits_[i];
  return out;
}

CellSet CellSet::complement() const {
  CellSet out(domain_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = !bits_[i];
  return out;
}

bool CellSet::is_subset_of(const CellSet& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch();
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

bool CellSet::operator==(const CellSet& other) const {
  return domain_ == other.domain_ && bits_ == other.bits_;
}

// ---------------------------------------------------------------- Region

Region::Region(CellSet mask)
    : mask_(std::move(mask)), closure_(perivar::closure_faces(mask_)), interior_(perivar::interior_faces(mask_)) {}

Region Region::all(GridDomain domain) { return Region(CellSet::full(std::move(domain))); }

// ---------------------------------------------------------------- operations

FaceSet closure_faces(const CellSet& a) {
  const auto& dom = a.domain();
  FaceSet out(dom);
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    const auto& c = dom.face_cells(f);
    if ((c[0] != kExterior && a.contains(c[0])) || (c[1] != kExterior && a.contains(c[1]))) {
      out.insert(f);
    }
  }
  return out;
}

FaceSet interior_faces(const CellSet& a) {
  const auto& dom = a.domain();
  FaceSet out(dom);
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    const auto& c = dom.face_cells(f);
    if (c[0] != kExterior && c[1] != kExterior && a.contains(c[0]) && a.contains(c[1])) {
      out.insert(f);
    }
  }
  return out;
}

FaceSet boundary_faces(const CellSet& a) { return closure_faces(a) - interior_faces(a); }

namespace {

bool separates(const CellSet& a, const std::array<CellId, 2>& c) {
  const bool lo = c[0] != kExterior && a.contains(c[0]);
  const bool hi = c[1] != kExterior && a.contains(c[1]);
  return lo != hi;
}

}  // namespace

Rational perimeter(const CellSet& a, const Region& region, PerimeterMode mode,
                   const Rational& face_weight) {
  if (!(a.domain() == region.domain())) throw DomainMismatch();
  const FaceSet& faces =
      mode == PerimeterMode::Closure ? region.closure_faces() : region.interior_faces();
  const auto& dom = a.domain();
  long count = 0;
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    if (faces.contains(f) && separates(a, dom.face_cells(f))) ++count;
  }
  return face_weight * count;
}

Rational perimeter(const CellSet& a) {
  const auto& dom = a.domain();
  long count = 0;
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    if (separates(a, dom.face_cells(f))) ++count;
  }
  return Rational(count);
}

std::size_t volume(const CellSet& a, const Region& region) {
  if (!(a.domain() == region.domain())) throw DomainMismatch();
  return (a & region.cells()).volume();
}

CellSet translate(const CellSet& a, std::span<const int> offset) {
  const auto& dom = a.domain();
  if (static_cast<int>(offset.size()) != dom.dimension()) {
    throw std::invalid_argument("offset rank does not match the grid dimension");
  }
  CellSet out(dom);
  for (CellId c : a.cells()) {
    Coord p = dom.cell_coord(c);
    for (int b = 0; b < dom.dimension(); ++b) p[b] += offset[b];
    std::span<const int> ps(p.data(), static_cast<std::size_t>(dom.dimension()));
    if (!dom.contains_coord(ps)) throw std::out_of_range("translated set leaves the grid");
    out.insert(dom.cell_index(ps));
  }
  return out;
}

}  // namespace perivar
