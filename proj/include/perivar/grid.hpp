#pragma once

// Lattice domains: cells, faces, cell sets, regions and the discrete
// (crystalline) perimeter. Everything outside the grid is permanently empty.

#include "perivar/rational.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace perivar {

using CellId = std::size_t;
using FaceId = std::size_t;
using Coord = std::array<int, 3>;

/// Marks the missing neighbour of a grid-boundary face.
inline constexpr CellId kExterior = std::numeric_limits<CellId>::max();

struct DomainMismatch : std::invalid_argument {
  DomainMismatch() : std::invalid_argument("objects are bound to different grid domains") {}
};

/// A face is addressed by its normal axis, its slot along that axis
/// (0..dims[axis]) and the cell coordinates along the other axes.
/// `coord[axis] == slot`.
struct FaceRef {
  int axis = 0;
  Coord coord{};
  int slot() const { return coord[static_cast<std::size_t>(axis)]; }
  bool operator==(const FaceRef&) const = default;
};

/// d-dimensional box of unit cells, d in {1,2,3}. Cheap to copy (shared
/// immutable tables); two domains compare equal iff their extents do.
class GridDomain {
 public:
  explicit GridDomain(std::vector<int> dims);

  int dimension() const { return static_cast<int>(impl_->dims.size()); }
  const std::vector<int>& dims() const { return impl_->dims; }
  std::size_t cell_count() const { return impl_->cell_count; }
  std::size_t face_count() const { return impl_->face_cells.size(); }

  CellId cell_index(std::span<const int> coord) const;
  Coord cell_coord(CellId cell) const;
  bool contains_coord(std::span<const int> coord) const;

  /// `coord` has `dimension()` entries with coord[axis] the slot.
  FaceId face_index(int axis, std::span<const int> coord) const;
  FaceRef face(FaceId face) const;

  /// {lower, upper} incident cells along the face normal; a missing side is
  /// kExterior.
  const std::array<CellId, 2>& face_cells(FaceId face) const { return impl_->face_cells[face]; }
  bool is_grid_boundary(FaceId face) const {
    const auto& c = impl_->face_cells[face];
    return c[0] == kExterior || c[1] == kExterior;
  }
  /// The 2d faces of a cell, ordered axis-major, lower face first.
  std::vector<FaceId> cell_faces(CellId cell) const;
  /// Cell across `face` from `cell` (kExterior at the grid boundary).
  CellId neighbor_across(CellId cell, FaceId face) const;

  bool operator==(const GridDomain& other) const;

 private:
  struct Impl {
    std::vector<int> dims;
    std::size_t cell_count = 0;
    std::vector<std::size_t> face_offset;  // per axis
    std::vector<std::array<CellId, 2>> face_cells;
  };
  std::shared_ptr<const Impl> impl_;
};

/// Bit per face of one domain.
class FaceSet {
 public:
  explicit FaceSet(GridDomain domain);
  static FaceSet all(GridDomain domain);

  const GridDomain& domain() const { return domain_; }
  bool contains(FaceId f) const { return bits_[f] != 0; }
  void insert(FaceId f) { bits_[f] = 1; }
  void erase(FaceId f) { bits_[f] = 0; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<FaceId> faces() const;

  FaceSet operator-(const FaceSet& other) const;
  FaceSet operator|(const FaceSet& other) const;
  FaceSet operator&(const FaceSet& other) const;
  bool is_subset_of(const FaceSet& other) const;
  bool operator==(const FaceSet& other) const;

 private:
  GridDomain domain_;
  std::vector<std::uint8_t> bits_;
};

/// The discrete set A: bit per cell of one domain. Volume is the popcount.
class CellSet {
 public:
  explicit CellSet(GridDomain domain);
  static CellSet full(GridDomain domain);
  static CellSet from_cells(GridDomain domain, std::span<const CellId> cells);

  const GridDomain& domain() const { return domain_; }
  bool contains(CellId c) const { return bits_[c] != 0; }
  void insert(CellId c) { bits_[c] = 1; }
  void erase(CellId c) { bits_[c] = 0; }
  void assign(CellId c, bool value) { bits_[c] = value ? 1 : 0; }
  std::size_t volume() const;
  bool empty() const { return volume() == 0; }
  std::vector<CellId> cells() const;

  CellSet operator|(const CellSet& other) const;
  CellSet operator&(const CellSet& other) const;
  CellSet operator-(const CellSet& other) const;
  /// Within-grid complement.
  CellSet complement() const;
  bool is_subset_of(const CellSet& other) const;
  bool operator==(const CellSet& other) const;

 private:
  GridDomain domain_;
  std::vector<std::uint8_t> bits_;
};

/// Cell mask Ω with its closure faces (>= 1 incident cell in Ω) and interior
/// faces (2 incident cells, both in Ω).
class Region {
 public:
  explicit Region(CellSet mask);
  static Region all(GridDomain domain);

  const GridDomain& domain() const { return mask_.domain(); }
  const CellSet& cells() const { return mask_; }
  const FaceSet& closure_faces() const { return closure_; }
  const FaceSet& interior_faces() const { return interior_; }

 private:
  CellSet mask_;
  FaceSet closure_;
  FaceSet interior_;
};

enum class PerimeterMode {
  Closure,   ///< P(A, closure of Ω): faces touching Ω
  Interior,  ///< P(A, Ω): faces with both cells in Ω
};

/// A⁺: faces with at least one incident cell in A.
FaceSet closure_faces(const CellSet& a);
/// A¹: faces with both incident cells in A (grid-boundary faces never qualify).
FaceSet interior_faces(const CellSet& a);
/// ∂A = A⁺ \ A¹: faces whose two sides differ.
FaceSet boundary_faces(const CellSet& a);

/// Weighted count of faces of the region's face set (per mode) that separate A
/// from its complement.
Rational perimeter(const CellSet& a, const Region& region, PerimeterMode mode = PerimeterMode::Closure,
                   const Rational& face_weight = 1);
/// Full-space perimeter P(A).
Rational perimeter(const CellSet& a);

std::size_t volume(const CellSet& a, const Region& region);

/// Throws std::out_of_range when a translated cell leaves the grid.
CellSet translate(const CellSet& a, std::span<const int> offset);

}  // namespace perivar
