#pragma once

// Isoperimetric conditions μ(rep A) ≤ C·P(A): excess maxima, volume
// profiles, divergence certificates and the discrete 1-capacity.

#include "perivar/exhaustive.hpp"
#include "perivar/measure.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace perivar {

/// Test sets anywhere; μ(A⁺); full perimeter.
struct PlainVariant {};
/// μ(A¹) instead of μ(A⁺).
struct InteriorRepVariant {};
/// A ⊆ Ω; perimeter over the interior faces of Ω.
struct RelativeVariant {
  Region omega;
};
/// A disjoint from the ℓ∞ box of radius R about the grid centre: cells whose
/// centre lies within R of the centre along every axis.
struct AvoidBallVariant {
  int radius = 0;
};
/// Any A; perimeter over the interior faces of Ω only.
struct RelativePerimeterToBoundaryVariant {
  Region omega;
};
using ICVariant = std::variant<PlainVariant, InteriorRepVariant, RelativeVariant, AvoidBallVariant,
                               RelativePerimeterToBoundaryVariant>;

std::string variant_name(const ICVariant& variant);

/// Cells of the AvoidBall box.
CellSet central_box(const GridDomain& domain, int radius);

/// Energy C·P(A, variant) − μ(rep A) + penalty·|A| whose negated minimum is
/// the excess.
EnergySpec excess_spec(const MeasureData& mu, const Rational& c, const ICVariant& variant,
                       const Rational& penalty = 0);

struct ExcessResult {
  Rational excess;  ///< max over nonempty admissible A of μ(rep A) − C·P(A) − penalty·|A|
  CellSet witness;
  Method method = Method::MinCut;
};

/// Throws ExhaustiveCapacityExceeded when the energy is not submodular and
/// too large to enumerate.
ExcessResult strong_excess(const MeasureData& mu, const Rational& c, const ICVariant& variant = PlainVariant{},
                           const Rational& penalty = 0, std::size_t cap = kDefaultExhaustiveCap);

enum class ProfileMethod {
  ExhaustiveExact,
  EnvelopeExact,       ///< Lagrangian bounds meet
  EnvelopeUpperBound,  ///< φ(v) lies in [lower, upper]; `phi` holds the upper bound
};
std::string to_string(ProfileMethod method);

struct ProfileEntry {
  std::size_t v = 0;
  Rational phi;
  Rational phi_lower;
  ProfileMethod method = ProfileMethod::ExhaustiveExact;
  CellSet witness;  ///< attains phi_lower
};

struct ICProfile {
  std::vector<ProfileEntry> entries;  ///< v = 1..v_max
};

/// φ(v) = max over nonempty admissible A with |A| ≤ v of the excess.
ICProfile small_volume_profile(const MeasureData& mu, const Rational& c, const ICVariant& variant,
                               std::size_t v_max, const Rational& penalty = 0,
                               std::size_t cap = kDefaultExhaustiveCap);

/// Flux through one face: `lower` is σ·e_axis just below it, `upper` just
/// above. A grid-boundary face has the exterior side too.
struct FaceFlux {
  FaceId face = 0;
  Rational lower;
  Rational upper;
};

struct DivergenceCertificate {
  Rational bound;
  std::vector<FaceFlux> flux;              ///< every face, by id
  std::vector<Rational> cell_residual;     ///< div σ − μ on each cell
  std::vector<Rational> face_residual;     ///< (upper − lower) − μ on each face
};

struct Infeasible {
  CellSet witness;
  Rational excess;  ///< μ(A⁺) − C·P(A) at the witness
};

struct DivergenceResult {
  std::optional<DivergenceCertificate> certificate;
  std::optional<Infeasible> infeasible;
  bool feasible() const { return certificate.has_value(); }
};

/// Max-flow feasibility of div σ = μ with |σ| ≤ C. Flux leaving the grid is
/// absorbed by the exterior.
DivergenceResult divergence_certificate(const MeasureData& mu, const Rational& c);

/// Exact check of bounds and residuals; returns false on the first failure.
bool verify_certificate(const DivergenceCertificate& cert, const MeasureData& mu);

struct CapacityResult {
  Rational value;
  CellSet witness;
  std::size_t nodes_explored = 0;
};

/// min P(A) over A whose cells contain `cells` and whose closure faces
/// contain `faces`. Branch and bound over constrained min-cuts.
CapacityResult capacity(const FaceSet& faces, const CellSet& cells);

struct SingularSumReport {
  ICProfile first;
  ICProfile second;
  ICProfile sum;
  std::vector<std::size_t> flagged;  ///< budgets where φ_sum > max(φ₁,φ₂) + max(min(φ₁,φ₂), 0)
};

/// Throws std::invalid_argument unless the two measures are mutually singular.
SingularSumReport singular_sum_check(const MeasureData& first, const MeasureData& second, const Rational& c,
                                     std::size_t v_max, std::size_t cap = kDefaultExhaustiveCap);

}  // namespace perivar
