#pragma once

// Obstacle, Dirichlet and prescribed-volume problems.

#include "perivar/exhaustive.hpp"
#include "perivar/measure.hpp"

#include <optional>
#include <stdexcept>

namespace perivar {

/// Inner obstacle not contained in the outer one.
struct EmptyClass : std::invalid_argument {
  EmptyClass() : std::invalid_argument("inner obstacle is not contained in the outer obstacle") {}
};

enum class Exactness { Exact, EnvelopeBound };
std::string to_string(Exactness e);

/// Lagrangian bracket around a volume that is not exposed by the sweep.
struct VolumeCertificate {
  Rational lambda;          ///< breakpoint separating the two bracketing sets
  CellSet smaller;
  CellSet larger;
  Rational lower_bound;     ///< convex-envelope value at v
  Rational upper_bound;     ///< value of the repaired set
};

struct SolveResult {
  CellSet minimizer;
  Rational value;
  Exactness exactness = Exactness::Exact;
  Method method = Method::MinCut;
  std::optional<VolumeCertificate> certificate;
};

struct SolveOptions {
  Rational perimeter_weight{1};
  std::size_t exhaustive_cap = kDefaultExhaustiveCap;
};

/// min over I ⊆ A ⊆ O. Throws EmptyClass, or NonSubmodular when the energy
/// is not submodular and too large to enumerate.
SolveResult solve_obstacle(const CellSet& inner, const CellSet& outer, const SignedPair& pair,
                           const SolveOptions& options = {});

/// min over A agreeing with A₀ outside Ω, perimeter over the closure faces
/// of Ω.
SolveResult solve_dirichlet(const CellSet& boundary_values, const Region& omega, const SignedPair& pair,
                            const SolveOptions& options = {});

/// min P(A) − μ₋(A⁺) over |A| = v. Exact within the enumeration cap and at
/// volumes exposed by the Lagrangian sweep, otherwise bracketed.
SolveResult solve_volume(std::size_t v, const MeasureData& mu_minus, const SolveOptions& options = {});

}  // namespace perivar
