#pragma once

// Brute-force enumeration oracle and the exact-minimum dispatcher shared by
// the IC and solve layers.

#include "perivar/energy.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace perivar {

inline constexpr std::size_t kDefaultExhaustiveCap = 22;

/// Cap from PERIVAR_EXHAUSTIVE_CAP, else `fallback`. A malformed value throws
/// std::invalid_argument.
std::size_t exhaustive_cap_from_env(std::size_t fallback = kDefaultExhaustiveCap);

struct ExhaustiveCapacityExceeded : std::runtime_error {
  ExhaustiveCapacityExceeded(std::size_t cells, std::size_t cap);
  std::size_t cells;
  std::size_t cap;
};

/// Minimum per total volume |A| (frozen cells included). Ties go to the
/// lexicographically first set: the one containing the lowest cell at which
/// two candidates differ.
struct ExhaustiveResult {
  std::vector<std::optional<Rational>> value_by_volume;
  std::vector<std::optional<CellSet>> witness_by_volume;
  /// Global minimum; among ties the smallest volume.
  Rational min_value;
  CellSet minimizer;
  /// Minimum over sets containing at least one free cell (absent when there
  /// are no free cells).
  std::optional<Rational> nonempty_value;
  std::optional<CellSet> nonempty_minimizer;
  std::size_t evaluated = 0;
};

/// OpenMP kernel: Gray-code walk over free-cell assignments in 64-bit scaled
/// integers. Throws ExhaustiveCapacityExceeded when free cells exceed `cap`.
ExhaustiveResult exhaustive_minimize(const EnergySpec& spec, std::size_t cap = kDefaultExhaustiveCap);

/// Serial reference: evaluate_spec on every assignment.
ExhaustiveResult exhaustive_minimize_serial(const EnergySpec& spec, std::size_t cap = kDefaultExhaustiveCap);

enum class Method {
  MinCut,       ///< submodular: one or a few min-cuts
  Exhaustive,   ///< full enumeration
  Enumeration,  ///< enumerate a vertex cover of the non-submodular pairs, min-cut the rest
};

std::string to_string(Method method);

struct ExactMinimum {
  CellSet set;
  Rational value;
  Method method = Method::MinCut;
};

/// Exact minimum of `spec` over admissible sets (or over those with a free
/// cell in them when `nonempty`). Min-cut when submodular, otherwise full
/// enumeration within `cap`, otherwise partial enumeration over a vertex cover
/// of the violating pairs when it has at most `cap` cells.
ExactMinimum exact_minimum(const EnergySpec& spec, bool nonempty, std::size_t cap = kDefaultExhaustiveCap);

/// Copy of `spec` with λ added to every cell weight.
EnergySpec with_volume_term(const EnergySpec& spec, const Rational& lambda);

}  // namespace perivar
