#pragma once

// Scripted scenarios producing tables, verdicts and frames.

#include "perivar/ic.hpp"
#include "perivar/solve.hpp"

#include <string>
#include <utility>
#include <vector>

namespace perivar {

/// A set to render, with the measure drawn on its faces.
struct Frame {
  std::string name;
  CellSet set;
  MeasureData measure;
};

/// Rows are exact values rendered as strings ("p" or "p/q").
struct ScenarioReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<Frame> frames;
  /// For rows backed by a frame: the frame index and the energy it is
  /// evaluated with (FullSpace, unit perimeter).
  std::vector<std::pair<std::size_t, SignedPair>> checks;

  bool verdict(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& column) const;
};

/// Blob plus an arm of length k along a weight-w face segment.
ScenarioReport run_tentacle(const Rational& w, const std::vector<int>& lengths, const std::vector<int>& widths = {1});

/// L×1 slab between two weight-w lines, shifted along the lines.
ScenarioReport run_runaway_slab(int length, const std::vector<int>& shifts, const Rational& w = 2);

/// Obstacle problem on 4×4 with θ times the boundary measure of the central
/// 2×2 block.
ScenarioReport run_convex_threshold(const std::vector<Rational>& thetas);

/// Capacity of k collinear faces.
ScenarioReport run_capacity_scaling(const std::vector<int>& ks);

/// Strong excess of the unit boundary measure of a×b rectangles.
ScenarioReport run_pseudoconvex(const std::vector<std::pair<int, int>>& rectangles);

/// 1D groups of 2ℓ consecutive weight-2 point masses, small-volume profile at C = 1.
ScenarioReport run_interval_clusters(const std::vector<int>& ells, std::size_t cap = 24);

/// Re-runs convex_threshold (θ), capacity_scaling or pseudoconvex with all
/// lengths multiplied by each factor.
ScenarioReport run_refinement(const std::string& scenario, const std::vector<int>& factors,
                              const Rational& theta = 2);

/// Dispatch by name with default parameters. Throws std::invalid_argument
/// for unknown names.
ScenarioReport run_scenario(const std::string& name);

std::vector<std::string> scenario_names();

}  // namespace perivar
