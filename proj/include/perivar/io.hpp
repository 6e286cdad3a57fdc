#pragma once

// Problem files (JSON), PGM masks, CSV series, SVG figures and JSON reports.

#include "perivar/experiments.hpp"
#include "perivar/ic.hpp"
#include "perivar/solve.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

namespace perivar {

using Json = nlohmann::ordered_json;

/// Malformed or schema-violating input.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct FreeProblem {
  bool operator==(const FreeProblem&) const = default;
};
struct ObstacleProblem {
  CellSet inner;
  std::optional<CellSet> outer;  ///< absent: the whole grid
  bool operator==(const ObstacleProblem&) const = default;
};
struct DirichletProblem {
  CellSet boundary_values;
  CellSet omega;
  bool operator==(const DirichletProblem&) const = default;
};
/// Relative perimeter over the file's region.
struct RelativeProblem {
  bool operator==(const RelativeProblem&) const = default;
};
struct VolumeProblem {
  std::size_t v = 0;
  bool operator==(const VolumeProblem&) const = default;
};
struct CapacityProblem {
  FaceSet faces;
  CellSet cells;
  bool operator==(const CapacityProblem&) const = default;
};
/// IC test on mu_minus; relative variants use the file's region as Ω.
struct ICProblem {
  std::string variant = "plain";
  int radius = 0;
  Rational penalty{0};
  bool operator==(const ICProblem&) const = default;
};
using Problem = std::variant<FreeProblem, ObstacleProblem, DirichletProblem, RelativeProblem, VolumeProblem,
                             CapacityProblem, ICProblem>;

struct ProblemOptions {
  std::optional<std::size_t> exhaustive_cap;
  std::optional<Rational> c;
  std::optional<std::size_t> v_max;
  bool operator==(const ProblemOptions&) const = default;
};

struct ProblemFile {
  GridDomain domain;
  std::optional<CellSet> region;  ///< absent: all cells
  MeasureData mu_plus;
  MeasureData mu_minus;
  Problem problem;
  ProblemOptions options;

  Region region_or_all() const;
  SignedPair pair() const { return SignedPair(mu_plus, mu_minus); }
  ICVariant ic_variant() const;
  bool operator==(const ProblemFile&) const = default;
};

std::string problem_kind(const Problem& problem);

/// Throws ValidationError on malformed JSON, unknown fields, out-of-grid
/// coordinates or negative weights.
ProblemFile parse_problem(const Json& doc);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile read_problem(const std::filesystem::path& path);
Json to_json(const ProblemFile& file);

/// Plain PGM (P2), maxval 255, set cells 255. Width dims[0]; rows run over
/// axis 1, and 3D slices are stacked vertically.
std::string write_pgm(const CellSet& set);
/// Inverse of write_pgm; values must be 0 or the maxval.
CellSet read_pgm(const std::string& text, const GridDomain& domain);

/// RFC 4180: CRLF line ends, fields quoted when they hold a comma, quote or
/// line break.
std::string write_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

struct MeasureLayer {
  const MeasureData* measure = nullptr;
  std::string colour;
};
/// SVG 1.1: cells as unit squares (filled when in the set), measure faces as
/// thick coloured segments labelled with their weight.
std::string render_svg(const CellSet& set, const std::vector<MeasureLayer>& layers = {});

Json face_json(const GridDomain& domain, FaceId face);
Json submodularity_json(const GridDomain& domain, const SubmodularityReport& report);
Json solve_result_json(const SolveResult& result);
Json profile_json(const ICProfile& profile);
std::string profile_csv(const ICProfile& profile);
Json certificate_json(const GridDomain& domain, const DivergenceCertificate& cert);
Json scenario_json(const ScenarioReport& report, const std::vector<std::string>& frame_files);

/// report.json, series.csv and frame_NN_<name>.svg under `dir`.
void write_scenario(const ScenarioReport& report, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace perivar
