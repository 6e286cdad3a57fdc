#include "perivar/io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace perivar {

namespace {

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ValidationError("unknown field '" + key + "' in " + where);
  }
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + " is missing '" + key + "'");
  return *it;
}

long as_int(const Json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ValidationError(what + " must be an integer");
  return v.get<long>();
}

Rational as_weight(const Json& v, const std::string& what) {
  Rational r;
  if (v.is_number_integer()) {
    r = Rational(static_cast<long>(v.get<long>()));
  } else if (v.is_string()) {
    try {
      r = parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ValidationError(what + ": " + e.what());
    }
  } else {
    throw ValidationError(what + " must be an integer or a \"p/q\" string");
  }
  if (r < 0) throw ValidationError(what + " must be nonnegative");
  return r;
}

Json weight_json(const Rational& r) { return to_string(r); }

CellId parse_cell(const GridDomain& g, const Json& v, const std::string& what) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(g.dimension())) {
    throw ValidationError(what + " must be an array of " + std::to_string(g.dimension()) + " integers");
  }
  std::vector<int> c;
  for (const auto& x : v) c.push_back(static_cast<int>(as_int(x, what)));
  if (!g.contains_coord(c)) throw ValidationError(what + " lies outside the grid");
  return g.cell_index(c);
}

Json cell_json(const GridDomain& g, CellId c) {
  const Coord x = g.cell_coord(c);
  Json out = Json::array();
  for (int a = 0; a < g.dimension(); ++a) out.push_back(x[static_cast<std::size_t>(a)]);
  return out;
}

CellSet parse_cells(const GridDomain& g, const Json& v, const std::string& what) {
  if (!v.is_array()) throw ValidationError(what + " must be an array of cells");
  CellSet s(g);
  for (const auto& c : v) s.insert(parse_cell(g, c, what));
  return s;
}

Json cells_json(const CellSet& s) {
  Json out = Json::array();
  for (CellId c : s.cells()) out.push_back(cell_json(s.domain(), c));
  return out;
}

FaceId parse_face(const GridDomain& g, const Json& v, const std::string& what, std::initializer_list<const char*> keys) {
  check_keys(v, what, keys);
  const long axis = as_int(require(v, "axis", what), what + ".axis");
  if (axis < 0 || axis >= g.dimension()) throw ValidationError(what + ".axis out of range");
  const long slot = as_int(require(v, "slot", what), what + ".slot");
  const auto ax = static_cast<std::size_t>(axis);
  if (slot < 0 || slot > g.dims()[ax]) throw ValidationError(what + ".slot out of range");
  const Json& at = require(v, "at", what);
  if (!at.is_array() || at.size() != static_cast<std::size_t>(g.dimension() - 1)) {
    throw ValidationError(what + ".at must hold the " + std::to_string(g.dimension() - 1) + " transverse coordinates");
  }
  std::vector<int> coord;
  std::size_t k = 0;
  for (int b = 0; b < g.dimension(); ++b) {
    if (b == axis) {
      coord.push_back(static_cast<int>(slot));
      continue;
    }
    const long x = as_int(at[k++], what + ".at");
    if (x < 0 || x >= g.dims()[static_cast<std::size_t>(b)]) throw ValidationError(what + ".at out of range");
    coord.push_back(static_cast<int>(x));
  }
  return g.face_index(static_cast<int>(axis), coord);
}

MeasureData parse_measure(const GridDomain& g, const Json& v, const std::string& what) {
  check_keys(v, what, {"cells", "faces"});
  MeasureData mu(g);
  if (auto it = v.find("cells"); it != v.end()) {
    if (!it->is_array()) throw ValidationError(what + ".cells must be an array");
    for (const auto& e : *it) {
      check_keys(e, what + ".cells[]", {"at", "w"});
      mu.add_cell(parse_cell(g, require(e, "at", what), what + ".cells[].at"),
                  as_weight(require(e, "w", what), what + ".cells[].w"));
    }
  }
  if (auto it = v.find("faces"); it != v.end()) {
    if (!it->is_array()) throw ValidationError(what + ".faces must be an array");
    for (const auto& e : *it) {
      const FaceId f = parse_face(g, e, what + ".faces[]", {"axis", "slot", "at", "w"});
      mu.add_face(f, as_weight(require(e, "w", what), what + ".faces[].w"));
    }
  }
  return mu;
}

Json measure_json(const MeasureData& mu) {
  Json cells = Json::array();
  for (const auto& [c, w] : mu.cell_weights()) cells.push_back(Json{{"at", cell_json(mu.domain(), c)}, {"w", weight_json(w)}});
  Json faces = Json::array();
  for (const auto& [f, w] : mu.face_weights()) {
    Json e = face_json(mu.domain(), f);
    e["w"] = weight_json(w);
    faces.push_back(std::move(e));
  }
  return Json{{"cells", std::move(cells)}, {"faces", std::move(faces)}};
}

const std::set<std::string> kVariants = {"plain", "interior_rep", "relative", "avoid_ball", "relative_to_boundary"};

Problem parse_problem_kind(const GridDomain& g, const Json& v) {
  if (!v.is_object()) throw ValidationError("problem must be an object");
  const Json& kind_json = require(v, "kind", "problem");
  if (!kind_json.is_string()) throw ValidationError("problem.kind must be a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "free") {
    check_keys(v, "problem", {"kind"});
    return FreeProblem{};
  }
  if (kind == "relative") {
    check_keys(v, "problem", {"kind"});
    return RelativeProblem{};
  }
  if (kind == "obstacle") {
    check_keys(v, "problem", {"kind", "inner", "outer"});
    ObstacleProblem p{CellSet(g), std::nullopt};
    if (auto it = v.find("inner"); it != v.end()) p.inner = parse_cells(g, *it, "problem.inner");
    if (auto it = v.find("outer"); it != v.end()) p.outer = parse_cells(g, *it, "problem.outer");
    return p;
  }
  if (kind == "dirichlet") {
    check_keys(v, "problem", {"kind", "boundary_values", "omega"});
    return DirichletProblem{parse_cells(g, require(v, "boundary_values", "problem"), "problem.boundary_values"),
                            parse_cells(g, require(v, "omega", "problem"), "problem.omega")};
  }
  if (kind == "volume") {
    check_keys(v, "problem", {"kind", "v"});
    const long n = as_int(require(v, "v", "problem"), "problem.v");
    if (n < 0 || static_cast<std::size_t>(n) > g.cell_count()) throw ValidationError("problem.v out of range");
    return VolumeProblem{static_cast<std::size_t>(n)};
  }
  if (kind == "capacity") {
    check_keys(v, "problem", {"kind", "faces", "cells"});
    CapacityProblem p{FaceSet(g), CellSet(g)};
    if (auto it = v.find("faces"); it != v.end()) {
      if (!it->is_array()) throw ValidationError("problem.faces must be an array");
      for (const auto& f : *it) p.faces.insert(parse_face(g, f, "problem.faces[]", {"axis", "slot", "at"}));
    }
    if (auto it = v.find("cells"); it != v.end()) p.cells = parse_cells(g, *it, "problem.cells");
    if (p.faces.empty() && p.cells.empty()) throw ValidationError("capacity target must be nonempty");
    return p;
  }
  if (kind == "ic") {
    check_keys(v, "problem", {"kind", "variant", "radius", "penalty"});
    ICProblem p;
    if (auto it = v.find("variant"); it != v.end()) {
      if (!it->is_string() || !kVariants.count(it->get<std::string>())) {
        throw ValidationError("problem.variant must be one of plain, interior_rep, relative, avoid_ball, relative_to_boundary");
      }
      p.variant = it->get<std::string>();
    }
    if (auto it = v.find("radius"); it != v.end()) {
      const long r = as_int(*it, "problem.radius");
      if (r < 0) throw ValidationError("problem.radius must be nonnegative");
      p.radius = static_cast<int>(r);
    }
    if (auto it = v.find("penalty"); it != v.end()) p.penalty = as_weight(*it, "problem.penalty");
    return p;
  }
  throw ValidationError("unknown problem kind '" + kind + "'");
}

Json problem_json(const Problem& problem) {
  return std::visit(
      [](const auto& p) -> Json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FreeProblem>) {
          return Json{{"kind", "free"}};
        } else if constexpr (std::is_same_v<P, RelativeProblem>) {
          return Json{{"kind", "relative"}};
        } else if constexpr (std::is_same_v<P, ObstacleProblem>) {
          Json j{{"kind", "obstacle"}, {"inner", cells_json(p.inner)}};
          if (p.outer) j["outer"] = cells_json(*p.outer);
          return j;
        } else if constexpr (std::is_same_v<P, DirichletProblem>) {
          return Json{{"kind", "dirichlet"}, {"boundary_values", cells_json(p.boundary_values)}, {"omega", cells_json(p.omega)}};
        } else if constexpr (std::is_same_v<P, VolumeProblem>) {
          return Json{{"kind", "volume"}, {"v", p.v}};
        } else if constexpr (std::is_same_v<P, CapacityProblem>) {
          Json faces = Json::array();
          for (FaceId f : p.faces.faces()) faces.push_back(face_json(p.faces.domain(), f));
          return Json{{"kind", "capacity"}, {"faces", std::move(faces)}, {"cells", cells_json(p.cells)}};
        } else {
          return Json{{"kind", "ic"}, {"variant", p.variant}, {"radius", p.radius}, {"penalty", weight_json(p.penalty)}};
        }
      },
      problem);
}

}  // namespace

Region ProblemFile::region_or_all() const { return region ? Region(*region) : Region::all(domain); }

ICVariant ProblemFile::ic_variant() const {
  const auto* p = std::get_if<ICProblem>(&problem);
  const std::string name = p ? p->variant : "plain";
  if (name == "interior_rep") return InteriorRepVariant{};
  if (name == "relative") return RelativeVariant{region_or_all()};
  if (name == "avoid_ball") return AvoidBallVariant{p ? p->radius : 0};
  if (name == "relative_to_boundary") return RelativePerimeterToBoundaryVariant{region_or_all()};
  return PlainVariant{};
}

std::string problem_kind(const Problem& problem) {
  static const char* names[] = {"free", "obstacle", "dirichlet", "relative", "volume", "capacity", "ic"};
  return names[problem.index()];
}

ProblemFile parse_problem(const Json& doc) {
  check_keys(doc, "problem file", {"grid", "region", "mu_plus", "mu_minus", "problem", "options"});
  const Json& grid = require(doc, "grid", "problem file");
  check_keys(grid, "grid", {"dims"});
  const Json& dims_json = require(grid, "dims", "grid");
  if (!dims_json.is_array() || dims_json.empty() || dims_json.size() > 3) {
    throw ValidationError("grid.dims must list 1 to 3 extents");
  }
  std::vector<int> dims;
  long cells = 1;
  for (const auto& d : dims_json) {
    const long n = as_int(d, "grid.dims[]");
    if (n < 1 || n > 4096) throw ValidationError("grid extents must lie in [1, 4096]");
    cells *= n;
    dims.push_back(static_cast<int>(n));
  }
  if (cells > (1L << 22)) throw ValidationError("grid has too many cells");
  GridDomain g(dims);

  ProblemFile file{g, std::nullopt, MeasureData(g), MeasureData(g), FreeProblem{}, {}};
  if (auto it = doc.find("region"); it != doc.end()) {
    check_keys(*it, "region", {"all", "cells"});
    const bool has_all = it->contains("all");
    const bool has_cells = it->contains("cells");
    if (has_all == has_cells) throw ValidationError("region needs exactly one of 'all' and 'cells'");
    if (has_all) {
      if (!(*it)["all"].is_boolean() || !(*it)["all"].get<bool>()) throw ValidationError("region.all must be true");
    } else {
      file.region = parse_cells(g, (*it)["cells"], "region.cells");
    }
  }
  if (auto it = doc.find("mu_plus"); it != doc.end()) file.mu_plus = parse_measure(g, *it, "mu_plus");
  if (auto it = doc.find("mu_minus"); it != doc.end()) file.mu_minus = parse_measure(g, *it, "mu_minus");
  if (auto it = doc.find("problem"); it != doc.end()) file.problem = parse_problem_kind(g, *it);
  if (auto it = doc.find("options"); it != doc.end()) {
    check_keys(*it, "options", {"exhaustive_cap", "c", "v_max"});
    if (auto o = it->find("exhaustive_cap"); o != it->end()) {
      const long n = as_int(*o, "options.exhaustive_cap");
      if (n < 0 || n > 62) throw ValidationError("options.exhaustive_cap must lie in [0, 62]");
      file.options.exhaustive_cap = static_cast<std::size_t>(n);
    }
    if (auto o = it->find("c"); o != it->end()) file.options.c = as_weight(*o, "options.c");
    if (auto o = it->find("v_max"); o != it->end()) {
      const long n = as_int(*o, "options.v_max");
      if (n < 1) throw ValidationError("options.v_max must be positive");
      file.options.v_max = static_cast<std::size_t>(n);
    }
  }
  return file;
}

ProblemFile parse_problem_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

ProblemFile read_problem(const std::filesystem::path& path) { return parse_problem_text(read_text(path)); }

Json to_json(const ProblemFile& file) {
  Json doc;
  doc["grid"] = Json{{"dims", file.domain.dims()}};
  doc["region"] = file.region ? Json{{"cells", cells_json(*file.region)}} : Json{{"all", true}};
  doc["mu_plus"] = measure_json(file.mu_plus);
  doc["mu_minus"] = measure_json(file.mu_minus);
  doc["problem"] = problem_json(file.problem);
  Json options = Json::object();
  if (file.options.exhaustive_cap) options["exhaustive_cap"] = *file.options.exhaustive_cap;
  if (file.options.c) options["c"] = weight_json(*file.options.c);
  if (file.options.v_max) options["v_max"] = *file.options.v_max;
  doc["options"] = std::move(options);
  return doc;
}

// ---------------------------------------------------------------- masks

namespace {

struct Layout {
  int width;
  int height;
  int rows_per_slice;
};

Layout layout(const GridDomain& g) {
  const auto& d = g.dims();
  const int ny = d.size() > 1 ? d[1] : 1;
  const int nz = d.size() > 2 ? d[2] : 1;
  return {d[0], ny * nz, ny};
}

/// (column, row) of a cell in the stacked picture.
std::pair<int, int> place(const GridDomain& g, CellId c) {
  const Coord x = g.cell_coord(c);
  const Layout l = layout(g);
  return {x[0], x[1] + l.rows_per_slice * x[2]};
}

}  // namespace

std::string write_pgm(const CellSet& set) {
  const GridDomain& g = set.domain();
  const Layout l = layout(g);
  std::vector<int> pixels(static_cast<std::size_t>(l.width * l.height), 0);
  for (CellId c : set.cells()) {
    const auto [col, row] = place(g, c);
    pixels[static_cast<std::size_t>(row * l.width + col)] = 255;
  }
  std::ostringstream out;
  out << "P2\n" << l.width << ' ' << l.height << "\n255\n";
  for (int row = 0; row < l.height; ++row) {
    for (int col = 0; col < l.width; ++col) {
      if (col) out << ' ';
      out << pixels[static_cast<std::size_t>(row * l.width + col)];
    }
    out << '\n';
  }
  return out.str();
}

CellSet read_pgm(const std::string& text, const GridDomain& domain) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) tokens.push_back(t);
  }
  if (tokens.size() < 4 || tokens[0] != "P2") throw ValidationError("mask is not a plain PGM (P2) image");
  auto number = [&](std::size_t i) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(tokens[i], &pos);
      if (pos != tokens[i].size() || v < 0) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ValidationError("bad PGM token '" + tokens[i] + "'");
    }
  };
  const Layout l = layout(domain);
  const long w = number(1), h = number(2), maxval = number(3);
  if (w != l.width || h != l.height) {
    throw ValidationError("mask is " + std::to_string(w) + "x" + std::to_string(h) + ", grid needs " +
                          std::to_string(l.width) + "x" + std::to_string(l.height));
  }
  if (maxval < 1) throw ValidationError("PGM maxval must be positive");
  if (tokens.size() != 4 + static_cast<std::size_t>(w * h)) throw ValidationError("PGM pixel count mismatch");
  CellSet set(domain);
  for (CellId c = 0; c < domain.cell_count(); ++c) {
    const auto [col, row] = place(domain, c);
    const long v = number(4 + static_cast<std::size_t>(row * w + col));
    if (v != 0 && v != maxval) throw ValidationError("PGM mask values must be 0 or maxval");
    if (v == maxval) set.insert(c);
  }
  return set;
}

std::string write_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto field = [&](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
      out += s;
      return;
    }
    out += '"';
    for (char ch : s) {
      if (ch == '"') out += '"';
      out += ch;
    }
    out += '"';
  };
  auto record = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      field(r[i]);
    }
    out += "\r\n";
  };
  record(header);
  for (const auto& r : rows) record(r);
  return out;
}

// ---------------------------------------------------------------- SVG

namespace {

constexpr int kPx = 24;
constexpr int kMargin = 12;

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const CellSet& set, const std::vector<MeasureLayer>& layers) {
  const GridDomain& g = set.domain();
  const Layout l = layout(g);
  const int w = l.width * kPx + 2 * kMargin;
  const int h = l.height * kPx + 2 * kMargin;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#ffffff\"/>\n";
  out << "<g stroke=\"#b0b0b0\" stroke-width=\"1\">\n";
  for (CellId c = 0; c < g.cell_count(); ++c) {
    const auto [col, row] = place(g, c);
    out << "<rect x=\"" << kMargin + col * kPx << "\" y=\"" << kMargin + row * kPx << "\" width=\"" << kPx
        << "\" height=\"" << kPx << "\" fill=\"" << (set.contains(c) ? "#3f6fb0" : "#ffffff") << "\"/>\n";
  }
  out << "</g>\n";
  for (const auto& layer : layers) {
    if (layer.measure == nullptr) continue;
    out << "<g stroke=\"" << escape_xml(layer.colour) << "\" stroke-width=\"4\" stroke-linecap=\"round\" fill=\""
        << escape_xml(layer.colour) << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
    for (const auto& [c, wt] : layer.measure->cell_weights()) {
      const auto [col, row] = place(g, c);
      out << "<circle cx=\"" << kMargin + col * kPx + kPx / 2 << "\" cy=\"" << kMargin + row * kPx + kPx / 2
          << "\" r=\"4\" stroke=\"none\"/>\n";
      out << "<text x=\"" << kMargin + col * kPx + 2 << "\" y=\"" << kMargin + row * kPx + 9
          << "\" stroke=\"none\">" << escape_xml(to_string(wt)) << "</text>\n";
    }
    for (const auto& [f, wt] : layer.measure->face_weights()) {
      const FaceRef ref = g.face(f);
      const int x = ref.coord[0];
      const int y = ref.coord[1];
      const int z = ref.coord[2];
      int x1 = 0, y1 = 0, x2 = 0, y2 = 0;
      if (ref.axis == 0) {
        x1 = x2 = kMargin + x * kPx;
        y1 = kMargin + (y + l.rows_per_slice * z) * kPx;
        y2 = y1 + kPx;
      } else if (ref.axis == 1) {
        y1 = y2 = kMargin + (y + l.rows_per_slice * z) * kPx;
        x1 = kMargin + x * kPx;
        x2 = x1 + kPx;
      } else {
        // normal along the stacking axis: mark the square in the lower slice
        const int slice = z < g.dims()[2] ? z : z - 1;
        x1 = kMargin + x * kPx + 4;
        x2 = x1 + kPx - 8;
        y1 = y2 = kMargin + (y + l.rows_per_slice * slice) * kPx + kPx / 2;
      }
      out << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2 << "\"/>\n";
      out << "<text x=\"" << (x1 + x2) / 2 + 3 << "\" y=\"" << (y1 + y2) / 2 - 3 << "\" stroke=\"none\">"
          << escape_xml(to_string(wt)) << "</text>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// ---------------------------------------------------------------- reports

Json face_json(const GridDomain& g, FaceId face) {
  const FaceRef ref = g.face(face);
  Json at = Json::array();
  for (int b = 0; b < g.dimension(); ++b) {
    if (b != ref.axis) at.push_back(ref.coord[static_cast<std::size_t>(b)]);
  }
  return Json{{"axis", ref.axis}, {"slot", ref.slot()}, {"at", std::move(at)}};
}

Json submodularity_json(const GridDomain& g, const SubmodularityReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(Json{{"face", face_json(g, v.face)},
                              {"w_plus", to_string(v.w_plus)},
                              {"w_minus", to_string(v.w_minus)},
                              {"perimeter_weight", to_string(v.perimeter_weight)},
                              {"margin", to_string(v.margin)}});
  }
  return Json{{"submodular", report.submodular}, {"violations", std::move(violations)}};
}

Json solve_result_json(const SolveResult& r) {
  Json j{{"value", to_string(r.value)},
         {"exactness", to_string(r.exactness)},
         {"method", to_string(r.method)},
         {"volume", r.minimizer.volume()}};
  if (r.certificate) {
    const auto& c = *r.certificate;
    j["certificate"] = Json{{"lambda", to_string(c.lambda)},
                            {"smaller_volume", c.smaller.volume()},
                            {"larger_volume", c.larger.volume()},
                            {"lower_bound", to_string(c.lower_bound)},
                            {"upper_bound", to_string(c.upper_bound)}};
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

Json profile_json(const ICProfile& profile) {
  Json entries = Json::array();
  for (const auto& e : profile.entries) {
    entries.push_back(Json{{"v", e.v},
                           {"phi", to_string(e.phi)},
                           {"phi_lower", to_string(e.phi_lower)},
                           {"method", to_string(e.method)},
                           {"witness_volume", e.witness.volume()}});
  }
  return entries;
}

std::string profile_csv(const ICProfile& profile) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : profile.entries) rows.push_back({std::to_string(e.v), to_string(e.phi), to_string(e.method)});
  return write_csv({"v", "phi", "method"}, rows);
}

Json certificate_json(const GridDomain& g, const DivergenceCertificate& cert) {
  Json faces = Json::array();
  for (const auto& s : cert.flux) {
    Json e = face_json(g, s.face);
    e["lower"] = to_string(s.lower);
    e["upper"] = to_string(s.upper);
    faces.push_back(std::move(e));
  }
  return Json{{"bound", to_string(cert.bound)}, {"sigma", std::move(faces)}};
}

Json scenario_json(const ScenarioReport& report, const std::vector<std::string>& frame_files) {
  Json params = Json::object();
  for (const auto& [k, v] : report.parameters) params[k] = v;
  Json verdicts = Json::object();
  for (const auto& [k, v] : report.verdicts) verdicts[k] = v;
  return Json{{"id", report.id},
              {"parameters", std::move(params)},
              {"columns", report.columns},
              {"rows", report.rows},
              {"verdicts", std::move(verdicts)},
              {"artifacts", Json{{"series", "series.csv"}, {"frames", frame_files}}}};
}

void write_scenario(const ScenarioReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    std::ostringstream name;
    name << "frame_" << std::setw(2) << std::setfill('0') << i << '_' << report.frames[i].name << ".svg";
    const Frame& f = report.frames[i];
    write_text(dir / name.str(), render_svg(f.set, {{&f.measure, "#c0392b"}}));
    files.push_back(name.str());
  }
  write_text(dir / "series.csv", write_csv(report.columns, report.rows));
  write_text(dir / "report.json", scenario_json(report, files).dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace perivar
