#include "perivar/experiments.hpp"

#include "perivar/maxflow.hpp"

#include <algorithm>

namespace perivar {

bool ScenarioReport::verdict(const std::string& name) const {
  for (const auto& [k, v] : verdicts) {
    if (k == name) return v;
  }
  throw std::out_of_range("no verdict named '" + name + "'");
}

const std::string& ScenarioReport::cell(std::size_t row, const std::string& column) const {
  auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw std::out_of_range("no column named '" + column + "'");
  return rows.at(row).at(static_cast<std::size_t>(it - columns.begin()));
}

namespace {

CellId at(const GridDomain& g, int x, int y) {
  const int c[2] = {x, y};
  return g.cell_index(c);
}

FaceId face_at(const GridDomain& g, int axis, int x, int y) {
  const int c[2] = {x, y};
  return g.face_index(axis, c);
}

CellSet box(const GridDomain& g, int x0, int x1, int y0, int y1) {
  CellSet a(g);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) a.insert(at(g, x, y));
  }
  return a;
}

std::string str(const Rational& r) { return to_string(r); }
std::string str(std::size_t v) { return std::to_string(v); }
std::string str(int v) { return std::to_string(v); }
std::string str(bool v) { return v ? "true" : "false"; }

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string join(const std::vector<Rational>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + to_string(xs[i]);
  return out;
}

void add_frame(ScenarioReport& r, std::string name, CellSet set, const MeasureData& mu) {
  r.checks.emplace_back(r.frames.size(), SignedPair::minus_only(mu));
  r.frames.push_back({std::move(name), std::move(set), mu});
}

}  // namespace

ScenarioReport run_tentacle(const Rational& w, const std::vector<int>& lengths, const std::vector<int>& widths) {
  if (w < 0) throw std::invalid_argument("tentacle weight must be nonnegative");
  if (lengths.empty() || widths.empty()) throw std::invalid_argument("tentacle needs lengths and widths");
  const int kmax = *std::max_element(lengths.begin(), lengths.end());
  if (*std::min_element(lengths.begin(), lengths.end()) < 0 || *std::min_element(widths.begin(), widths.end()) < 1) {
    throw std::invalid_argument("tentacle lengths must be >= 0 and widths >= 1");
  }
  ScenarioReport r;
  r.id = "tentacle";
  r.parameters = {{"w", str(w)}, {"lengths", join(lengths)}, {"widths", join(widths)}};
  r.columns = {"width", "k", "value", "perimeter", "mu_minus", "limit_value", "gap"};
  bool holds = true;
  bool violated = false;
  for (int h : widths) {
    const GridDomain g({kmax + 5, h + 3});
    MeasureData mu(g);
    for (int x = 3; x < 3 + kmax; ++x) mu.add_face(face_at(g, 1, x, 2), w);
    const CellSet blob = box(g, 1, 3, 1, h + 2);
    const SignedPair pair = SignedPair::minus_only(mu);
    const FullSpace mode{Region::all(g)};
    const Rational limit = functional_value(pair, mode, blob);
    for (int k : lengths) {
      const CellSet a = blob | box(g, 3, 3 + k, 2, 2 + h);
      const Rational value = functional_value(pair, mode, a);
      const Rational gap = value - limit;
      holds = holds && gap >= 0;
      violated = violated || gap < 0;
      r.rows.push_back({str(h), str(k), str(value), str(perimeter(a)), str(mass_on_closure(mu, a)), str(limit), str(gap)});
      add_frame(r, "w" + std::to_string(h) + "_k" + std::to_string(k), a, mu);
    }
  }
  r.verdicts = {{"cancellation holds", holds}, {"violation exhibited", violated}};
  return r;
}

ScenarioReport run_runaway_slab(int length, const std::vector<int>& shifts, const Rational& w) {
  if (length < 1) throw std::invalid_argument("slab length must be positive");
  if (shifts.empty() || *std::min_element(shifts.begin(), shifts.end()) < 0) {
    throw std::invalid_argument("shifts must be nonempty and nonnegative");
  }
  const int smax = *std::max_element(shifts.begin(), shifts.end());
  const GridDomain g({length + smax + 2, 3});
  const MeasureData mu = sum(hyperplane_measure(g, 1, 1, w), hyperplane_measure(g, 1, 2, w));
  const SignedPair pair = SignedPair::minus_only(mu);
  const FullSpace mode{Region::all(g)};
  ScenarioReport r;
  r.id = "runaway_slab";
  r.parameters = {{"L", str(length)}, {"shifts", join(shifts)}, {"w", str(w)}};
  r.columns = {"shift", "value", "perimeter", "mu_minus", "limit_value"};
  const Rational limit = 0;  // the local limit is the empty set
  std::optional<Rational> first;
  bool constant = true;
  bool below = true;
  for (int s : shifts) {
    const CellSet a = box(g, 1 + s, 1 + s + length, 1, 2);
    const Rational value = functional_value(pair, mode, a);
    if (!first) first = value;
    constant = constant && value == *first;
    below = below && value < limit;
    r.rows.push_back({str(s), str(value), str(perimeter(a)), str(mass_on_closure(mu, a)), str(limit)});
    add_frame(r, "shift" + std::to_string(s), a, mu);
  }
  r.verdicts = {{"constant sequence", constant}, {"LSC fails under local-only convergence", below}};
  return r;
}

ScenarioReport run_convex_threshold(const std::vector<Rational>& thetas) {
  const GridDomain g({4, 4});
  const CellSet k = box(g, 1, 3, 1, 3);
  ScenarioReport r;
  r.id = "convex_threshold";
  r.parameters = {{"thetas", join(thetas)}, {"grid", "4x4"}, {"K", "2x2 centre"}};
  r.columns = {"theta", "value", "minimizer", "exhaustive_min", "empty_optimal", "K_optimal"};
  bool matches = true;
  for (const Rational& theta : thetas) {
    const MeasureData mu = boundary_measure(k, theta);
    const SignedPair pair = SignedPair::minus_only(mu);
    const SolveResult s = solve_obstacle(CellSet(g), CellSet::full(g), pair);
    const ExhaustiveResult ex = exhaustive_minimize(make_spec(pair, FullSpace{Region::all(g)}), 16);
    const bool empty_opt = ex.min_value == 0;
    const bool k_opt = functional_value(pair, FullSpace{Region::all(g)}, k) == ex.min_value;
    const std::string name = s.minimizer.empty() ? "empty" : (s.minimizer == k ? "K" : "other");
    if (theta < 1) matches = matches && name == "empty" && !k_opt;
    if (theta == 1) matches = matches && name == "empty" && k_opt && empty_opt;
    if (theta > 1) matches = matches && name == "K" && !empty_opt;
    matches = matches && s.value == ex.min_value;
    r.rows.push_back({str(theta), str(s.value), name, str(ex.min_value), str(empty_opt), str(k_opt)});
    add_frame(r, "theta" + std::to_string(r.rows.size()), s.minimizer, mu);
  }
  r.verdicts = {{"threshold at theta = 1", matches}};
  return r;
}

namespace {

CapacityResult collinear_capacity(int k) {
  const GridDomain g({k + 2, 3});
  FaceSet target(g);
  for (int x = 1; x <= k; ++x) target.insert(face_at(g, 1, x, 1));
  return capacity(target, CellSet(g));
}

}  // namespace

ScenarioReport run_capacity_scaling(const std::vector<int>& ks) {
  ScenarioReport r;
  r.id = "capacity_scaling";
  r.parameters = {{"ks", join(ks)}};
  r.columns = {"k", "capacity", "expected", "ratio_to_k", "ratio_to_2k"};
  bool exact = true;
  bool decreasing = true;
  std::optional<Rational> last;
  for (int k : ks) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    const CapacityResult c = collinear_capacity(k);
    const Rational ratio = c.value / Rational(2 * k);
    exact = exact && c.value == Rational(2 * k + 2);
    if (last) decreasing = decreasing && ratio <= *last;
    last = ratio;
    r.rows.push_back({str(k), str(c.value), str(2 * k + 2), str(Rational(c.value / Rational(k))), str(ratio)});
    add_frame(r, "k" + std::to_string(k), c.witness, MeasureData(c.witness.domain()));
  }
  r.verdicts = {{"capacity equals 2k+2", exact}, {"ratio to 2k nonincreasing", decreasing}};
  return r;
}

ScenarioReport run_pseudoconvex(const std::vector<std::pair<int, int>>& rectangles) {
  ScenarioReport r;
  r.id = "pseudoconvex";
  std::string list;
  for (const auto& [a, b] : rectangles) list += (list.empty() ? "" : ",") + std::to_string(a) + "x" + std::to_string(b);
  r.parameters = {{"rectangles", list}};
  r.columns = {"a", "b", "excess", "witness_volume", "gap_at_K"};
  bool sharp = true;
  for (const auto& [a, b] : rectangles) {
    if (a < 1 || b < 1) throw std::invalid_argument("rectangle sides must be positive");
    const GridDomain g({a + 2, b + 2});
    const CellSet k = box(g, 1, 1 + a, 1, 1 + b);
    const MeasureData mu = boundary_measure(k, 1);
    const ExcessResult e = strong_excess(mu, 1);
    const Rational gap = mass_on_closure(mu, k) - perimeter(k);
    sharp = sharp && e.excess == 0 && gap == 0;
    r.rows.push_back({str(a), str(b), str(e.excess), str(e.witness.volume()), str(gap)});
    add_frame(r, std::to_string(a) + "x" + std::to_string(b), e.witness, mu);
  }
  r.verdicts = {{"strong IC holds with constant 1", sharp}, {"constant 1 is attained", sharp}};
  return r;
}

ScenarioReport run_interval_clusters(const std::vector<int>& ells, std::size_t cap) {
  constexpr int kLength = 24;
  ScenarioReport r;
  r.id = "interval_clusters";
  r.parameters = {{"ells", join(ells)}, {"length", str(kLength)}, {"weight", "2"}, {"c", "1"}};
  r.columns = {"ell", "clusters", "v", "phi", "method"};
  bool positive = true;
  for (int ell : ells) {
    if (ell < 1 || 2 * ell > kLength) throw std::invalid_argument("cluster size out of range");
    const GridDomain g({kLength});
    MeasureData mu(g);
    int clusters = 0;
    for (int start = 1; start + 2 * ell - 1 <= kLength - 1; start += 2 * ell + 2) {
      for (int i = 0; i < 2 * ell; ++i) {
        const int c[1] = {start + i};
        mu.add_face(g.face_index(0, c), 2);
      }
      ++clusters;
    }
    const ICProfile p = small_volume_profile(mu, 1, PlainVariant{}, static_cast<std::size_t>(2 * ell), 0, cap);
    for (const auto& e : p.entries) {
      r.rows.push_back({str(ell), str(clusters), str(e.v), str(e.phi), to_string(e.method)});
    }
    positive = positive && p.entries[static_cast<std::size_t>(2 * ell - 2)].phi > 0;
    add_frame(r, "ell" + std::to_string(ell), p.entries.back().witness, mu);
  }
  r.verdicts = {{"excess positive within a cluster", positive}};
  return r;
}

ScenarioReport run_refinement(const std::string& scenario, const std::vector<int>& factors, const Rational& theta) {
  ScenarioReport r;
  r.id = "refinement_" + scenario;
  r.parameters = {{"scenario", scenario}, {"factors", join(factors)}};
  bool trend = true;
  std::optional<Rational> last;
  for (int f : factors) {
    if (f < 1) throw std::invalid_argument("refinement factors must be positive");
  }
  if (scenario == "convex_threshold") {
    r.parameters.emplace_back("theta", str(theta));
    r.columns = {"factor", "value", "normalized_value", "minimizer_volume"};
    for (int f : factors) {
      const GridDomain g({4 * f, 4 * f});
      const CellSet k = box(g, f, 3 * f, f, 3 * f);
      const MeasureData mu = boundary_measure(k, theta);
      const SolveResult s = solve_obstacle(CellSet(g), CellSet::full(g), SignedPair::minus_only(mu));
      const Rational normalized = s.value / Rational(f);
      if (last) trend = trend && normalized == *last;
      last = normalized;
      r.rows.push_back({str(f), str(s.value), str(normalized), str(s.minimizer.volume())});
      add_frame(r, "factor" + std::to_string(f), s.minimizer, mu);
    }
    r.verdicts = {{"normalized value constant", trend}};
  } else if (scenario == "capacity_scaling") {
    r.columns = {"factor", "k", "capacity", "ratio_to_2k"};
    for (int f : factors) {
      const int k = 4 * f;
      const CapacityResult c = collinear_capacity(k);
      const Rational ratio = c.value / Rational(2 * k);
      if (last) trend = trend && ratio <= *last;
      last = ratio;
      r.rows.push_back({str(f), str(k), str(c.value), str(ratio)});
      add_frame(r, "factor" + std::to_string(f), c.witness, MeasureData(c.witness.domain()));
    }
    r.verdicts = {{"ratio to 2k nonincreasing", trend}};
  } else if (scenario == "pseudoconvex") {
    r.columns = {"factor", "side", "excess"};
    for (int f : factors) {
      const GridDomain g({2 * f + 2, 2 * f + 2});
      const CellSet k = box(g, 1, 1 + 2 * f, 1, 1 + 2 * f);
      const MeasureData mu = boundary_measure(k, 1);
      const ExcessResult e = strong_excess(mu, 1);
      trend = trend && e.excess == 0;
      r.rows.push_back({str(f), str(2 * f), str(e.excess)});
      add_frame(r, "factor" + std::to_string(f), e.witness, mu);
    }
    r.verdicts = {{"excess zero at every resolution", trend}};
  } else {
    throw std::invalid_argument("refinement supports convex_threshold, capacity_scaling and pseudoconvex");
  }
  return r;
}

std::vector<std::string> scenario_names() {
  return {"tentacle", "runaway_slab", "convex_threshold", "capacity_scaling", "pseudoconvex", "interval_clusters",
          "refinement"};
}

ScenarioReport run_scenario(const std::string& name) {
  if (name == "tentacle") return run_tentacle(Rational(5, 2), {1, 2, 3, 4, 5, 6});
  if (name == "runaway_slab") return run_runaway_slab(3, {0, 2, 4, 6, 8});
  if (name == "convex_threshold") return run_convex_threshold({Rational(1, 2), Rational(1), Rational(2)});
  if (name == "capacity_scaling") return run_capacity_scaling({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  if (name == "pseudoconvex") return run_pseudoconvex({{1, 1}, {2, 2}, {3, 2}, {4, 3}});
  if (name == "interval_clusters") return run_interval_clusters({1, 2, 4});
  if (name == "refinement") return run_refinement("convex_threshold", {1, 2, 4});
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

}  // namespace perivar
