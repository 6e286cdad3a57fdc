// perivar: evaluate, minimize and test perimeter functionals with measure data.

#include "perivar/experiments.hpp"
#include "perivar/io.hpp"
#include "perivar/maxflow.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace fs = std::filesystem;
using namespace perivar;

namespace {

struct Exit {
  static constexpr int kOk = 0;
  static constexpr int kValidation = 2;
  static constexpr int kSolver = 3;
};

/// flag > environment > file option > default
std::size_t resolve_cap(const std::optional<std::size_t>& flag, const ProblemFile* file) {
  if (flag) return *flag;
  const std::size_t from_file =
      file && file->options.exhaustive_cap ? *file->options.exhaustive_cap : kDefaultExhaustiveCap;
  return exhaustive_cap_from_env(from_file);
}

Rational resolve_c(const std::string& flag, const ProblemFile& file) {
  if (!flag.empty()) {
    try {
      const Rational c = parse_rational(flag);
      if (c < 0) throw std::invalid_argument("negative");
      return c;
    } catch (const std::invalid_argument&) {
      throw ValidationError("--c must be a nonnegative rational, got '" + flag + "'");
    }
  }
  return file.options.c ? *file.options.c : Rational(1);
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

/// Mode used to evaluate a set under the file's problem kind.
AssemblyMode mode_of(const ProblemFile& file) {
  if (const auto* p = std::get_if<ObstacleProblem>(&file.problem)) {
    return FullSpace{p->outer ? Region(*p->outer) : Region::all(file.domain)};
  }
  if (const auto* p = std::get_if<DirichletProblem>(&file.problem)) {
    return Dirichlet{p->boundary_values, Region(p->omega)};
  }
  if (std::holds_alternative<RelativeProblem>(file.problem)) return Relative{file.region_or_all()};
  if (std::holds_alternative<FreeProblem>(file.problem)) return FullSpace{file.region_or_all()};
  return FullSpace{Region::all(file.domain)};
}

Rational perimeter_term(const ProblemFile& file, const CellSet& a) {
  return std::visit(
      [&](const auto& m) -> Rational {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FullSpace>) {
          return perimeter(a);
        } else if constexpr (std::is_same_v<M, Dirichlet>) {
          return perimeter(a, m.omega, PerimeterMode::Closure);
        } else {
          return perimeter(a, m.omega, PerimeterMode::Interior);
        }
      },
      mode_of(file));
}

int cmd_eval(const std::string& problem_path, const std::string& set_path) {
  const ProblemFile file = read_problem(problem_path);
  const CellSet a = read_pgm(read_text(set_path), file.domain);
  if (const auto* p = std::get_if<ObstacleProblem>(&file.problem)) {
    if (!p->inner.is_subset_of(a)) throw ValidationError("set does not contain the inner obstacle");
  }
  if (const auto* p = std::get_if<VolumeProblem>(&file.problem)) {
    if (a.volume() != p->v) throw ValidationError("set volume differs from the prescribed volume");
  }
  const Rational value = functional_value(file.pair(), mode_of(file), a);
  std::cout << to_string(value) << "\n"
            << "perimeter " << to_string(perimeter_term(file, a)) << "\n"
            << "mu_plus " << to_string(mass_on_interior(file.mu_plus, a)) << "\n"
            << "mu_minus " << to_string(mass_on_closure(file.mu_minus, a)) << "\n";
  return Exit::kOk;
}

int cmd_minimize(const std::string& problem_path, const fs::path& out, const std::optional<std::size_t>& cap_flag) {
  const ProblemFile file = read_problem(problem_path);
  SolveOptions options;
  options.exhaustive_cap = resolve_cap(cap_flag, &file);
  const SignedPair pair = file.pair();
  SolveResult result = std::visit(
      [&](const auto& p) -> SolveResult {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FreeProblem>) {
          return solve_obstacle(CellSet(file.domain), file.region_or_all().cells(), pair, options);
        } else if constexpr (std::is_same_v<P, ObstacleProblem>) {
          return solve_obstacle(p.inner, p.outer ? *p.outer : CellSet::full(file.domain), pair, options);
        } else if constexpr (std::is_same_v<P, DirichletProblem>) {
          return solve_dirichlet(p.boundary_values, Region(p.omega), pair, options);
        } else if constexpr (std::is_same_v<P, RelativeProblem>) {
          const EnergySpec spec = make_spec(pair, Relative{file.region_or_all()});
          try {
            ExactMinimum m = exact_minimum(spec, false, options.exhaustive_cap);
            return {std::move(m.set), std::move(m.value), Exactness::Exact, m.method, std::nullopt};
          } catch (const ExhaustiveCapacityExceeded&) {
            throw NonSubmodular(check_submodular(build_energy(spec)));
          }
        } else if constexpr (std::is_same_v<P, VolumeProblem>) {
          if (!file.mu_plus.is_zero()) throw ValidationError("volume problems take mu_minus only");
          return solve_volume(p.v, file.mu_minus, options);
        } else {
          throw ValidationError("problem kind '" + problem_kind(file.problem) + "' is handled by 'perivar ic'");
        }
      },
      file.problem);
  fs::create_directories(out);
  write_text(out / "minimizer.pgm", write_pgm(result.minimizer));
  write_text(out / "result.json", pretty(solve_result_json(result)));
  std::cout << to_string(result.value) << "\n";
  return Exit::kOk;
}

int cmd_ic(const std::string& sub, const std::string& problem_path, const fs::path& out,
           const std::optional<std::size_t>& cap_flag, const std::string& c_flag,
           const std::optional<std::size_t>& v_max_flag) {
  const ProblemFile file = read_problem(problem_path);
  const std::size_t cap = resolve_cap(cap_flag, &file);
  const Rational c = resolve_c(c_flag, file);
  const auto* icp = std::get_if<ICProblem>(&file.problem);
  const Rational penalty = icp ? icp->penalty : Rational(0);
  const ICVariant variant = file.ic_variant();
  fs::create_directories(out);

  if (sub == "strong") {
    const ExcessResult r = strong_excess(file.mu_minus, c, variant, penalty, cap);
    write_text(out / "witness.pgm", write_pgm(r.witness));
    write_text(out / "report.json", pretty(Json{{"variant", variant_name(variant)},
                                                 {"c", to_string(c)},
                                                 {"penalty", to_string(penalty)},
                                                 {"excess", to_string(r.excess)},
                                                 {"holds", r.excess <= 0},
                                                 {"method", to_string(r.method)},
                                                 {"witness_volume", r.witness.volume()}}));
    std::cout << to_string(r.excess) << "\n";
  } else if (sub == "profile") {
    const std::size_t v_max = v_max_flag ? *v_max_flag : file.options.v_max.value_or(file.domain.cell_count());
    const ICProfile p = small_volume_profile(file.mu_minus, c, variant, v_max, penalty, cap);
    write_text(out / "profile.csv", profile_csv(p));
    write_text(out / "report.json", pretty(Json{{"variant", variant_name(variant)},
                                                 {"c", to_string(c)},
                                                 {"penalty", to_string(penalty)},
                                                 {"profile", profile_json(p)}}));
    std::cout << profile_csv(p);
  } else if (sub == "divcert") {
    const DivergenceResult r = divergence_certificate(file.mu_minus, c);
    if (r.feasible()) {
      const bool ok = verify_certificate(*r.certificate, file.mu_minus);
      write_text(out / "certificate.json", pretty(certificate_json(file.domain, *r.certificate)));
      write_text(out / "report.json", pretty(Json{{"c", to_string(c)}, {"feasible", true}, {"verified", ok}}));
      std::cout << "feasible\n";
    } else {
      write_text(out / "witness.pgm", write_pgm(r.infeasible->witness));
      write_text(out / "report.json", pretty(Json{{"c", to_string(c)},
                                                   {"feasible", false},
                                                   {"excess", to_string(r.infeasible->excess)},
                                                   {"witness_volume", r.infeasible->witness.volume()}}));
      std::cout << "infeasible " << to_string(r.infeasible->excess) << "\n";
    }
  } else {
    const auto* p = std::get_if<CapacityProblem>(&file.problem);
    if (p == nullptr) throw ValidationError("'ic capacity' needs a problem of kind 'capacity'");
    const CapacityResult r = capacity(p->faces, p->cells);
    write_text(out / "witness.pgm", write_pgm(r.witness));
    write_text(out / "report.json", pretty(Json{{"capacity", to_string(r.value)},
                                                 {"witness_volume", r.witness.volume()},
                                                 {"nodes_explored", r.nodes_explored}}));
    std::cout << to_string(r.value) << "\n";
  }
  return Exit::kOk;
}

std::vector<Rational> parse_rationals(const std::vector<std::string>& xs) {
  std::vector<Rational> out;
  for (const auto& x : xs) {
    try {
      out.push_back(parse_rational(x));
    } catch (const std::invalid_argument& e) {
      throw ValidationError("bad rational '" + x + "': " + e.what());
    }
  }
  return out;
}

std::vector<std::pair<int, int>> parse_rects(const std::vector<std::string>& xs) {
  std::vector<std::pair<int, int>> out;
  for (const auto& x : xs) {
    const auto pos = x.find('x');
    try {
      if (pos == std::string::npos) throw std::invalid_argument("");
      out.emplace_back(std::stoi(x.substr(0, pos)), std::stoi(x.substr(pos + 1)));
    } catch (const std::exception&) {
      throw ValidationError("rectangles are written AxB, got '" + x + "'");
    }
  }
  return out;
}

struct ExperimentArgs {
  std::string name;
  std::string out;
  std::string w;
  std::vector<int> lengths;
  std::vector<int> widths;
  int slab_length = 3;
  std::vector<int> shifts;
  std::vector<std::string> thetas;
  std::vector<int> ks;
  std::vector<std::string> rects;
  std::vector<int> ells;
  std::vector<int> factors;
  std::string scenario = "convex_threshold";
  std::string theta = "2";
  std::optional<std::size_t> cap;
};

int cmd_experiment(const ExperimentArgs& a) {
  ScenarioReport r = [&]() -> ScenarioReport {
    if (a.name == "tentacle") {
      const Rational w = a.w.empty() ? Rational(5, 2) : parse_rationals({a.w})[0];
      return run_tentacle(w, a.lengths.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6} : a.lengths,
                          a.widths.empty() ? std::vector<int>{1} : a.widths);
    }
    if (a.name == "runaway_slab") {
      const Rational w = a.w.empty() ? Rational(2) : parse_rationals({a.w})[0];
      return run_runaway_slab(a.slab_length, a.shifts.empty() ? std::vector<int>{0, 2, 4, 6, 8} : a.shifts, w);
    }
    if (a.name == "convex_threshold" && !a.thetas.empty()) return run_convex_threshold(parse_rationals(a.thetas));
    if (a.name == "capacity_scaling" && !a.ks.empty()) return run_capacity_scaling(a.ks);
    if (a.name == "pseudoconvex" && !a.rects.empty()) return run_pseudoconvex(parse_rects(a.rects));
    if (a.name == "interval_clusters") {
      return run_interval_clusters(a.ells.empty() ? std::vector<int>{1, 2, 4} : a.ells,
                                   a.cap ? *a.cap : exhaustive_cap_from_env(24));
    }
    if (a.name == "refinement") {
      return run_refinement(a.scenario, a.factors.empty() ? std::vector<int>{1, 2, 4} : a.factors,
                            parse_rationals({a.theta})[0]);
    }
    return run_scenario(a.name);
  }();
  const fs::path dir = a.out.empty() ? fs::path(r.id) : fs::path(a.out);
  write_scenario(r, dir);
  for (const auto& [k, v] : r.verdicts) std::cout << k << ": " << (v ? "true" : "false") << "\n";
  return Exit::kOk;
}

int cmd_render(const std::string& problem_path, const std::string& set_path, const fs::path& out) {
  const ProblemFile file = read_problem(problem_path);
  const CellSet a = set_path.empty() ? CellSet(file.domain) : read_pgm(read_text(set_path), file.domain);
  write_text(out, render_svg(a, {{&file.mu_minus, "#c0392b"}, {&file.mu_plus, "#27ae60"}}));
  return Exit::kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact perimeter functionals with measure data on lattice grids"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::size_t> cap;
  app.add_option("--exhaustive-cap", cap, "Cell cap for brute-force enumeration");

  std::string problem, set, out;
  auto* eval = app.add_subcommand("eval", "Print the exact functional value of a set");
  eval->add_option("problem", problem, "Problem file (JSON)")->required();
  eval->add_option("--set", set, "Mask (PGM)")->required();

  auto* minimize_cmd = app.add_subcommand("minimize", "Minimize the problem exactly");
  minimize_cmd->add_option("problem", problem, "Problem file (JSON)")->required();
  minimize_cmd->add_option("-o,--out", out, "Output directory")->required();

  std::string c_flag;
  std::optional<std::size_t> v_max;
  std::string ic_sub;
  auto* ic = app.add_subcommand("ic", "Isoperimetric-condition checks on mu_minus");
  ic->add_option("check", ic_sub, "strong | profile | divcert | capacity")
      ->required()
      ->check(CLI::IsMember({"strong", "profile", "divcert", "capacity"}));
  ic->add_option("problem", problem, "Problem file (JSON)")->required();
  ic->add_option("-o,--out", out, "Output directory")->required();
  ic->add_option("--c", c_flag, "IC constant (p/q)");
  ic->add_option("--v-max", v_max, "Largest volume budget of the profile");

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "Run a named scenario");
  experiment->add_option("name", ex.name, "Scenario")->required()->check(CLI::IsMember(scenario_names()));
  experiment->add_option("-o,--out", ex.out, "Output directory (default: scenario id)");
  experiment->add_option("--w", ex.w, "Face weight (tentacle, runaway_slab)");
  experiment->add_option("--lengths", ex.lengths, "Arm lengths (tentacle)")->delimiter(',');
  experiment->add_option("--widths", ex.widths, "Arm widths (tentacle)")->delimiter(',');
  experiment->add_option("--slab-length", ex.slab_length, "Slab length L (runaway_slab)");
  experiment->add_option("--shifts", ex.shifts, "Shifts (runaway_slab)")->delimiter(',');
  experiment->add_option("--thetas", ex.thetas, "Densities (convex_threshold)")->delimiter(',');
  experiment->add_option("--ks", ex.ks, "Face counts (capacity_scaling)")->delimiter(',');
  experiment->add_option("--rects", ex.rects, "Rectangles AxB (pseudoconvex)")->delimiter(',');
  experiment->add_option("--ells", ex.ells, "Cluster sizes (interval_clusters)")->delimiter(',');
  experiment->add_option("--factors", ex.factors, "Resolution factors (refinement)")->delimiter(',');
  experiment->add_option("--scenario", ex.scenario, "Scenario to refine (refinement)");
  experiment->add_option("--theta", ex.theta, "Density (refinement of convex_threshold)");

  auto* render = app.add_subcommand("render", "Draw a mask and the problem's measures as SVG");
  render->add_option("problem", problem, "Problem file (JSON)")->required();
  render->add_option("--set", set, "Mask (PGM)");
  render->add_option("-o,--out", out, "Output SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::kOk : Exit::kValidation;
  }

  try {
    if (*eval) return cmd_eval(problem, set);
    if (*minimize_cmd) return cmd_minimize(problem, out, cap);
    if (*ic) return cmd_ic(ic_sub, problem, out, cap, c_flag, v_max);
    if (*experiment) {
      ex.cap = cap;
      return cmd_experiment(ex);
    }
    if (*render) return cmd_render(problem, set, out);
  } catch (const NonSubmodular& e) {
    std::cerr << "error: " << e.what() << "\n";
    Json report = Json{{"submodular", false}, {"violations", Json::array()}};
    try {
      report = submodularity_json(read_problem(problem).domain, e.report);
    } catch (const std::exception&) {
    }
    std::cerr << report.dump(2) << "\n";
    return Exit::kSolver;
  } catch (const ExhaustiveCapacityExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::kSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::kValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Exit::kSolver;
  }
  return Exit::kValidation;
}
