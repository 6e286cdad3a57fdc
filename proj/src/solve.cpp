#include "perivar/solve.hpp"

#include "perivar/maxflow.hpp"

namespace perivar {

std::string to_string(Exactness e) { return e == Exactness::Exact ? "exact" : "envelope-bound"; }

namespace {

SolveResult solve_spec(const EnergySpec& spec, std::size_t cap) {
  try {
    ExactMinimum m = exact_minimum(spec, false, cap);
    return {std::move(m.set), std::move(m.value), Exactness::Exact, m.method, std::nullopt};
  } catch (const ExhaustiveCapacityExceeded&) {
    throw NonSubmodular(check_submodular(build_energy(spec)));
  }
}

/// Energy terms touching cell `x`: its faces and its own weight.
Rational local_energy(const EnergySpec& spec, const CellSet& a, CellId x) {
  Rational total = 0;
  if (a.contains(x)) {
    auto it = spec.cell.find(x);
    if (it != spec.cell.end()) total += it->second;
  }
  for (FaceId f : spec.domain.cell_faces(x)) {
    const auto& cells = spec.domain.face_cells(f);
    const bool lo = cells[0] != kExterior && a.contains(cells[0]);
    const bool hi = cells[1] != kExterior && a.contains(cells[1]);
    if (lo != hi && spec.perimeter_faces.contains(f)) total += spec.perimeter_weight;
    if (lo && hi) {
      auto it = spec.face_and.find(f);
      if (it != spec.face_and.end()) total += it->second;
    }
    if (lo || hi) {
      auto it = spec.face_or.find(f);
      if (it != spec.face_or.end()) total += it->second;
    }
  }
  return total;
}

/// Greedy single-cell exchange toward volume v; each step takes the cheapest
/// toggle, lowest cell on ties.
CellSet repair(const EnergySpec& spec, CellSet a, std::size_t v) {
  while (a.volume() != v) {
    const bool grow = a.volume() < v;
    std::optional<Rational> best;
    CellId pick = 0;
    for (CellId x = 0; x < spec.domain.cell_count(); ++x) {
      if (spec.state[x] >= 0 || a.contains(x) == grow) continue;
      const Rational before = local_energy(spec, a, x);
      a.assign(x, grow);
      const Rational delta = local_energy(spec, a, x) - before;
      a.assign(x, !grow);
      if (!best || delta < *best) {
        best = delta;
        pick = x;
      }
    }
    if (!best) throw std::logic_error("repair: no admissible cell to exchange");
    a.assign(pick, grow);
  }
  return a;
}

}  // namespace

SolveResult solve_obstacle(const CellSet& inner, const CellSet& outer, const SignedPair& pair,
                           const SolveOptions& options) {
  if (!(inner.domain() == pair.domain()) || !(outer.domain() == pair.domain())) throw DomainMismatch();
  if (!inner.is_subset_of(outer)) throw EmptyClass();
  EnergySpec spec = make_spec(pair, FullSpace{Region(outer)}, options.perimeter_weight);
  for (CellId x : inner.cells()) spec.state[x] = 1;
  return solve_spec(spec, options.exhaustive_cap);
}

SolveResult solve_dirichlet(const CellSet& boundary_values, const Region& omega, const SignedPair& pair,
                            const SolveOptions& options) {
  const EnergySpec spec = make_spec(pair, Dirichlet{boundary_values, omega}, options.perimeter_weight);
  return solve_spec(spec, options.exhaustive_cap);
}

SolveResult solve_volume(std::size_t v, const MeasureData& mu_minus, const SolveOptions& options) {
  const GridDomain& dom = mu_minus.domain();
  if (v > dom.cell_count()) throw std::out_of_range("prescribed volume exceeds the cell count");
  const EnergySpec spec =
      make_spec(SignedPair::minus_only(mu_minus), FullSpace{Region::all(dom)}, options.perimeter_weight);

  if (dom.cell_count() <= options.exhaustive_cap) {
    const ExhaustiveResult r = exhaustive_minimize(spec, options.exhaustive_cap);
    return {*r.witness_by_volume[v], *r.value_by_volume[v], Exactness::Exact, Method::Exhaustive, std::nullopt};
  }

  const Rational lambda_max =
      Rational(2 * dom.dimension()) * options.perimeter_weight + mu_minus.total_mass() + 1;
  Method method = Method::MinCut;
  LagrangianOracle oracle = [&](const Rational& lambda) {
    auto solve_at = [&] {
      try {
        return exact_minimum(with_volume_term(spec, lambda), false, options.exhaustive_cap);
      } catch (const ExhaustiveCapacityExceeded&) {
        throw NonSubmodular(check_submodular(build_energy(spec)));
      }
    };
    ExactMinimum m = solve_at();
    if (m.method != Method::MinCut) method = m.method;
    Rational base = m.value - lambda * static_cast<unsigned long>(m.set.volume());
    return std::make_pair(std::move(m.set), std::move(base));
  };
  const auto points = lower_envelope(oracle, -lambda_max, lambda_max);

  for (const auto& p : points) {
    if (p.set.volume() == v) return {p.set, p.base_value, Exactness::Exact, method, std::nullopt};
  }
  std::size_t i = 0;
  while (i + 1 < points.size() && points[i + 1].set.volume() > v) ++i;
  if (i + 1 >= points.size() || points[i].set.volume() < v) {
    throw std::logic_error("solve_volume: sweep does not bracket the prescribed volume");
  }
  const auto& big = points[i];
  const auto& small = points[i + 1];
  const auto ub = static_cast<unsigned long>(big.set.volume());
  const auto us = static_cast<unsigned long>(small.set.volume());
  const auto uv = static_cast<unsigned long>(v);
  const Rational lower = small.base_value + (big.base_value - small.base_value) * Rational(uv - us) / Rational(ub - us);

  const bool from_small = uv - us <= ub - uv;
  CellSet repaired = repair(spec, from_small ? small.set : big.set, v);
  Rational upper = evaluate_spec(spec, repaired);
  const Exactness exactness = upper == lower ? Exactness::Exact : Exactness::EnvelopeBound;
  VolumeCertificate cert{small.lambda, small.set, big.set, lower, upper};
  return {std::move(repaired), std::move(upper), exactness, method, std::move(cert)};
}

}  // namespace perivar
