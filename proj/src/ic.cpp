#include "perivar/ic.hpp"

#include "perivar/maxflow.hpp"

#include <algorithm>

namespace perivar {

std::string variant_name(const ICVariant& variant) {
  switch (variant.index()) {
    case 0: return "plain";
    case 1: return "interior_rep";
    case 2: return "relative";
    case 3: return "avoid_ball";
    default: return "relative_to_boundary";
  }
}

std::string to_string(ProfileMethod method) {
  switch (method) {
    case ProfileMethod::ExhaustiveExact: return "exhaustive-exact";
    case ProfileMethod::EnvelopeExact: return "lagrangian-envelope";
    case ProfileMethod::EnvelopeUpperBound: return "lagrangian-envelope-upper-bound";
  }
  return "unknown";
}

CellSet central_box(const GridDomain& domain, int radius) {
  if (radius < 0) throw std::invalid_argument("box radius must be nonnegative");
  CellSet box(domain);
  for (CellId c = 0; c < domain.cell_count(); ++c) {
    const Coord x = domain.cell_coord(c);
    bool inside = true;
    for (int a = 0; a < domain.dimension(); ++a) {
      // doubled coordinates keep half-integer centres exact
      const int offset = 2 * x[static_cast<std::size_t>(a)] - (domain.dims()[static_cast<std::size_t>(a)] - 1);
      if (std::abs(offset) > 2 * radius) inside = false;
    }
    if (inside) box.insert(c);
  }
  return box;
}

EnergySpec excess_spec(const MeasureData& mu, const Rational& c, const ICVariant& variant, const Rational& penalty) {
  if (c < 0) throw std::invalid_argument("IC constant must be nonnegative");
  const GridDomain& dom = mu.domain();
  EnergySpec spec(dom);
  spec.perimeter_weight = c;
  bool interior_rep = false;
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, InteriorRepVariant>) {
          interior_rep = true;
        } else if constexpr (std::is_same_v<V, RelativeVariant>) {
          if (!(v.omega.domain() == dom)) throw DomainMismatch();
          for (CellId x = 0; x < dom.cell_count(); ++x) {
            if (!v.omega.cells().contains(x)) spec.state[x] = 0;
          }
          spec.perimeter_faces = v.omega.interior_faces();
        } else if constexpr (std::is_same_v<V, AvoidBallVariant>) {
          const CellSet box = central_box(dom, v.radius);
          for (CellId x : box.cells()) spec.state[x] = 0;
        } else if constexpr (std::is_same_v<V, RelativePerimeterToBoundaryVariant>) {
          if (!(v.omega.domain() == dom)) throw DomainMismatch();
          spec.perimeter_faces = v.omega.interior_faces();
        }
      },
      variant);
  for (const auto& [f, w] : mu.face_weights()) {
    if (interior_rep) {
      spec.face_and[f] -= w;
    } else {
      spec.face_or[f] -= w;
    }
  }
  for (const auto& [x, w] : mu.cell_weights()) spec.cell[x] -= w;
  if (penalty != 0) {
    for (CellId x = 0; x < dom.cell_count(); ++x) spec.cell[x] += penalty;
  }
  std::erase_if(spec.cell, [](const auto& kv) { return kv.second == 0; });
  return spec;
}

ExcessResult strong_excess(const MeasureData& mu, const Rational& c, const ICVariant& variant,
                           const Rational& penalty, std::size_t cap) {
  const EnergySpec spec = excess_spec(mu, c, variant, penalty);
  ExactMinimum m = exact_minimum(spec, true, cap);
  return {-m.value, std::move(m.set), m.method};
}

// ---------------------------------------------------------------- profiles

namespace {

ICProfile exhaustive_profile(const EnergySpec& spec, std::size_t v_max, std::size_t cap) {
  const ExhaustiveResult r = exhaustive_minimize(spec, cap);
  ICProfile out;
  std::optional<Rational> best;
  std::optional<CellSet> witness;
  for (std::size_t v = 1; v <= v_max; ++v) {
    if (v < r.value_by_volume.size() && r.value_by_volume[v] && (!best || *r.value_by_volume[v] < *best)) {
      best = r.value_by_volume[v];
      witness = r.witness_by_volume[v];
    }
    if (!best) throw std::invalid_argument("no admissible nonempty set within the volume budget");
    out.entries.push_back({v, -*best, -*best, ProfileMethod::ExhaustiveExact, *witness});
  }
  return out;
}

ICProfile envelope_profile(const EnergySpec& spec, const Rational& lambda_max, std::size_t v_max,
                           std::size_t cap) {
  LagrangianOracle oracle = [&](const Rational& lambda) {
    ExactMinimum m = exact_minimum(with_volume_term(spec, lambda), true, cap);
    Rational base = m.value - lambda * static_cast<unsigned long>(m.set.volume());
    return std::make_pair(std::move(m.set), std::move(base));
  };
  const auto points = lower_envelope(oracle, -lambda_max, lambda_max);

  // Dual pairs (λ, set optimal at λ) for the Lagrangian lower bound.
  struct Dual {
    Rational lambda;
    Rational base;
    std::size_t volume;
  };
  std::vector<Dual> duals;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Rational end = i + 1 < points.size() ? points[i + 1].lambda : lambda_max;
    duals.push_back({points[i].lambda, points[i].base_value, points[i].set.volume()});
    duals.push_back({end, points[i].base_value, points[i].set.volume()});
  }
  auto lower = [&](std::size_t u) {
    std::optional<Rational> best;
    for (const auto& d : duals) {
      Rational v = d.base + d.lambda * (Rational(static_cast<unsigned long>(d.volume)) -
                                        Rational(static_cast<unsigned long>(u)));
      if (!best || v > *best) best = v;
    }
    return *best;
  };

  // Feasible candidates: exposed sets (all nonempty) and every singleton.
  std::vector<std::pair<Rational, CellSet>> candidates;
  for (const auto& p : points) {
    if (!p.set.empty() && spec.admits(p.set)) candidates.emplace_back(p.base_value, p.set);
  }
  for (CellId x = 0; x < spec.domain.cell_count(); ++x) {
    if (spec.state[x] >= 0) continue;
    CellSet one(spec.domain);
    one.insert(x);
    if (!spec.admits(one)) continue;
    candidates.emplace_back(evaluate_spec(spec, one), std::move(one));
  }
  if (candidates.empty()) throw std::invalid_argument("no admissible nonempty set");

  ICProfile out;
  std::optional<Rational> low;
  for (std::size_t v = 1; v <= v_max; ++v) {
    const Rational l = lower(v);
    if (!low || l < *low) low = l;
    const std::pair<Rational, CellSet>* up = nullptr;
    for (const auto& cand : candidates) {
      if (cand.second.volume() > v) continue;
      if (!up || cand.first < up->first ||
          (cand.first == up->first && cand.second.volume() < up->second.volume())) {
        up = &cand;
      }
    }
    ProfileEntry e{v, -*low, -up->first,
                   *low == up->first ? ProfileMethod::EnvelopeExact : ProfileMethod::EnvelopeUpperBound,
                   up->second};
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace

ICProfile small_volume_profile(const MeasureData& mu, const Rational& c, const ICVariant& variant,
                               std::size_t v_max, const Rational& penalty, std::size_t cap) {
  if (v_max == 0) throw std::invalid_argument("v_max must be at least 1");
  const EnergySpec spec = excess_spec(mu, c, variant, penalty);
  v_max = std::min(v_max, spec.free_count());
  if (spec.free_count() <= cap) return exhaustive_profile(spec, v_max, cap);
  Rational lambda_max = Rational(2 * mu.domain().dimension()) * c + abs(penalty) + mu.total_mass() + 1;
  return envelope_profile(spec, lambda_max, v_max, cap);
}

// ---------------------------------------------------------------- divergence

namespace {

struct FaceArcs {
  std::array<std::ptrdiff_t, 2> out{-1, -1};  // face -> side
  std::array<std::ptrdiff_t, 2> in{-1, -1};   // side -> face
};

}  // namespace

DivergenceResult divergence_certificate(const MeasureData& mu, const Rational& c) {
  if (c < 0) throw std::invalid_argument("bound must be nonnegative");
  const GridDomain& dom = mu.domain();
  Integer d = c.get_den();
  for (const auto& [f, w] : mu.face_weights()) d = lcm(d, w.get_den());
  for (const auto& [x, w] : mu.cell_weights()) d = lcm(d, w.get_den());
  auto scaled = [&](const Rational& r) { return Rational(r * d).get_num(); };
  const Integer cap = scaled(c);

  const std::size_t nc = dom.cell_count();
  FlowNetwork net(nc + dom.face_count());
  auto cell_node = [](CellId x) { return FlowNetwork::Node{2 + x}; };
  auto face_node = [&](FaceId f) { return FlowNetwork::Node{2 + nc + f}; };

  Integer supply = 0;
  for (const auto& [f, w] : mu.face_weights()) {
    net.add_arc(FlowNetwork::kSource, face_node(f), scaled(w));
    supply += scaled(w);
  }
  for (const auto& [x, w] : mu.cell_weights()) {
    net.add_arc(FlowNetwork::kSource, cell_node(x), scaled(w));
    supply += scaled(w);
  }
  std::vector<FaceArcs> arcs(dom.face_count());
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    const auto& cells = dom.face_cells(f);
    for (std::size_t side = 0; side < 2; ++side) {
      if (cells[side] == kExterior) {
        arcs[f].out[side] = static_cast<std::ptrdiff_t>(net.add_arc(face_node(f), FlowNetwork::kSink, cap));
      } else {
        arcs[f].out[side] = static_cast<std::ptrdiff_t>(net.add_arc(face_node(f), cell_node(cells[side]), cap));
        arcs[f].in[side] = static_cast<std::ptrdiff_t>(net.add_arc(cell_node(cells[side]), face_node(f), cap));
      }
    }
  }

  const CutResult cut = max_flow(net);
  DivergenceResult result;
  if (cut.value != supply) {
    CellSet witness(dom);
    for (CellId x = 0; x < nc; ++x) {
      if (cut.source_side[cell_node(x)]) witness.insert(x);
    }
    result.infeasible = Infeasible{witness, mass_on_closure(mu, witness) - c * perimeter(witness)};
    return result;
  }

  DivergenceCertificate cert;
  cert.bound = c;
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    std::array<Integer, 2> q;
    for (std::size_t side = 0; side < 2; ++side) {
      q[side] = cut.flow[static_cast<std::size_t>(arcs[f].out[side])];
      if (arcs[f].in[side] >= 0) q[side] -= cut.flow[static_cast<std::size_t>(arcs[f].in[side])];
    }
    FaceFlux flux{f, Rational(-q[0], d), Rational(q[1], d)};
    flux.lower.canonicalize();
    flux.upper.canonicalize();
    cert.flux.push_back(std::move(flux));
  }
  cert.face_residual.resize(dom.face_count());
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    cert.face_residual[f] = cert.flux[f].upper - cert.flux[f].lower - mu.face_weight(f);
  }
  cert.cell_residual.resize(nc);
  for (CellId x = 0; x < nc; ++x) {
    const auto faces = dom.cell_faces(x);
    Rational div = 0;
    for (std::size_t k = 0; k < faces.size(); k += 2) {
      div += cert.flux[faces[k + 1]].lower - cert.flux[faces[k]].upper;
    }
    cert.cell_residual[x] = div - mu.cell_weight(x);
  }
  result.certificate = std::move(cert);
  return result;
}

bool verify_certificate(const DivergenceCertificate& cert, const MeasureData& mu) {
  const GridDomain& dom = mu.domain();
  if (cert.flux.size() != dom.face_count()) return false;
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    const FaceFlux& s = cert.flux[f];
    if (s.face != f) return false;
    if (abs(s.lower) > cert.bound || abs(s.upper) > cert.bound) return false;
    if (s.upper - s.lower != mu.face_weight(f)) return false;
  }
  for (CellId x = 0; x < dom.cell_count(); ++x) {
    const auto faces = dom.cell_faces(x);
    Rational div = 0;
    for (std::size_t k = 0; k < faces.size(); k += 2) {
      div += cert.flux[faces[k + 1]].lower - cert.flux[faces[k]].upper;
    }
    if (div != mu.cell_weight(x)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- capacity

namespace {

struct CapacitySearch {
  const FaceSet& faces;
  std::optional<Rational> best;
  std::optional<CellSet> witness;
  std::size_t explored = 0;

  bool covers(const CellSet& a) const {
    const FaceSet closure = closure_faces(a);
    return faces.is_subset_of(closure);
  }

  void explore(const EnergySpec& spec) {
    ++explored;
    const BinaryEnergy energy = build_energy(spec);
    const MinimizeResult r = minimize(energy);
    if (best && r.value >= *best) return;
    for (const CellSet* cand : {&r.minimizer, &r.maximal_minimizer}) {
      if (covers(*cand)) {
        best = r.value;
        witness = *cand;
        return;
      }
    }
    const FaceSet closure = closure_faces(r.minimizer);
    for (FaceId f : faces.faces()) {
      if (closure.contains(f)) continue;
      std::vector<CellId> options;
      for (CellId x : spec.domain.face_cells(f)) {
        if (x != kExterior && spec.state[x] < 0) options.push_back(x);
      }
      for (std::size_t i = 0; i < options.size(); ++i) {
        EnergySpec child = spec;
        for (std::size_t j = 0; j < i; ++j) child.state[options[j]] = 0;
        child.state[options[i]] = 1;
        explore(child);
      }
      return;
    }
  }
};

}  // namespace

CapacityResult capacity(const FaceSet& faces, const CellSet& cells) {
  if (!(faces.domain() == cells.domain())) throw DomainMismatch();
  if (faces.empty() && cells.empty()) throw std::invalid_argument("capacity target must be nonempty");
  EnergySpec spec(cells.domain());
  for (CellId x : cells.cells()) spec.state[x] = 1;
  CapacitySearch search{faces, std::nullopt, std::nullopt, 0};
  search.explore(spec);
  if (!search.best) throw std::logic_error("capacity: no covering set found");
  return {*search.best, *search.witness, search.explored};
}

SingularSumReport singular_sum_check(const MeasureData& first, const MeasureData& second, const Rational& c,
                                     std::size_t v_max, std::size_t cap) {
  if (!are_mutually_singular(first, second)) {
    throw std::invalid_argument("singular_sum_check needs mutually singular measures");
  }
  SingularSumReport r;
  r.first = small_volume_profile(first, c, PlainVariant{}, v_max, 0, cap);
  r.second = small_volume_profile(second, c, PlainVariant{}, v_max, 0, cap);
  r.sum = small_volume_profile(sum(first, second), c, PlainVariant{}, v_max, 0, cap);
  for (std::size_t i = 0; i < r.sum.entries.size(); ++i) {
    const Rational& a = r.first.entries[i].phi;
    const Rational& b = r.second.entries[i].phi;
    const Rational slack = std::max(a, b) + std::max(std::min(a, b), Rational(0));
    if (r.sum.entries[i].phi > slack) r.flagged.push_back(r.sum.entries[i].v);
  }
  return r;
}

}  // namespace perivar
