#include "perivar/energy.hpp"

namespace perivar {

EnergySpec::EnergySpec(GridDomain d)
    : domain(d), state(d.cell_count(), -1), perimeter_faces(FaceSet::all(d)) {}

std::size_t EnergySpec::free_count() const {
  std::size_t n = 0;
  for (auto s : state) n += s < 0 ? 1 : 0;
  return n;
}

bool EnergySpec::admits(const CellSet& a) const {
  if (!(a.domain() == domain)) return false;
  for (CellId c = 0; c < state.size(); ++c) {
    if (state[c] >= 0 && a.contains(c) != (state[c] == 1)) return false;
  }
  return true;
}

namespace {

void add_measures(EnergySpec& spec, const SignedPair& pair) {
  for (const auto& [f, w] : pair.plus.face_weights()) spec.face_and[f] += w;
  for (const auto& [f, w] : pair.minus.face_weights()) spec.face_or[f] -= w;
  for (const auto& [c, w] : pair.plus.cell_weights()) spec.cell[c] += w;
  for (const auto& [c, w] : pair.minus.cell_weights()) spec.cell[c] -= w;
  std::erase_if(spec.cell, [](const auto& kv) { return kv.second == 0; });
}

void check_dirichlet_support(const MeasureData& mu, const Region& omega) {
  for (const auto& [c, w] : mu.cell_weights()) {
    if (!omega.cells().contains(c)) {
      throw SupportViolation("measure charges a cell outside Ω in Dirichlet mode");
    }
  }
  for (const auto& [f, w] : mu.face_weights()) {
    if (!omega.closure_faces().contains(f)) {
      throw SupportViolation("measure charges a face outside the closure of Ω in Dirichlet mode");
    }
  }
}

}  // namespace

EnergySpec make_spec(const SignedPair& pair, const AssemblyMode& mode, const Rational& perimeter_weight) {
  if (perimeter_weight < 0) throw std::invalid_argument("perimeter weight must be nonnegative");
  EnergySpec spec(pair.domain());
  spec.perimeter_weight = perimeter_weight;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FullSpace>) {
          if (!(m.free.domain() == spec.domain)) throw DomainMismatch();
          for (CellId c = 0; c < spec.state.size(); ++c) spec.state[c] = m.free.cells().contains(c) ? -1 : 0;
        } else if constexpr (std::is_same_v<M, Dirichlet>) {
          if (!(m.omega.domain() == spec.domain) || !(m.boundary_values.domain() == spec.domain)) {
            throw DomainMismatch();
          }
          check_dirichlet_support(pair.plus, m.omega);
          check_dirichlet_support(pair.minus, m.omega);
          for (CellId c = 0; c < spec.state.size(); ++c) {
            spec.state[c] = m.omega.cells().contains(c) ? -1 : (m.boundary_values.contains(c) ? 1 : 0);
          }
          spec.perimeter_faces = m.omega.closure_faces();
        } else {
          if (!(m.omega.domain() == spec.domain)) throw DomainMismatch();
          for (CellId c = 0; c < spec.state.size(); ++c) spec.state[c] = m.omega.cells().contains(c) ? -1 : 0;
          spec.perimeter_faces = m.omega.interior_faces();
        }
      },
      mode);
  add_measures(spec, pair);
  return spec;
}

Rational evaluate_spec(const EnergySpec& spec, const CellSet& a) {
  if (!(a.domain() == spec.domain)) throw DomainMismatch();
  if (!spec.admits(a)) throw FrozenMismatch();
  const FaceSet outer = closure_faces(a);
  const FaceSet inner = interior_faces(a);
  const FaceSet cut = (outer - inner) & spec.perimeter_faces;
  Rational total = spec.perimeter_weight * static_cast<long>(cut.size());
  for (const auto& [f, w] : spec.face_and) {
    if (inner.contains(f)) total += w;
  }
  for (const auto& [f, w] : spec.face_or) {
    if (outer.contains(f)) total += w;
  }
  for (const auto& [c, w] : spec.cell) {
    if (a.contains(c)) total += w;
  }
  return total;
}

Rational functional_value(const SignedPair& pair, const AssemblyMode& mode, const CellSet& a,
                          const Rational& perimeter_weight) {
  if (!(a.domain() == pair.domain())) throw DomainMismatch();
  const Rational per = std::visit(
      [&](const auto& m) -> Rational {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FullSpace>) {
          if (!a.is_subset_of(m.free.cells())) throw FrozenMismatch();
          return perimeter(a) * perimeter_weight;
        } else if constexpr (std::is_same_v<M, Dirichlet>) {
          const CellSet outside = m.omega.cells().complement();
          if (!((a & outside) == (m.boundary_values & outside))) throw FrozenMismatch();
          return perimeter(a, m.omega, PerimeterMode::Closure, perimeter_weight);
        } else {
          if (!a.is_subset_of(m.omega.cells())) throw FrozenMismatch();
          return perimeter(a, m.omega, PerimeterMode::Interior, perimeter_weight);
        }
      },
      mode);
  return per + mass_on_interior(pair.plus, a) - mass_on_closure(pair.minus, a);
}

// ---------------------------------------------------------------- BinaryEnergy

BinaryEnergy build_energy(const EnergySpec& spec) {
  const GridDomain& dom = spec.domain;
  BinaryEnergy e(dom);
  e.state_ = spec.state;
  e.var_of_cell_.assign(dom.cell_count(), -1);
  for (CellId c = 0; c < dom.cell_count(); ++c) {
    if (spec.state[c] < 0) {
      e.var_of_cell_[c] = static_cast<std::ptrdiff_t>(e.variables_.size());
      e.variables_.push_back(c);
    }
  }
  e.unary_.assign(e.variables_.size(), {Rational(0), Rational(0)});

  for (const auto& [c, w] : spec.cell) {
    if (spec.state[c] < 0) {
      e.unary_[static_cast<std::size_t>(e.var_of_cell_[c])][1] += w;
    } else if (spec.state[c] == 1) {
      e.constant_ += w;
    }
  }

  const Rational zero(0);
  for (FaceId f = 0; f < dom.face_count(); ++f) {
    const Rational p = spec.perimeter_faces.contains(f) ? spec.perimeter_weight : zero;
    auto ia = spec.face_and.find(f);
    auto io = spec.face_or.find(f);
    const Rational& a = ia == spec.face_and.end() ? zero : ia->second;
    const Rational& b = io == spec.face_or.end() ? zero : io->second;
    if (p == 0 && a == 0 && b == 0) continue;

    // Table over (x_lo, x_hi); the exterior is a fixed 0.
    auto table = [&](int xl, int xh) {
      Rational t = 0;
      if (xl != xh) t += p;
      if (xl && xh) t += a;
      if (xl || xh) t += b;
      return t;
    };
    const auto& cells = dom.face_cells(f);
    auto status = [&](CellId c) -> int {  // -1 free, else fixed value
      if (c == kExterior) return 0;
      return spec.state[c];
    };
    const int sl = status(cells[0]);
    const int sh = status(cells[1]);
    if (sl < 0 && sh < 0) {
      PairTerm term;
      term.u = static_cast<std::size_t>(e.var_of_cell_[cells[0]]);
      term.v = static_cast<std::size_t>(e.var_of_cell_[cells[1]]);
      term.face = f;
      term.table = {table(0, 0), table(0, 1), table(1, 0), table(1, 1)};
      term.perimeter_weight = p;
      term.w_plus = a;
      term.w_minus = -b;
      e.pairs_.push_back(std::move(term));
    } else if (sl < 0) {
      auto& u = e.unary_[static_cast<std::size_t>(e.var_of_cell_[cells[0]])];
      u[0] += table(0, sh);
      u[1] += table(1, sh);
    } else if (sh < 0) {
      auto& u = e.unary_[static_cast<std::size_t>(e.var_of_cell_[cells[1]])];
      u[0] += table(sl, 0);
      u[1] += table(sl, 1);
    } else {
      e.constant_ += table(sl, sh);
    }
  }
  return e;
}

BinaryEnergy assemble(const SignedPair& pair, const AssemblyMode& mode, const Rational& perimeter_weight) {
  return build_energy(make_spec(pair, mode, perimeter_weight));
}

Rational BinaryEnergy::evaluate(const CellSet& a) const {
  if (!(a.domain() == domain_)) throw DomainMismatch();
  for (CellId c = 0; c < state_.size(); ++c) {
    if (state_[c] >= 0 && a.contains(c) != (state_[c] == 1)) throw FrozenMismatch();
  }
  Rational total = constant_;
  for (std::size_t i = 0; i < variables_.size(); ++i) total += unary_[i][a.contains(variables_[i]) ? 1 : 0];
  for (const auto& t : pairs_) {
    const int xu = a.contains(variables_[t.u]) ? 1 : 0;
    const int xv = a.contains(variables_[t.v]) ? 1 : 0;
    total += t.table[static_cast<std::size_t>(xu * 2 + xv)];
  }
  return total;
}

BinaryEnergy BinaryEnergy::with_volume_term(const Rational& lambda) const {
  BinaryEnergy out = *this;
  for (auto& u : out.unary_) u[1] += lambda;
  for (auto s : state_) {
    if (s == 1) out.constant_ += lambda;
  }
  return out;
}

CellSet BinaryEnergy::to_cells(const std::vector<std::uint8_t>& assignment) const {
  CellSet a(domain_);
  for (CellId c = 0; c < state_.size(); ++c) {
    if (state_[c] == 1) a.insert(c);
  }
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (assignment[i]) a.insert(variables_[i]);
  }
  return a;
}

SubmodularityReport check_submodular(const BinaryEnergy& energy) {
  SubmodularityReport report;
  for (const auto& t : energy.pairs()) {
    const Rational margin = t.table[1] + t.table[2] - t.table[0] - t.table[3];
    if (margin < 0) {
      report.submodular = false;
      report.violations.push_back({t.face, t.w_plus, t.w_minus, t.perimeter_weight, margin});
    }
  }
  return report;
}

}  // namespace perivar
