#include "perivar/exhaustive.hpp"

#include "perivar/maxflow.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perivar {

std::size_t exhaustive_cap_from_env(std::size_t fallback) {
  const char* raw = std::getenv("PERIVAR_EXHAUSTIVE_CAP");
  if (raw == nullptr || *raw == '\0') return fallback;
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(raw, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || raw[pos] != '\0' || v > 62) {
    throw std::invalid_argument(std::string("PERIVAR_EXHAUSTIVE_CAP must be an integer in [0, 62], got '") + raw + "'");
  }
  return v;
}

ExhaustiveCapacityExceeded::ExhaustiveCapacityExceeded(std::size_t n, std::size_t c)
    : std::runtime_error("enumeration over " + std::to_string(n) + " free cells exceeds the cap of " +
                         std::to_string(c)),
      cells(n),
      cap(c) {}

std::string to_string(Method method) {
  switch (method) {
    case Method::MinCut: return "min-cut";
    case Method::Exhaustive: return "exhaustive";
    case Method::Enumeration: return "enumeration";
  }
  return "unknown";
}

namespace {

using Mask = std::uint64_t;

bool lex_first(Mask a, Mask b) {
  const Mask d = a ^ b;
  if (d == 0) return false;
  return (a & (d & (~d + 1))) != 0;
}

bool lex_first(const CellSet& a, const CellSet& b) {
  for (CellId c = 0; c < a.domain().cell_count(); ++c) {
    if (a.contains(c) != b.contains(c)) return a.contains(c);
  }
  return false;
}

std::vector<CellId> free_cells(const EnergySpec& spec) {
  std::vector<CellId> out;
  for (CellId c = 0; c < spec.state.size(); ++c) {
    if (spec.state[c] < 0) out.push_back(c);
  }
  return out;
}

std::size_t frozen_ones(const EnergySpec& spec) {
  std::size_t n = 0;
  for (auto s : spec.state) n += s == 1 ? 1 : 0;
  return n;
}

CellSet mask_to_cells(const EnergySpec& spec, const std::vector<CellId>& vars, Mask m) {
  CellSet a(spec.domain);
  for (CellId c = 0; c < spec.state.size(); ++c) {
    if (spec.state[c] == 1) a.insert(c);
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if ((m >> i) & 1U) a.insert(vars[i]);
  }
  return a;
}

/// Per-volume minima over masks; shared by both kernels.
template <class Value>
struct Tally {
  std::vector<std::optional<Value>> best;
  std::vector<Mask> mask;

  explicit Tally(std::size_t vars) : best(vars + 1), mask(vars + 1, 0) {}

  void offer(std::size_t k, const Value& v, Mask m) {
    if (!best[k] || v < *best[k] || (v == *best[k] && lex_first(m, mask[k]))) {
      best[k] = v;
      mask[k] = m;
    }
  }
  void merge(const Tally& other) {
    for (std::size_t k = 0; k < best.size(); ++k) {
      if (other.best[k]) offer(k, *other.best[k], other.mask[k]);
    }
  }
};

ExhaustiveResult finish(const EnergySpec& spec, const std::vector<CellId>& vars,
                        const std::vector<std::optional<Rational>>& by_popcount, const std::vector<Mask>& masks) {
  const std::size_t base = frozen_ones(spec);
  ExhaustiveResult r{std::vector<std::optional<Rational>>(spec.domain.cell_count() + 1),
                     std::vector<std::optional<CellSet>>(spec.domain.cell_count() + 1),
                     0,
                     CellSet(spec.domain),
                     std::nullopt,
                     std::nullopt,
                     std::size_t{1} << vars.size()};
  bool have_min = false;
  for (std::size_t k = 0; k < by_popcount.size(); ++k) {
    if (!by_popcount[k]) continue;
    const Rational& v = *by_popcount[k];
    r.value_by_volume[base + k] = v;
    r.witness_by_volume[base + k] = mask_to_cells(spec, vars, masks[k]);
    if (!have_min || v < r.min_value) {
      r.min_value = v;
      r.minimizer = *r.witness_by_volume[base + k];
      have_min = true;
    }
    if (k > 0 && (!r.nonempty_value || v < *r.nonempty_value)) {
      r.nonempty_value = v;
      r.nonempty_minimizer = r.witness_by_volume[base + k];
    }
  }
  return r;
}

struct ScaledTerm {
  // operand: var index, or -1 / -2 for constant 0 / 1
  std::int64_t lo = -1;
  std::int64_t hi = -1;
  std::array<std::int64_t, 4> table{};
};

}  // namespace

ExhaustiveResult exhaustive_minimize(const EnergySpec& spec, std::size_t cap) {
  const std::vector<CellId> vars = free_cells(spec);
  const std::size_t n = vars.size();
  if (n > cap || n > 62) throw ExhaustiveCapacityExceeded(n, cap);

  Integer d = spec.perimeter_weight.get_den();
  for (const auto& [f, w] : spec.face_and) d = lcm(d, w.get_den());
  for (const auto& [f, w] : spec.face_or) d = lcm(d, w.get_den());
  for (const auto& [c, w] : spec.cell) d = lcm(d, w.get_den());
  Integer magnitude = 0;
  auto scale = [&](const Rational& r) {
    const Integer v = Rational(r * d).get_num();
    magnitude += abs(v);
    return v;
  };
  const Integer limit = Integer(1) << 62;
  auto narrow = [&](const Integer& v) {
    if (abs(v) >= limit) throw ExhaustiveCapacityExceeded(n, cap);
    return static_cast<std::int64_t>(v.get_si());
  };

  std::vector<std::ptrdiff_t> var_of(spec.domain.cell_count(), -1);
  for (std::size_t i = 0; i < n; ++i) var_of[vars[i]] = static_cast<std::ptrdiff_t>(i);

  Integer constant = 0;
  std::vector<std::int64_t> unary(n, 0);
  for (const auto& [c, w] : spec.cell) {
    const Integer v = scale(w);
    if (spec.state[c] < 0) {
      unary[static_cast<std::size_t>(var_of[c])] = narrow(v);
    } else if (spec.state[c] == 1) {
      constant += v;
    }
  }
  const Integer p = scale(spec.perimeter_weight);
  std::vector<ScaledTerm> terms;
  std::vector<std::vector<std::size_t>> incident(n);
  const Rational zero(0);
  for (FaceId f = 0; f < spec.domain.face_count(); ++f) {
    const bool per = spec.perimeter_faces.contains(f);
    auto ia = spec.face_and.find(f);
    auto io = spec.face_or.find(f);
    const Integer a = ia == spec.face_and.end() ? Integer(0) : scale(ia->second);
    const Integer b = io == spec.face_or.end() ? Integer(0) : scale(io->second);
    if ((!per || p == 0) && a == 0 && b == 0) continue;
    std::array<Integer, 4> t;
    for (int xl = 0; xl < 2; ++xl) {
      for (int xh = 0; xh < 2; ++xh) {
        Integer v = 0;
        if (per && xl != xh) v += p;
        if (xl && xh) v += a;
        if (xl || xh) v += b;
        t[static_cast<std::size_t>(xl * 2 + xh)] = v;
      }
    }
    const auto& cells = spec.domain.face_cells(f);
    auto operand = [&](CellId c) -> std::int64_t {
      if (c == kExterior) return -1;
      if (spec.state[c] < 0) return var_of[c];
      return spec.state[c] == 1 ? -2 : -1;
    };
    ScaledTerm term;
    term.lo = operand(cells[0]);
    term.hi = operand(cells[1]);
    if (term.lo < 0 && term.hi < 0) {
      constant += t[static_cast<std::size_t>((term.lo == -2 ? 2 : 0) + (term.hi == -2 ? 1 : 0))];
      continue;
    }
    for (std::size_t i = 0; i < 4; ++i) term.table[i] = narrow(t[i]);
    if (term.lo >= 0) incident[static_cast<std::size_t>(term.lo)].push_back(terms.size());
    if (term.hi >= 0 && term.hi != term.lo) incident[static_cast<std::size_t>(term.hi)].push_back(terms.size());
    terms.push_back(term);
  }
  if (magnitude + abs(constant) >= limit) throw ExhaustiveCapacityExceeded(n, cap);
  const std::int64_t base = narrow(constant);

  auto bit = [](Mask m, std::int64_t operand) -> std::size_t {
    if (operand == -1) return 0;
    if (operand == -2) return 1;
    return static_cast<std::size_t>((m >> operand) & 1U);
  };
  auto full_value = [&](Mask m) {
    std::int64_t v = base;
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1U) v += unary[i];
    }
    for (const auto& t : terms) v += t.table[bit(m, t.lo) * 2 + bit(m, t.hi)];
    return v;
  };
  auto local = [&](Mask m, std::size_t var) {
    std::int64_t v = ((m >> var) & 1U) ? unary[var] : 0;
    for (std::size_t ti : incident[var]) {
      const auto& t = terms[ti];
      v += t.table[bit(m, t.lo) * 2 + bit(m, t.hi)];
    }
    return v;
  };

  const Mask total = Mask{1} << n;
  const Mask chunk = std::max<Mask>(Mask{1} << 10, total / 256);
  const std::int64_t chunks = static_cast<std::int64_t>((total + chunk - 1) / chunk);
  Tally<std::int64_t> result(n);
#pragma omp parallel
  {
    Tally<std::int64_t> mine(n);
#pragma omp for schedule(dynamic)
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
      const Mask start = static_cast<Mask>(ci) * chunk;
      const Mask stop = std::min(total, start + chunk);
      Mask g = start ^ (start >> 1);
      std::int64_t value = full_value(g);
      mine.offer(static_cast<std::size_t>(std::popcount(g)), value, g);
      for (Mask i = start + 1; i < stop; ++i) {
        const auto var = static_cast<std::size_t>(std::countr_zero(i));
        value -= local(g, var);
        g ^= Mask{1} << var;
        value += local(g, var);
        mine.offer(static_cast<std::size_t>(std::popcount(g)), value, g);
      }
    }
#pragma omp critical
    result.merge(mine);
  }

  std::vector<std::optional<Rational>> by_popcount(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (result.best[k]) by_popcount[k] = Rational(Integer(static_cast<long>(*result.best[k])), d);
  }
  for (auto& v : by_popcount) {
    if (v) v->canonicalize();
  }
  return finish(spec, vars, by_popcount, result.mask);
}

ExhaustiveResult exhaustive_minimize_serial(const EnergySpec& spec, std::size_t cap) {
  const std::vector<CellId> vars = free_cells(spec);
  const std::size_t n = vars.size();
  if (n > cap || n > 62) throw ExhaustiveCapacityExceeded(n, cap);
  Tally<Rational> tally(n);
  for (Mask m = 0; m < (Mask{1} << n); ++m) {
    const Rational v = evaluate_spec(spec, mask_to_cells(spec, vars, m));
    tally.offer(static_cast<std::size_t>(std::popcount(m)), v, m);
  }
  return finish(spec, vars, tally.best, tally.mask);
}

EnergySpec with_volume_term(const EnergySpec& spec, const Rational& lambda) {
  EnergySpec out = spec;
  if (lambda == 0) return out;
  for (CellId c = 0; c < spec.domain.cell_count(); ++c) {
    out.cell[c] += lambda;
    if (out.cell[c] == 0) out.cell.erase(c);
  }
  return out;
}

// ---------------------------------------------------------------- dispatcher

namespace {

bool better(const Rational& va, const CellSet& a, const Rational& vb, const CellSet& b) {
  if (va != vb) return va < vb;
  if (a.volume() != b.volume()) return a.volume() < b.volume();
  return lex_first(a, b);
}

std::vector<CellId> violating_cover(const BinaryEnergy& energy, const SubmodularityReport& report) {
  // Greedy vertex cover of the non-submodular pairs, by incidence count.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : energy.pairs()) {
    if (t.table[1] + t.table[2] - t.table[0] - t.table[3] < 0) edges.emplace_back(t.u, t.v);
  }
  (void)report;
  std::vector<std::uint8_t> chosen(energy.variables().size(), 0);
  for (;;) {
    std::vector<std::size_t> degree(chosen.size(), 0);
    bool open = false;
    for (auto [u, v] : edges) {
      if (chosen[u] || chosen[v]) continue;
      ++degree[u];
      ++degree[v];
      open = true;
    }
    if (!open) break;
    std::size_t best = 0;
    for (std::size_t i = 1; i < degree.size(); ++i) {
      if (degree[i] > degree[best]) best = i;
    }
    chosen[best] = 1;
  }
  std::vector<CellId> out;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (chosen[i]) out.push_back(energy.variables()[i]);
  }
  return out;
}

constexpr std::size_t kCoverCap = 16;

}  // namespace

ExactMinimum exact_minimum(const EnergySpec& spec, bool nonempty, std::size_t cap) {
  const BinaryEnergy energy = build_energy(spec);
  if (nonempty && energy.variables().empty()) {
    throw std::invalid_argument("no free cells: a nonempty minimum does not exist");
  }
  const SubmodularityReport report = check_submodular(energy);
  if (report.submodular) {
    if (nonempty) {
      NonemptyResult r = minimize_nonempty(energy);
      return {std::move(r.minimizer), std::move(r.value), Method::MinCut};
    }
    MinimizeResult r = minimize(energy);
    return {std::move(r.minimizer), std::move(r.value), Method::MinCut};
  }
  const std::size_t n = energy.variables().size();
  if (n <= cap) {
    ExhaustiveResult r = exhaustive_minimize(spec, cap);
    if (nonempty) return {*r.nonempty_minimizer, *r.nonempty_value, Method::Exhaustive};
    return {r.minimizer, r.min_value, Method::Exhaustive};
  }

  const std::vector<CellId> cover = violating_cover(energy, report);
  if (cover.size() > std::min(cap, kCoverCap)) throw ExhaustiveCapacityExceeded(n, cap);
  const std::size_t m = cover.size();
  const std::int64_t count = std::int64_t{1} << m;
  std::vector<std::optional<ExactMinimum>> found(static_cast<std::size_t>(count));
  std::optional<std::string> failure;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t mask = 0; mask < count; ++mask) {
    try {
      EnergySpec fixed = spec;
      for (std::size_t i = 0; i < m; ++i) fixed.state[cover[i]] = static_cast<std::int8_t>((mask >> i) & 1);
      const BinaryEnergy sub = build_energy(fixed);
      if (nonempty && mask == 0) {
        if (sub.variables().empty()) continue;
        NonemptyResult r = minimize_nonempty(sub);
        found[static_cast<std::size_t>(mask)] = ExactMinimum{std::move(r.minimizer), std::move(r.value), Method::Enumeration};
      } else {
        MinimizeResult r = minimize(sub);
        found[static_cast<std::size_t>(mask)] = ExactMinimum{std::move(r.minimizer), std::move(r.value), Method::Enumeration};
      }
    } catch (const std::exception& ex) {
#pragma omp critical
      failure = ex.what();
    }
  }
  if (failure) throw std::logic_error(*failure);
  std::optional<ExactMinimum> best;
  for (auto& f : found) {
    if (f && (!best || better(f->value, f->set, best->value, best->set))) best = std::move(f);
  }
  return std::move(*best);
}

}  // namespace perivar
