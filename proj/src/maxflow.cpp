#include "perivar/maxflow.hpp"

#include <algorithm>
#include <climits>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perivar {

std::size_t FlowNetwork::add_arc(Node from, Node to, const Integer& capacity) {
  if (from >= node_count_ || to >= node_count_) throw std::invalid_argument("arc endpoint out of range");
  if (from == to) throw std::invalid_argument("self-loops are not allowed");
  if (capacity < 0) throw std::invalid_argument("arc capacity must be nonnegative");
  arcs_.push_back({from, to, capacity, false});
  return arcs_.size() - 1;
}

std::size_t FlowNetwork::add_hard_arc(Node from, Node to) {
  const std::size_t id = add_arc(from, to, 0);
  arcs_[id].hard = true;
  return id;
}

Integer FlowNetwork::hard_capacity() const {
  Integer total = 1;
  for (const auto& a : arcs_) {
    if (!a.hard) total += a.capacity;
  }
  return total;
}

namespace {

inline std::int64_t cap_min(std::int64_t a, std::int64_t b) { return a < b ? a : b; }
inline Integer cap_min(const Integer& a, const Integer& b) { return a < b ? a : b; }

template <class Cap>
class Dinic {
 public:
  Dinic(std::size_t n, const std::vector<FlowNetwork::Arc>& arcs, const std::vector<Cap>& caps)
      : adj_(n), level_(n), it_(n) {
    to_.reserve(arcs.size() * 2);
    res_.reserve(arcs.size() * 2);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      adj_[arcs[i].from].push_back(to_.size());
      to_.push_back(arcs[i].to);
      res_.push_back(caps[i]);
      adj_[arcs[i].to].push_back(to_.size());
      to_.push_back(arcs[i].from);
      res_.push_back(Cap(0));
    }
  }

  Cap run(std::size_t s, std::size_t t, const Cap& infinity) {
    Cap total(0);
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      for (;;) {
        Cap pushed = dfs(s, t, infinity);
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  const Cap& residual(std::size_t edge) const { return res_[edge]; }

  std::vector<std::uint8_t> reachable_from(std::size_t s) const {
    std::vector<std::uint8_t> seen(adj_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t e : adj_[u]) {
        if (res_[e] > 0 && !seen[to_[e]]) {
          seen[to_[e]] = 1;
          stack.push_back(to_[e]);
        }
      }
    }
    return seen;
  }

  /// Nodes from which t is reachable in the residual graph.
  std::vector<std::uint8_t> reaching(std::size_t t) const {
    std::vector<std::uint8_t> seen(adj_.size(), 0);
    std::vector<std::size_t> stack{t};
    seen[t] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      // Edge u->v with residual > 0 is the partner of an edge stored at v.
      for (std::size_t e : adj_[v]) {
        const std::size_t u = to_[e];
        if (res_[e ^ 1] > 0 && !seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    return seen;
  }

 private:
  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t e : adj_[u]) {
        if (res_[e] > 0 && level_[to_[e]] < 0) {
          level_[to_[e]] = level_[u] + 1;
          q.push(to_[e]);
        }
      }
    }
    return level_[t] >= 0;
  }

  Cap dfs(std::size_t u, std::size_t t, const Cap& limit) {
    if (u == t) return limit;
    for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
      const std::size_t e = adj_[u][i];
      const std::size_t v = to_[e];
      if (res_[e] > 0 && level_[v] == level_[u] + 1) {
        Cap pushed = dfs(v, t, cap_min(limit, res_[e]));
        if (pushed > 0) {
          res_[e] -= pushed;
          res_[e ^ 1] += pushed;
          return pushed;
        }
      }
    }
    return Cap(0);
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> to_;
  std::vector<Cap> res_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

template <class Cap>
CutResult solve(const FlowNetwork& net, const std::vector<Cap>& caps, const Cap& infinity) {
  Dinic<Cap> dinic(net.node_count(), net.arcs(), caps);
  const Cap value = dinic.run(FlowNetwork::kSource, FlowNetwork::kSink, infinity);

  CutResult out;
  out.value = Integer(value);
  out.source_side = dinic.reachable_from(FlowNetwork::kSource);
  const auto to_sink = dinic.reaching(FlowNetwork::kSink);
  out.maximal_source_side.resize(net.node_count());
  for (std::size_t v = 0; v < net.node_count(); ++v) out.maximal_source_side[v] = to_sink[v] ? 0 : 1;
  out.flow.reserve(net.arcs().size());
  for (std::size_t i = 0; i < net.arcs().size(); ++i) {
    out.flow.push_back(Integer(caps[i] - dinic.residual(2 * i)));
  }
  return out;
}


void verify(const FlowNetwork& net, const CutResult& r, const Integer& hard) {
  std::vector<Integer> balance(net.node_count(), Integer(0));
  Integer cut = 0;
  for (std::size_t i = 0; i < net.arcs().size(); ++i) {
    const auto& a = net.arcs()[i];
    const Integer cap = a.hard ? hard : a.capacity;
    if (r.flow[i] < 0 || r.flow[i] > cap) throw std::logic_error("max_flow: capacity violated");
    balance[a.from] -= r.flow[i];
    balance[a.to] += r.flow[i];
    if (r.source_side[a.from] && !r.source_side[a.to]) cut += cap;
  }
  for (std::size_t v = 2; v < net.node_count(); ++v) {
    if (balance[v] != 0) throw std::logic_error("max_flow: conservation violated");
  }
  if (balance[FlowNetwork::kSink] != r.value || cut != r.value) {
    throw std::logic_error("max_flow: flow value differs from cut capacity");
  }
}

}  // namespace

CutResult max_flow(const FlowNetwork& network) {
  const Integer hard = network.hard_capacity();
  Integer bound = hard;
  for (const auto& a : network.arcs()) bound += a.hard ? hard : a.capacity;

  CutResult result;
  const Integer limit = Integer(1) << 62;
  if (bound < limit) {
    std::vector<std::int64_t> caps;
    caps.reserve(network.arcs().size());
    for (const auto& a : network.arcs()) caps.push_back((a.hard ? hard : a.capacity).get_si());
    result = solve<std::int64_t>(network, caps, bound.get_si());
    // get_si is exact below 2^62 on LP64
  } else {
    std::vector<Integer> caps;
    caps.reserve(network.arcs().size());
    for (const auto& a : network.arcs()) caps.push_back(a.hard ? hard : a.capacity);
    result = solve<Integer>(network, caps, bound);
  }
  verify(network, result, hard);
  return result;
}

// ---------------------------------------------------------------- energies

namespace {

Integer common_scale(const BinaryEnergy& e) {
  Integer d = 1;
  auto take = [&](const Rational& r) { d = lcm(d, r.get_den()); };
  take(e.constant());
  for (const auto& u : e.unary()) {
    take(u[0]);
    take(u[1]);
  }
  for (const auto& t : e.pairs()) {
    for (const auto& v : t.table) take(v);
  }
  return d;
}

Integer scaled(const Rational& r, const Integer& d) {
  Rational s = r * d;
  return s.get_num();  // exact: d is a multiple of every denominator
}

}  // namespace

EnergyNetwork build_energy_network(const BinaryEnergy& energy) {
  const SubmodularityReport report = check_submodular(energy);
  if (!report.submodular) throw NonSubmodular(report);

  EnergyNetwork out{FlowNetwork(energy.variables().size()), common_scale(energy), 0, {}};
  const Integer& d = out.scale;
  const std::size_t n = energy.variables().size();
  out.var_node.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.var_node[i] = 2 + i;

  out.offset = scaled(energy.constant(), d);
  std::vector<Integer> linear(n, Integer(0));
  for (std::size_t i = 0; i < n; ++i) {
    const Integer u0 = scaled(energy.unary()[i][0], d);
    const Integer u1 = scaled(energy.unary()[i][1], d);
    out.offset += u0;
    linear[i] += u1 - u0;
  }
  // E(xu,xv) = A + (C−A)xu + (D−C)xv + (B+C−A−D)(1−xu)xv with [A,B,C,D] = [00,01,10,11].
  for (const auto& t : energy.pairs()) {
    const Integer a = scaled(t.table[0], d);
    const Integer b = scaled(t.table[1], d);
    const Integer c = scaled(t.table[2], d);
    const Integer dd = scaled(t.table[3], d);
    out.offset += a;
    linear[t.u] += c - a;
    linear[t.v] += dd - c;
    const Integer k = b + c - a - dd;
    if (k > 0) out.network.add_arc(out.var_node[t.v], out.var_node[t.u], k);
  }
  // Source side means "in A": s->v is cut when v is out, v->t when v is in.
  for (std::size_t i = 0; i < n; ++i) {
    if (linear[i] > 0) {
      out.network.add_arc(out.var_node[i], FlowNetwork::kSink, linear[i]);
    } else if (linear[i] < 0) {
      out.offset += linear[i];
      out.network.add_arc(FlowNetwork::kSource, out.var_node[i], -linear[i]);
    }
  }
  return out;
}

namespace {

CellSet side_to_cells(const BinaryEnergy& energy, const EnergyNetwork& en,
                      const std::vector<std::uint8_t>& side) {
  std::vector<std::uint8_t> assignment(energy.variables().size());
  for (std::size_t i = 0; i < assignment.size(); ++i) assignment[i] = side[en.var_node[i]];
  return energy.to_cells(assignment);
}

bool has_free_cell(const BinaryEnergy& energy, const CellSet& a) {
  for (CellId c : energy.variables()) {
    if (a.contains(c)) return true;
  }
  return false;
}

}  // namespace

MinimizeResult minimize(const BinaryEnergy& energy) {
  const EnergyNetwork en = build_energy_network(energy);
  const CutResult cut = max_flow(en.network);
  MinimizeResult r{side_to_cells(energy, en, cut.source_side),
                   side_to_cells(energy, en, cut.maximal_source_side), 0};
  r.value = energy.evaluate(r.minimizer);
  if (r.value * en.scale != Rational(en.offset + cut.value) ||
      energy.evaluate(r.maximal_minimizer) != r.value) {
    throw std::logic_error("minimize: cut value does not reproduce the energy");
  }
  return r;
}

NonemptyResult minimize_nonempty(const BinaryEnergy& energy) {
  const std::size_t n = energy.variables().size();
  if (n == 0) throw std::invalid_argument("no free cells: every admissible set is fixed");
  const EnergyNetwork en = build_energy_network(energy);
  const CutResult base = max_flow(en.network);
  const CellSet minimal = side_to_cells(energy, en, base.source_side);
  if (has_free_cell(energy, minimal)) return {minimal, energy.evaluate(minimal)};
  const CellSet maximal = side_to_cells(energy, en, base.maximal_source_side);
  if (has_free_cell(energy, maximal)) return {maximal, energy.evaluate(maximal)};

  // ∅ is the unique minimizer: force each free cell in turn.
  std::vector<std::optional<Integer>> cut_value(n);
  std::vector<std::vector<std::uint8_t>> sides(n);
  std::optional<std::string> failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      FlowNetwork forced = en.network;
      forced.add_hard_arc(FlowNetwork::kSource, en.var_node[static_cast<std::size_t>(i)]);
      CutResult r = max_flow(forced);
      cut_value[static_cast<std::size_t>(i)] = r.value;
      sides[static_cast<std::size_t>(i)] = std::move(r.source_side);
    } catch (const std::exception& ex) {
#pragma omp critical
      failure = ex.what();
    }
  }
  if (failure) throw std::logic_error(*failure);
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (*cut_value[i] < *cut_value[best]) best = i;
  }
  CellSet set = side_to_cells(energy, en, sides[best]);
  Rational value = energy.evaluate(set);
  if (value * en.scale != Rational(en.offset + *cut_value[best])) {
    throw std::logic_error("minimize_nonempty: cut value does not reproduce the energy");
  }
  return {std::move(set), std::move(value)};
}

// ---------------------------------------------------------------- envelopes

namespace {

struct Line {
  CellSet set;
  Rational base;
  std::size_t volume;
  Rational at(const Rational& lambda) const { return base + lambda * static_cast<unsigned long>(volume); }
};

void refine(const LagrangianOracle& oracle, const Rational& la, const Line& a, const Rational& lb,
            const Line& b, std::vector<std::pair<Rational, Line>>& breaks) {
  if (a.volume <= b.volume) return;  // parallel or identical lines
  const Rational lambda =
      (b.base - a.base) / Rational(static_cast<unsigned long>(a.volume - b.volume));
  if (lambda <= la || lambda >= lb) {
    // Intersection at an endpoint: the switch happens exactly there.
    breaks.emplace_back(lambda <= la ? la : lb, b);
    return;
  }
  auto [set, base] = oracle(lambda);
  Line mid{std::move(set), std::move(base), 0};
  mid.volume = mid.set.volume();
  if (mid.at(lambda) == a.at(lambda)) {
    breaks.emplace_back(lambda, b);
    return;
  }
  if (mid.at(lambda) > a.at(lambda)) throw std::logic_error("lower_envelope: oracle is not optimal");
  refine(oracle, la, a, lambda, mid, breaks);
  refine(oracle, lambda, mid, lb, b, breaks);
}

}  // namespace

std::vector<EnvelopePoint> lower_envelope(const LagrangianOracle& oracle, const Rational& lo,
                                          const Rational& hi) {
  if (hi < lo) throw std::invalid_argument("empty λ range");
  auto [set_lo, base_lo] = oracle(lo);
  Line a{std::move(set_lo), std::move(base_lo), 0};
  a.volume = a.set.volume();
  auto [set_hi, base_hi] = oracle(hi);
  Line b{std::move(set_hi), std::move(base_hi), 0};
  b.volume = b.set.volume();

  std::vector<std::pair<Rational, Line>> breaks;
  refine(oracle, lo, a, hi, b, breaks);

  std::vector<EnvelopePoint> out;
  out.push_back({lo, a.set, a.base});
  for (auto& [lambda, line] : breaks) {
    if (lambda == out.back().lambda) {
      out.back() = {lambda, line.set, line.base};
    } else {
      out.push_back({lambda, line.set, line.base});
    }
  }
  return out;
}

std::vector<SweepEntry> parametric_sweep(const BinaryEnergy& energy, const Rational& lo, const Rational& hi) {
  const SubmodularityReport report = check_submodular(energy);
  if (!report.submodular) throw NonSubmodular(report);
  LagrangianOracle oracle = [&](const Rational& lambda) {
    MinimizeResult r = minimize(energy.with_volume_term(lambda));
    Rational base = r.value - lambda * static_cast<unsigned long>(r.minimizer.volume());
    return std::make_pair(std::move(r.minimizer), std::move(base));
  };
  const auto points = lower_envelope(oracle, lo, hi);
  std::vector<SweepEntry> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (!out.empty() && !p.set.is_subset_of(out.back().minimizer)) {
      throw std::logic_error("parametric_sweep: minimizers are not nested");
    }
    out.push_back({p.lambda, p.set, p.base_value + p.lambda * static_cast<unsigned long>(p.set.volume())});
  }
  return out;
}

}  // namespace perivar
