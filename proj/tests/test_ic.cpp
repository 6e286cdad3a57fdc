#include "doctest.h"
#include "oracle.hpp"

#include "perivar/ic.hpp"

using namespace perivar;

namespace {

CellSet block(const GridDomain& g, int x0, int y0, int w, int h) {
  CellSet a(g);
  for (int x = x0; x < x0 + w; ++x) {
    for (int y = y0; y < y0 + h; ++y) a.insert(g.cell_index(std::vector<int>{x, y}));
  }
  return a;
}

MeasureData random_measure(std::mt19937_64& rng, const GridDomain& g, const Rational& face_hi, int faces = 6) {
  MeasureData mu(g);
  std::uniform_int_distribution<std::size_t> cell(0, g.cell_count() - 1), face(0, g.face_count() - 1);
  mu.add_cell(cell(rng), oracle::random_weight(rng, 1));
  for (int i = 0; i < faces; ++i) {
    const FaceId f = face(rng);
    const Rational w = oracle::random_weight(rng, face_hi);
    if (mu.face_weight(f) + w <= face_hi) mu.add_face(f, w);
  }
  return mu;
}

/// Brute-force excess over nonempty sets.
Rational brute_excess(const MeasureData& mu, const Rational& c, const GridDomain& g) {
  oracle::Setup s(g);
  s.perimeter_weight = c;
  s.minus = mu;
  const auto t = oracle::enumerate(s);
  Rational best = -t.at(1);
  for (std::size_t m = 1; m < t.size(); ++m) best = std::max(best, Rational(-t.at(m)));
  return best;
}

CellSet notched(const GridDomain& g) {
  CellSet u = block(g, 1, 1, 4, 3);
  u.erase(g.cell_index(std::vector<int>{2, 3}));
  u.erase(g.cell_index(std::vector<int>{3, 3}));
  return u;
}

}  // namespace

TEST_SUITE("ic") {
  TEST_CASE("weight-2 line has excess -2") {
    GridDomain g({4, 4});
    const auto r = strong_excess(hyperplane_measure(g, 1, 2, 2), 1);
    CHECK(r.excess == -2);
    CHECK(mass_on_closure(hyperplane_measure(g, 1, 2, 2), r.witness) - perimeter(r.witness) == -2);
    CHECK(brute_excess(hyperplane_measure(g, 1, 2, 2), 1, g) == -2);
  }

  TEST_CASE("notched block boundary measure") {
    GridDomain g({6, 5});
    const CellSet u = notched(g);
    CHECK(perimeter(u) == 16);
    const MeasureData mu = boundary_measure(u, 1);
    const auto r = strong_excess(mu, 1);
    CHECK(r.excess == 2);
    CHECK(r.witness == block(g, 1, 1, 4, 3));
    const auto d = divergence_certificate(mu, 1);
    CHECK_FALSE(d.feasible());
    REQUIRE(d.infeasible.has_value());
    CHECK(d.infeasible->excess == 2);
  }

  TEST_CASE("zero measure") {
    GridDomain g({4, 4});
    const auto r = strong_excess(MeasureData(g), 1);
    CHECK(r.excess == -4);
    const auto d = divergence_certificate(MeasureData(g), 1);
    REQUIRE(d.feasible());
    for (const auto& f : d.certificate->flux) {
      CHECK(f.lower == 0);
      CHECK(f.upper == 0);
    }
    const auto p = small_volume_profile(MeasureData(g), 1, PlainVariant{}, 5);
    for (const auto& e : p.entries) CHECK(e.phi < 0);
  }

  TEST_CASE("line divergence certificate") {
    GridDomain g({4, 4});
    const MeasureData mu = hyperplane_measure(g, 1, 2, 2);
    const auto d = divergence_certificate(mu, 1);
    REQUIRE(d.feasible());
    CHECK(verify_certificate(*d.certificate, mu));
    for (const auto& f : d.certificate->flux) {
      CHECK(abs(f.lower) <= 1);
      CHECK(abs(f.upper) <= 1);
    }
    // tampering breaks verification
    auto bad = *d.certificate;
    bad.flux[0].lower += 1;
    CHECK_FALSE(verify_certificate(bad, mu));
  }

  TEST_CASE("duality on random measures") {
    std::mt19937_64 rng(73);
    int feasible = 0, infeasible = 0;
    for (int t = 0; t < 100; ++t) {
      GridDomain g(t % 2 ? std::vector<int>{4, 4} : std::vector<int>{3, 5});
      const Rational c = make_rational(1 + t % 3, 2);
      const MeasureData mu = random_measure(rng, g, 2 * c, 10);
      const auto ex = strong_excess(mu, c);
      const auto d = divergence_certificate(mu, c);
      CHECK(d.feasible() == (ex.excess <= 0));
      if (d.feasible()) {
        CHECK(verify_certificate(*d.certificate, mu));
        ++feasible;
      } else {
        REQUIRE(d.infeasible.has_value());
        CHECK(d.infeasible->excess > 0);
        CHECK(mass_on_closure(mu, d.infeasible->witness) - c * perimeter(d.infeasible->witness) ==
              d.infeasible->excess);
        ++infeasible;
      }
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
  }

  TEST_CASE("min-cut excess equals brute force") {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 40; ++t) {
      GridDomain g({4, 4});
      const MeasureData mu = random_measure(rng, g, 2, 8);
      const auto r = strong_excess(mu, 1);
      CHECK(r.method == Method::MinCut);
      CHECK(r.excess == brute_excess(mu, 1, g));
      CHECK(mass_on_closure(mu, r.witness) - perimeter(r.witness) == r.excess);
    }
  }

  TEST_CASE("excess monotone in C and in the measure") {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 30; ++t) {
      GridDomain g({4, 3});
      const MeasureData mu = random_measure(rng, g, 1);
      const MeasureData more = sum(mu, random_measure(rng, g, 1));
      CHECK(strong_excess(mu, 1).excess >= strong_excess(mu, make_rational(3, 2)).excess);
      CHECK(strong_excess(more, 2).excess >= strong_excess(mu, 2).excess);
    }
  }

  TEST_CASE("interior representative never exceeds the closure one") {
    std::mt19937_64 rng(89);
    for (int t = 0; t < 20; ++t) {
      GridDomain g({4, 3});
      const MeasureData mu = random_measure(rng, g, 2, 8);
      const auto plain = small_volume_profile(mu, 1, PlainVariant{}, 6);
      const auto inner = small_volume_profile(mu, 1, InteriorRepVariant{}, 6);
      for (std::size_t i = 0; i < plain.entries.size(); ++i) {
        CHECK(inner.entries[i].phi <= plain.entries[i].phi);
        if (i > 0) CHECK(plain.entries[i].phi >= plain.entries[i - 1].phi);
      }
    }
  }

  TEST_CASE("weight 9/4 line profile on a small grid") {
    GridDomain g({7, 3});
    const auto p = small_volume_profile(hyperplane_measure(g, 1, 1, make_rational(9, 4)), 1, PlainVariant{}, 7);
    REQUIRE(p.entries.size() == 7);
    for (const auto& e : p.entries) {
      CHECK(e.method == ProfileMethod::ExhaustiveExact);
      CHECK(e.phi == e.phi_lower);
    }
    // one cell touching the line
    CHECK(p.entries[0].phi == make_rational(9, 4) - 4);
    // slab along the line: (w - 2)k - 2
    CHECK(p.entries[6].phi == make_rational(7, 4) - 2);
    const auto env = small_volume_profile(hyperplane_measure(g, 1, 1, make_rational(9, 4)), 1, PlainVariant{}, 7, 0, 8);
    for (std::size_t i = 0; i < 7; ++i) {
      CHECK(env.entries[i].phi == p.entries[i].phi);
      CHECK(env.entries[i].phi_lower <= p.entries[i].phi);
    }
  }

  TEST_CASE("envelope profile brackets the exact profile") {
    GridDomain g({5, 5});
    const MeasureData mu = hyperplane_measure(g, 1, 2, 2);
    const auto exact = small_volume_profile(mu, 1, PlainVariant{}, 8);
    const auto env = small_volume_profile(mu, 1, PlainVariant{}, 8, 0, 4);
    for (std::size_t i = 0; i < exact.entries.size(); ++i) {
      CHECK(env.entries[i].method != ProfileMethod::ExhaustiveExact);
      CHECK(env.entries[i].phi_lower <= exact.entries[i].phi);
      CHECK(exact.entries[i].phi <= env.entries[i].phi);
      if (env.entries[i].method == ProfileMethod::EnvelopeExact) CHECK(env.entries[i].phi == exact.entries[i].phi);
    }
  }

  TEST_CASE("variants restrict the test class") {
    GridDomain g({6, 6});
    const MeasureData mu = hyperplane_measure(g, 1, 3, 2);
    const auto ball = strong_excess(mu, 1, AvoidBallVariant{1});
    CHECK((ball.witness & central_box(g, 1)).empty());
    const CellSet omega = block(g, 1, 1, 4, 4);
    const auto rel = strong_excess(mu, 1, RelativeVariant{Region(omega)});
    CHECK(rel.witness.is_subset_of(omega));
    CHECK(variant_name(InteriorRepVariant{}) == "interior_rep");
    CHECK(central_box(g, 0).empty());
    CHECK(central_box(g, 1).volume() == 4);
    CHECK(central_box(g, 2).volume() == 16);
  }

  TEST_CASE("capacity of collinear faces") {
    for (int k = 1; k <= 6; ++k) {
      GridDomain g({k + 2, 3});
      FaceSet faces(g);
      for (int x = 1; x <= k; ++x) faces.insert(g.face_index(1, std::vector<int>{x, 1}));
      const auto r = capacity(faces, CellSet(g));
      CHECK(r.value == 2 * k + 2);
      CHECK(faces.is_subset_of(closure_faces(r.witness)));
      CHECK(perimeter(r.witness) == r.value);
    }
    GridDomain g({4, 4});
    CellSet one(g);
    one.insert(g.cell_index(std::vector<int>{1, 1}));
    CHECK(capacity(FaceSet(g), one).value == 4);
  }

  TEST_CASE("capacity equals brute force") {
    std::mt19937_64 rng(97);
    for (int t = 0; t < 30; ++t) {
      GridDomain g({4, 3});
      FaceSet faces(g);
      std::uniform_int_distribution<std::size_t> face(0, g.face_count() - 1);
      for (int i = 0; i < 3; ++i) faces.insert(face(rng));
      const auto r = capacity(faces, CellSet(g));
      Rational best = -1;
      for (std::size_t m = 1; m < (std::size_t{1} << g.cell_count()); ++m) {
        CellSet a(g);
        for (CellId c = 0; c < g.cell_count(); ++c) {
          if ((m >> c) & 1U) a.insert(c);
        }
        if (!faces.is_subset_of(closure_faces(a))) continue;
        const Rational p = perimeter(a);
        if (best < 0 || p < best) best = p;
      }
      CHECK(r.value == best);
    }
  }

  TEST_CASE("singular sums") {
    GridDomain g({4, 6});
    MeasureData a(g), b(g);
    for (int x = 0; x < 2; ++x) a.add_face(g.face_index(1, std::vector<int>{x, 2}), 2);
    for (int x = 2; x < 4; ++x) b.add_face(g.face_index(1, std::vector<int>{x, 4}), 2);
    const auto r = singular_sum_check(a, b, 1, 6);
    CHECK(r.flagged.empty());
    for (std::size_t i = 0; i < r.sum.entries.size(); ++i) {
      if (r.first.entries[i].phi <= 0 && r.second.entries[i].phi <= 0) CHECK(r.sum.entries[i].phi <= 0);
    }
    const auto z = singular_sum_check(a, MeasureData(g), 1, 6);
    for (std::size_t i = 0; i < z.sum.entries.size(); ++i) CHECK(z.sum.entries[i].phi == z.first.entries[i].phi);
    CHECK_THROWS_AS(singular_sum_check(a, a, 1, 3), std::invalid_argument);
  }
}
