#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fixtures.hpp"
#include "lps/closure.hpp"
#include "lps/dnf.hpp"
#include "lps/element_set.hpp"
#include "lps/neighborhoods.hpp"
#include "lps/rng.hpp"
#include "lps/structuring.hpp"
#include "oracles.hpp"

using namespace lps;
using fixtures::A;
using fixtures::B;
using fixtures::C;
using fixtures::D;
using fixtures::set4;

namespace {

// Reference fixpoint: iterate the single-step operator.
ElementSet closure_by_iteration(const NeighborhoodFamily& f, const Dnf& q, ElementSet a) {
  for (;;) {
    ElementSet next = pseudo_closure_dnf(f, q, a);
    if (next == a) return a;
    a = std::move(next);
  }
}

ElementSet closure_by_iteration(const NeighborhoodFamily& f, const WeightVector& w,
                                ElementSet a) {
  for (;;) {
    ElementSet next = pseudo_closure_weighted(f, w, a);
    if (next == a) return a;
    a = std::move(next);
  }
}

}  // namespace

TEST_CASE("element sets behave as packed subsets") {
  ElementSet s(70);
  CHECK(s.empty());
  s.insert(3);
  s.insert(69);
  CHECK(s.contains(3));
  CHECK(s.contains(69));
  CHECK_FALSE(s.contains(4));
  CHECK(s.count() == 2);
  CHECK(s.min() == 3);
  CHECK(s.members() == std::vector<std::size_t>{3, 69});
  s.erase(3);
  CHECK_FALSE(s.contains(3));
  CHECK_THROWS_AS(s.contains(70), invalid_argument_error);
  CHECK_THROWS_AS(ElementSet(4).min(), invalid_argument_error);

  ElementSet a = set4({A, B});
  ElementSet b = set4({B, C});
  CHECK((a | b) == set4({A, B, C}));
  CHECK((a & b) == set4({B}));
  CHECK((a - b) == set4({A}));
  CHECK(a.intersects(b));
  CHECK_FALSE(set4({A}).intersects(set4({C})));
  CHECK(set4({B}).is_subset_of(a));
  CHECK_FALSE(a.is_subset_of(b));
  CHECK(ElementSet::full(4) == set4({A, B, C, D}));
  CHECK_THROWS_AS(a.intersects(ElementSet(5)), invalid_argument_error);
}

TEST_CASE("element set ordering is ascending bitmask") {
  // {b} < {b,c} < {b,d} < {b,c,d}: the instance-listing order.
  CHECK(set4({B}) < set4({B, C}));
  CHECK(set4({B, C}) < set4({B, D}));
  CHECK(set4({B, D}) < set4({B, C, D}));
  CHECK_FALSE(set4({B}) < set4({B}));
}

TEST_CASE("universe labels are display-only and unique") {
  Universe u(3);
  CHECK(u.size() == 3);
  CHECK(u.label(2) == "2");
  CHECK_THROWS_AS(u.label(3), invalid_argument_error);
  CHECK_THROWS_AS(Universe(0), invalid_argument_error);
  CHECK_THROWS_AS(Universe(std::vector<std::string>{"x", "x"}), invalid_argument_error);
}

TEST_CASE("clauses and DNFs enforce well-formedness") {
  CHECK_THROWS_AS(Clause(std::vector<std::uint16_t>{}), model_error);
  CHECK_THROWS_AS(Clause({0, 1}), model_error);
  CHECK(Clause({2, 1, 2}).indices() == std::vector<std::uint16_t>{1, 2});

  // Duplicates collapse.
  CHECK(Dnf({Clause({1}), Clause({1})}) == Dnf({Clause({1})}));
  // A clause subsumed by its strict subset disappears.
  CHECK(Dnf({Clause({1, 2}), Clause({1})}) == Dnf({Clause({1})}));
  // The five-subset example simplifies to two clauses.
  Dnf five({Clause({1, 2}), Clause({1, 3}), Clause({2, 3}), Clause({3}),
            Clause({1, 2, 3})});
  CHECK(five == Dnf({Clause({1, 2}), Clause({3})}));
  CHECK(to_string(five) == "(q1 & q2) | q3");
  // Equal clauses are kept once even though each subsumes the other.
  CHECK(simplify_dnf({Clause({2, 1}), Clause({1, 2})}).size() == 1);
}

TEST_CASE("DNF text round-trips through the grammar") {
  CHECK(parse_dnf("(q1 & q2) | q3") == Dnf({Clause({1, 2}), Clause({3})}));
  CHECK(parse_dnf("q1|q2") == Dnf({Clause({1}), Clause({2})}));
  CHECK(parse_dnf("  q7  ") == Dnf({Clause({7})}));
  CHECK(parse_dnf("(q4)") == Dnf({Clause({4})}));
  CHECK(parse_dnf("false").empty());
  CHECK(to_string(Dnf()) == "false");
  CHECK(parse_dnf(to_string(Dnf())) == Dnf());

  for (const char* text : {"(q1 & q2) | q3", "q4 | q6 | q7", "false",
                           "q3 | q5 | (q2 & q4) | (q4 & q7) | (q6 & q7 & q8)"}) {
    Dnf q = parse_dnf(text);
    CHECK(parse_dnf(to_string(q)) == q);
  }

  CHECK_THROWS_AS(parse_dnf("q0 | q1"), parse_error);
  CHECK_THROWS_AS(parse_dnf("q1 |"), parse_error);
  CHECK_THROWS_AS(parse_dnf("(q1 & )"), parse_error);
  CHECK_THROWS_AS(parse_dnf("(q1 | q2)"), parse_error);
  CHECK_THROWS_AS(parse_dnf(""), parse_error);
  CHECK_THROWS_AS(parse_dnf("q1 q2"), parse_error);
  CHECK_THROWS_AS(parse_dnf("true"), parse_error);
  CHECK_THROWS_AS(parse_dnf("q1 & q2 | q3"), parse_error);

  try {
    parse_dnf("q1 |\n| q2");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("weight vectors enforce the V-type constraints") {
  CHECK_NOTHROW(WeightVector(1.0, {0.5, 0.5, 1.0, 0.0}));
  CHECK_THROWS_AS(WeightVector(0.0, {1.0}), model_error);
  CHECK_THROWS_AS(WeightVector(1.0, {0.4, 0.5}), model_error);  // sum below threshold
  CHECK_THROWS_AS(WeightVector(1.0, {-0.1, 2.0}), model_error);

  WeightVector w(1.0, {0.5, 0.25, 0.25});
  CHECK(w.weight(1) == 0.5);
  CHECK_THROWS_AS(w.weight(0), invalid_argument_error);
  CHECK_THROWS_AS(w.weight(4), invalid_argument_error);
  WeightVector back = parse_weight_vector(to_string(w));
  CHECK(back.w0() == w.w0());
  CHECK(back.weights() == w.weights());
  CHECK_THROWS_AS(parse_weight_vector("1.0 0.5 oops"), parse_error);
  CHECK_THROWS_AS(parse_weight_vector("1.0"), parse_error);
}

TEST_CASE("predicate evaluation matches the neighborhood intersections") {
  auto fam = fixtures::four_element_family();
  CHECK(predicate_eval(fam, 3, set4({B}), C));        // V3(c)={b,c} meets {b}
  CHECK_FALSE(predicate_eval(fam, 2, set4({B}), D));  // V2(d)={c,d} misses {b}
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t x = 0; x < 4; ++x) CHECK_FALSE(predicate_eval(fam, i, ElementSet(4), x));
  CHECK_THROWS_AS(predicate_eval(fam, 0, set4({B}), C), invalid_argument_error);
  CHECK_THROWS_AS(predicate_eval(fam, 5, set4({B}), C), invalid_argument_error);
}

TEST_CASE("single-step operators match the worked propagations") {
  auto fam = fixtures::four_element_family();
  Dnf q1 = fixtures::target_q1();

  CHECK(pseudo_closure_dnf(fam, q1, set4({A})) == set4({A, B}));
  CHECK(pseudo_closure_dnf(fam, q1, set4({B, C})) == set4({B, C, D}));
  CHECK(pseudo_closure_dnf(fam, Dnf(), set4({A, C})) == set4({A, C}));

  WeightVector w(1.0, {0.5, 0.5, 1.0, 0.0});
  CHECK(pseudo_closure_weighted(fam, w, set4({A})) == set4({A, B}));
  CHECK(pseudo_closure_weighted(fam, w, set4({D})) == set4({D}));

  CHECK_THROWS_AS(pseudo_closure_weighted(fam, WeightVector(1.0, {1.0}), set4({A})),
                  invalid_argument_error);
  CHECK_THROWS_AS(pseudo_closure_dnf(fam, parse_dnf("q5"), set4({A})),
                  invalid_argument_error);
}

TEST_CASE("closures reach the fixpoint") {
  auto fam = fixtures::four_element_family();
  CHECK(closure(fam, fixtures::target_q1(), set4({A})) == set4({A, B, C, D}));
  CHECK(closure(fam, fixtures::target_q2(), set4({C})) == set4({C}));

  ElementSet closed = closure(fam, fixtures::target_q1(), set4({B}));
  CHECK(pseudo_closure_dnf(fam, fixtures::target_q1(), closed) == closed);
}

TEST_CASE("elementary closures reproduce both target structurings") {
  auto fam = fixtures::four_element_family();
  CHECK(elementary_closures(fam, fixtures::target_q1()) == fixtures::s_star_1());
  CHECK(elementary_closures(fam, fixtures::target_q2()) == fixtures::s_star_2());
  CHECK(elementary_closures(fam, Dnf()) == fixtures::identity_structuring(4));
}

TEST_CASE("weights_to_dnf enumerates threshold-clearing subsets") {
  CHECK(weights_to_dnf(WeightVector(1.0, {0.5, 0.5, 1.0})) ==
        Dnf({Clause({1, 2}), Clause({3})}));
  CHECK(weights_to_dnf(WeightVector(1.0, {1.0, 1.0, 1.0})) ==
        Dnf({Clause({1}), Clause({2}), Clause({3})}));
  CHECK(weights_to_dnf(WeightVector(1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3})) ==
        Dnf({Clause({1, 2, 3})}));
  CHECK_THROWS_AS(weights_to_dnf(WeightVector(1.0, std::vector<double>(21, 1.0))),
                  size_error);
  // Raising the cap admits larger k; here only the full subset clears.
  std::vector<std::uint16_t> everything;
  for (std::uint16_t i = 1; i <= 21; ++i) everything.push_back(i);
  CHECK(weights_to_dnf(WeightVector(21.0, std::vector<double>(21, 1.0)), 21) ==
        Dnf({Clause(everything)}));
  // All subsets qualify when any single weight clears the threshold;
  // only the singletons should come back even at width 21.
  Dnf all_singles = weights_to_dnf(WeightVector(1.0, std::vector<double>(21, 1.0)), 21);
  CHECK(all_singles.size() == 21);
  for (const Clause& c : all_singles.clauses()) CHECK(c.size() == 1);
}

TEST_CASE("neighborhood files round-trip and default to reflexive singletons") {
  const char* text =
      "4 4\n"
      "V1 0: 0 1\nV1 1: 0 1\nV1 3: 1 3\n"
      "V2 1: 0 1 2\nV2 3: 2 3\n"
      "V3 2: 1 2\nV3 3: 2 3\n"
      "V4 0: 0 1\nV4 1: 1 2\nV4 2: 1 2\n";
  NeighborhoodFamily parsed = parse_neighborhood_family(text);
  auto fam = fixtures::four_element_family();
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t x = 0; x < 4; ++x)
      CHECK(parsed.neighborhood(i, x) == fam.neighborhood(i, x));

  std::ostringstream out;
  write_neighborhood_family(out, parsed);
  NeighborhoodFamily again = parse_neighborhood_family(out.str());
  for (std::size_t i = 1; i <= 4; ++i)
    for (std::size_t x = 0; x < 4; ++x)
      CHECK(again.neighborhood(i, x) == fam.neighborhood(i, x));

  // Omitted pairs stay {x}; the y list need not repeat x.
  NeighborhoodFamily sparse = parse_neighborhood_family("2 3\nV2 0: 1\n");
  CHECK(sparse.neighborhood(1, 0) == ElementSet::singleton(3, 0));
  CHECK(sparse.neighborhood(2, 0) == ElementSet::of(3, {0, 1}));

  CHECK_THROWS_AS(parse_neighborhood_family(""), parse_error);
  CHECK_THROWS_AS(parse_neighborhood_family("0 4\n"), parse_error);
  CHECK_THROWS_AS(parse_neighborhood_family("2 3\nV3 0: 1\n"), parse_error);
  CHECK_THROWS_AS(parse_neighborhood_family("2 3\nV1 0: 7\n"), parse_error);
  CHECK_THROWS_AS(parse_neighborhood_family("2 3\nW1 0: 1\n"), parse_error);
  CHECK_THROWS_AS(parse_neighborhood_family("2 3\nV1 0 1\n"), parse_error);
}

TEST_CASE("reverse adjacency inverts the neighborhoods") {
  auto fam = fixtures::four_element_family();
  for (std::size_t i = 1; i <= fam.k(); ++i)
    for (std::size_t y = 0; y < fam.n(); ++y)
      for (std::size_t x = 0; x < fam.n(); ++x) {
        bool listed = false;
        for (auto s : fam.sources(i, y)) listed |= (s == x);
        CHECK(listed == fam.neighborhood(i, x).contains(y));
      }
}

TEST_CASE("structurings hold domains and round-trip as text") {
  Structuring s(4);
  CHECK(s.domain_size() == 0);
  s.set(B, set4({B, C}));
  CHECK(s.has(B));
  CHECK_FALSE(s.has(A));
  CHECK(s.domain() == std::vector<std::size_t>{B});
  CHECK_THROWS_AS(s.closure_of(A), invalid_argument_error);
  CHECK_THROWS_AS(s.set(A, set4({B})), invalid_argument_error);   // a not in its closure
  CHECK_THROWS_AS(s.set(9, set4({B})), invalid_argument_error);
  CHECK_THROWS_AS(s.set(A, ElementSet::of(5, {0})), invalid_argument_error);

  Structuring full = fixtures::s_star_1();
  std::ostringstream out;
  write_structuring(out, full);
  CHECK(out.str() == "0: 0 1 2 3\n1: 1 2 3\n2: 2 3\n3: 3\n");
  CHECK(parse_structuring(out.str(), 4) == full);

  Structuring partial = fixtures::coverage_worked_target();
  CHECK(parse_structuring(to_string(partial), 4) == partial);

  CHECK_THROWS_AS(parse_structuring("99: 99\n", 4), invalid_argument_error);
  CHECK_THROWS_AS(parse_structuring("0: 99\n", 4), invalid_argument_error);
  CHECK_THROWS_AS(parse_structuring("0 1 2\n", 4), parse_error);
}

TEST_CASE("random operators satisfy growth, isotony, and fixpoint laws") {
  Rng rng(20260817);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const std::size_t k = 1 + rng.index(5);
    auto fam = oracles::random_family(rng, k, n, 0.25);
    Dnf q = oracles::random_dnf(rng, k, 3, 3);

    const std::uint32_t all = static_cast<std::uint32_t>(1u << n);
    ElementSet a = oracles::set_from_mask(n, static_cast<std::uint32_t>(rng.below(all)));
    ElementSet b = a | oracles::set_from_mask(n, static_cast<std::uint32_t>(rng.below(all)));

    // Growth.
    CHECK(a.is_subset_of(pseudo_closure_dnf(fam, q, a)));
    // Isotony of the single step and of the closure.
    CHECK(pseudo_closure_dnf(fam, q, a).is_subset_of(pseudo_closure_dnf(fam, q, b)));
    CHECK(closure(fam, q, a).is_subset_of(closure(fam, q, b)));
    // Fixpoint idempotence.
    ElementSet f = closure(fam, q, a);
    CHECK(closure(fam, q, f) == f);
    CHECK(pseudo_closure_dnf(fam, q, f) == f);
    // Monotone predicates.
    for (std::size_t i = 1; i <= k; ++i)
      for (std::size_t x = 0; x < n; ++x)
        if (predicate_eval(fam, i, a, x)) CHECK(predicate_eval(fam, i, b, x));
    // Engine closure equals iterated single-step closure.
    CHECK(f == closure_by_iteration(fam, q, a));

    auto w = oracles::random_weights(rng, k);
    CHECK(a.is_subset_of(pseudo_closure_weighted(fam, w, a)));
    CHECK(closure(fam, w, a) == closure_by_iteration(fam, w, a));
  }
}

TEST_CASE("weight and DNF operators agree after conversion") {
  Rng rng(7241);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const std::size_t k = 1 + rng.index(6);
    auto fam = oracles::random_family(rng, k, n, 0.3);
    auto w = oracles::random_weights(rng, k);
    Dnf q = weights_to_dnf(w);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      ElementSet a = oracles::set_from_mask(n, mask);
      CHECK(pseudo_closure_weighted(fam, w, a) == pseudo_closure_dnf(fam, q, a));
    }
  }
}

TEST_CASE("simplification never changes the evaluated function") {
  Rng rng(99173);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.index(7);
    const std::size_t k = 1 + rng.index(5);
    auto fam = oracles::random_family(rng, k, n, 0.3);

    // Raw clause list with deliberate duplicates and subsumptions.
    std::vector<Clause> raw;
    const std::size_t count = 1 + rng.index(4);
    for (std::size_t c = 0; c < count; ++c) {
      Clause base = oracles::random_clause(rng, k, 3);
      raw.push_back(base);
      if (rng.chance(0.5)) raw.push_back(base);  // duplicate
      if (rng.chance(0.5) && base.size() < k) {
        auto wide = base.indices();
        for (std::uint16_t i = 1; i <= k; ++i)
          if (std::find(wide.begin(), wide.end(), i) == wide.end()) {
            wide.push_back(i);  // strict superset: subsumed
            break;
          }
        raw.push_back(Clause(wide));
      }
    }
    Dnf simplified = simplify_dnf(raw);

    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      ElementSet a = oracles::set_from_mask(n, mask);
      for (std::size_t x = 0; x < n; ++x) {
        bool raw_fires = false;
        for (const Clause& c : raw) {
          bool all = true;
          for (std::uint16_t i : c.indices())
            if (!predicate_eval(fam, i, a, x)) {
              all = false;
              break;
            }
          if (all) {
            raw_fires = true;
            break;
          }
        }
        CHECK(raw_fires == oracles::instance_fires(fam, simplified, a, x));
      }
    }
  }
}

TEST_CASE("rng primitives are deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.below(10) < 10);
    double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK_THROWS_AS(r.below(0), invalid_argument_error);
  CHECK(derive_seed(1, "x", 2) == derive_seed(1, "x", 2));
  CHECK(derive_seed(1, "x", 2) != derive_seed(1, "x", 3));
  CHECK(derive_seed(1, "ab") != derive_seed(1, "a", "b"));
}
