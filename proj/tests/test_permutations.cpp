#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cartan/matrices.hpp"
#include "cartan/permutations.hpp"
#include "oracles.hpp"

using namespace cartan;

namespace {

TriplePermutation random_perm(Params p, std::mt19937& rng) {
  std::vector<std::uint32_t> img(p.points());
  std::iota(img.begin(), img.end(), 0u);
  std::shuffle(img.begin(), img.end(), rng);
  return TriplePermutation(p, img);
}

std::vector<TriplePermutation> all_perms(Params p) {
  std::vector<std::uint32_t> img(p.points());
  std::iota(img.begin(), img.end(), 0u);
  std::vector<TriplePermutation> out;
  do out.emplace_back(p, img);
  while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::uint64_t fact(std::uint64_t k) { return k <= 1 ? 1 : k * fact(k - 1); }

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

NatMatrix M(std::vector<std::vector<Entry>> rows) { return NatMatrix::from_rows(rows); }

}  // namespace

TEST_CASE("Params and flat indexing") {
  CHECK_THROWS_AS(Params(0, 1, 1), PreconditionError);
  CHECK_THROWS_AS(Params(1, 1, 0), PreconditionError);
  const Params p(2, 3, 2);
  CHECK(p.points() == 12);
  CHECK(p.flat(1, 2, 1) == 11);
  CHECK(p.flat(0, 1, 0) == 2);
  for (std::size_t f = 0; f < p.points(); ++f) {
    const auto t = p.triple(f);
    CHECK(p.flat(t.i, t.j, t.k) == f);
  }
  CHECK(p.margin_spec() == MarginSpec(4, 3, 6, 2));
}

TEST_CASE("TriplePermutation validates bijections") {
  const Params p(2, 2, 1);
  CHECK_THROWS_AS(TriplePermutation(p, {0, 1, 2}), PreconditionError);
  CHECK_THROWS_AS(TriplePermutation(p, {0, 1, 1, 3}), PreconditionError);
  CHECK_THROWS_AS(TriplePermutation(p, {0, 1, 2, 4}), PreconditionError);
  CHECK(TriplePermutation::identity(p).is_identity());
  CHECK_THROWS_AS(TriplePermutation::flip(Params(2, 3, 1)), PreconditionError);
}

TEST_CASE("compose and invert") {
  const Params p(2, 2, 1);
  const TriplePermutation s(p, {1, 2, 3, 0});
  const TriplePermutation t(p, {1, 0, 2, 3});
  CHECK(compose(s, invert(s)).is_identity());
  CHECK(compose(invert(s), s).is_identity());
  CHECK(invert(TriplePermutation::identity(p)).is_identity());
  const auto nu = TriplePermutation::flip(p);
  CHECK(compose(nu, nu).is_identity());
  // t first, then s: 0 -> 1 -> 2.
  CHECK(compose(s, t)(0) == 2);
  CHECK(compose(t, s)(0) == 0);
  CHECK_THROWS_AS(compose(s, TriplePermutation::identity(Params(1, 4, 1))), PreconditionError);
}

TEST_CASE("reduced_matrix examples") {
  const Params p(2, 2, 1);
  CHECK(reduced_matrix(TriplePermutation::identity(p)) == M({{1, 1}, {1, 1}}));
  CHECK(reduced_matrix(TriplePermutation::flip(p)) == M({{2, 0}, {0, 2}}));
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto a = reduced_matrix(TriplePermutation::identity(Params(m, n, 1)));
      CHECK(a.rows() == m);
      CHECK(a.cols() == n);
      CHECK(std::all_of(a.entries().begin(), a.entries().end(), [](Entry v) { return v == 1; }));
    }
}

TEST_CASE("reduced matrices satisfy the margin law") {
  std::mt19937 rng(5);
  for (auto p : {Params(2, 2, 1), Params(2, 3, 1), Params(3, 2, 2), Params(2, 2, 3), Params(1, 4, 2), Params(3, 3, 3)})
    for (int t = 0; t < 200; ++t) CHECK(p.margin_spec().contains(reduced_matrix(random_perm(p, rng))));
}

TEST_CASE("lift_matrix round trips every matrix") {
  for (auto p : {Params(2, 2, 1), Params(2, 3, 1), Params(3, 2, 1), Params(2, 2, 2), Params(3, 3, 1), Params(1, 3, 2),
                 Params(2, 1, 3), Params(2, 2, 3), Params(2, 4, 1), Params(3, 2, 2)}) {
    CAPTURE(p.m, p.n, p.o);
    std::size_t count = 0;
    enumerate_margin_matrices(p.margin_spec(), [&](const NatMatrix& a) {
      ++count;
      CHECK(reduced_matrix(lift_matrix(a, p)) == a);
    });
    CHECK(count > 0);
  }
  CHECK(reduced_matrix(lift_matrix(M({{1, 1}, {1, 1}}), Params(2, 2, 1))) == M({{1, 1}, {1, 1}}));
  CHECK(reduced_matrix(lift_matrix(M({{2, 0}, {0, 2}}), Params(2, 2, 1))) == M({{2, 0}, {0, 2}}));
  CHECK(reduced_matrix(lift_matrix(M({{1, 1}, {1, 1}, {1, 1}}), Params(3, 2, 1))) == M({{1, 1}, {1, 1}, {1, 1}}));
  CHECK_THROWS_AS(lift_matrix(M({{1, 1}, {1, 0}}), Params(2, 2, 1)), PreconditionError);
  CHECK_THROWS_AS(lift_matrix(M({{1, 1, 1}}), Params(2, 2, 1)), PreconditionError);
}

TEST_CASE("lift_matrix is deterministic") {
  // Block construction on [[2,0],[0,2]]: both sources of column fibre j'=0 go to row fibre i=0.
  const auto s = lift_matrix(M({{2, 0}, {0, 2}}), Params(2, 2, 1));
  CHECK(s.images() == std::vector<std::uint32_t>{0, 2, 1, 3});
  CHECK(lift_matrix(M({{1, 1}, {1, 1}}), Params(2, 2, 1)).is_identity());
}

TEST_CASE("flip_conjugate") {
  const Params p(2, 2, 1);
  const auto nu = TriplePermutation::flip(p);
  CHECK(flip_conjugate(TriplePermutation::identity(p)).is_identity());
  CHECK(flip_conjugate(nu) == nu);
  CHECK_THROWS_AS(flip_conjugate(TriplePermutation::identity(Params(2, 3, 1))), PreconditionError);

  SECTION("transpose law, exhaustive on 2x2x1") {
    for (const auto& s : all_perms(p)) CHECK(reduced_matrix(flip_conjugate(s)) == reduced_matrix(s).transposed());
  }
  SECTION("transpose law, sampled with o > 1 and m = n = 3") {
    std::mt19937 rng(17);
    for (auto q : {Params(3, 3, 1), Params(2, 2, 2), Params(2, 2, 3)})
      for (int t = 0; t < 100; ++t) {
        const auto s = random_perm(q, rng);
        CHECK(reduced_matrix(flip_conjugate(s)) == reduced_matrix(s).transposed());
        CHECK(flip_conjugate(flip_conjugate(s)) == s);
      }
  }
}

TEST_CASE("wreath_generators generate subgroups of the expected order") {
  CHECK(oracle::closure(wreath_generators(Params(2, 2, 1), WreathSide::Left)).size() == 8);
  CHECK(oracle::closure(wreath_generators(Params(2, 2, 1), WreathSide::Right)).size() == 8);
  for (auto side : {WreathSide::Left, WreathSide::Right}) {
    const auto gens = wreath_generators(Params(1, 1, 1), side);
    REQUIRE(gens.size() == 1);
    CHECK(gens[0].is_identity());
  }
  for (auto p : {Params(2, 3, 1), Params(3, 2, 1), Params(2, 2, 2), Params(1, 2, 3), Params(3, 1, 2), Params(1, 1, 4)}) {
    CAPTURE(p.m, p.n, p.o);
    const auto left = wreath_generators(p, WreathSide::Left);
    const auto right = wreath_generators(p, WreathSide::Right);
    CHECK(left.size() <= 2 * p.points());
    CHECK(right.size() <= 2 * p.points());
    CHECK(oracle::closure(left).size() == fact(p.m * p.o) * ipow(fact(p.n), p.m * p.o));
    CHECK(oracle::closure(right).size() == fact(p.n * p.o) * ipow(fact(p.m), p.n * p.o));
  }
}

TEST_CASE("wreath generators respect their fibres") {
  const Params p(2, 3, 2);
  for (const auto& g : wreath_generators(p, WreathSide::Left)) {
    // The (i, k) fibre of g(x) depends only on the (i, k) fibre of x.
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> fibre;
    for (std::size_t f = 0; f < p.points(); ++f) {
      const auto s = p.triple(f), t = p.triple(g(f));
      const auto [it, fresh] = fibre.emplace(std::pair{s.i, s.k}, std::pair{t.i, t.k});
      if (!fresh) CHECK(it->second == std::pair{t.i, t.k});
    }
  }
  for (const auto& h : wreath_generators(p, WreathSide::Right)) {
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>> fibre;
    for (std::size_t f = 0; f < p.points(); ++f) {
      const auto s = p.triple(f), t = p.triple(h(f));
      const auto [it, fresh] = fibre.emplace(std::pair{s.j, s.k}, std::pair{t.j, t.k});
      if (!fresh) CHECK(it->second == std::pair{t.j, t.k});
    }
  }
}

TEST_CASE("reduced matrices are congruent along double cosets") {
  std::mt19937 rng(23);
  for (auto p : {Params(2, 2, 1), Params(2, 3, 1), Params(2, 2, 2), Params(3, 2, 1)}) {
    const auto left = oracle::closure(wreath_generators(p, WreathSide::Left));
    const auto right = oracle::closure(wreath_generators(p, WreathSide::Right));
    const std::vector<oracle::Images> lv(left.begin(), left.end()), rv(right.begin(), right.end());
    std::uniform_int_distribution<std::size_t> pl(0, lv.size() - 1), pr(0, rv.size() - 1);
    for (int t = 0; t < 100; ++t) {
      const auto s = random_perm(p, rng);
      const auto moved = compose(TriplePermutation(p, lv[pl(rng)]), compose(s, TriplePermutation(p, rv[pr(rng)])));
      CHECK(canonical_form(reduced_matrix(moved), false) == canonical_form(reduced_matrix(s), false));
    }
  }
}

TEST_CASE("double_coset_classes examples") {
  const Params p(2, 2, 1);
  CHECK(double_coset_classes(p, true).count() == 2);
  // Without the flip, [[0,2],[2,0]] and [[2,0],[0,2]] still differ only by a row
  // swap, so the double cosets number 2. The count 3 belongs to the one-sided
  // quotient Sym(4) / H.
  CHECK(double_coset_classes(p, false).count() == 2);
  CHECK(one_sided_coset_count(p, WreathSide::Right) == 3);
  CHECK(one_sided_coset_count(p, WreathSide::Left) == 3);
  CHECK(double_coset_classes(Params(2, 3, 1), false).count() == 2);
  CHECK(double_coset_classes(Params(2, 3, 1), true).count() == 2);
  CHECK_FALSE(double_coset_classes(Params(2, 3, 1), true).flip_identified);
  CHECK(double_coset_classes(Params(1, 1, 1), false).count() == 1);
}

TEST_CASE("double cosets partition the symmetric group with lex-least representatives") {
  for (auto p : {Params(2, 2, 1), Params(2, 3, 1), Params(2, 2, 2), Params(1, 3, 2)})
    for (bool flip : {false, true}) {
      CAPTURE(p.m, p.n, p.o, flip);
      const auto res = double_coset_classes(p, flip);
      std::uint64_t total = 0;
      for (const auto& c : res.classes) total += c.size;
      CHECK(total == fact(p.points()));
      CHECK(res.classes.front().representative.is_identity());
      for (std::size_t k = 1; k < res.classes.size(); ++k)
        CHECK(res.classes[k - 1].representative < res.classes[k].representative);
    }
  // Each representative is the least element of its class on 2x2x1.
  const Params p(2, 2, 1);
  const auto res = double_coset_classes(p, false);
  const auto left = oracle::closure(wreath_generators(p, WreathSide::Left));
  const auto right = oracle::closure(wreath_generators(p, WreathSide::Right));
  for (const auto& c : res.classes) {
    std::set<oracle::Images> orbit;
    for (const auto& l : left)
      for (const auto& r : right) orbit.insert(oracle::apply_after(l, oracle::apply_after(c.representative.images(), r)));
    CHECK(*orbit.begin() == c.representative.images());
    CHECK(orbit.size() == c.size);
  }
}

TEST_CASE("double_coset_classes agrees with the materialised-subgroup oracle") {
  for (auto p : {Params(2, 2, 1), Params(2, 3, 1), Params(3, 2, 1), Params(1, 2, 2), Params(2, 1, 2), Params(1, 1, 4),
                 Params(1, 2, 3)})
    for (bool flip : {false, true}) {
      CAPTURE(p.m, p.n, p.o, flip);
      CHECK(double_coset_classes(p, flip).count() == oracle::double_coset_count(p, flip));
    }
}

TEST_CASE("double cosets match congruence classes with and without the transpose move") {
  for (auto p : {Params(2, 2, 1), Params(2, 3, 1), Params(3, 2, 1), Params(2, 2, 2), Params(1, 2, 2), Params(2, 1, 3),
                 Params(1, 3, 3), Params(3, 3, 1), Params(2, 4, 1), Params(4, 2, 1)}) {
    CAPTURE(p.m, p.n, p.o);
    CHECK(double_coset_classes(p, false).count() == enumerate_congruence_classes(p.margin_spec(), false).size());
    CHECK(double_coset_classes(p, true).count() ==
          enumerate_congruence_classes(p.margin_spec(), p.m == p.n).size());
  }
}

TEST_CASE("double coset guards") {
  try {
    double_coset_classes(Params(2, 2, 3), true);
    FAIL("expected a guard refusal");
  } catch (const GuardExceeded& e) {
    CHECK(e.bound() == "m*n*o");
    CHECK(e.value() == 12);
    CHECK(e.limit() == 9);
  }
  Limits forced;
  forced.force = true;
  CHECK_THROWS_AS(double_coset_classes(Params(2, 2, 3), true, forced), PreconditionError);
}

TEST_CASE("permutation text format") {
  const Params p(2, 2, 1);
  const TriplePermutation s(p, {1, 2, 3, 0});
  CHECK(to_text(s) == "2 2 1\n2 3 4 1\n");
  CHECK(parse_permutation(to_text(s)) == s);
  CHECK(parse_permutation("2 2 1\n(1 2 3 4)\n") == s);
  CHECK(parse_permutation("2 2 1\n(1 2)(3 4)\n") == TriplePermutation(p, {1, 0, 3, 2}));
  CHECK(parse_permutation("2 2 1\n(2 3)\n") == TriplePermutation::flip(p));
  CHECK(parse_permutation("2 2 1 (1)").is_identity());
  CHECK_THROWS_AS(parse_permutation("2 2 1\n1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_permutation("2 2 1\n1 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(parse_permutation("2 2 1\n(1 2)(2 3)\n"), ParseError);
  CHECK_THROWS_AS(parse_permutation("2 2 1\n(1 5)\n"), ParseError);
  CHECK_THROWS_AS(parse_permutation("2 0 1\n"), ParseError);
  std::mt19937 rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto r = random_perm(Params(2, 3, 2), rng);
    CHECK(parse_permutation(to_text(r)) == r);
  }
}
