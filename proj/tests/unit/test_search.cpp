#include <doctest.h>

#include <random>

#include "mbs/errors.hpp"
#include "mbs/search.hpp"
#include "support.hpp"

using namespace mbs;
using namespace mbs::search;
using construct::PairParams;
using construct::TripleParams;

namespace {

LinearFunctional g_for(const FieldTower& t, ExtElement alpha) {
  const std::array<std::pair<ExtElement, SubElement>, 2> cons{{{t.one(), {1}}, {alpha, {1}}}};
  return functional_from_constraints(t, cons);
}

// The f(1/alpha) and shifted-inverse conditions for a disjoint pair, written out directly.
bool alpha_ok_oracle(const FieldTower& t, const LinearFunctional& f, ExtElement a) {
  if (eval_functional(t, f, t.inv(a)).code == 0) return false;
  for (std::uint32_t kc = 2; kc < t.q(); ++kc) {
    const ExtElement k = t.embed({kc});
    const ExtElement km1 = t.sub(k, t.one());
    const ExtElement den = t.sub(t.mul(t.mul(k, km1), a), t.mul(k, k));
    if (eval_functional(t, f, t.div(km1, den)).code == 1) return false;
  }
  return true;
}

std::uint64_t roots_count(const FieldTower& t, const std::vector<std::uint32_t>& poly) {
  std::uint64_t n = 0;
  for (std::uint32_t x = 0; x < t.q(); ++x) {
    SubElement acc{0};
    for (std::size_t i = poly.size(); i-- > 0;) acc = t.add(t.mul(acc, SubElement{x}), SubElement{poly[i]});
    n += acc.code == 0;
  }
  return n;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("pair conditions on PG(2,4)") {
    const auto t = FieldTower::make(2, 1, 2);
    const ExtElement a = t->generator();
    const PairParams good{trace_functional(*t), g_for(*t, a), a};
    const auto r = check_pair_conditions(*t, good);
    CHECK(r.g_values);
    CHECK(r.inverse_alpha);
    CHECK(r.shifted);
    CHECK(r.ok());
    PairParams bad = good;
    bad.g = LinearFunctional{{{0}, {1}}};
    CHECK_FALSE(check_pair_conditions(*t, bad).g_values);
    CHECK_FALSE(check_pair_conditions(*t, bad).ok());
  }

  TEST_CASE("passing pair parameters give disjoint sets") {
    for (const auto& [p, d, h] : testsupport::towers_up_to(81)) {
      const ProjectivePlane pl(FieldTower::make(p, d, h));
      const FieldTower& t = pl.tower();
      const auto f = trace_functional(t);
      for (std::uint32_t a = t.q(); a < t.order(); ++a) {
        const PairParams params{f, g_for(t, {a}), {a}};
        REQUIRE(alpha_valid_for_pair(t, f, {a}) == alpha_ok_oracle(t, f, {a}));
        if (!check_pair_conditions(t, params).ok()) continue;
        const auto [l1, l2] = construct::double_pair(pl, params);
        REQUIRE(l1.intersection_size(l2) == 0);
      }
    }
  }

  TEST_CASE("valid alpha counts reach q^(h-1) - q + 1") {
    for (const auto& [p, d, h] : testsupport::towers_up_to(256)) {
      const auto t = FieldTower::make(p, d, h);
      const auto f = trace_functional(*t);
      std::uint64_t oracle = 0;
      for (std::uint32_t a = t->q(); a < t->order(); ++a) oracle += alpha_ok_oracle(*t, f, {a});
      const auto count = count_valid_alphas(*t, f, 1);
      CHECK(count == oracle);
      CHECK(static_cast<std::int64_t>(count) >= valid_alpha_bound(*t));
    }
    CHECK(valid_alpha_bound(*FieldTower::make(3, 1, 2)) == 1);
  }

  TEST_CASE("pair search is deterministic and respects the budget") {
    const auto t = FieldTower::make(3, 1, 3);
    const auto f = trace_functional(*t);
    const auto one = find_pair_params(t, f, {std::nullopt, 1});
    const auto many = find_pair_params(t, f, {std::nullopt, 3});
    REQUIRE(one.found());
    REQUIRE(many.found());
    CHECK(one.pair->alpha == many.pair->alpha);
    CHECK(one.candidates_examined == many.candidates_examined);
    CHECK(check_pair_conditions(*t, *one.pair).ok());
    const auto none = find_pair_params(t, f, {0, 1});
    CHECK(none.status == Status::budget_exhausted);
    CHECK_FALSE(none.pair.has_value());
    CHECK_THROWS_AS(find_pair_params(t, LinearFunctional{{{0}, {0}, {0}}}), InvalidParameter);
  }

  TEST_CASE("triple conditions reduce as expected at beta = 1") {
    std::mt19937 rng(99);
    for (const auto& [p, d, h] : testsupport::towers_up_to(125)) {
      if (h < 3) continue;
      const auto t = FieldTower::make(p, d, h);
      std::uniform_int_distribution<std::uint32_t> ext(t->q(), t->order() - 1), sub(0, t->q() - 1);
      for (int trial = 0; trial < 40; ++trial) {
        LinearFunctional f;
        for (std::uint32_t j = 0; j < h; ++j) f.basis_values.push_back({sub(rng)});
        if (!f.is_nonzero()) continue;
        const ExtElement a{ext(rng)};
        // With beta = 1: f(a) != 1 and k != f(a^2) + (b_k + k) f(a) + k b_k f(1), b_k = f(1/(a+k)).
        const SubElement fa = eval_functional(*t, f, a), f1 = eval_functional(*t, f, t->one());
        bool reduced = fa.code != 1;
        for (std::uint32_t kc = 0; kc < t->q() && reduced; ++kc) {
          const SubElement k{kc};
          const SubElement b = eval_functional(*t, f, t->inv(t->add(a, t->embed(k))));
          SubElement rhs = eval_functional(*t, f, t->mul(a, a));
          rhs = t->add(rhs, t->mul(t->add(b, k), fa));
          rhs = t->add(rhs, t->mul(t->mul(k, b), f1));
          reduced = rhs != k;
        }
        const auto r = check_triple_conditions(*t, TripleParams{f, a, t->one()});
        REQUIRE(r.ok() == reduced);
      }
    }
  }

  TEST_CASE("passing triple parameters give a disjoint orbit") {
    std::mt19937 rng(5);
    for (const auto& [p, d, h] : std::vector<std::array<std::uint32_t, 3>>{{2, 1, 3}, {3, 1, 3}, {2, 1, 4}, {2, 2, 3}}) {
      const ProjectivePlane pl(FieldTower::make(p, d, h));
      const FieldTower& t = pl.tower();
      std::uniform_int_distribution<std::uint32_t> ext(t.q(), t.order() - 1), any(1, t.order() - 1), sub(0, t.q() - 1);
      int passing = 0, tried = 0;
      while (passing < 4 && tried < 4000) {
        ++tried;
        LinearFunctional f;
        for (std::uint32_t j = 0; j < h; ++j) f.basis_values.push_back({sub(rng)});
        if (!f.is_nonzero()) continue;
        const TripleParams params{f, {ext(rng)}, {any(rng)}};
        if (!check_triple_conditions(t, params).ok()) continue;
        ++passing;
        const auto s = construct::triple_orbit(pl, params);
        REQUIRE(s[0].intersection_size(s[1]) == 0);
        REQUIRE(s[1].intersection_size(s[2]) == 0);
        REQUIRE(s[0].intersection_size(s[2]) == 0);
      }
      CHECK(passing > 0);
    }
  }

  TEST_CASE("(s, t) closed form agrees with direct inversion") {
    for (const auto& [p, d, h] : std::vector<std::array<std::uint32_t, 3>>{{2, 1, 4}, {3, 1, 4}, {2, 1, 5}, {2, 2, 4}}) {
      const auto t = FieldTower::make(p, d, h);
      for (std::uint32_t s = 1; s < t->q(); ++s)
        for (std::uint32_t tv = 0; tv < t->q(); ++tv) {
          const auto f = st_functional(*t, {s}, {tv});
          CHECK(f.basis_values[0].code == 1);
          CHECK(f.basis_values[1].code == 0);
          for (std::uint32_t k = 0; k < t->q(); ++k) {
            const auto direct = eval_functional(*t, f, t->inv(t->add(t->generator(), t->embed({k}))));
            REQUIRE(st_inverse_value(*t, {s}, {tv}, {k}) == direct);
          }
        }
      const auto count = count_valid_st_pairs(*t, 1);
      CHECK(count >= t->q() - 1);
      const auto found = find_triple_params_h4(t);
      REQUIRE(found.found());
      CHECK(found.st->s_val.code != 0);
      CHECK(check_triple_conditions(*t, *found.triple).ok());
    }
    CHECK_THROWS_AS(st_functional(*FieldTower::make(2, 1, 3), {1}, {0}), InvalidParameter);
  }

  TEST_CASE("h = 3 brute force succeeds with l = 1 for small q") {
    for (const auto& [p, d] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
      const auto t = FieldTower::make(p, d, 3);
      const auto out = find_triple_params_h3(t);
      REQUIRE(out.found());
      CHECK(out.strategy == "brute-force");
      CHECK(out.l->code == 1);
      CHECK(out.tower == t);
      const auto& f = out.triple->f;
      CHECK(eval_functional(*t, f, t->one()).code == 1);
      CHECK(eval_functional(*t, f, out.triple->alpha).code == 0);
      CHECK(check_triple_conditions(*t, *out.triple).ok());
    }
  }

  TEST_CASE("guided h = 3 search rebuilds the tower around a root of p") {
    for (const auto& [p, d] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{5, 1}, {7, 1}}) {
      const auto t = FieldTower::make(p, d, 3);
      const auto out = find_triple_params_h3(t, {}, H3Strategy::lambda_guided);
      REQUIRE(out.found());
      REQUIRE(out.lambda.has_value());
      CHECK(lambda_triple_qualifies(*t, *out.lambda));
      CHECK(out.tower->outer_modulus() == lambda_p(*t, *out.lambda));
      CHECK(out.triple->alpha == out.tower->generator());
      CHECK(check_triple_conditions(*out.tower, *out.triple).ok());
      const ProjectivePlane pl(out.tower);
      const auto s = construct::triple_orbit(pl, *out.triple);
      CHECK(s[0].intersection_size(s[1]) == 0);
    }
  }

  TEST_CASE("lambda triple counts against the bound") {
    for (const auto& [p, d] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
      const auto t = FieldTower::make(p, d, 2);
      const std::uint32_t q = t->q();
      std::uint64_t oracle = 0;
      for (std::uint32_t l0 = 0; l0 < q; ++l0)
        for (std::uint32_t l1 = 0; l1 < q; ++l1)
          for (std::uint32_t l2 = 0; l2 < q; ++l2) {
            const SubElement a{l0}, b{l1}, c{l2};
            const std::vector<std::uint32_t> pp{t->neg(a).code, t->neg(b).code, t->neg(c).code, 1};
            const std::vector<std::uint32_t> rr{a.code, t->neg(t->sub(b, SubElement{1})).code, c.code, 1};
            oracle += roots_count(*t, pp) == 0 && roots_count(*t, rr) > 0;
          }
      const auto r = count_lambda_triples(*t);
      CAPTURE(q);
      CHECK(r.count == oracle);
      CHECK(r.ok());
      CHECK(r.bound_numerator == std::int64_t(q) * (q - 1) * (q - 1) - 6 * std::int64_t(q - 1));
    }
    CHECK(count_lambda_triples(*FieldTower::make(3, 1, 2)).bound_ceiling == 0);
    CHECK(count_lambda_triples(*FieldTower::make(2, 2, 2)).bound_ceiling == 2);
    CHECK(count_lambda_triples(*FieldTower::make(5, 1, 2)).bound_ceiling == 7);
    CHECK_THROWS_AS(count_lambda_triples(*FieldTower::make(17, 1, 2)), ResourceLimit);
  }
}
