#include "mbs/search.hpp"

#include <algorithm>
#include <array>
#include <thread>

#include "mbs/errors.hpp"

namespace mbs::search {

namespace {

unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

struct Scan {
  std::optional<std::uint64_t> hit;
  std::uint64_t examined = 0;
  bool truncated = false;
};

// Smallest index in [0, n) satisfying pred, scanning in blocks so the answer
// does not depend on how work is split between threads.
template <class Pred>
Scan first_hit(std::uint64_t n, const Pred& pred, const SearchLimits& limits) {
  Scan scan;
  const std::uint64_t limit = limits.budget ? std::min(n, *limits.budget) : n;
  scan.truncated = limit < n;
  const unsigned threads = resolve_threads(limits.threads);
  if (threads == 1) {
    for (std::uint64_t i = 0; i < limit; ++i) {
      ++scan.examined;
      if (pred(i)) {
        scan.hit = i;
        return scan;
      }
    }
    return scan;
  }
  const std::uint64_t block = 256ull * threads;
  std::vector<char> ok;
  for (std::uint64_t start = 0; start < limit; start += block) {
    const std::uint64_t len = std::min(block, limit - start);
    ok.assign(len, 0);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t i = w; i < len; i += threads) ok[i] = pred(start + i) ? 1 : 0;
      });
    for (auto& th : pool) th.join();
    for (std::uint64_t i = 0; i < len; ++i) {
      if (ok[i]) {
        scan.examined = start + i + 1;
        scan.hit = start + i;
        return scan;
      }
    }
    scan.examined = start + len;
  }
  return scan;
}

template <class Pred>
std::uint64_t count_hits(std::uint64_t n, const Pred& pred, unsigned threads) {
  threads = resolve_threads(threads);
  if (threads == 1 || n < 1024) {
    std::uint64_t c = 0;
    for (std::uint64_t i = 0; i < n; ++i) c += pred(i);
    return c;
  }
  std::vector<std::uint64_t> partial(threads, 0);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < n; i += threads) partial[w] += pred(i);
    });
  for (auto& th : pool) th.join();
  std::uint64_t c = 0;
  for (const auto v : partial) c += v;
  return c;
}

Status status_of(const Scan& scan) {
  if (scan.hit) return Status::found;
  return scan.truncated ? Status::budget_exhausted : Status::exhausted;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::found: return "found";
    case Status::budget_exhausted: return "budget-exhausted";
    case Status::exhausted: return "exhausted";
  }
  return "unknown";
}

PairConditionReport check_pair_conditions(const FieldTower& tower, const construct::PairParams& params) {
  params.validate(tower);
  PairConditionReport r;
  const SubElement one{1};
  const ExtElement alpha = params.alpha;
  r.g_values = eval_functional(tower, params.g, tower.one()) == one && eval_functional(tower, params.g, alpha) == one;
  r.inverse_alpha = eval_functional(tower, params.f, tower.inv(alpha)).code != 0;
  r.shifted = true;
  for (std::uint32_t kc = 2; kc < tower.q(); ++kc) {
    const SubElement k{kc};
    const SubElement km1 = tower.sub(k, one);
    const ExtElement num = tower.embed(km1);
    const ExtElement den = tower.sub(tower.mul(tower.embed(tower.mul(k, km1)), alpha), tower.embed(tower.mul(k, k)));
    if (eval_functional(tower, params.f, tower.div(num, den)) == one) {
      r.shifted = false;
      r.failing_k = k;
      break;
    }
  }
  return r;
}

TripleConditionReport check_triple_conditions(const FieldTower& tower, const construct::TripleParams& params) {
  params.validate(tower);
  TripleConditionReport r;
  const auto& f = params.f;
  const ExtElement alpha = params.alpha, beta = params.beta;
  const SubElement c = eval_functional(tower, f, tower.div(alpha, beta));
  r.ratio = c.code != 1;
  const SubElement a = eval_functional(tower, f, tower.div(tower.mul(alpha, alpha), beta));
  const SubElement dval = eval_functional(tower, f, tower.inv(beta));
  const ExtElement beta2 = tower.mul(beta, beta);
  r.shifted = true;
  for (std::uint32_t kc = 0; kc < tower.q(); ++kc) {
    const SubElement k{kc};
    const SubElement b = eval_functional(tower, f, tower.div(beta2, tower.add(alpha, tower.embed(k))));
    const SubElement rhs = tower.add(tower.add(a, tower.mul(tower.add(b, k), c)), tower.mul(tower.mul(k, b), dval));
    if (rhs == k) {
      r.shifted = false;
      r.failing_k = k;
      break;
    }
  }
  return r;
}

bool alpha_valid_for_pair(const FieldTower& tower, const LinearFunctional& f, ExtElement alpha) {
  const construct::PairParams probe{f, f, alpha};
  const auto r = check_pair_conditions(tower, probe);
  return r.inverse_alpha && r.shifted;
}

std::uint64_t count_valid_alphas(const FieldTower& tower, const LinearFunctional& f, unsigned threads) {
  const std::uint32_t q = tower.q();
  return count_hits(
      tower.order() - q, [&](std::uint64_t i) { return alpha_valid_for_pair(tower, f, ExtElement{q + std::uint32_t(i)}); },
      threads);
}

std::int64_t valid_alpha_bound(const FieldTower& tower) {
  std::int64_t qh1 = 1;
  for (std::uint32_t i = 1; i < tower.h(); ++i) qh1 *= tower.q();
  return qh1 - tower.q() + 1;
}

SearchOutcome find_pair_params(const TowerPtr& tower, const LinearFunctional& f, SearchLimits limits) {
  const FieldTower& t = *tower;
  if (f.basis_values.size() != t.h() || !f.is_nonzero()) throw InvalidParameter("f must be a nonzero functional");
  const std::uint32_t q = t.q();
  const auto scan = first_hit(
      t.order() - q, [&](std::uint64_t i) { return alpha_valid_for_pair(t, f, ExtElement{q + std::uint32_t(i)}); },
      limits);
  SearchOutcome out;
  out.tower = tower;
  out.strategy = "alpha-scan";
  out.candidates_examined = scan.examined;
  out.status = status_of(scan);
  if (!scan.hit) return out;
  const ExtElement alpha{q + static_cast<std::uint32_t>(*scan.hit)};
  const std::array<std::pair<ExtElement, SubElement>, 2> constraints{{{t.one(), SubElement{1}}, {alpha, SubElement{1}}}};
  construct::PairParams params{f, functional_from_constraints(t, constraints), alpha};
  if (!check_pair_conditions(t, params).ok()) throw ConsistencyFailure("pair search produced failing parameters");
  out.pair = std::move(params);
  return out;
}

LinearFunctional st_functional(const FieldTower& tower, SubElement s_val, SubElement t_val) {
  if (tower.h() < 4) throw InvalidParameter("the (s, t) family needs h >= 4");
  LinearFunctional f{std::vector<SubElement>(tower.h())};
  f.basis_values[0] = SubElement{1};
  f.basis_values[2] = s_val;
  f.basis_values[tower.h() - 1] = t_val;
  return f;
}

SubElement st_inverse_value(const FieldTower& tower, SubElement s_val, SubElement t_val, SubElement k) {
  const std::uint32_t h = tower.h();
  if (h < 4) throw InvalidParameter("the (s, t) family needs h >= 4");
  const InverseShift shift = inverse_shift(tower, tower.generator(), k);
  // c_i is shift.coeffs[i - 1]; f keeps the constant, a^2 and a^(h-1) parts.
  const SubElement c_last = shift.coeffs[h - 2];
  const SubElement c_third = shift.coeffs[h - 4];
  return tower.mul(shift.scale, tower.add(tower.add(c_last, tower.mul(c_third, s_val)), t_val));
}

construct::TripleParams st_params(const FieldTower& tower, STPair st) {
  return construct::TripleParams{st_functional(tower, st.s_val, st.t_val), tower.generator(), tower.one()};
}

namespace {
STPair st_at(std::uint32_t q, std::uint64_t i) {
  return {SubElement{1 + static_cast<std::uint32_t>(i / q)}, SubElement{static_cast<std::uint32_t>(i % q)}};
}
}  // namespace

std::uint64_t count_valid_st_pairs(const FieldTower& tower, unsigned threads) {
  const std::uint32_t q = tower.q();
  return count_hits(
      std::uint64_t{q - 1} * q,
      [&](std::uint64_t i) { return check_triple_conditions(tower, st_params(tower, st_at(q, i))).ok(); }, threads);
}

SearchOutcome find_triple_params_h4(const TowerPtr& tower, SearchLimits limits) {
  const FieldTower& t = *tower;
  if (t.h() < 4) throw InvalidParameter("the (s, t) search needs h >= 4");
  const std::uint32_t q = t.q();
  const auto scan = first_hit(
      std::uint64_t{q - 1} * q,
      [&](std::uint64_t i) { return check_triple_conditions(t, st_params(t, st_at(q, i))).ok(); }, limits);
  SearchOutcome out;
  out.tower = tower;
  out.strategy = "st-pairs";
  out.candidates_examined = scan.examined;
  out.status = status_of(scan);
  if (!scan.hit) return out;
  out.st = st_at(q, *scan.hit);
  out.triple = st_params(t, *out.st);
  return out;
}

construct::TripleParams h3_params(const FieldTower& tower, ExtElement alpha, SubElement l) {
  const std::array<std::pair<ExtElement, SubElement>, 3> constraints{
      {{tower.one(), SubElement{1}}, {alpha, SubElement{0}}, {tower.mul(alpha, alpha), l}}};
  return construct::TripleParams{functional_from_constraints(tower, constraints), alpha, tower.one()};
}

namespace {

bool h3_candidate_ok(const FieldTower& t, ExtElement alpha, SubElement l) {
  if (minimal_polynomial(t, alpha).degree() != 3) return false;
  return check_triple_conditions(t, h3_params(t, alpha, l)).ok();
}

SearchOutcome brute_force_h3(const TowerPtr& tower, const SearchLimits& limits) {
  const FieldTower& t = *tower;
  const std::uint32_t q = t.q();
  const std::uint64_t per_l = t.order() - q;
  // All alphas with l = 1 first, then l = 2, 3, ... in code order.
  auto decode = [&](std::uint64_t i) {
    return std::pair{ExtElement{q + static_cast<std::uint32_t>(i % per_l)}, SubElement{1 + static_cast<std::uint32_t>(i / per_l)}};
  };
  const auto scan = first_hit(
      per_l * (q - 1),
      [&](std::uint64_t i) {
        const auto [alpha, l] = decode(i);
        return h3_candidate_ok(t, alpha, l);
      },
      limits);
  SearchOutcome out;
  out.tower = tower;
  out.strategy = "brute-force";
  out.candidates_examined = scan.examined;
  out.status = status_of(scan);
  if (!scan.hit) return out;
  const auto [alpha, l] = decode(*scan.hit);
  out.l = l;
  out.triple = h3_params(t, alpha, l);
  return out;
}

SearchOutcome guided_h3(const TowerPtr& tower, const SearchLimits& limits) {
  const FieldTower& t = *tower;
  const std::uint32_t q = t.q();
  SearchOutcome out;
  out.tower = tower;
  out.strategy = "lambda-guided";
  out.status = Status::exhausted;
  const TowerOptions options{std::max(default_max_order(), t.order())};
  for (std::uint32_t l0 = 0; l0 < q; ++l0)
    for (std::uint32_t l1 = 0; l1 < q; ++l1)
      for (std::uint32_t l2 = 0; l2 < q; ++l2) {
        if (limits.budget && out.candidates_examined >= *limits.budget) {
          out.status = Status::budget_exhausted;
          return out;
        }
        ++out.candidates_examined;
        const CubicTriple c{{l0}, {l1}, {l2}};
        if (!lambda_triple_qualifies(t, c)) continue;
        auto rebuilt = FieldTower::make_with_moduli(t.p(), t.d(), 3, t.inner_modulus(), lambda_p(t, c), options);
        for (std::uint32_t lc = 1; lc < q; ++lc) {
          if (!check_triple_conditions(*rebuilt, h3_params(*rebuilt, rebuilt->generator(), SubElement{lc})).ok())
            continue;
          out.status = Status::found;
          out.tower = rebuilt;
          out.lambda = c;
          out.l = SubElement{lc};
          out.triple = h3_params(*rebuilt, rebuilt->generator(), SubElement{lc});
          return out;
        }
      }
  return out;
}

}  // namespace

SearchOutcome find_triple_params_h3(const TowerPtr& tower, SearchLimits limits, H3Strategy strategy) {
  if (tower->h() != 3) throw InvalidParameter("this search needs h = 3");
  if (strategy == H3Strategy::automatic)
    strategy = tower->q() > 10 ? H3Strategy::lambda_guided : H3Strategy::brute_force;
  if (strategy == H3Strategy::lambda_guided && tower->q() < 3)
    throw InvalidParameter("the guided search needs q >= 3");
  return strategy == H3Strategy::brute_force ? brute_force_h3(tower, limits) : guided_h3(tower, limits);
}

std::vector<std::uint32_t> lambda_p(const FieldTower& tower, const CubicTriple& c) {
  const auto& f = tower.sub_field();
  return {f.neg(c.lambda0.code), f.neg(c.lambda1.code), f.neg(c.lambda2.code), 1};
}

std::vector<std::uint32_t> lambda_r(const FieldTower& tower, const CubicTriple& c) {
  const auto& f = tower.sub_field();
  return {c.lambda0.code, f.neg(f.sub(c.lambda1.code, 1)), c.lambda2.code, 1};
}

bool lambda_triple_qualifies(const FieldTower& tower, const CubicTriple& c) {
  const auto& f = tower.sub_field();
  return !poly::has_root(f, lambda_p(tower, c)) && poly::has_root(f, lambda_r(tower, c));
}

LambdaCount count_lambda_triples(const FieldTower& tower) {
  const std::int64_t q = tower.q();
  if (q > 16) throw ResourceLimit("lambda triple count is limited to q <= 16");
  LambdaCount r;
  for (std::uint32_t l0 = 0; l0 < q; ++l0)
    for (std::uint32_t l1 = 0; l1 < q; ++l1)
      for (std::uint32_t l2 = 0; l2 < q; ++l2) r.count += lambda_triple_qualifies(tower, {{l0}, {l1}, {l2}});
  r.bound_numerator = q * (q - 1) * (q - 1) - 6 * (q - 1);
  r.bound_ceiling = r.bound_numerator >= 0 ? (r.bound_numerator + 8) / 9 : -((-r.bound_numerator) / 9);
  return r;
}

}  // namespace mbs::search
