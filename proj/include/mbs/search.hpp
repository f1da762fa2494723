#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mbs/construct.hpp"

namespace mbs::search {

struct PairConditionReport {
  bool g_values = false;       // g(1) = g(alpha) = 1
  bool inverse_alpha = false;  // f(1/alpha) != 0
  bool shifted = false;        // f((k-1)/(k(k-1)alpha - k^2)) != 1 for k not in {0, 1}
  std::optional<SubElement> failing_k;

  bool ok() const { return g_values && inverse_alpha && shifted; }
};

struct TripleConditionReport {
  bool ratio = false;  // f(alpha/beta) != 1
  bool shifted = false;
  std::optional<SubElement> failing_k;

  bool ok() const { return ratio && shifted; }
};

PairConditionReport check_pair_conditions(const FieldTower& tower, const construct::PairParams& params);
TripleConditionReport check_triple_conditions(const FieldTower& tower, const construct::TripleParams& params);

enum class Status { found, budget_exhausted, exhausted };
const char* to_string(Status s);

struct STPair {
  SubElement s_val, t_val;
};

struct CubicTriple {
  SubElement lambda0, lambda1, lambda2;
};

/// Result of a parameter search. `tower` is the tower the parameters live in;
/// the guided h = 3 search rebuilds GF(q^3) with a different outer modulus.
struct SearchOutcome {
  Status status = Status::exhausted;
  TowerPtr tower;
  std::string strategy;
  std::uint64_t candidates_examined = 0;
  std::optional<construct::PairParams> pair;
  std::optional<construct::TripleParams> triple;
  std::optional<STPair> st;
  std::optional<SubElement> l;
  std::optional<CubicTriple> lambda;

  bool found() const { return status == Status::found; }
};

/// Caps on the number of candidates a search may examine.
struct SearchLimits {
  std::optional<std::uint64_t> budget;
  unsigned threads = 0;
};

/// Alphas outside GF(q) passing the f(1/alpha) and shifted conditions; g is
/// then always obtainable from g(1) = g(alpha) = 1.
bool alpha_valid_for_pair(const FieldTower& tower, const LinearFunctional& f, ExtElement alpha);
std::uint64_t count_valid_alphas(const FieldTower& tower, const LinearFunctional& f, unsigned threads = 0);
/// q^(h-1) - q + 1, possibly negative for tiny towers.
std::int64_t valid_alpha_bound(const FieldTower& tower);

SearchOutcome find_pair_params(const TowerPtr& tower, const LinearFunctional& f, SearchLimits limits = {});

/// f(1) = 1, f(a) = 0, f(a^2) = s, f(a^(h-1)) = t, zero on the other basis vectors.
LinearFunctional st_functional(const FieldTower& tower, SubElement s_val, SubElement t_val);
/// f(1/(a + k)) for st_functional, evaluated through inverse_shift.
SubElement st_inverse_value(const FieldTower& tower, SubElement s_val, SubElement t_val, SubElement k);
construct::TripleParams st_params(const FieldTower& tower, STPair st);
std::uint64_t count_valid_st_pairs(const FieldTower& tower, unsigned threads = 0);
SearchOutcome find_triple_params_h4(const TowerPtr& tower, SearchLimits limits = {});

enum class H3Strategy { automatic, brute_force, lambda_guided };

/// f(1) = 1, f(alpha) = 0, f(alpha^2) = l.
construct::TripleParams h3_params(const FieldTower& tower, ExtElement alpha, SubElement l);
/// automatic: brute force for q <= 10, guided otherwise.
SearchOutcome find_triple_params_h3(const TowerPtr& tower, SearchLimits limits = {},
                                    H3Strategy strategy = H3Strategy::automatic);

/// p(x) = x^3 - l2 x^2 - l1 x - l0, constant term first.
std::vector<std::uint32_t> lambda_p(const FieldTower& tower, const CubicTriple& c);
/// r(x) = x^3 + l2 x^2 - (l1 - 1) x + l0, constant term first.
std::vector<std::uint32_t> lambda_r(const FieldTower& tower, const CubicTriple& c);
/// p irreducible and r reducible over GF(q).
bool lambda_triple_qualifies(const FieldTower& tower, const CubicTriple& c);

struct LambdaCount {
  std::uint64_t count = 0;
  /// The bound q(q-1)^2/9 - 2(q-1)/3 as the fraction numerator / 9.
  std::int64_t bound_numerator = 0;
  std::int64_t bound_ceiling = 0;

  bool ok() const { return static_cast<std::int64_t>(count) >= bound_ceiling; }
};

/// Exhaustive count over GF(q)^3; the tower is only used for GF(q) arithmetic.
/// Rejects q > 16.
LambdaCount count_lambda_triples(const FieldTower& tower);

}  // namespace mbs::search
