#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mbs/linear_set_spec.hpp"
#include "mbs/plane.hpp"

namespace mbs::verify {

// Exhaustive incidence oracle. Everything here consumes raw point sets (and,
// for weights, the subspace description) and never calls into construct/search.

using Spectrum = std::map<std::uint32_t, std::uint64_t>;

std::uint32_t blocking_fold(const ProjectivePlane& plane, const PointSet& s);
Spectrum spectrum(const ProjectivePlane& plane, const PointSet& s);

struct MinimalityResult {
  bool minimal = false;
  /// min over P in S of the number of t-secants through P.
  std::uint64_t min_t_secants = 0;
  std::uint32_t weakest_point = 0;
};

/// Throws InvalidParameter unless S is t-fold blocking.
MinimalityResult is_minimal(const ProjectivePlane& plane, const PointSet& s, std::uint32_t t);

/// dim over GF(q) of U cap <v_P>, via the rank of the linear system
/// lambda v_P = x u + f(x) v + y w in the GF(q)-coordinates of (lambda, x, y).
std::uint32_t point_weight(const ProjectivePlane& plane, std::uint32_t point, const LinearSetSpec& spec);

/// Number of lines through P meeting S in exactly one point.
std::uint64_t tangents_from(const ProjectivePlane& plane, std::uint32_t point, const PointSet& s);
std::uint64_t tangents_from(const ProjectivePlane& plane, std::uint32_t point,
                            const std::vector<std::uint16_t>& counts);

struct ExponentResult {
  /// Largest e >= 1 with every line meeting S in 1 mod p^e points.
  std::optional<std::uint32_t> exponent;
  /// A line failing 1 mod p^(e+1); absent when e = n.
  std::optional<std::uint32_t> witness_line;
  /// Every intersection is 1 mod p^n (e.g. S contains a line); e reported as n.
  bool degenerate = false;
};

/// Throws InvalidParameter if S is not a blocking set.
ExponentResult exponent(const ProjectivePlane& plane, const PointSet& s);
ExponentResult exponent_from_counts(const FieldTower& tower, const std::vector<std::uint16_t>& counts);

bool disjoint(const PointSet& a, const PointSet& b);
std::optional<std::uint32_t> contains_line(const ProjectivePlane& plane, const PointSet& s);

struct VerifyReport {
  std::uint64_t size = 0;
  Spectrum spectrum;
  std::uint32_t min_blocking_fold = 0;
  /// Per requested fold t (only those t <= min_blocking_fold).
  std::map<std::uint32_t, MinimalityResult> minimality;
  std::optional<std::uint32_t> contained_line;
  std::optional<ExponentResult> exponent;
  /// Preconditions under which the exponent is defined in the literature.
  bool exponent_preconditions_met = false;
  /// weight -> number of points of S, when a subspace description is known.
  std::optional<std::map<std::uint32_t, std::uint64_t>> weight_spectrum;
};

VerifyReport verify_set(const ProjectivePlane& plane, const PointSet& s, const std::vector<std::uint32_t>& folds,
                        const LinearSetSpec* spec = nullptr, unsigned threads = 0);

}  // namespace mbs::verify
