#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mbs/linear_set_spec.hpp"
#include "mbs/plane.hpp"

namespace mbs::construct {

/// Parameters of the disjoint pair
///   L  = { (x : f(x) : y) },   L' = { (y' : x' : g(x') + y' alpha) }.
struct PairParams {
  LinearFunctional f, g;
  ExtElement alpha;

  void validate(const FieldTower& tower) const;
};

/// Parameters of L = { (x : f(x) + y alpha : y beta) } whose phi-orbit gives
/// three candidate disjoint blocking sets.
struct TripleParams {
  LinearFunctional f;
  ExtElement alpha;
  ExtElement beta{1};

  void validate(const FieldTower& tower) const;
};

/// Projective image of U^*, enumerating y in {0, 1} only (y != 0 rescales to 1).
PointSet linear_set(const ProjectivePlane& plane, const LinearSetSpec& spec);

/// { (x : Tr(x) : y) }, of size q^h + q^(h-1) + 1.
PointSet trace_blocking_set(const ProjectivePlane& plane);
LinearSetSpec trace_spec(const FieldTower& tower);

LinearSetSpec pair_first_spec(const FieldTower& tower, const PairParams& params);
LinearSetSpec pair_second_spec(const FieldTower& tower, const PairParams& params);
std::pair<PointSet, PointSet> double_pair(const ProjectivePlane& plane, const PairParams& params);

LinearSetSpec triple_base_spec(const FieldTower& tower, const TripleParams& params);
/// (L, phi(L), phi^2(L)).
std::array<PointSet, 3> triple_orbit(const ProjectivePlane& plane, const TripleParams& params);

/// First three members of the Singer-orbit Baer partition of PG(2, q^2).
std::array<PointSet, 3> baer_triple(const ProjectivePlane& plane);

struct PatchReport {
  std::vector<std::uint32_t> base_lines;
  PointSet mutual_points;  // M
  /// (line, |line cap M|) for every line meeting the base union in < t points.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> exceptional_lines;
  std::vector<std::uint32_t> patches;  // in the order they were added
  /// n_i for i = 0 .. t-1: lines (other than base lines) meeting M in i points.
  std::vector<std::uint64_t> n;
};

/// Base lines for line_union_tfold when none are supplied: [1 : m : m^2] for
/// the first t+1 element codes m. Distinct m give non-concurrent triples
/// (Vandermonde), in every characteristic.
std::vector<std::uint32_t> default_base_lines(const ProjectivePlane& plane, std::uint32_t t);

/// True if some three of the lines share a point.
bool has_concurrent_triple(const ProjectivePlane& plane, const std::vector<std::uint32_t>& lines);

/// Union of t+1 lines in general position, patched greedily so every line
/// carries at least t points. Each patch point maximizes the number of still
/// deficient exceptional lines through it (ties: smallest point index).
std::pair<PointSet, PatchReport> line_union_tfold(const ProjectivePlane& plane, std::uint32_t t,
                                                  std::optional<std::vector<std::uint32_t>> lines = std::nullopt);

/// (t^4 - 2t^3 - 5t^2 + 6t) / 8, the worst-case patch count; -1 at t = 2, where three lines meet pairwise.
std::int64_t worst_case_patches(std::uint32_t t);

}  // namespace mbs::construct
