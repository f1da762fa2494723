#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "mbs/field.hpp"
#include "mbs/point_set.hpp"

namespace mbs {

/// Homogeneous coordinate triple (points) or dual triple [a:b:c] (lines).
using Coords = std::array<ExtElement, 3>;

/**
 * PG(2, q^h) over a FieldTower.
 *
 * Points and lines are normalized so the first nonzero coordinate is 1 and
 * indexed lexicographically by element code:
 *   (0:0:1) -> 0,  (0:1:z) -> 1 + z,  (1:y:z) -> 1 + Q + y*Q + z
 * with Q = q^h. Lines use the same map on their dual coordinates, and
 * [a:b:c] carries the points with aX + bY + cZ = 0.
 *
 * Incidence lists are generated on demand instead of being stored: at Q = 1024
 * explicit per-line arrays would need several gigabytes.
 */
class ProjectivePlane {
 public:
  explicit ProjectivePlane(TowerPtr tower);

  const FieldTower& tower() const { return *tower_; }
  const TowerPtr& tower_ptr() const { return tower_; }
  std::uint32_t order() const { return order_; }
  std::uint32_t num_points() const { return num_points_; }
  std::uint32_t num_lines() const { return num_points_; }

  /// Normalizes and indexes; throws InvalidParameter on (0,0,0).
  std::uint32_t index_of(const Coords& c) const;
  Coords coords_of(std::uint32_t index) const;
  Coords normalize(const Coords& c) const;

  bool incident(std::uint32_t point, std::uint32_t line) const;
  std::uint32_t line_through(std::uint32_t p1, std::uint32_t p2) const;
  std::uint32_t meet(std::uint32_t l1, std::uint32_t l2) const { return line_through(l1, l2); }

  PointSet empty_set() const { return PointSet(num_points_); }
  PointSet line_points(std::uint32_t line) const;

  template <class F>
  void for_each_point_on_line(std::uint32_t line, F&& f) const {
    for_each_incident(coords_of(line), f);
  }

  /// Duality: the lines through a point are enumerated by the same routine.
  template <class F>
  void for_each_line_through(std::uint32_t point, F&& f) const {
    for_each_incident(coords_of(point), f);
  }

  /// Exact |line cap S| for every line, accumulated over the points of S.
  /// Work is split across up to `threads` workers (0 = hardware concurrency).
  std::vector<std::uint16_t> line_counts(const PointSet& s, unsigned threads = 0) const;

  /// Intersection-size histogram over all lines.
  std::map<std::uint32_t, std::uint64_t> lines_meeting(const PointSet& s, unsigned threads = 0) const;

 private:
  std::uint32_t index_normalized(ExtElement x, ExtElement y, ExtElement z) const {
    if (x.code == 0) return y.code == 0 ? 0u : 1u + z.code;
    return 1u + order_ + y.code * order_ + z.code;
  }

  /// Calls f(index) for every normalized triple (X:Y:Z) with aX + bY + cZ = 0.
  template <class F>
  void for_each_incident(const Coords& dual, F& f) const;

  TowerPtr tower_;
  std::uint32_t order_;
  std::uint32_t num_points_;
};

template <class F>
void ProjectivePlane::for_each_incident(const Coords& dual, F& f) const {
  const FieldTower& t = *tower_;
  const ExtElement a = dual[0], b = dual[1], c = dual[2];
  const std::uint32_t q = order_;
  // (0:0:1)
  if (c.code == 0) f(0u);
  // (0:1:z): b + c z = 0
  if (c.code != 0) {
    f(1u + t.neg(t.div(b, c)).code);
  } else if (b.code == 0) {
    for (std::uint32_t z = 0; z < q; ++z) f(1u + z);
  }
  // (1:y:z): a + b y + c z = 0
  const std::uint32_t base = 1u + q;
  if (c.code != 0) {
    const auto& field = t.ext_field();
    const std::uint32_t minus_inv_c = field.neg(field.inv(c.code));
    for (std::uint32_t y = 0; y < q; ++y) {
      const std::uint32_t z = field.mul(field.add(a.code, field.mul(b.code, y)), minus_inv_c);
      f(base + y * q + z);
    }
  } else if (b.code != 0) {
    const std::uint32_t y = t.neg(t.div(a, b)).code;
    for (std::uint32_t z = 0; z < q; ++z) f(base + y * q + z);
  }
}

/// Invertible 3x3 matrix acting on column vectors of homogeneous coordinates.
class Projectivity {
 public:
  using Matrix = std::array<std::array<ExtElement, 3>, 3>;

  /// Throws InvalidParameter for a singular matrix.
  Projectivity(const FieldTower& tower, const Matrix& m);

  /// (x:y:z) -> (z:x:y), of order 3.
  static Projectivity phi(const FieldTower& tower);
  static Projectivity identity(const FieldTower& tower);

  const Matrix& matrix() const { return m_; }
  Coords apply(const FieldTower& tower, const Coords& v) const;
  std::uint32_t apply(const ProjectivePlane& plane, std::uint32_t point) const;
  PointSet apply(const ProjectivePlane& plane, const PointSet& s) const;
  Projectivity compose(const FieldTower& tower, const Projectivity& inner) const;

 private:
  Matrix m_;
};

ExtElement determinant(const FieldTower& tower, const Coords& r0, const Coords& r1, const Coords& r2);

/**
 * Partition of PG(2, q^2) into q^2 - q + 1 disjoint Baer subplanes.
 *
 * Points are modelled as GF(q^6)^* / GF(q^2)^* via a primitive element g of a
 * cubic extension of GF(q^2); point i is the span of g^i. The orbits of
 * <g^(q^2-q+1)> (a subgroup of order q^2+q+1 of the Singer group) are the
 * Baer subplanes. Requires h == 2.
 */
std::vector<PointSet> singer_baer_partition(const ProjectivePlane& plane);

}  // namespace mbs
