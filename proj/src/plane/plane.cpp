#include "mbs/plane.hpp"

#include <algorithm>
#include <thread>

#include "mbs/errors.hpp"

namespace mbs {

void PointSet::check_same(const PointSet& other) const {
  if (universe_ != other.universe_) throw InvalidParameter("point sets belong to different planes");
}

ProjectivePlane::ProjectivePlane(TowerPtr tower) : tower_(std::move(tower)) {
  if (!tower_) throw InvalidParameter("plane needs a field tower");
  order_ = tower_->order();
  num_points_ = order_ * order_ + order_ + 1;
}

Coords ProjectivePlane::normalize(const Coords& c) const {
  const FieldTower& t = *tower_;
  for (std::size_t i = 0; i < 3; ++i) {
    if (c[i].code == 0) continue;
    const ExtElement inv = t.inv(c[i]);
    Coords out{};
    for (std::size_t j = 0; j < 3; ++j) out[j] = t.mul(c[j], inv);
    return out;
  }
  throw InvalidParameter("(0,0,0) is not a projective point");
}

std::uint32_t ProjectivePlane::index_of(const Coords& c) const {
  for (const auto e : c)
    if (e.code >= order_) throw InvalidParameter("coordinate outside GF(q^h)");
  const Coords n = normalize(c);
  return index_normalized(n[0], n[1], n[2]);
}

Coords ProjectivePlane::coords_of(std::uint32_t index) const {
  if (index >= num_points_) throw InvalidParameter("point index out of range");
  if (index == 0) return {ExtElement{0}, ExtElement{0}, ExtElement{1}};
  if (index <= order_) return {ExtElement{0}, ExtElement{1}, ExtElement{index - 1}};
  const std::uint32_t r = index - 1 - order_;
  return {ExtElement{1}, ExtElement{r / order_}, ExtElement{r % order_}};
}

bool ProjectivePlane::incident(std::uint32_t point, std::uint32_t line) const {
  const FieldTower& t = *tower_;
  const Coords p = coords_of(point), l = coords_of(line);
  ExtElement acc = t.zero();
  for (std::size_t i = 0; i < 3; ++i) acc = t.add(acc, t.mul(p[i], l[i]));
  return acc.code == 0;
}

std::uint32_t ProjectivePlane::line_through(std::uint32_t p1, std::uint32_t p2) const {
  if (p1 == p2) throw InvalidParameter("line_through needs two distinct points");
  const FieldTower& t = *tower_;
  const Coords a = coords_of(p1), b = coords_of(p2);
  const Coords cross{t.sub(t.mul(a[1], b[2]), t.mul(a[2], b[1])), t.sub(t.mul(a[2], b[0]), t.mul(a[0], b[2])),
                     t.sub(t.mul(a[0], b[1]), t.mul(a[1], b[0]))};
  return index_of(cross);
}

PointSet ProjectivePlane::line_points(std::uint32_t line) const {
  PointSet s = empty_set();
  for_each_point_on_line(line, [&](std::uint32_t p) { s.insert(p); });
  return s;
}

std::vector<std::uint16_t> ProjectivePlane::line_counts(const PointSet& s, unsigned threads) const {
  if (s.universe() != num_points_) throw InvalidParameter("point set belongs to a different plane");
  const std::vector<std::uint32_t> pts = s.indices();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  // Not worth splitting small sets.
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, pts.size() / 256)));

  std::vector<std::uint16_t> counts(num_points_, 0);
  if (threads <= 1) {
    for (const auto p : pts) for_each_line_through(p, [&](std::uint32_t l) { ++counts[l]; });
    return counts;
  }
  std::vector<std::vector<std::uint16_t>> partial(threads, std::vector<std::uint16_t>(num_points_, 0));
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      auto& local = partial[w];
      for (std::size_t i = w; i < pts.size(); i += threads)
        for_each_line_through(pts[i], [&](std::uint32_t l) { ++local[l]; });
    });
  }
  for (auto& th : workers) th.join();
  for (const auto& local : partial)
    for (std::uint32_t l = 0; l < num_points_; ++l) counts[l] = static_cast<std::uint16_t>(counts[l] + local[l]);
  return counts;
}

std::map<std::uint32_t, std::uint64_t> ProjectivePlane::lines_meeting(const PointSet& s, unsigned threads) const {
  std::map<std::uint32_t, std::uint64_t> spectrum;
  for (const auto c : line_counts(s, threads)) ++spectrum[c];
  return spectrum;
}

ExtElement determinant(const FieldTower& t, const Coords& r0, const Coords& r1, const Coords& r2) {
  auto minor = [&](std::size_t i, std::size_t j) { return t.sub(t.mul(r1[i], r2[j]), t.mul(r1[j], r2[i])); };
  ExtElement det = t.mul(r0[0], minor(1, 2));
  det = t.sub(det, t.mul(r0[1], minor(0, 2)));
  return t.add(det, t.mul(r0[2], minor(0, 1)));
}

Projectivity::Projectivity(const FieldTower& tower, const Matrix& m) : m_(m) {
  if (determinant(tower, m[0], m[1], m[2]).code == 0) throw InvalidParameter("singular projectivity matrix");
}

Projectivity Projectivity::phi(const FieldTower& tower) {
  const ExtElement o = tower.zero(), i = tower.one();
  return Projectivity(tower, Matrix{{{o, o, i}, {i, o, o}, {o, i, o}}});
}

Projectivity Projectivity::identity(const FieldTower& tower) {
  const ExtElement o = tower.zero(), i = tower.one();
  return Projectivity(tower, Matrix{{{i, o, o}, {o, i, o}, {o, o, i}}});
}

Coords Projectivity::apply(const FieldTower& t, const Coords& v) const {
  Coords out{};
  for (std::size_t r = 0; r < 3; ++r) {
    ExtElement acc = t.zero();
    for (std::size_t c = 0; c < 3; ++c) acc = t.add(acc, t.mul(m_[r][c], v[c]));
    out[r] = acc;
  }
  return out;
}

std::uint32_t Projectivity::apply(const ProjectivePlane& plane, std::uint32_t point) const {
  return plane.index_of(apply(plane.tower(), plane.coords_of(point)));
}

PointSet Projectivity::apply(const ProjectivePlane& plane, const PointSet& s) const {
  PointSet out = plane.empty_set();
  s.for_each([&](std::uint32_t p) { out.insert(apply(plane, p)); });
  return out;
}

Projectivity Projectivity::compose(const FieldTower& t, const Projectivity& inner) const {
  Matrix out{};
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      ExtElement acc = t.zero();
      for (std::size_t k = 0; k < 3; ++k) acc = t.add(acc, t.mul(m_[r][k], inner.m_[k][c]));
      out[r][c] = acc;
    }
  return Projectivity(t, out);
}

namespace {

using Cubic = std::array<std::uint32_t, 3>;

/// Arithmetic in GF(Q)[x] / (x^3 + m2 x^2 + m1 x + m0).
struct CubicExtension {
  const FiniteField& f;
  poly::Poly modulus;

  Cubic mul(const Cubic& a, const Cubic& b) const {
    std::array<std::uint32_t, 5> prod{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) prod[i + j] = f.add(prod[i + j], f.mul(a[i], b[j]));
    for (int deg = 4; deg >= 3; --deg) {
      const auto c = prod[deg];
      if (c == 0) continue;
      prod[deg] = 0;
      for (int j = 0; j < 3; ++j) prod[deg - 3 + j] = f.sub(prod[deg - 3 + j], f.mul(c, modulus[j]));
    }
    return {prod[0], prod[1], prod[2]};
  }

  Cubic pow(Cubic a, std::uint64_t e) const {
    Cubic r{1, 0, 0};
    while (e) {
      if (e & 1u) r = mul(r, a);
      a = mul(a, a);
      e >>= 1u;
    }
    return r;
  }
};

}  // namespace

std::vector<PointSet> singer_baer_partition(const ProjectivePlane& plane) {
  const FieldTower& t = plane.tower();
  if (t.h() != 2) throw InvalidParameter("Baer partition needs a plane of order q^2 (h = 2)");
  const std::uint64_t q = t.q();
  const std::uint64_t big_q = plane.order();
  const std::uint64_t group_order = big_q * big_q * big_q - 1;
  const std::uint32_t subplanes = static_cast<std::uint32_t>(q * q - q + 1);

  const FiniteField& f = t.ext_field();
  CubicExtension ext{f, poly::smallest_monic_irreducible(f, 3)};

  const auto factors = prime_factors(group_order);
  std::optional<Cubic> generator;
  for (std::uint64_t code = 2; code < big_q * big_q * big_q && !generator; ++code) {
    const Cubic g{static_cast<std::uint32_t>(code % big_q), static_cast<std::uint32_t>((code / big_q) % big_q),
                  static_cast<std::uint32_t>(code / (big_q * big_q))};
    const bool primitive = std::all_of(factors.begin(), factors.end(), [&](std::uint64_t r) {
      return ext.pow(g, group_order / r) != Cubic{1, 0, 0};
    });
    if (primitive) generator = g;
  }
  if (!generator) throw ConsistencyFailure("no primitive element in the cubic extension");

  std::vector<PointSet> parts(subplanes, plane.empty_set());
  Cubic cur{1, 0, 0};
  for (std::uint32_t i = 0; i < plane.num_points(); ++i) {
    const std::uint32_t idx =
        plane.index_of({ExtElement{cur[0]}, ExtElement{cur[1]}, ExtElement{cur[2]}});
    parts[i % subplanes].insert(idx);
    cur = ext.mul(cur, *generator);
  }
  std::uint64_t covered = 0;
  for (const auto& part : parts) covered += part.size();
  if (covered != plane.num_points()) throw ConsistencyFailure("Singer walk revisited a point");
  return parts;
}

}  // namespace mbs
