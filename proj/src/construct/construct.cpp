#include "mbs/construct.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "mbs/errors.hpp"

namespace mbs {

void LinearSetSpec::validate(const FieldTower& tower) const {
  if (f.basis_values.size() != tower.h()) throw InvalidParameter("functional has wrong length");
  if (!f.is_nonzero()) throw InvalidParameter("linear set needs a nonzero functional");
  for (const auto* vec : {&u, &v, &w})
    for (const auto e : *vec)
      if (e.code >= tower.order()) throw InvalidParameter("vector coordinate outside GF(q^h)");
  if (determinant(tower, u, v, w).code == 0) throw InvalidParameter("u, v, w are linearly dependent");
}

LinearSetSpec LinearSetSpec::transformed(const FieldTower& tower, const Projectivity& g) const {
  return LinearSetSpec{g.apply(tower, u), g.apply(tower, v), g.apply(tower, w), f};
}

LinearSetSpec LinearSetSpec::standard(const FieldTower& tower, LinearFunctional f) {
  const ExtElement o = tower.zero(), i = tower.one();
  return LinearSetSpec{{i, o, o}, {o, i, o}, {o, o, i}, std::move(f)};
}

namespace construct {

void PairParams::validate(const FieldTower& tower) const {
  if (f.basis_values.size() != tower.h() || g.basis_values.size() != tower.h())
    throw InvalidParameter("functional has wrong length");
  if (!f.is_nonzero() || !g.is_nonzero()) throw InvalidParameter("f and g must be nonzero");
  if (alpha.code >= tower.order()) throw InvalidParameter("alpha outside GF(q^h)");
  if (tower.in_subfield(alpha)) throw InvalidParameter("alpha must lie outside GF(q)");
}

void TripleParams::validate(const FieldTower& tower) const {
  if (f.basis_values.size() != tower.h()) throw InvalidParameter("functional has wrong length");
  if (!f.is_nonzero()) throw InvalidParameter("f must be nonzero");
  if (alpha.code >= tower.order() || beta.code >= tower.order())
    throw InvalidParameter("parameter outside GF(q^h)");
  if (tower.in_subfield(alpha)) throw InvalidParameter("alpha must lie outside GF(q)");
  if (beta.code == 0) throw InvalidParameter("beta must be nonzero");
}

PointSet linear_set(const ProjectivePlane& plane, const LinearSetSpec& spec) {
  const FieldTower& t = plane.tower();
  spec.validate(t);
  PointSet out = plane.empty_set();
  for (std::uint32_t code = 0; code < t.order(); ++code) {
    const ExtElement x{code};
    const ExtElement fx = t.embed(eval_functional(t, spec.f, x));
    Coords vec{};
    for (std::size_t c = 0; c < 3; ++c) vec[c] = t.add(t.mul(x, spec.u[c]), t.mul(fx, spec.v[c]));
    if (code != 0) out.insert(plane.index_of(vec));
    for (std::size_t c = 0; c < 3; ++c) vec[c] = t.add(vec[c], spec.w[c]);
    out.insert(plane.index_of(vec));
  }
  return out;
}

LinearSetSpec trace_spec(const FieldTower& tower) { return LinearSetSpec::standard(tower, trace_functional(tower)); }

PointSet trace_blocking_set(const ProjectivePlane& plane) { return linear_set(plane, trace_spec(plane.tower())); }

LinearSetSpec pair_first_spec(const FieldTower& tower, const PairParams& params) {
  return LinearSetSpec::standard(tower, params.f);
}

LinearSetSpec pair_second_spec(const FieldTower& tower, const PairParams& params) {
  const ExtElement o = tower.zero(), i = tower.one();
  return LinearSetSpec{{o, i, o}, {o, o, i}, {i, o, params.alpha}, params.g};
}

std::pair<PointSet, PointSet> double_pair(const ProjectivePlane& plane, const PairParams& params) {
  params.validate(plane.tower());
  return {linear_set(plane, pair_first_spec(plane.tower(), params)),
          linear_set(plane, pair_second_spec(plane.tower(), params))};
}

LinearSetSpec triple_base_spec(const FieldTower& tower, const TripleParams& params) {
  const ExtElement o = tower.zero(), i = tower.one();
  return LinearSetSpec{{i, o, o}, {o, i, o}, {o, params.alpha, params.beta}, params.f};
}

std::array<PointSet, 3> triple_orbit(const ProjectivePlane& plane, const TripleParams& params) {
  params.validate(plane.tower());
  const Projectivity phi = Projectivity::phi(plane.tower());
  PointSet base = linear_set(plane, triple_base_spec(plane.tower(), params));
  PointSet image = phi.apply(plane, base);
  PointSet image2 = phi.apply(plane, image);
  return {std::move(base), std::move(image), std::move(image2)};
}

std::array<PointSet, 3> baer_triple(const ProjectivePlane& plane) {
  auto parts = singer_baer_partition(plane);
  if (parts.size() < 3) throw ConsistencyFailure("Baer partition has fewer than three members");
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

std::int64_t worst_case_patches(std::uint32_t t) {
  const std::int64_t v = static_cast<std::int64_t>(t);
  return (v * v * v * v - 2 * v * v * v - 5 * v * v + 6 * v) / 8;
}

std::vector<std::uint32_t> default_base_lines(const ProjectivePlane& plane, std::uint32_t t) {
  const FieldTower& tw = plane.tower();
  if (t + 1 > plane.order()) throw InvalidParameter("plane too small for t+1 lines in general position");
  std::vector<std::uint32_t> lines;
  for (std::uint32_t m = 0; m <= t; ++m) {
    const ExtElement e{m};
    lines.push_back(plane.index_of({tw.one(), e, tw.mul(e, e)}));
  }
  return lines;
}

bool has_concurrent_triple(const ProjectivePlane& plane, const std::vector<std::uint32_t>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const std::uint32_t p = plane.meet(lines[i], lines[j]);
      for (std::size_t k = j + 1; k < lines.size(); ++k)
        if (plane.incident(p, lines[k])) return true;
    }
  return false;
}

std::pair<PointSet, PatchReport> line_union_tfold(const ProjectivePlane& plane, std::uint32_t t,
                                                  std::optional<std::vector<std::uint32_t>> lines) {
  if (t < 2) throw InvalidParameter("line union needs t >= 2");
  if (t > plane.order()) throw InvalidParameter("t too large for the plane");
  PatchReport report;
  report.base_lines = lines ? *lines : default_base_lines(plane, t);
  const auto& base = report.base_lines;
  if (base.size() != t + 1) throw InvalidParameter("line union needs exactly t+1 base lines");
  for (const auto l : base)
    if (l >= plane.num_lines()) throw InvalidParameter("line index out of range");
  if (std::set<std::uint32_t>(base.begin(), base.end()).size() != base.size())
    throw InvalidParameter("base lines must be pairwise distinct");
  if (has_concurrent_triple(plane, base)) throw InvalidParameter("three base lines are concurrent");

  PointSet set = plane.empty_set();
  for (const auto l : base) plane.for_each_point_on_line(l, [&](std::uint32_t p) { set.insert(p); });
  report.mutual_points = plane.empty_set();
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i + 1; j < base.size(); ++j) report.mutual_points.insert(plane.meet(base[i], base[j]));

  const auto m_counts = plane.line_counts(report.mutual_points);
  const auto b_counts = plane.line_counts(set);
  const std::set<std::uint32_t> base_set(base.begin(), base.end());
  report.n.assign(t, 0);
  std::unordered_map<std::uint32_t, std::uint32_t> deficit;
  for (std::uint32_t l = 0; l < plane.num_lines(); ++l) {
    if (base_set.contains(l)) continue;
    if (m_counts[l] < t) ++report.n[m_counts[l]];
    if (b_counts[l] < t) {
      report.exceptional_lines.emplace_back(l, m_counts[l]);
      deficit[l] = t - b_counts[l];
    }
  }

  while (!deficit.empty()) {
    std::unordered_map<std::uint32_t, std::uint32_t> score;
    for (const auto& [line, need] : deficit)
      plane.for_each_point_on_line(line, [&](std::uint32_t p) {
        if (!set.contains(p)) ++score[p];
      });
    if (score.empty()) throw ConsistencyFailure("deficient line has no free points");
    auto best = score.begin();
    for (auto it = score.begin(); it != score.end(); ++it)
      if (it->second > best->second || (it->second == best->second && it->first < best->first)) best = it;
    const std::uint32_t patch = best->first;
    set.insert(patch);
    report.patches.push_back(patch);
    plane.for_each_line_through(patch, [&](std::uint32_t l) {
      auto it = deficit.find(l);
      if (it != deficit.end() && --it->second == 0) deficit.erase(it);
    });
  }
  return {std::move(set), std::move(report)};
}

}  // namespace construct
}  // namespace mbs
