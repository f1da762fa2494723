#include "mbs/verify.hpp"

#include <algorithm>
#include <limits>

#include "mbs/errors.hpp"

namespace mbs::verify {

std::uint32_t blocking_fold(const ProjectivePlane& plane, const PointSet& s) {
  const auto counts = plane.line_counts(s);
  return *std::min_element(counts.begin(), counts.end());
}

Spectrum spectrum(const ProjectivePlane& plane, const PointSet& s) { return plane.lines_meeting(s); }

namespace {

MinimalityResult minimality_from_counts(const ProjectivePlane& plane, const PointSet& s,
                                        const std::vector<std::uint16_t>& counts, std::uint32_t t) {
  MinimalityResult r;
  r.min_t_secants = std::numeric_limits<std::uint64_t>::max();
  s.for_each([&](std::uint32_t p) {
    std::uint64_t n = 0;
    plane.for_each_line_through(p, [&](std::uint32_t l) { n += counts[l] == t; });
    if (n < r.min_t_secants) {
      r.min_t_secants = n;
      r.weakest_point = p;
    }
  });
  if (s.empty()) r.min_t_secants = 0;
  r.minimal = r.min_t_secants >= 1;
  return r;
}

}  // namespace

MinimalityResult is_minimal(const ProjectivePlane& plane, const PointSet& s, std::uint32_t t) {
  const auto counts = plane.line_counts(s);
  if (*std::min_element(counts.begin(), counts.end()) < t)
    throw InvalidParameter("set is not a " + std::to_string(t) + "-fold blocking set");
  return minimality_from_counts(plane, s, counts, t);
}

std::uint32_t point_weight(const ProjectivePlane& plane, std::uint32_t point, const LinearSetSpec& spec) {
  const FieldTower& t = plane.tower();
  const std::uint32_t h = t.h();
  const Coords vp = plane.coords_of(point);
  const std::size_t rows = 3 * std::size_t{h};
  const std::size_t cols = 2 * std::size_t{h} + 1;
  linalg::Matrix m(rows, std::vector<SubElement>(cols));

  auto put_column = [&](std::size_t col, const Coords& vec) {
    for (std::size_t c = 0; c < 3; ++c) {
      const auto coeffs = t.coefficients(vec[c]);
      for (std::uint32_t j = 0; j < h; ++j) m[c * h + j][col] = coeffs[j];
    }
  };

  ExtElement basis = t.one();
  for (std::uint32_t j = 0; j < h; ++j) {
    put_column(j, {t.mul(basis, vp[0]), t.mul(basis, vp[1]), t.mul(basis, vp[2])});
    const ExtElement fx = t.embed(eval_functional(t, spec.f, basis));
    Coords image{};
    for (std::size_t c = 0; c < 3; ++c) image[c] = t.neg(t.add(t.mul(basis, spec.u[c]), t.mul(fx, spec.v[c])));
    put_column(h + j, image);
    basis = t.mul(basis, t.generator());
  }
  put_column(2 * h, {t.neg(spec.w[0]), t.neg(spec.w[1]), t.neg(spec.w[2])});
  // The solution space maps injectively onto U cap <v_P>: lambda v_P = 0
  // forces lambda = 0, and then independence of u, v, w forces x = y = 0.
  return static_cast<std::uint32_t>(cols - linalg::rank(t, std::move(m)));
}

std::uint64_t tangents_from(const ProjectivePlane& plane, std::uint32_t point,
                            const std::vector<std::uint16_t>& counts) {
  std::uint64_t n = 0;
  plane.for_each_line_through(point, [&](std::uint32_t l) { n += counts[l] == 1; });
  return n;
}

std::uint64_t tangents_from(const ProjectivePlane& plane, std::uint32_t point, const PointSet& s) {
  std::uint64_t n = 0;
  plane.for_each_line_through(point, [&](std::uint32_t l) {
    std::uint32_t meet = 0;
    plane.for_each_point_on_line(l, [&](std::uint32_t p) { meet += s.contains(p); });
    n += meet == 1;
  });
  return n;
}

ExponentResult exponent_from_counts(const FieldTower& tower, const std::vector<std::uint16_t>& counts) {
  if (*std::min_element(counts.begin(), counts.end()) < 1)
    throw InvalidParameter("exponent is only defined for blocking sets");
  const std::uint32_t n = tower.n();
  auto all_one_mod = [&](std::uint64_t m) {
    return std::all_of(counts.begin(), counts.end(), [&](std::uint16_t c) { return (c - 1) % m == 0; });
  };
  ExponentResult r;
  std::uint64_t pe = 1;
  std::uint32_t e = 0;
  while (e < n && all_one_mod(pe * tower.p())) {
    pe *= tower.p();
    ++e;
  }
  if (e == 0) return r;
  r.exponent = e;
  if (e == n) {
    r.degenerate = true;
    return r;
  }
  const std::uint64_t next = pe * tower.p();
  for (std::uint32_t l = 0; l < counts.size(); ++l) {
    if ((counts[l] - 1u) % next != 0) {
      r.witness_line = l;
      break;
    }
  }
  return r;
}

ExponentResult exponent(const ProjectivePlane& plane, const PointSet& s) {
  return exponent_from_counts(plane.tower(), plane.line_counts(s));
}

bool disjoint(const PointSet& a, const PointSet& b) { return a.intersection_size(b) == 0; }

std::optional<std::uint32_t> contains_line(const ProjectivePlane& plane, const PointSet& s) {
  const auto counts = plane.line_counts(s);
  for (std::uint32_t l = 0; l < counts.size(); ++l)
    if (counts[l] == plane.order() + 1) return l;
  return std::nullopt;
}

VerifyReport verify_set(const ProjectivePlane& plane, const PointSet& s, const std::vector<std::uint32_t>& folds,
                        const LinearSetSpec* spec, unsigned threads) {
  VerifyReport r;
  const auto counts = plane.line_counts(s, threads);
  r.size = s.size();
  for (const auto c : counts) ++r.spectrum[c];
  r.min_blocking_fold = r.spectrum.begin()->first;
  for (const auto t : folds)
    if (t >= 1 && t <= r.min_blocking_fold) r.minimality[t] = minimality_from_counts(plane, s, counts, t);
  for (std::uint32_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == plane.order() + 1) {
      r.contained_line = l;
      break;
    }
  }
  if (r.min_blocking_fold >= 1) {
    r.exponent = exponent_from_counts(plane.tower(), counts);
    const bool small = 2 * s.size() < 3ull * (plane.order() + 1);
    const bool minimal = r.minimality.contains(1) ? r.minimality[1].minimal
                                                  : minimality_from_counts(plane, s, counts, 1).minimal;
    r.exponent_preconditions_met = !r.contained_line && small && minimal;
  }
  if (spec) {
    std::map<std::uint32_t, std::uint64_t> weights;
    s.for_each([&](std::uint32_t p) { ++weights[point_weight(plane, p, *spec)]; });
    r.weight_spectrum = std::move(weights);
  }
  return r;
}

}  // namespace mbs::verify
