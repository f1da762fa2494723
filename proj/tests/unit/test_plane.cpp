#include <doctest.h>

#include <set>

#include "mbs/errors.hpp"
#include "mbs/plane.hpp"
#include "support.hpp"

using namespace mbs;

namespace {

// Incidence by the defining equation, without the plane's enumerators.
std::vector<std::uint32_t> brute_line(const ProjectivePlane& pl, std::uint32_t line) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < pl.num_points(); ++p)
    if (pl.incident(p, line)) out.push_back(p);
  return out;
}

std::vector<std::uint32_t> brute_counts(const ProjectivePlane& pl, const PointSet& s) {
  std::vector<std::uint32_t> out(pl.num_lines(), 0);
  for (std::uint32_t l = 0; l < pl.num_lines(); ++l)
    s.for_each([&](std::uint32_t p) { out[l] += pl.incident(p, l); });
  return out;
}

}  // namespace

TEST_SUITE("plane") {
  TEST_CASE("point and line counts") {
    const ProjectivePlane p4(FieldTower::make(2, 1, 2));
    CHECK(p4.num_points() == 21);
    CHECK(p4.num_lines() == 21);
    CHECK(p4.line_points(0).size() == 5);
    const ProjectivePlane p8(FieldTower::make(2, 1, 3));
    CHECK(p8.num_points() == 73);
    CHECK(p8.line_points(40).size() == 9);
  }

  TEST_CASE("index map is a bijection onto normalized triples") {
    for (const auto& [p, d, h] : testsupport::towers_up_to(64)) {
      const ProjectivePlane pl(FieldTower::make(p, d, h));
      for (std::uint32_t i = 0; i < pl.num_points(); ++i) {
        const Coords c = pl.coords_of(i);
        REQUIRE(pl.normalize(c) == c);
        REQUIRE(pl.index_of(c) == i);
      }
    }
    const ProjectivePlane pl(FieldTower::make(3, 1, 2));
    CHECK(pl.index_of({ExtElement{0}, ExtElement{0}, ExtElement{2}}) == 0);
    // (2 : 1+a : 0) scales to (1 : 2+2a : 0), and 2+2a has code 8.
    CHECK(pl.index_of({ExtElement{2}, ExtElement{4}, ExtElement{0}}) == 1 + 9 + 8 * 9);
    CHECK_THROWS_AS(pl.index_of({ExtElement{0}, ExtElement{0}, ExtElement{0}}), InvalidParameter);
  }

  TEST_CASE("enumerated incidences agree with the defining equation") {
    for (const auto& [p, d, h] : testsupport::towers_up_to(16)) {
      const ProjectivePlane pl(FieldTower::make(p, d, h));
      for (std::uint32_t l = 0; l < pl.num_lines(); ++l) {
        std::vector<std::uint32_t> listed;
        pl.for_each_point_on_line(l, [&](std::uint32_t x) { listed.push_back(x); });
        std::sort(listed.begin(), listed.end());
        REQUIRE(listed == brute_line(pl, l));
        std::uint32_t through = 0;
        pl.for_each_line_through(l, [&](std::uint32_t m) {
          REQUIRE(pl.incident(l, m));
          ++through;
        });
        REQUIRE(through == pl.order() + 1);
      }
    }
  }

  TEST_CASE("line_through and meet") {
    const ProjectivePlane pl(FieldTower::make(2, 1, 3));
    const ExtElement o{0}, i{1};
    const auto x = pl.index_of({i, o, o}), y = pl.index_of({o, i, o}), z = pl.index_of({o, o, i});
    CHECK(pl.line_through(x, y) == pl.index_of({o, o, i}));
    CHECK(pl.line_through(z, x) == pl.index_of({o, i, o}));
    CHECK_THROWS_AS(pl.line_through(x, x), InvalidParameter);
    for (std::uint32_t a = 0; a < pl.num_points(); a += 7)
      for (std::uint32_t b = a + 1; b < pl.num_points(); b += 5) {
        const auto l = pl.line_through(a, b);
        REQUIRE(pl.incident(a, l));
        REQUIRE(pl.incident(b, l));
      }
  }

  TEST_CASE("phi shifts coordinates, has order 3 and preserves lines") {
    for (const auto& [p, d, h] : testsupport::towers_up_to(16)) {
      const auto t = FieldTower::make(p, d, h);
      const ProjectivePlane pl(t);
      const auto phi = Projectivity::phi(*t);
      const ExtElement o{0}, i{1};
      CHECK(phi.apply(pl, pl.index_of({i, o, o})) == pl.index_of({o, i, o}));
      const auto phi3 = phi.compose(*t, phi.compose(*t, phi));
      for (std::uint32_t x = 0; x < pl.num_points(); ++x) {
        const Coords c = pl.coords_of(x);
        REQUIRE(pl.coords_of(phi.apply(pl, x)) == pl.normalize({c[2], c[0], c[1]}));
        REQUIRE(phi.apply(pl, phi.apply(pl, phi.apply(pl, x))) == x);
        REQUIRE(phi3.apply(pl, x) == x);
      }
      for (std::uint32_t l = 0; l < pl.num_lines(); ++l) {
        const PointSet image = phi.apply(pl, pl.line_points(l));
        bool is_line = false;
        for (std::uint32_t m = 0; m < pl.num_lines() && !is_line; ++m) is_line = image == pl.line_points(m);
        REQUIRE(is_line);
      }
    }
  }

  TEST_CASE("singular matrices are rejected") {
    const auto t = FieldTower::make(2, 1, 2);
    const ExtElement o{0}, i{1};
    CHECK_THROWS_AS(Projectivity(*t, Projectivity::Matrix{{{i, o, o}, {i, o, o}, {o, o, i}}}), InvalidParameter);
  }

  TEST_CASE("line_counts match brute force, threaded or not") {
    const ProjectivePlane pl(FieldTower::make(3, 1, 2));
    PointSet s = pl.empty_set();
    for (std::uint32_t x = 0; x < pl.num_points(); x += 3) s.insert(x);
    const auto expect = brute_counts(pl, s);
    for (unsigned threads : {1u, 2u, 4u}) {
      const auto got = pl.line_counts(s, threads);
      REQUIRE(got.size() == expect.size());
      for (std::size_t l = 0; l < got.size(); ++l) REQUIRE(got[l] == expect[l]);
    }
    const ProjectivePlane other(FieldTower::make(2, 1, 2));
    CHECK_THROWS_AS(pl.line_counts(other.empty_set()), InvalidParameter);
  }

  TEST_CASE("Singer orbits partition PG(2, q^2) into Baer subplanes") {
    for (const auto& [p, d] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
      const ProjectivePlane pl(FieldTower::make(p, d, 2));
      const std::uint32_t q = pl.tower().q();
      const auto parts = singer_baer_partition(pl);
      REQUIRE(parts.size() == q * q - q + 1);
      PointSet all = pl.empty_set();
      for (const auto& part : parts) {
        REQUIRE(part.size() == q * q + q + 1);
        REQUIRE(all.intersection_size(part) == 0);
        all |= part;
        std::set<std::uint32_t> sizes;
        if (pl.order() <= 16) {
          for (const auto c : brute_counts(pl, part)) sizes.insert(c);
        } else {
          for (const auto c : pl.line_counts(part)) sizes.insert(c);
        }
        REQUIRE(sizes == std::set<std::uint32_t>{1, q + 1});
      }
      CHECK(all.size() == pl.num_points());
    }
    CHECK_THROWS_AS(singer_baer_partition(ProjectivePlane(FieldTower::make(2, 1, 3))), InvalidParameter);
  }

  TEST_CASE("point sets keep their cardinality") {
    const ProjectivePlane pl(FieldTower::make(2, 1, 2));
    PointSet s = pl.empty_set();
    CHECK(s.insert(3));
    CHECK_FALSE(s.insert(3));
    CHECK(s.insert(20));
    CHECK(s.size() == 2);
    CHECK(s.popcount() == 2);
    CHECK(s.erase(3));
    CHECK_FALSE(s.erase(3));
    CHECK(s.indices() == std::vector<std::uint32_t>{20});
  }
}
