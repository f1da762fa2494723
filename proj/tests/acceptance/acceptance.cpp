// Acceptance run: one PASS/FAIL line per criterion. Library results are
// checked against direct incidence counts rather than the library's reports.

#include <sys/wait.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "mbs/certificate.hpp"
#include "mbs/construct.hpp"
#include "mbs/errors.hpp"
#include "mbs/search.hpp"
#include "mbs/verify.hpp"

namespace fs = std::filesystem;
using namespace mbs;

namespace {

struct Tower {
  std::uint32_t p, d, h;
};

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

std::vector<Tower> towers_up_to(std::uint64_t bound) {
  std::vector<Tower> out;
  for (std::uint32_t p = 2; p * p <= bound; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint32_t d = 1; ipow(p, 2 * d) <= bound; ++d)
      for (std::uint32_t h = 2; ipow(p, d * h) <= bound; ++h) out.push_back({p, d, h});
  }
  return out;
}

std::string name_of(const Tower& t) {
  return "(" + std::to_string(t.p) + "," + std::to_string(t.d) + "," + std::to_string(t.h) + ")";
}

/// Collects failures; keeps the first few messages for the summary line.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    if (ok()) return std::to_string(checks_) + " checks";
    return std::to_string(failures_) + "/" + std::to_string(checks_) + " checks failed: " + messages_;
  }

 private:
  std::uint64_t checks_ = 0, failures_ = 0;
  std::string messages_;
};

std::uint32_t min_count(const std::vector<std::uint16_t>& counts) {
  return *std::min_element(counts.begin(), counts.end());
}

/// Number of lines through P with exactly k points of the set.
std::uint64_t k_secants_through(const ProjectivePlane& pl, std::uint32_t pt, const std::vector<std::uint16_t>& counts,
                                std::uint32_t k) {
  std::uint64_t n = 0;
  pl.for_each_line_through(pt, [&](std::uint32_t l) { n += counts[l] == k; });
  return n;
}

/// min over P in S of the number of k-secants through P.
std::uint64_t min_k_secants(const ProjectivePlane& pl, const PointSet& s, std::uint32_t k) {
  const auto counts = pl.line_counts(s);
  std::uint64_t best = UINT64_MAX;
  s.for_each([&](std::uint32_t pt) { best = std::min(best, k_secants_through(pl, pt, counts, k)); });
  return best;
}

PointSet union_of(const ProjectivePlane& pl, const std::vector<cert::NamedSet>& sets) {
  PointSet u = pl.empty_set();
  for (const auto& s : sets) u |= s.points;
  return u;
}

bool pairwise_disjoint(const std::vector<cert::NamedSet>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      if (sets[i].points.intersection_size(sets[j].points) != 0) return false;
  return true;
}

cert::Request tower_request(const Tower& t, std::map<std::string, std::string> extra) {
  extra["p"] = std::to_string(t.p);
  extra["d"] = std::to_string(t.d);
  extra["h"] = std::to_string(t.h);
  return cert::Request{std::move(extra)};
}

// ---------------------------------------------------------------------------

Checker trace_suite() {
  Checker c;
  for (const auto& tw : towers_up_to(1024)) {
    const ProjectivePlane pl(FieldTower::make(tw.p, tw.d, tw.h));
    const std::uint64_t q = pl.tower().q(), Q = pl.order(), long_size = Q / q + 1;
    const PointSet s = construct::trace_blocking_set(pl);
    const std::string at = name_of(tw);
    c.expect(s.size() == Q + Q / q + 1, at + " size");
    const auto counts = pl.line_counts(s);
    std::map<std::uint32_t, std::uint64_t> spec;
    for (const auto k : counts) ++spec[k];
    std::set<std::uint32_t> support;
    for (const auto& [k, n] : spec) support.insert(k);
    c.expect(support == std::set<std::uint32_t>{1, static_cast<std::uint32_t>(q + 1),
                                                  static_cast<std::uint32_t>(long_size)},
             at + " spectrum support");
    if (tw.h > 2) c.expect(spec[long_size] == q + 1, at + " long secants are the q+1 through (1:0:0)");
    const ExtElement o{0}, i{1};
    const std::uint32_t x = pl.index_of({i, o, o});
    c.expect(s.contains(x), at + " (1:0:0) in set");
    c.expect(k_secants_through(pl, x, counts, 1) == Q - q, at + " tangents at (1:0:0)");
    c.expect(k_secants_through(pl, x, counts, long_size) == q + 1, at + " long secants at (1:0:0)");
    bool others = true;
    s.for_each([&](std::uint32_t pt) {
      if (pt != x && k_secants_through(pl, pt, counts, 1) != Q - Q / q) others = false;
    });
    c.expect(others, at + " tangents at other points");
  }
  return c;
}

Checker double_suite() {
  Checker c;
  for (const auto& tw : towers_up_to(729)) {
    const std::string at = name_of(tw);
    const auto run = cert::run_search(tower_request(tw, {{"fold", "2"}}));
    c.expect(run.status == search::Status::found, at + " search found");
    if (!run.certificate) continue;
    const auto& cf = *run.certificate;
    const ProjectivePlane& pl = *cf.plane;
    const std::uint64_t q = pl.tower().q(), Q = pl.order();
    const PointSet u = union_of(pl, cf.sets);
    c.expect(cf.sets.size() == 2 && pairwise_disjoint(cf.sets), at + " disjoint pair");
    c.expect(u.size() == 2 * (Q + Q / q + 1), at + " size");
    c.expect(min_count(pl.line_counts(u)) >= 2, at + " fold");
    const std::uint64_t secants = min_k_secants(pl, u, 2);
    c.expect(secants > 0, at + " minimal");
    c.expect(secants >= Q - Q / q - Q / (q * q), at + " 2-secants per point");
  }
  return c;
}

void check_triple(Checker& c, const cert::Certificate& cf, const std::string& at, bool want_minimal) {
  const ProjectivePlane& pl = *cf.plane;
  const std::uint64_t q = pl.tower().q(), Q = pl.order();
  const PointSet u = union_of(pl, cf.sets);
  c.expect(cf.sets.size() == 3 && pairwise_disjoint(cf.sets), at + " pairwise disjoint");
  c.expect(u.size() == 3 * (Q + Q / q + 1), at + " size");
  c.expect(min_count(pl.line_counts(u)) >= 3, at + " fold");
  if (want_minimal) {
    const std::uint64_t secants = min_k_secants(pl, u, 3);
    c.expect(secants > 0, at + " minimal");
    c.expect(secants >= Q - Q / q - 2 * (Q / (q * q)), at + " 3-secants per point");
  }
}

Checker triple_suite() {
  Checker c;
  for (const std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const auto cf = cert::run_construct(cert::Request{{{"kind", "baer-triple"}, {"q", std::to_string(q)}, {"h", "2"}}});
    check_triple(c, cf, "baer q=" + std::to_string(q), false);
  }
  for (const std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
    const std::string at = "h=3 q=" + std::to_string(q);
    const auto run = cert::run_search(
        cert::Request{{{"fold", "3"}, {"q", std::to_string(q)}, {"h", "3"}, {"strategy", "brute-force"}}});
    c.expect(run.status == search::Status::found, at + " brute force found");
    if (!run.certificate) continue;
    c.expect(run.certificate->params["search"]["strategy"] == "brute-force", at + " strategy");
    check_triple(c, *run.certificate, at, q > 2);
  }
  for (const std::uint32_t q : {2u, 3u}) {
    const std::string at = "h=4 q=" + std::to_string(q);
    const auto t = FieldTower::make(q, 1, 4);
    c.expect(search::count_valid_st_pairs(*t) >= q - 1, at + " (s,t) count");
    const auto run = cert::run_search(cert::Request{{{"fold", "3"}, {"q", std::to_string(q)}, {"h", "4"}}});
    c.expect(run.status == search::Status::found, at + " found");
    if (run.certificate) check_triple(c, *run.certificate, at, q > 2);
  }
  return c;
}

Checker line_union_suite() {
  Checker c;
  for (const auto& tw : towers_up_to(64)) {
    const ProjectivePlane pl(FieldTower::make(tw.p, tw.d, tw.h));
    const std::uint32_t Q = pl.order();
    const std::string at = name_of(tw);
    const auto [tri, tri_report] = construct::line_union_tfold(pl, 2);
    c.expect(tri.size() == 3ull * Q, at + " triangle size");
    c.expect(min_count(pl.line_counts(tri)) >= 2, at + " triangle fold");

    for (std::uint32_t t = 3; t <= 5 && t + 2 <= Q; ++t) {
      const std::string at_t = at + " t=" + std::to_string(t);
      const auto [set, report] = construct::line_union_tfold(pl, t);
      const auto counts = pl.line_counts(set);
      c.expect(min_count(counts) >= t, at_t + " fold");
      const std::int64_t bound = std::int64_t{t} * Q + Q + 1 + construct::worst_case_patches(t);
      c.expect(std::int64_t(set.size()) <= bound, at_t + " size bound");
      // M and n_i from the base lines alone.
      PointSet m = pl.empty_set();
      const auto& base = report.base_lines;
      for (std::size_t a = 0; a < base.size(); ++a)
        for (std::size_t b = a + 1; b < base.size(); ++b) m.insert(pl.meet(base[a], base[b]));
      const std::uint64_t msize = m.size();
      c.expect(msize == std::uint64_t{t} * (t + 1) / 2, at_t + " |M|");
      const auto mcounts = pl.line_counts(m);
      std::vector<std::uint64_t> n(t + 1, 0);
      for (std::uint32_t l = 0; l < pl.num_lines(); ++l)
        if (std::find(base.begin(), base.end(), l) == base.end()) ++n.at(mcounts[l]);
      std::uint64_t rhs = 0;
      for (std::uint32_t i = 2; i <= t; ++i) rhs += std::uint64_t{i} * (i - 1) * n[i];
      c.expect(msize * (msize - 2 * t + 1) == rhs, at_t + " double count");
      bool reported = true;
      for (std::uint32_t i = 0; i < t; ++i) reported = reported && i < report.n.size() && report.n[i] == n[i];
      c.expect(reported && n[t] == 0, at_t + " n_i as reported");
    }
  }
  // X, Y, Z and X+Y+Z on even orders.
  for (const auto& tw : std::vector<Tower>{{2, 1, 2}, {2, 1, 3}, {2, 1, 4}, {2, 2, 2}}) {
    const ProjectivePlane pl(FieldTower::make(tw.p, tw.d, tw.h));
    const std::string at = name_of(tw) + " XYZ";
    const ExtElement o{0}, i{1};
    const std::vector<std::uint32_t> lines{pl.index_of({i, o, o}), pl.index_of({o, i, o}), pl.index_of({o, o, i}),
                                           pl.index_of({i, i, i})};
    const auto [set, report] = construct::line_union_tfold(pl, 3, lines);
    PointSet base = pl.empty_set();
    for (const auto l : lines) base |= pl.line_points(l);
    const auto base_counts = pl.line_counts(base);
    std::vector<std::uint32_t> exceptional;
    for (std::uint32_t l = 0; l < pl.num_lines(); ++l)
      if (base_counts[l] < 3) exceptional.push_back(l);
    c.expect(exceptional.size() == 3, at + " three exceptional lines");
    const std::uint32_t centre = pl.index_of({i, i, i});
    bool concur = true;
    for (const auto l : exceptional) concur = concur && pl.incident(centre, l);
    c.expect(concur, at + " concurrent at (1:1:1)");
    c.expect(set.size() == 4ull * pl.order() - 1, at + " size 4q-1");
    c.expect(min_count(pl.line_counts(set)) >= 3, at + " fold");
  }
  return c;
}

Checker exponent_suite() {
  Checker c;
  struct Case {
    std::uint32_t p, n, s;
  };
  for (const auto& [p, n, s] : std::vector<Case>{{2, 4, 2}, {2, 6, 2}, {3, 4, 2}, {2, 8, 2}, {2, 10, 2}, {2, 9, 3}, {3, 6, 2}}) {
    const std::uint32_t d = n / s;
    const std::string at = "p=" + std::to_string(p) + " n=" + std::to_string(n);
    const ProjectivePlane pl(FieldTower::make(p, d, s));
    const PointSet set = construct::trace_blocking_set(pl);
    const auto counts = pl.line_counts(set);
    const std::uint64_t pe = ipow(p, d), pe1 = pe * p;
    bool all = true;
    for (const auto k : counts) all = all && (k - 1) % pe == 0;
    c.expect(all, at + " every line 1 mod p^(n/s)");
    const auto e = verify::exponent(pl, set);
    c.expect(e.exponent == d, at + " exponent n/s");
    c.expect(e.witness_line.has_value() && (counts[*e.witness_line] - 1) % pe1 != 0, at + " witness line");
  }
  return c;
}

Checker counting_suite() {
  Checker c;
  for (const auto& tw : towers_up_to(64)) {
    const auto t = FieldTower::make(tw.p, tw.d, tw.h);
    const std::uint32_t q = t->q();
    const std::uint64_t want = t->order() / q;
    // Every nonzero functional, by its values on the standard basis.
    for (std::uint64_t code = 1; code < ipow(q, tw.h); ++code) {
      LinearFunctional f;
      for (std::uint64_t r = code, j = 0; j < tw.h; ++j, r /= q) f.basis_values.push_back({std::uint32_t(r % q)});
      std::vector<std::uint64_t> fibers(q, 0);
      for (std::uint32_t x = 0; x < t->order(); ++x) ++fibers[eval_functional(*t, f, {x}).code];
      bool ok = true;
      for (std::uint32_t k = 0; k < q; ++k) ok = ok && fibers[k] == want && fiber_size(*t, f, {k}) == want;
      c.expect(ok, name_of(tw) + " fibers");
    }
  }
  for (const auto& tw : towers_up_to(256)) {
    const auto t = FieldTower::make(tw.p, tw.d, tw.h);
    const std::int64_t bound = std::int64_t(ipow(t->q(), tw.h - 1)) - t->q() + 1;
    std::uint64_t worst = UINT64_MAX;
    for (std::uint64_t code = 1; code < ipow(t->q(), tw.h); ++code) {
      LinearFunctional f;
      for (std::uint64_t r = code, j = 0; j < tw.h; ++j, r /= t->q())
        f.basis_values.push_back({std::uint32_t(r % t->q())});
      worst = std::min(worst, search::count_valid_alphas(*t, f));
    }
    c.expect(std::int64_t(worst) >= bound, name_of(tw) + " valid alphas");
  }
  for (const std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    std::uint32_t p = 2;
    while (q % p) ++p;
    std::uint32_t d = 0;
    for (std::uint32_t r = q; r > 1; r /= p) ++d;
    const auto t = FieldTower::make(p, d, 2);
    const std::int64_t num = std::int64_t(q) * (q - 1) * (q - 1) - 6 * std::int64_t(q - 1);
    const std::int64_t ceiling = num <= 0 ? -((-num) / 9) : (num + 8) / 9;
    c.expect(std::int64_t(search::count_lambda_triples(*t).count) >= ceiling, "lambda q=" + std::to_string(q));
  }
  return c;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string point_list(const cert::Certificate& cf, const PointSet& s) {
  const FieldTower& t = *cf.tower;
  std::ostringstream out;
  out << "tower " << t.p() << ' ' << t.d() << ' ' << t.h() << "\ninner";
  for (const auto v : t.inner_modulus()) out << ' ' << v;
  out << "\nouter";
  for (const auto v : t.outer_modulus()) out << ' ' << v;
  out << '\n';
  s.for_each([&](std::uint32_t i) { out << i << '\n'; });
  return out.str();
}

Checker certificate_suite(const std::string& cli, const fs::path& dir) {
  Checker c;
  std::vector<fs::path> files;
  if (fs::is_directory(dir))
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  c.expect(!files.empty(), "no certificates in " + dir.string());
  std::mt19937 rng(20240601);
  std::size_t minimal_certs = 0;
  const fs::path scratch = fs::temp_directory_path() / "mbs_acceptance_deletion.txt";
  for (const auto& path : files) {
    const std::string at = path.filename().string();
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    const auto stored = cert::json::parse(text.str());
    const auto cf = cert::from_json(stored);
    cert::json fresh;
    const auto v = cert::verify_certificate(cf, 0, false, 0, &fresh);
    c.expect(v.reports_present && cf.reports && fresh.dump() == cf.reports->dump(), at + " reports reproduced");
    c.expect(v.passed(), at + " verdict");
    auto round = cert::to_json(cf);
    c.expect(round.dump() == stored.dump(), at + " round trip");
    c.expect(run_cli(cli, "verify --in \"" + path.string() + "\"") == 0, at + " cli verify");

    const auto& union_report = (*cf.reports)["union"];
    bool minimal = false;
    for (const auto& m : union_report["minimality"])
      if (m["t"] == cf.requested_fold) minimal = m["minimal"].get<bool>();
    if (!minimal) continue;
    ++minimal_certs;
    const PointSet u = cf.union_set();
    auto points = u.indices();
    std::shuffle(points.begin(), points.end(), rng);
    points.resize(std::min<std::size_t>(points.size(), 20));
    std::size_t caught = 0;
    for (const auto pt : points) {
      PointSet less = u;
      less.erase(pt);
      std::ofstream(scratch) << point_list(cf, less);
      caught += run_cli(cli, "verify --in \"" + scratch.string() + "\" --fold " + std::to_string(cf.requested_fold) +
                                 " --minimal") == 1;
    }
    c.expect(caught == points.size(), at + " deletions detected " + std::to_string(caught) + "/" +
                                          std::to_string(points.size()));
  }
  fs::remove(scratch);
  c.expect(minimal_certs > 0, "no minimal certificates shipped");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli, certs;
  std::vector<int> only;
  app.add_option("--cli", cli, "path to the mbs executable")->required();
  app.add_option("--certificates", certs, "directory of shipped certificates")->required();
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Checker()>>> criteria{
      {"trace construction suite", trace_suite},
      {"double blocking suite", double_suite},
      {"triple blocking suite", triple_suite},
      {"line-union suite", line_union_suite},
      {"exponent suite", exponent_suite},
      {"counting suites", counting_suite},
      {"certificate re-verification and deletions", [&] { return certificate_suite(cli, certs); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Checker result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%s, %.1fs)\n", result.ok() ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                result.summary().c_str(), secs);
    std::fflush(stdout);
    all = all && result.ok();
  }
  return all ? 0 : 1;
}
