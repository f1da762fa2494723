#include <chrono>
#include <sstream>

#include "mbs/certificate.hpp"
#include "mbs/errors.hpp"

namespace mbs::cert {

namespace {

std::uint64_t to_uint(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (s.empty() || s[0] == '-' || s[0] == '+') throw std::invalid_argument(s);
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    throw InvalidParameter("--" + key + " expects a non-negative integer, got '" + s + "'");
  }
  if (used != s.size()) throw InvalidParameter("--" + key + " expects a non-negative integer, got '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    const auto a = cur.find_first_not_of(' ');
    const auto b = cur.find_last_not_of(' ');
    out.push_back(a == std::string::npos ? std::string{} : cur.substr(a, b - a + 1));
  }
  return out;
}

ExtElement parse_ext(const FieldTower& t, const std::string& s, const std::string& key) {
  const auto v = to_uint(s, key);
  if (v >= t.order()) throw InvalidParameter("--" + key + " must be an element code below " + std::to_string(t.order()));
  return ExtElement{static_cast<std::uint32_t>(v)};
}

Coords parse_coords(const FieldTower& t, const std::string& s, const std::string& key) {
  const auto parts = split_list(s);
  if (parts.size() != 3) throw InvalidParameter("--" + key + " expects three comma-separated element codes");
  return {parse_ext(t, parts[0], key), parse_ext(t, parts[1], key), parse_ext(t, parts[2], key)};
}

LinearFunctional parse_functional(const FieldTower& t, const std::string& s, const std::string& key) {
  if (s == "trace" || s == "tr") return trace_functional(t);
  const auto parts = split_list(s);
  if (parts.size() != t.h())
    throw InvalidParameter("--" + key + " expects 'trace' or " + std::to_string(t.h()) + " comma-separated subfield codes");
  LinearFunctional f;
  for (const auto& p : parts) {
    const auto v = to_uint(p, key);
    if (v >= t.q()) throw InvalidParameter("--" + key + " values must be subfield codes below " + std::to_string(t.q()));
    f.basis_values.push_back(SubElement{static_cast<std::uint32_t>(v)});
  }
  return f;
}

std::vector<std::uint32_t> parse_lines(const ProjectivePlane& plane, const std::string& s) {
  const FieldTower& t = plane.tower();
  const ExtElement o = t.zero(), i = t.one();
  std::vector<std::uint32_t> out;
  for (const auto& part : split_list(s)) {
    if (part == "X") out.push_back(plane.index_of({i, o, o}));
    else if (part == "Y") out.push_back(plane.index_of({o, i, o}));
    else if (part == "Z") out.push_back(plane.index_of({o, o, i}));
    else if (part == "XYZ") out.push_back(plane.index_of({i, i, i}));
    else {
      const auto v = to_uint(part, "lines");
      if (v >= plane.num_lines()) throw InvalidParameter("line index out of range: " + part);
      out.push_back(static_cast<std::uint32_t>(v));
    }
  }
  return out;
}

std::pair<std::uint32_t, std::uint32_t> prime_power(std::uint64_t q) {
  const auto f = prime_factors(q);
  if (q < 2 || f.size() != 1) throw InvalidParameter("--q must be a prime power");
  std::uint32_t d = 0;
  for (std::uint64_t x = q; x > 1; x /= f[0]) ++d;
  return {static_cast<std::uint32_t>(f[0]), d};
}

std::pair<std::uint32_t, std::uint32_t> resolve_pd(const Request& r) {
  auto p = r.get_uint("p");
  auto d = r.get_uint("d");
  if (const auto q = r.get_uint("q")) {
    const auto [qp, qd] = prime_power(*q);
    if ((p && *p != qp) || (d && *d != qd)) throw InvalidParameter("--q disagrees with --p/--d");
    return {qp, qd};
  }
  if (!p) throw InvalidParameter("missing --p (or --q)");
  return {static_cast<std::uint32_t>(*p), static_cast<std::uint32_t>(d.value_or(1))};
}

json condition_json(const FieldTower& t, const search::PairConditionReport& r) {
  return {{"gValues", r.g_values},
          {"inverseAlpha", r.inverse_alpha},
          {"shifted", r.shifted},
          {"failingK", r.failing_k ? encode(t, *r.failing_k) : json(nullptr)}};
}

json condition_json(const FieldTower& t, const search::TripleConditionReport& r) {
  return {{"ratio", r.ratio}, {"shifted", r.shifted}, {"failingK", r.failing_k ? encode(t, *r.failing_k) : json(nullptr)}};
}

Certificate blank(TowerPtr tower, std::string kind, std::uint32_t fold) {
  Certificate c;
  c.tower = std::move(tower);
  c.plane = std::make_shared<const ProjectivePlane>(c.tower);
  c.kind = std::move(kind);
  c.requested_fold = fold;
  return c;
}

Certificate pair_certificate(const TowerPtr& tower, const construct::PairParams& params) {
  const FieldTower& t = *tower;
  Certificate c = blank(tower, "double", 2);
  const auto cond = search::check_pair_conditions(t, params);
  c.params = {{"f", encode(t, params.f)},
              {"g", encode(t, params.g)},
              {"alpha", encode(t, params.alpha)},
              {"conditions", condition_json(t, cond)}};
  const auto [first, second] = construct::double_pair(*c.plane, params);
  c.sets.push_back({"L", first, construct::pair_first_spec(t, params)});
  c.sets.push_back({"L'", second, construct::pair_second_spec(t, params)});
  return c;
}

Certificate triple_certificate(const TowerPtr& tower, const construct::TripleParams& params) {
  const FieldTower& t = *tower;
  Certificate c = blank(tower, "triple-orbit", 3);
  const auto cond = search::check_triple_conditions(t, params);
  c.params = {{"f", encode(t, params.f)},
              {"alpha", encode(t, params.alpha)},
              {"beta", encode(t, params.beta)},
              {"conditions", condition_json(t, cond)}};
  auto orbit = construct::triple_orbit(*c.plane, params);
  const Projectivity phi = Projectivity::phi(t);
  const LinearSetSpec base = construct::triple_base_spec(t, params);
  const LinearSetSpec once = base.transformed(t, phi);
  const LinearSetSpec twice = once.transformed(t, phi);
  c.sets.push_back({"L", std::move(orbit[0]), base});
  c.sets.push_back({"phiL", std::move(orbit[1]), once});
  c.sets.push_back({"phi2L", std::move(orbit[2]), twice});
  return c;
}

Certificate baer_certificate(const TowerPtr& tower) {
  if (tower->h() != 2) throw InvalidParameter("baer-triple needs h = 2");
  Certificate c = blank(tower, "baer-triple", 3);
  const std::uint32_t q = tower->q();
  c.params = {{"partitionSize", q * q - q + 1}, {"members", json::array({0, 1, 2})}};
  auto parts = construct::baer_triple(*c.plane);
  c.sets.push_back({"B0", std::move(parts[0]), std::nullopt});
  c.sets.push_back({"B1", std::move(parts[1]), std::nullopt});
  c.sets.push_back({"B2", std::move(parts[2]), std::nullopt});
  return c;
}

Certificate line_union_certificate(const TowerPtr& tower, const Request& r) {
  const auto t_fold = static_cast<std::uint32_t>(r.get_uint("t").value_or(2));
  Certificate c = blank(tower, "line-union", t_fold);
  std::optional<std::vector<std::uint32_t>> lines;
  if (const auto s = r.get("lines")) lines = parse_lines(*c.plane, *s);
  auto [set, report] = construct::line_union_tfold(*c.plane, t_fold, lines);
  json exceptional = json::array();
  for (const auto& [line, meet] : report.exceptional_lines) exceptional.push_back(json::array({line, meet}));
  c.params = {{"t", t_fold},
              {"baseLines", report.base_lines},
              {"mutualPoints", report.mutual_points.indices()},
              {"exceptionalLines", std::move(exceptional)},
              {"patches", report.patches},
              {"n", report.n},
              {"worstCasePatches", construct::worst_case_patches(t_fold)}};
  c.sets.push_back({"B", std::move(set), std::nullopt});
  return c;
}

void finish(Certificate& c, unsigned threads, std::chrono::steady_clock::time_point start) {
  c.reports = compute_reports(c, threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.metadata = {{"tool", "mbs"}, {"elapsedSeconds", secs}};
}

unsigned threads_of(const Request& r) { return static_cast<unsigned>(r.get_uint("threads").value_or(0)); }

}  // namespace

std::optional<std::string> Request::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::optional<std::uint64_t> Request::get_uint(const std::string& key) const {
  const auto s = get(key);
  if (!s) return std::nullopt;
  return to_uint(*s, key);
}

TowerPtr tower_from_request(const Request& r) {
  const auto [p, d] = resolve_pd(r);
  const auto h = r.get_uint("h");
  if (!h) throw InvalidParameter("missing --h");
  if (p > 255 || d > 32 || *h > 32) throw InvalidParameter("tower parameters out of range");
  return FieldTower::make(p, d, static_cast<std::uint32_t>(*h));
}

Certificate run_construct(const Request& r) {
  const auto start = std::chrono::steady_clock::now();
  const auto kind = r.get("kind");
  if (!kind) throw InvalidParameter("missing --kind");
  const TowerPtr tower = tower_from_request(r);
  const FieldTower& t = *tower;
  Certificate c;
  if (*kind == "trace") {
    c = blank(tower, "trace", 1);
    const auto spec = construct::trace_spec(t);
    c.params = {{"f", encode(t, spec.f)}};
    c.sets.push_back({"L", construct::linear_set(*c.plane, spec), spec});
  } else if (*kind == "linear") {
    c = blank(tower, "linear", 1);
    LinearSetSpec spec = LinearSetSpec::standard(t, parse_functional(t, r.get("f").value_or("trace"), "f"));
    if (const auto s = r.get("u")) spec.u = parse_coords(t, *s, "u");
    if (const auto s = r.get("v")) spec.v = parse_coords(t, *s, "v");
    if (const auto s = r.get("w")) spec.w = parse_coords(t, *s, "w");
    spec.validate(t);
    c.params = encode(t, spec);
    c.sets.push_back({"L", construct::linear_set(*c.plane, spec), spec});
  } else if (*kind == "double") {
    const auto alpha_s = r.get("alpha");
    if (!alpha_s) throw InvalidParameter("double needs --alpha");
    construct::PairParams params;
    params.f = parse_functional(t, r.get("f").value_or("trace"), "f");
    params.alpha = parse_ext(t, *alpha_s, "alpha");
    if (const auto g = r.get("g")) {
      params.g = parse_functional(t, *g, "g");
    } else {
      const std::array<std::pair<ExtElement, SubElement>, 2> cons{{{t.one(), SubElement{1}}, {params.alpha, SubElement{1}}}};
      params.g = functional_from_constraints(t, cons);
    }
    c = pair_certificate(tower, params);
  } else if (*kind == "triple-orbit") {
    const auto alpha_s = r.get("alpha");
    const auto f_s = r.get("f");
    if (!alpha_s || !f_s) throw InvalidParameter("triple-orbit needs --alpha and --f");
    construct::TripleParams params{parse_functional(t, *f_s, "f"), parse_ext(t, *alpha_s, "alpha"), t.one()};
    if (const auto b = r.get("beta")) params.beta = parse_ext(t, *b, "beta");
    c = triple_certificate(tower, params);
  } else if (*kind == "baer-triple") {
    c = baer_certificate(tower);
  } else if (*kind == "line-union") {
    c = line_union_certificate(tower, r);
  } else {
    throw InvalidParameter("unknown --kind '" + *kind + "'");
  }
  finish(c, threads_of(r), start);
  return c;
}

SearchRun run_search(const Request& r) {
  const auto start = std::chrono::steady_clock::now();
  const auto fold = r.get_uint("fold");
  if (!fold || (*fold != 2 && *fold != 3)) throw InvalidParameter("--fold must be 2 or 3");
  const TowerPtr tower = tower_from_request(r);
  search::SearchLimits limits{r.get_uint("budget"), threads_of(r)};
  SearchRun run;
  search::SearchOutcome outcome;
  if (*fold == 2) {
    outcome = search::find_pair_params(tower, parse_functional(*tower, r.get("f").value_or("trace"), "f"), limits);
  } else if (tower->h() == 2) {
    run.status = search::Status::found;
    run.certificate = baer_certificate(tower);
    run.certificate->params["search"] = {{"strategy", "baer-partition"}, {"candidatesExamined", 0}};
    finish(*run.certificate, limits.threads, start);
    return run;
  } else if (tower->h() == 3) {
    search::H3Strategy strategy = search::H3Strategy::automatic;
    if (const auto s = r.get("strategy")) {
      if (*s == "brute-force") strategy = search::H3Strategy::brute_force;
      else if (*s == "guided") strategy = search::H3Strategy::lambda_guided;
      else if (*s != "auto") throw InvalidParameter("--strategy must be auto, brute-force or guided");
    }
    outcome = search::find_triple_params_h3(tower, limits, strategy);
  } else {
    outcome = search::find_triple_params_h4(tower, limits);
  }
  run.status = outcome.status;
  run.candidates_examined = outcome.candidates_examined;
  if (outcome.status == search::Status::exhausted)
    throw ConsistencyFailure("search space exhausted without a hit; the existence guarantee failed");
  if (!outcome.found()) return run;

  const FieldTower& ot = *outcome.tower;
  json details{{"strategy", outcome.strategy}, {"candidatesExamined", outcome.candidates_examined}};
  if (outcome.st) details["st"] = {{"s", encode(ot, outcome.st->s_val)}, {"t", encode(ot, outcome.st->t_val)}};
  if (outcome.l) details["l"] = encode(ot, *outcome.l);
  if (outcome.lambda)
    details["lambda"] = json::array(
        {encode(ot, outcome.lambda->lambda0), encode(ot, outcome.lambda->lambda1), encode(ot, outcome.lambda->lambda2)});
  run.certificate = outcome.pair ? pair_certificate(outcome.tower, *outcome.pair)
                                 : triple_certificate(outcome.tower, *outcome.triple);
  run.certificate->params["search"] = std::move(details);
  finish(*run.certificate, limits.threads, start);
  return run;
}

CountRun run_count(const Request& r) {
  const auto what = r.get("what");
  if (!what) throw InvalidParameter("missing --what");
  CountRun run;
  const unsigned threads = threads_of(r);
  if (*what == "lambda-triples") {
    const auto [p, d] = resolve_pd(r);
    const auto tower = FieldTower::make(p, d, 2);
    const auto c = search::count_lambda_triples(*tower);
    run.ok = c.ok();
    run.result = {{"what", *what},           {"q", tower->q()},
                  {"count", c.count},        {"boundNumerator", c.bound_numerator},
                  {"boundDenominator", 9},   {"bound", c.bound_ceiling},
                  {"ok", run.ok}};
    return run;
  }
  const TowerPtr tower = tower_from_request(r);
  const FieldTower& t = *tower;
  std::uint64_t count = 0;
  std::int64_t bound = 0;
  if (*what == "st-pairs") {
    if (t.h() < 4) throw InvalidParameter("st-pairs needs h >= 4");
    count = search::count_valid_st_pairs(t, threads);
    bound = static_cast<std::int64_t>(t.q()) - 1;
  } else if (*what == "valid-alphas") {
    count = search::count_valid_alphas(t, parse_functional(t, r.get("f").value_or("trace"), "f"), threads);
    bound = search::valid_alpha_bound(t);
  } else {
    throw InvalidParameter("--what must be lambda-triples, st-pairs or valid-alphas");
  }
  run.ok = static_cast<std::int64_t>(count) >= bound;
  run.result = {{"what", *what}, {"p", t.p()}, {"d", t.d()}, {"h", t.h()}, {"q", t.q()},
                {"count", count}, {"bound", bound}, {"ok", run.ok}};
  return run;
}

}  // namespace mbs::cert
