#include "mbs/certificate.hpp"

#include <sstream>

#include "mbs/errors.hpp"

namespace mbs::cert {

PointSet Certificate::union_set() const {
  PointSet u = plane->empty_set();
  for (const auto& s : sets) u |= s.points;
  return u;
}

json encode(const FieldTower& t, SubElement a) { return json(t.digits(a)); }

json encode(const FieldTower& t, ExtElement x) {
  json out = json::array();
  for (const auto c : t.coefficients(x)) out.push_back(encode(t, c));
  return out;
}

json encode(const FieldTower& t, const Coords& c) {
  return json::array({encode(t, c[0]), encode(t, c[1]), encode(t, c[2])});
}

json encode(const FieldTower& t, const LinearFunctional& f) {
  json out = json::array();
  for (const auto v : f.basis_values) out.push_back(encode(t, v));
  return out;
}

json encode(const FieldTower& t, const LinearSetSpec& spec) {
  return json{{"u", encode(t, spec.u)}, {"v", encode(t, spec.v)}, {"w", encode(t, spec.w)}, {"f", encode(t, spec.f)}};
}

SubElement decode_sub(const FieldTower& t, const json& j) {
  if (j.is_number_unsigned()) {
    const auto code = j.get<std::uint64_t>();
    if (code >= t.q()) throw InvalidParameter("subfield element code out of range");
    return SubElement{static_cast<std::uint32_t>(code)};
  }
  if (!j.is_array() || j.size() != t.d()) throw InvalidParameter("subfield element must list " + std::to_string(t.d()) + " digits");
  std::vector<std::uint32_t> digits;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= t.p()) throw InvalidParameter("digit out of range");
    digits.push_back(v.get<std::uint32_t>());
  }
  return t.from_digits(digits);
}

ExtElement decode_ext(const FieldTower& t, const json& j) {
  if (j.is_number_unsigned()) {
    const auto code = j.get<std::uint64_t>();
    if (code >= t.order()) throw InvalidParameter("element code out of range");
    return ExtElement{static_cast<std::uint32_t>(code)};
  }
  if (!j.is_array() || j.size() != t.h()) throw InvalidParameter("element must list " + std::to_string(t.h()) + " coefficients");
  std::vector<SubElement> coeffs;
  for (const auto& v : j) coeffs.push_back(decode_sub(t, v));
  return t.from_coefficients(coeffs);
}

Coords decode_coords(const FieldTower& t, const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidParameter("vector must have three coordinates");
  return {decode_ext(t, j[0]), decode_ext(t, j[1]), decode_ext(t, j[2])};
}

LinearFunctional decode_functional(const FieldTower& t, const json& j) {
  if (!j.is_array() || j.size() != t.h()) throw InvalidParameter("functional must list " + std::to_string(t.h()) + " values");
  LinearFunctional f;
  for (const auto& v : j) f.basis_values.push_back(decode_sub(t, v));
  return f;
}

LinearSetSpec decode_spec(const FieldTower& t, const json& j) {
  if (!j.is_object()) throw InvalidParameter("linearSpec must be an object");
  LinearSetSpec s{decode_coords(t, j.at("u")), decode_coords(t, j.at("v")), decode_coords(t, j.at("w")),
                  decode_functional(t, j.at("f"))};
  s.validate(t);
  return s;
}

namespace {

template <class Map>
json pairs(const Map& m) {
  json out = json::array();
  for (const auto& [k, v] : m) out.push_back(json::array({k, v}));
  return out;
}

json optional_uint(const std::optional<std::uint32_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json report_json(const verify::VerifyReport& r) {
  json out;
  out["size"] = r.size;
  out["spectrum"] = pairs(r.spectrum);
  out["minBlockingFold"] = r.min_blocking_fold;
  json mins = json::array();
  for (const auto& [t, m] : r.minimality)
    mins.push_back({{"t", t}, {"minimal", m.minimal}, {"minTSecants", m.min_t_secants}, {"weakestPoint", m.weakest_point}});
  out["minimality"] = std::move(mins);
  out["containsLine"] = optional_uint(r.contained_line);
  if (r.exponent) {
    out["exponent"] = {{"value", optional_uint(r.exponent->exponent)},
                       {"witnessLine", optional_uint(r.exponent->witness_line)},
                       {"degenerate", r.exponent->degenerate},
                       {"preconditionsMet", r.exponent_preconditions_met}};
  } else {
    out["exponent"] = nullptr;
  }
  out["weightSpectrum"] = r.weight_spectrum ? pairs(*r.weight_spectrum) : json(nullptr);
  return out;
}

json compute_reports(const Certificate& c, unsigned threads) {
  json out;
  json per_set = json::object();
  for (const auto& s : c.sets) {
    const auto r = verify::verify_set(*c.plane, s.points, {1}, s.spec ? &*s.spec : nullptr, threads);
    per_set[s.name] = report_json(r);
  }
  out["sets"] = std::move(per_set);
  const PointSet u = c.union_set();
  out["union"] = report_json(verify::verify_set(*c.plane, u, {c.requested_fold}, nullptr, threads));
  if (c.sets.size() > 1) {
    json inter = json::array();
    bool disjoint = true;
    for (std::size_t i = 0; i < c.sets.size(); ++i)
      for (std::size_t j = i + 1; j < c.sets.size(); ++j) {
        const auto n = c.sets[i].points.intersection_size(c.sets[j].points);
        disjoint = disjoint && n == 0;
        inter.push_back(json::array({c.sets[i].name, c.sets[j].name, n}));
      }
    out["intersections"] = std::move(inter);
    out["pairwiseDisjoint"] = disjoint;
  }
  return out;
}

json to_json(const Certificate& c) {
  const FieldTower& t = *c.tower;
  json out;
  out["schemaVersion"] = kSchemaVersion;
  out["tower"] = {{"p", t.p()},
                  {"d", t.d()},
                  {"h", t.h()},
                  {"q", t.q()},
                  {"order", t.order()},
                  {"innerModulus", t.inner_modulus()},
                  {"outerModulus", t.outer_modulus()}};
  out["construction"] = {{"kind", c.kind}, {"params", c.params}};
  out["requestedFold"] = c.requested_fold;
  json sets = json::array();
  for (const auto& s : c.sets) {
    json js{{"name", s.name}, {"size", s.points.size()}, {"indices", s.points.indices()}};
    if (s.spec) js["linearSpec"] = encode(t, *s.spec);
    sets.push_back(std::move(js));
  }
  out["pointSets"] = std::move(sets);
  if (c.reports) out["verifyReports"] = *c.reports;
  out["metadata"] = c.metadata;
  return out;
}

namespace {

std::vector<std::uint32_t> uint_list(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidParameter(std::string(what) + " must be a list");
  std::vector<std::uint32_t> out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw InvalidParameter(std::string(what) + " must hold non-negative integers");
    out.push_back(v.get<std::uint32_t>());
  }
  return out;
}

void attach_plane(Certificate& c) { c.plane = std::make_shared<const ProjectivePlane>(c.tower); }

}  // namespace

Certificate from_json(const json& j) {
  try {
    if (!j.is_object()) throw InvalidParameter("certificate must be a JSON object");
    if (j.at("schemaVersion").get<int>() != kSchemaVersion) throw InvalidParameter("unsupported schemaVersion");
    Certificate c;
    const auto& tw = j.at("tower");
    c.tower = FieldTower::make_with_moduli(tw.at("p").get<std::uint32_t>(), tw.at("d").get<std::uint32_t>(),
                                           tw.at("h").get<std::uint32_t>(), uint_list(tw.at("innerModulus"), "innerModulus"),
                                           uint_list(tw.at("outerModulus"), "outerModulus"));
    attach_plane(c);
    c.kind = j.at("construction").at("kind").get<std::string>();
    c.params = j.at("construction").value("params", json::object());
    c.requested_fold = j.at("requestedFold").get<std::uint32_t>();
    if (c.requested_fold < 1) throw InvalidParameter("requestedFold must be at least 1");
    for (const auto& js : j.at("pointSets")) {
      NamedSet s{js.at("name").get<std::string>(), c.plane->empty_set(), std::nullopt};
      for (const auto idx : uint_list(js.at("indices"), "indices")) {
        if (idx >= c.plane->num_points()) throw InvalidParameter("point index out of range");
        s.points.insert(idx);
      }
      if (js.contains("size") && js.at("size").get<std::uint64_t>() != s.points.size())
        throw InvalidParameter("point set '" + s.name + "': size does not match its indices");
      if (js.contains("linearSpec")) s.spec = decode_spec(*c.tower, js.at("linearSpec"));
      for (const auto& other : c.sets)
        if (other.name == s.name) throw InvalidParameter("duplicate point set name " + s.name);
      c.sets.push_back(std::move(s));
    }
    if (c.sets.empty()) throw InvalidParameter("certificate holds no point sets");
    if (j.contains("verifyReports")) c.reports = j.at("verifyReports");
    c.metadata = j.value("metadata", json::object());
    return c;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("malformed certificate: ") + e.what());
  }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    if (s.empty() || s[0] == '-' || s[0] == '+') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("expected a non-negative integer for " + what + ", got '" + s + "'");
  }
  if (used != s.size()) throw InvalidParameter("expected a non-negative integer for " + what + ", got '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Certificate parse_point_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<std::array<std::uint32_t, 3>> header;
  std::vector<std::uint32_t> inner, outer;
  std::vector<std::string> point_lines;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream words(line);
    std::string head;
    words >> head;
    if (head == "tower" || head == "inner" || head == "outer") {
      std::vector<std::uint32_t> nums;
      std::string w;
      while (words >> w) nums.push_back(static_cast<std::uint32_t>(parse_u64(w, head)));
      if (head == "tower") {
        if (header || nums.size() != 3) throw InvalidParameter("tower line must read 'tower p d h'");
        header = std::array<std::uint32_t, 3>{nums[0], nums[1], nums[2]};
      } else {
        (head == "inner" ? inner : outer) = std::move(nums);
      }
      continue;
    }
    if (!header) throw InvalidParameter("point list must start with 'tower p d h'");
    point_lines.push_back(line);
  }
  if (!header) throw InvalidParameter("point list has no tower line");
  const auto [p, d, h] = *header;
  Certificate c;
  auto base = FieldTower::make(p, d, h);
  c.tower = inner.empty() && outer.empty()
                ? base
                : FieldTower::make_with_moduli(p, d, h, inner.empty() ? base->inner_modulus() : inner,
                                               outer.empty() ? base->outer_modulus() : outer);
  attach_plane(c);
  c.kind = "point-list";
  NamedSet s{"points", c.plane->empty_set(), std::nullopt};
  for (const auto& pl : point_lines) {
    const auto parts = split(pl, ',');
    std::uint64_t idx = 0;
    if (parts.size() == 1) {
      idx = parse_u64(trim(parts[0]), "point index");
      if (idx >= c.plane->num_points()) throw InvalidParameter("point index out of range: " + pl);
    } else if (parts.size() == 3) {
      Coords xyz{};
      for (std::size_t i = 0; i < 3; ++i) {
        const auto code = parse_u64(trim(parts[i]), "coordinate");
        if (code >= c.tower->order()) throw InvalidParameter("coordinate code out of range: " + pl);
        xyz[i] = ExtElement{static_cast<std::uint32_t>(code)};
      }
      idx = c.plane->index_of(xyz);
    } else {
      throw InvalidParameter("cannot parse point '" + pl + "'");
    }
    s.points.insert(static_cast<std::uint32_t>(idx));
  }
  c.sets.push_back(std::move(s));
  return c;
}

Certificate parse_any(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw InvalidParameter(std::string("invalid JSON: ") + e.what());
    }
    return from_json(j);
  }
  return parse_point_list(text);
}

namespace {

std::string render_pairs(const json& arr) {
  std::string out;
  for (const auto& e : arr) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e[0].get<std::uint64_t>()) + ":" + std::to_string(e[1].get<std::uint64_t>());
  }
  return out;
}

void render_report(std::ostringstream& os, const std::string& name, const json& r) {
  os << name << "\n";
  os << "  size               " << r["size"].get<std::uint64_t>() << "\n";
  os << "  min blocking fold  " << r["minBlockingFold"].get<std::uint32_t>() << "\n";
  os << "  spectrum           " << render_pairs(r["spectrum"]) << "\n";
  for (const auto& m : r["minimality"])
    os << "  minimal (t=" << m["t"].get<std::uint32_t>() << ")      " << (m["minimal"].get<bool>() ? "yes" : "no")
       << ", fewest t-secants through a point " << m["minTSecants"].get<std::uint64_t>() << "\n";
  os << "  contains line      "
     << (r["containsLine"].is_null() ? std::string("no") : "line " + std::to_string(r["containsLine"].get<std::uint32_t>()))
     << "\n";
  if (!r["exponent"].is_null()) {
    const auto& e = r["exponent"];
    os << "  exponent           ";
    if (e["value"].is_null()) {
      os << "none";
    } else {
      os << e["value"].get<std::uint32_t>();
      if (e["degenerate"].get<bool>()) os << " (degenerate)";
      if (!e["witnessLine"].is_null()) os << ", witness line " << e["witnessLine"].get<std::uint32_t>();
    }
    if (!e["preconditionsMet"].get<bool>()) os << " [set is not small, minimal and nontrivial]";
    os << "\n";
  }
  if (!r["weightSpectrum"].is_null()) os << "  weights            " << render_pairs(r["weightSpectrum"]) << "\n";
}

}  // namespace

std::string render_text(const Certificate& c, const json& reports) {
  std::ostringstream os;
  const FieldTower& t = *c.tower;
  os << "tower p=" << t.p() << " d=" << t.d() << " h=" << t.h() << " (q=" << t.q() << ", plane order " << t.order()
     << ")\n";
  os << "kind " << c.kind << ", requested fold " << c.requested_fold << "\n";
  for (const auto& s : c.sets) render_report(os, "set " + s.name, reports["sets"][s.name]);
  render_report(os, "union", reports["union"]);
  if (reports.contains("pairwiseDisjoint"))
    os << "pairwise disjoint    " << (reports["pairwiseDisjoint"].get<bool>() ? "yes" : "no") << "\n";
  return os.str();
}

Verdict verify_certificate(const Certificate& c, std::uint32_t fold, bool require_minimal, unsigned threads,
                           json* recomputed) {
  Verdict v;
  json fresh = compute_reports(c, threads);
  if (c.reports) {
    v.reports_present = true;
    v.reports_match = *c.reports == fresh;
  }
  v.fold = fold == 0 ? c.requested_fold : fold;
  const PointSet u = c.union_set();
  const auto counts = c.plane->line_counts(u, threads);
  v.min_blocking_fold = *std::min_element(counts.begin(), counts.end());
  v.fold_ok = v.min_blocking_fold >= v.fold;
  if (require_minimal) {
    v.minimal_checked = true;
    v.minimal_ok = v.fold_ok && verify::is_minimal(*c.plane, u, v.fold).minimal;
  }
  for (std::size_t i = 0; i < c.sets.size(); ++i)
    for (std::size_t j = i + 1; j < c.sets.size(); ++j)
      v.disjoint_ok = v.disjoint_ok && verify::disjoint(c.sets[i].points, c.sets[j].points);
  if (recomputed) *recomputed = std::move(fresh);
  return v;
}

}  // namespace mbs::cert
