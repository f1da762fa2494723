#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbs/construct.hpp"
#include "mbs/search.hpp"
#include "mbs/verify.hpp"

namespace mbs::cert {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct NamedSet {
  std::string name;
  PointSet points;
  std::optional<LinearSetSpec> spec;
};

/// A construction together with its independently computed reports.
/// Everything except `metadata` takes part in equality checks.
struct Certificate {
  TowerPtr tower;
  std::shared_ptr<const ProjectivePlane> plane;
  std::string kind;
  json params = json::object();
  std::uint32_t requested_fold = 1;
  std::vector<NamedSet> sets;
  std::optional<json> reports;
  json metadata = json::object();

  PointSet union_set() const;
};

// Element and functional encodings: nested coefficient lists, constant term first.
json encode(const FieldTower& t, SubElement a);
json encode(const FieldTower& t, ExtElement x);
json encode(const FieldTower& t, const Coords& c);
json encode(const FieldTower& t, const LinearFunctional& f);
json encode(const FieldTower& t, const LinearSetSpec& spec);
SubElement decode_sub(const FieldTower& t, const json& j);
ExtElement decode_ext(const FieldTower& t, const json& j);
Coords decode_coords(const FieldTower& t, const json& j);
LinearFunctional decode_functional(const FieldTower& t, const json& j);
LinearSetSpec decode_spec(const FieldTower& t, const json& j);

json report_json(const verify::VerifyReport& r);

/// Per-set reports (fold 1, with weights when a spec is known) plus the union
/// at the requested fold and the pairwise intersection sizes.
json compute_reports(const Certificate& c, unsigned threads = 0);

json to_json(const Certificate& c);
Certificate from_json(const json& j);

/// "tower p d h" header, optional "inner"/"outer" modulus lines, then one
/// point per line: a canonical index or X,Y,Z element codes. '#' starts a comment.
Certificate parse_point_list(const std::string& text);

/// Accepts either a certificate (JSON object) or a point list.
Certificate parse_any(const std::string& text);

/// Human-readable rendering of compute_reports() output.
std::string render_text(const Certificate& c, const json& reports);

// ---- request-driven entry points used by the C API ----

struct Request {
  std::map<std::string, std::string> values;

  std::optional<std::string> get(const std::string& key) const;
  std::optional<std::uint64_t> get_uint(const std::string& key) const;
};

TowerPtr tower_from_request(const Request& r);

Certificate run_construct(const Request& r);

struct SearchRun {
  search::Status status = search::Status::exhausted;
  std::uint64_t candidates_examined = 0;
  std::optional<Certificate> certificate;
};
SearchRun run_search(const Request& r);

struct CountRun {
  json result;
  bool ok = false;
};
CountRun run_count(const Request& r);

struct Verdict {
  bool reports_present = false;
  bool reports_match = true;
  std::uint32_t fold = 1;
  std::uint32_t min_blocking_fold = 0;
  bool fold_ok = false;
  bool minimal_checked = false;
  bool minimal_ok = true;
  bool disjoint_ok = true;

  bool passed() const { return reports_match && fold_ok && minimal_ok && disjoint_ok; }
};

/// Recomputes everything from the stored point sets. `fold` = 0 uses the
/// certificate's requested fold.
Verdict verify_certificate(const Certificate& c, std::uint32_t fold, bool require_minimal, unsigned threads,
                           json* recomputed = nullptr);

}  // namespace mbs::cert
