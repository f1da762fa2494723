// mbs: construct, search, verify and count small multiple blocking sets.
// Thin driver over the C interface; exit codes are those of mbs_status
// (0 ok, 1 verification failed, 2 budget exhausted, 3 invalid input).

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mbs/mbs.h"

namespace {

struct Common {
  std::map<std::string, std::string> values;
  std::string out;
  std::string format = "text";
  unsigned threads = 0;
};

int exit_code(mbs_status s) {
  switch (s) {
    case MBS_OK: return 0;
    case MBS_VERIFY_FAILED: return 1;
    case MBS_BUDGET_EXHAUSTED: return 2;
    case MBS_INTERNAL_ERROR: return 1;
    default: return 3;
  }
}

int report_error(mbs_status s) {
  std::cerr << "mbs: " << mbs_last_error() << "\n";
  return exit_code(s);
}

mbs_format format_of(const Common& c) { return c.format == "json" ? MBS_FORMAT_JSON : MBS_FORMAT_TEXT; }

void add_value(CLI::App* app, Common& c, const std::string& key, const std::string& help) {
  app->add_option("--" + key, c.values[key], help);
}

void add_tower(CLI::App* app, Common& c) {
  add_value(app, c, "p", "characteristic");
  add_value(app, c, "d", "degree of GF(q) over GF(p) (default 1)");
  add_value(app, c, "h", "degree of GF(q^h) over GF(q)");
  add_value(app, c, "q", "subfield order, resolved to (p, d)");
  app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  app->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "text"}));
}

mbs_request* make_request(const Common& c) {
  mbs_request* req = mbs_request_new();
  for (const auto& [k, v] : c.values)
    if (!v.empty()) mbs_request_set(req, k.c_str(), v.c_str());
  mbs_request_set(req, "threads", std::to_string(c.threads).c_str());
  return req;
}

// Saves if asked, then re-verifies from the point sets alone and prints the report.
int finish_certificate(const Common& c, mbs_certificate* cert, bool print_summary) {
  if (!c.out.empty()) {
    const mbs_status s = mbs_certificate_save(cert, c.out.c_str());
    if (s != MBS_OK) return report_error(s);
  }
  mbs_verdict v{};
  char* report = nullptr;
  const mbs_status s = mbs_certificate_verify(cert, 0, 0, c.threads, format_of(c), &v, &report);
  if (s != MBS_OK && s != MBS_VERIFY_FAILED) return report_error(s);
  if (print_summary && report) std::cout << report;
  mbs_string_free(report);
  std::cout << (v.passed ? "verified" : "NOT verified") << ": union size " << mbs_certificate_union_size(cert)
            << ", min blocking fold " << v.min_blocking_fold << " (requested " << v.fold << ")"
            << (v.disjoint_ok ? "" : ", sets intersect") << "\n";
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construction and exhaustive verification of small t-fold blocking sets in PG(2, q^h)"};
  // --h names the extension degree, so help is long-form only.
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mbs_version()));

  Common con, sea, ver, cnt;
  bool quiet = false;
  app.add_flag("--quiet", quiet, "only print the verdict line");

  auto* construct = app.add_subcommand("construct", "build a blocking set and certify it");
  add_tower(construct, con);
  construct->add_option("--kind", con.values["kind"], "construction")
      ->required()
      ->check(CLI::IsMember({"trace", "linear", "double", "triple-orbit", "baer-triple", "line-union"}));
  add_value(construct, con, "t", "fold for line-union (default 2)");
  add_value(construct, con, "lines", "line-union base lines: X,Y,Z,XYZ or line indices");
  add_value(construct, con, "alpha", "alpha as an element code");
  add_value(construct, con, "beta", "beta as an element code (default 1)");
  add_value(construct, con, "f", "functional: 'trace' or h comma-separated subfield codes");
  add_value(construct, con, "g", "second functional for double (default: g(1) = g(alpha) = 1)");
  add_value(construct, con, "u", "linear: vector u as three element codes");
  add_value(construct, con, "v", "linear: vector v");
  add_value(construct, con, "w", "linear: vector w");
  construct->add_option("--out", con.out, "certificate output path");

  auto* search = app.add_subcommand("search", "search parameters for a 2- or 3-fold blocking set");
  add_tower(search, sea);
  search->add_option("--fold", sea.values["fold"], "2 or 3")->required()->check(CLI::IsMember({"2", "3"}));
  add_value(search, sea, "budget", "maximum number of candidates to examine");
  add_value(search, sea, "f", "functional for fold 2 (default trace)");
  search->add_option("--strategy", sea.values["strategy"], "h = 3 strategy")
      ->check(CLI::IsMember({"auto", "brute-force", "guided"}));
  search->add_option("--out", sea.out, "certificate output path");

  std::string in_path;
  std::uint32_t verify_fold = 0;
  bool minimal = false;
  auto* verify = app.add_subcommand("verify", "re-verify a certificate or a point list");
  verify->add_option("--in", in_path, "certificate (JSON) or point list")->required();
  verify->add_option("--fold", verify_fold, "required fold (default: the certificate's)");
  verify->add_flag("--minimal", minimal, "also require minimality at that fold");
  verify->add_option("--threads", ver.threads, "worker threads (0 = all cores)");
  verify->add_option("--format", ver.format, "report format")->check(CLI::IsMember({"json", "text"}));

  auto* count = app.add_subcommand("count", "exhaustive parameter counts against their bounds");
  add_tower(count, cnt);
  count->add_option("--what", cnt.values["what"], "quantity to count")
      ->required()
      ->check(CLI::IsMember({"lambda-triples", "st-pairs", "valid-alphas"}));
  add_value(count, cnt, "f", "functional for valid-alphas (default trace)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  if (*construct || *search) {
    const Common& c = *construct ? con : sea;
    mbs_request* req = make_request(c);
    mbs_certificate* cert = nullptr;
    const mbs_status s = *construct ? mbs_construct(req, &cert) : mbs_search(req, &cert);
    mbs_request_free(req);
    if (s != MBS_OK) return report_error(s);
    const int rc = finish_certificate(c, cert, !quiet);
    mbs_certificate_free(cert);
    return rc;
  }

  if (*verify) {
    mbs_certificate* cert = nullptr;
    mbs_status s = mbs_certificate_load(in_path.c_str(), &cert);
    if (s != MBS_OK) return report_error(s);
    mbs_verdict v{};
    char* report = nullptr;
    s = mbs_certificate_verify(cert, verify_fold, minimal ? 1 : 0, ver.threads, format_of(ver), &v, &report);
    if (s != MBS_OK && s != MBS_VERIFY_FAILED) {
      mbs_certificate_free(cert);
      return report_error(s);
    }
    if (!quiet && report) std::cout << report;
    mbs_string_free(report);
    std::cout << (v.passed ? "PASS" : "FAIL") << ": min blocking fold " << v.min_blocking_fold << " (required "
              << v.fold << ")";
    if (v.minimal_checked) std::cout << ", minimal " << (v.minimal_ok ? "yes" : "no");
    if (v.reports_present) std::cout << ", stored reports " << (v.reports_match ? "reproduced" : "DIFFER");
    if (!v.disjoint_ok) std::cout << ", sets intersect";
    std::cout << "\n";
    mbs_certificate_free(cert);
    return exit_code(s);
  }

  mbs_request* req = make_request(cnt);
  char* out = nullptr;
  const mbs_status s = mbs_count(req, &out);
  mbs_request_free(req);
  if (!out) return report_error(s);
  std::cout << out;
  mbs_string_free(out);
  return exit_code(s);
}
