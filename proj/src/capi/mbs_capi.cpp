#include "mbs/mbs.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "mbs/certificate.hpp"
#include "mbs/errors.hpp"

struct mbs_request {
  mbs::cert::Request req;
};

struct mbs_certificate {
  mbs::cert::Certificate cert;
};

namespace {

thread_local std::string last_error;

mbs_status fail(mbs_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
mbs_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const mbs::InvalidParameter& e) {
    return fail(MBS_INVALID_INPUT, e.what());
  } catch (const mbs::ResourceLimit& e) {
    return fail(MBS_RESOURCE_LIMIT, e.what());
  } catch (const mbs::ConsistencyFailure& e) {
    return fail(MBS_INTERNAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MBS_RESOURCE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(MBS_INTERNAL_ERROR, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string dump(const mbs::cert::json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* mbs_version(void) { return "1.0.0"; }

const char* mbs_last_error(void) { return last_error.c_str(); }

void mbs_string_free(char* s) { delete[] s; }

mbs_request* mbs_request_new(void) {
  try {
    return new mbs_request{};
  } catch (...) {
    return nullptr;
  }
}

void mbs_request_free(mbs_request* req) { delete req; }

mbs_status mbs_request_set(mbs_request* req, const char* key, const char* value) {
  if (!req || !key || !value) return fail(MBS_INVALID_INPUT, "null argument");
  return guarded([&] {
    req->req.values[key] = value;
    return MBS_OK;
  });
}

mbs_status mbs_construct(const mbs_request* req, mbs_certificate** out) {
  if (!req || !out) return fail(MBS_INVALID_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto c = mbs::cert::run_construct(req->req);
    *out = new mbs_certificate{std::move(c)};
    return MBS_OK;
  });
}

mbs_status mbs_search(const mbs_request* req, mbs_certificate** out) {
  if (!req || !out) return fail(MBS_INVALID_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto run = mbs::cert::run_search(req->req);
    if (!run.certificate)
      return fail(MBS_BUDGET_EXHAUSTED,
                  "budget exhausted after " + std::to_string(run.candidates_examined) + " candidates");
    *out = new mbs_certificate{std::move(*run.certificate)};
    return MBS_OK;
  });
}

mbs_status mbs_count(const mbs_request* req, char** json_out) {
  if (!req || !json_out) return fail(MBS_INVALID_INPUT, "null argument");
  *json_out = nullptr;
  return guarded([&] {
    const auto run = mbs::cert::run_count(req->req);
    *json_out = dup_string(dump(run.result));
    return run.ok ? MBS_OK : fail(MBS_VERIFY_FAILED, "count below the bound");
  });
}

mbs_status mbs_certificate_parse(const char* text, mbs_certificate** out) {
  if (!text || !out) return fail(MBS_INVALID_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new mbs_certificate{mbs::cert::parse_any(text)};
    return MBS_OK;
  });
}

mbs_status mbs_certificate_load(const char* path, mbs_certificate** out) {
  if (!path || !out) return fail(MBS_INVALID_INPUT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(MBS_IO_ERROR, std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return mbs_certificate_parse(buf.str().c_str(), out);
}

mbs_status mbs_certificate_json(const mbs_certificate* cert, char** out) {
  if (!cert || !out) return fail(MBS_INVALID_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(dump(mbs::cert::to_json(cert->cert)));
    return MBS_OK;
  });
}

mbs_status mbs_certificate_save(const mbs_certificate* cert, const char* path) {
  if (!cert || !path) return fail(MBS_INVALID_INPUT, "null argument");
  return guarded([&] {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) return fail(MBS_IO_ERROR, std::string("cannot write ") + path);
    outf << dump(mbs::cert::to_json(cert->cert));
    return outf ? MBS_OK : fail(MBS_IO_ERROR, std::string("write failed: ") + path);
  });
}

void mbs_certificate_free(mbs_certificate* cert) { delete cert; }

uint64_t mbs_certificate_union_size(const mbs_certificate* cert) {
  return cert ? cert->cert.union_set().size() : 0;
}

uint32_t mbs_certificate_requested_fold(const mbs_certificate* cert) { return cert ? cert->cert.requested_fold : 0; }

mbs_status mbs_certificate_verify(const mbs_certificate* cert, uint32_t fold, int require_minimal, unsigned threads,
                                  mbs_format format, mbs_verdict* verdict, char** report_out) {
  if (!cert) return fail(MBS_INVALID_INPUT, "null argument");
  if (report_out) *report_out = nullptr;
  return guarded([&] {
    mbs::cert::json fresh;
    const auto v = mbs::cert::verify_certificate(cert->cert, fold, require_minimal != 0, threads, &fresh);
    if (verdict) {
      *verdict = mbs_verdict{v.reports_present, v.reports_match, v.fold,        v.min_blocking_fold, v.fold_ok,
                             v.minimal_checked, v.minimal_ok,    v.disjoint_ok, v.passed()};
    }
    if (report_out)
      *report_out = dup_string(format == MBS_FORMAT_TEXT ? mbs::cert::render_text(cert->cert, fresh) : dump(fresh));
    return v.passed() ? MBS_OK : fail(MBS_VERIFY_FAILED, "verification failed");
  });
}

mbs_status mbs_certificate_report(const mbs_certificate* cert, mbs_format format, char** out) {
  if (!cert || !out) return fail(MBS_INVALID_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (!cert->cert.reports) return fail(MBS_INVALID_INPUT, "certificate carries no reports");
    const auto& r = *cert->cert.reports;
    *out = dup_string(format == MBS_FORMAT_TEXT ? mbs::cert::render_text(cert->cert, r) : dump(r));
    return MBS_OK;
  });
}

}  // extern "C"
