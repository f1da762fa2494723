#ifndef MBS_MBS_H
#define MBS_MBS_H

/* C interface to the blocking-set toolkit. All handles are opaque; every
 * function returns an mbs_status, and on failure mbs_last_error() describes
 * the problem (per thread). Strings handed out must go to mbs_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MBS_API __declspec(dllexport)
#else
#define MBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum {
  MBS_OK = 0,
  MBS_VERIFY_FAILED = 1,
  MBS_BUDGET_EXHAUSTED = 2,
  MBS_INVALID_INPUT = 3,
  MBS_RESOURCE_LIMIT = 4,
  MBS_INTERNAL_ERROR = 5,
  MBS_IO_ERROR = 6
} mbs_status;

typedef enum { MBS_FORMAT_JSON = 0, MBS_FORMAT_TEXT = 1 } mbs_format;

typedef struct mbs_request mbs_request;
typedef struct mbs_certificate mbs_certificate;

typedef struct {
  int reports_present;
  int reports_match;
  uint32_t fold;
  uint32_t min_blocking_fold;
  int fold_ok;
  int minimal_checked;
  int minimal_ok;
  int disjoint_ok;
  int passed;
} mbs_verdict;

MBS_API const char* mbs_version(void);
MBS_API const char* mbs_last_error(void);
MBS_API void mbs_string_free(char* s);

/* Key/value parameters: p, d, h, q, kind, t, lines, alpha, beta, f, g, u, v,
 * w, fold, budget, threads, what, strategy. */
MBS_API mbs_request* mbs_request_new(void);
MBS_API void mbs_request_free(mbs_request* req);
MBS_API mbs_status mbs_request_set(mbs_request* req, const char* key, const char* value);

MBS_API mbs_status mbs_construct(const mbs_request* req, mbs_certificate** out);
/* MBS_BUDGET_EXHAUSTED leaves *out NULL. */
MBS_API mbs_status mbs_search(const mbs_request* req, mbs_certificate** out);
/* Returns MBS_VERIFY_FAILED when the count falls below the bound; the JSON
 * result is produced either way. */
MBS_API mbs_status mbs_count(const mbs_request* req, char** json_out);

/* Accepts a certificate (JSON) or a point list. */
MBS_API mbs_status mbs_certificate_load(const char* path, mbs_certificate** out);
MBS_API mbs_status mbs_certificate_parse(const char* text, mbs_certificate** out);
MBS_API mbs_status mbs_certificate_save(const mbs_certificate* cert, const char* path);
MBS_API mbs_status mbs_certificate_json(const mbs_certificate* cert, char** out);
MBS_API void mbs_certificate_free(mbs_certificate* cert);

MBS_API uint64_t mbs_certificate_union_size(const mbs_certificate* cert);
MBS_API uint32_t mbs_certificate_requested_fold(const mbs_certificate* cert);

/* Recomputes every report from the stored point sets. fold = 0 uses the
 * certificate's requested fold. report_out (optional) receives the fresh
 * reports in the chosen format. Returns MBS_OK or MBS_VERIFY_FAILED. */
MBS_API mbs_status mbs_certificate_verify(const mbs_certificate* cert, uint32_t fold, int require_minimal,
                                          unsigned threads, mbs_format format, mbs_verdict* verdict,
                                          char** report_out);

/* Stored reports, without recomputation. */
MBS_API mbs_status mbs_certificate_report(const mbs_certificate* cert, mbs_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif
