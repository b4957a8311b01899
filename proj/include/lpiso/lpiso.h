#ifndef LPISO_H
#define LPISO_H

#include <stddef.h>
#include <stdint.h>

#if defined(LPISO_BUILDING_LIBRARY)
#define LPISO_API __attribute__((visibility("default")))
#else
#define LPISO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the CLI. */
typedef enum lpiso_status {
  LPISO_OK = 0,
  LPISO_CONFIG_ERROR = 1,
  LPISO_NUMERIC_ERROR = 2,
  LPISO_CERTIFICATION_FAILED = 3,
  LPISO_INVALID_ARGUMENT = 4,
  LPISO_INTERNAL_ERROR = 5
} lpiso_status;

typedef enum lpiso_command {
  LPISO_CMD_DIAGONALIZE = 0,
  LPISO_CMD_CLASSIFY = 1,
  LPISO_CMD_CERTIFY = 2,
  LPISO_CMD_FAMILY_EVAL = 3
} lpiso_command;

typedef struct lpiso_problem lpiso_problem;
typedef struct lpiso_report lpiso_report;

LPISO_API const char* lpiso_version(void);

/* Message of the last failed call on this thread; empty when none. */
LPISO_API const char* lpiso_last_error(void);

LPISO_API lpiso_status lpiso_problem_from_json(const char* json_text, lpiso_problem** out);
LPISO_API lpiso_status lpiso_problem_from_file(const char* path, lpiso_problem** out);
LPISO_API void lpiso_problem_free(lpiso_problem* problem);
LPISO_API lpiso_status lpiso_problem_set_seed(lpiso_problem* problem, uint64_t seed);
LPISO_API lpiso_status lpiso_command_from_name(const char* name, lpiso_command* out);

/* Runs a command. A report is produced whenever the command completes,
   including failed certifications; errors return a status and no report. */
LPISO_API lpiso_status lpiso_run(const lpiso_problem* problem, lpiso_command command, lpiso_report** out);

/* Strings are owned by the report. */
LPISO_API const char* lpiso_report_json(const lpiso_report* report);
LPISO_API const char* lpiso_report_text(const lpiso_report* report);
LPISO_API int lpiso_report_exit_code(const lpiso_report* report);
LPISO_API void lpiso_report_free(lpiso_report* report);

/* Congruence diagonalization of a row-major n*n symmetric matrix:
   M (row-major, n*n) with M^T A M = diag(+1 x ell, -1 x (n - ell)). */
LPISO_API lpiso_status lpiso_diagonalize(int n, const double* a, double* m_out, int* ell_out);

/* sum_{i<ell} z_i^2 - sum_{i>=ell} z_i^2 */
LPISO_API double lpiso_pseudo_norm_sq(int n, const double* z, int ell);

#ifdef __cplusplus
}
#endif

#endif
