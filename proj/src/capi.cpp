#include "lpiso/lpiso.h"

#include "lpiso/error.hpp"
#include "lpiso/geometry.hpp"
#include "lpiso/linalg.hpp"
#include "lpiso/pipeline.hpp"

#include <exception>
#include <new>
#include <string>

struct lpiso_problem {
  lpiso::ProblemConfig config;
};

struct lpiso_report {
  lpiso::Report report;
  std::string json;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

lpiso_status fail(lpiso_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
lpiso_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const lpiso::Error& e) {
    return fail(static_cast<lpiso_status>(lpiso::exit_code_for(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(LPISO_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(LPISO_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(LPISO_INTERNAL_ERROR, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* lpiso_version(void) { return LPISO_VERSION; }

const char* lpiso_last_error(void) { return g_last_error.c_str(); }

lpiso_status lpiso_problem_from_json(const char* json_text, lpiso_problem** out) {
  if (!json_text || !out) return fail(LPISO_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new lpiso_problem{lpiso::parse_config_text(json_text)};
    return LPISO_OK;
  });
}

lpiso_status lpiso_problem_from_file(const char* path, lpiso_problem** out) {
  if (!path || !out) return fail(LPISO_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new lpiso_problem{lpiso::load_config(path)};
    return LPISO_OK;
  });
}

void lpiso_problem_free(lpiso_problem* problem) { delete problem; }

lpiso_status lpiso_problem_set_seed(lpiso_problem* problem, uint64_t seed) {
  if (!problem) return fail(LPISO_INVALID_ARGUMENT, "null problem");
  problem->config.set_seed(seed);
  return LPISO_OK;
}

lpiso_status lpiso_command_from_name(const char* name, lpiso_command* out) {
  if (!name || !out) return fail(LPISO_INVALID_ARGUMENT, "null argument");
  const auto c = lpiso::parse_command(name);
  if (!c) return fail(LPISO_CONFIG_ERROR, std::string("unknown command '") + name + "'");
  *out = static_cast<lpiso_command>(*c);
  return LPISO_OK;
}

lpiso_status lpiso_run(const lpiso_problem* problem, lpiso_command command, lpiso_report** out) {
  if (!problem || !out) return fail(LPISO_INVALID_ARGUMENT, "null argument");
  if (command < LPISO_CMD_DIAGONALIZE || command > LPISO_CMD_FAMILY_EVAL) return fail(LPISO_INVALID_ARGUMENT, "unknown command");
  *out = nullptr;
  return guarded([&] {
    auto* r = new lpiso_report;
    try {
      r->report = lpiso::run_command(static_cast<lpiso::Command>(command), problem->config);
      r->json = lpiso::to_json(r->report).dump(2);
      r->text = lpiso::render_text(r->report);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
    return LPISO_OK;
  });
}

const char* lpiso_report_json(const lpiso_report* report) { return report ? report->json.c_str() : ""; }

const char* lpiso_report_text(const lpiso_report* report) { return report ? report->text.c_str() : ""; }

int lpiso_report_exit_code(const lpiso_report* report) { return report ? report->report.exit_code : LPISO_INVALID_ARGUMENT; }

void lpiso_report_free(lpiso_report* report) { delete report; }

lpiso_status lpiso_diagonalize(int n, const double* a, double* m_out, int* ell_out) {
  if (n < 1 || n > 32 || !a || !m_out || !ell_out) return fail(LPISO_INVALID_ARGUMENT, "bad argument");
  return guarded([&] {
    lpiso::Matrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = a[i * n + j];
    const lpiso::Diagonalization d = lpiso::diagonalize(lpiso::SymMatrix(A));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m_out[i * n + j] = d.M(i, j);
    *ell_out = d.ell;
    return LPISO_OK;
  });
}

double lpiso_pseudo_norm_sq(int n, const double* z, int ell) {
  if (n < 0 || !z) return 0.0;
  return lpiso::pseudo_norm_sq(std::span<const double>(z, static_cast<std::size_t>(n)), ell);
}

}  // extern "C"
