#include "bergman_limits.h"

#include <cstring>
#include <new>

#include "bergman_limits/commands.hpp"

struct bl_domain {
  bl::Domain dom;
};

struct bl_operator {
  bl::OperatorMatrix op;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_summary;

bl_status fail(bl_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <class F>
bl_status guarded(F&& body) {
  try {
    body();
    g_error.clear();
    return BL_OK;
  } catch (const bl::Error& e) {
    return fail(static_cast<bl_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BL_INTERNAL, e.what());
  }
}

bl::Point read_point(const bl::Domain& dom, const double* v) {
  if (!v) throw bl::Error(bl::ErrorCode::InvalidArgument, "null point");
  bl::Point z(dom.n());
  for (int i = 0; i < dom.n(); ++i) z[i] = {v[2 * i], v[2 * i + 1]};
  if (!z.finite()) throw bl::Error(bl::ErrorCode::InvalidArgument, "point has non-finite coordinates");
  if (!dom.interior(z)) throw bl::Error(bl::ErrorCode::OutsideDomain, "point is not interior to " + dom.name());
  return z;
}

void write_cplx(bl::cplx v, double* out) {
  out[0] = v.real();
  out[1] = v.imag();
}

}  // namespace

extern "C" {

const char* bl_version(void) { return bl::kToolVersion; }

const char* bl_last_error(void) { return g_error.c_str(); }

bl_status bl_domain_create(const char* name, bl_domain** out) {
  if (!name || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new bl_domain{bl::parse_domain(name)}; });
}

void bl_domain_free(bl_domain* dom) { delete dom; }

int bl_domain_dim(const bl_domain* dom) { return dom ? dom->dom.n() : 0; }

bl_status bl_h(const bl_domain* dom, const double* z, const double* w, double out[2]) {
  if (!dom || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { write_cplx(dom->dom.h(read_point(dom->dom, z), read_point(dom->dom, w)), out); });
}

bl_status bl_phi(const bl_domain* dom, const double* z, const double* w, double* out) {
  if (!dom || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const bl::Point r = dom->dom.phi(read_point(dom->dom, z), read_point(dom->dom, w));
    for (int i = 0; i < r.n; ++i) write_cplx(r[i], out + 2 * i);
  });
}

bl_status bl_distance(const bl_domain* dom, const double* z, const double* w, double* out) {
  if (!dom || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = dom->dom.distance(read_point(dom->dom, z), read_point(dom->dom, w)); });
}

bl_status bl_toeplitz_create(const bl_domain* dom, double nu, double p, int max_degree, const char* symbol,
                             bl_operator** out) {
  if (!dom || !symbol || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    if (max_degree < 0 || max_degree > 200) throw bl::Error(bl::ErrorCode::InvalidArgument, "max_degree out of range");
    const auto basis = bl::Basis::build(dom->dom, bl::WeightContext::make(dom->dom, nu, p), max_degree);
    *out = new bl_operator{bl::assemble_toeplitz(basis, bl::parse_symbol(symbol, dom->dom))};
  });
}

void bl_operator_free(bl_operator* op) { delete op; }

int bl_operator_size(const bl_operator* op) { return op ? op->op.size() : 0; }

bl_status bl_operator_norm(const bl_operator* op, double* out) {
  if (!op || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = bl::spectral_norm(op->op.m); });
}

bl_status bl_berezin(const bl_operator* op, const double* z, double out[2]) {
  if (!op || !out) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] { write_cplx(bl::berezin(op->op, read_point(op->op.basis->domain(), z)), out); });
}

bl_status bl_berezin_shell(const bl_operator* op, double t_min, double t_max, int grid, double* out, size_t capacity,
                           size_t* count) {
  if (!op || !count || (capacity && !out)) return fail(BL_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto est = bl::essential_spectrum_berezin(op->op, t_min, t_max, grid);
    *count = est.points.size();
    for (size_t i = 0; i < est.points.size() && i < capacity; ++i) write_cplx(est.points[i], out + 2 * i);
  });
}

bl_status bl_run_command(const char* config_json, int* exit_code, const char** summary) {
  if (!config_json || !exit_code) return fail(BL_INVALID_ARGUMENT, "null argument");
  g_summary.clear();
  bl_status st = guarded([&] {
    const bl::RunResult r = bl::run_command(bl::config_from_json(config_json));
    *exit_code = r.exit_code;
    g_summary = r.summary;
  });
  if (st != BL_OK) {
    *exit_code = bl::exit_code_for(static_cast<bl::ErrorCode>(st));
    g_summary = "error: " + g_error + "\n";
  }
  if (summary) *summary = g_summary.c_str();
  return st;
}

}  // extern "C"
