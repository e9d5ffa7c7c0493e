#include "bergman_limits/gauss.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "bergman_limits/types.hpp"

namespace bl {
namespace {

using Key = std::tuple<int, int, double, double, double, double>;

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<Key, std::unique_ptr<Rule1D>>& cache() {
  static std::map<Key, std::unique_ptr<Rule1D>> c;
  return c;
}

const Rule1D& fetch(int type, int n, double a, double b, double alpha, double beta) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss rule order must be >= 1");
  const Key key{type, n, a, b, alpha, beta};
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto it = cache().find(key);
  if (it != cache().end()) return *it->second;

  gsl_set_error_handler_off();
  const gsl_integration_fixed_type* t =
      type == 0 ? gsl_integration_fixed_jacobi : gsl_integration_fixed_legendre;
  gsl_integration_fixed_workspace* ws =
      gsl_integration_fixed_alloc(t, static_cast<size_t>(n), a, b, alpha, beta);
  if (ws == nullptr) throw Error(ErrorCode::Internal, "GSL failed to build a Gauss rule");
  auto rule = std::make_unique<Rule1D>();
  const double* xs = gsl_integration_fixed_nodes(ws);
  const double* ws_ = gsl_integration_fixed_weights(ws);
  rule->x.assign(xs, xs + n);
  rule->w.assign(ws_, ws_ + n);
  gsl_integration_fixed_free(ws);
  auto& ref = *rule;
  cache().emplace(key, std::move(rule));
  return ref;
}

}  // namespace

const Rule1D& gauss_jacobi(int n, double a, double b, double alpha, double beta) {
  return fetch(0, n, a, b, alpha, beta);
}

const Rule1D& gauss_legendre(int n, double a, double b) { return fetch(1, n, a, b, 0.0, 0.0); }

}  // namespace bl
