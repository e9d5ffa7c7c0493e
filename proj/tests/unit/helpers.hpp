#pragma once

#include <random>

#include "bergman_limits/symdomain.hpp"

namespace bltest {

/// Random interior point with polar max t_j <= rmax.
inline bl::Point random_point(const bl::Domain& dom, std::mt19937_64& rng, double rmax) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bl::Point z(dom.n());
  for (int i = 0; i < dom.n(); ++i) z[i] = {g(rng), g(rng)};
  const double t = dom.polar(z).max();
  return z.scaled(rmax * std::pow(u(rng), 1.0 / (2.0 * dom.n())) / t);
}

inline double rel(bl::cplx a, bl::cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline double dist(const bl::Point& a, const bl::Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace bltest
