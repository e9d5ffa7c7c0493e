#include <cmath>
#include <random>

#include "bergman_limits/quadrature.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bl;

TEST_CASE("normalization constants against independent mass integrals") {
  CHECK(normalization_constant(Domain::unit_disk(), 0) == doctest::Approx(1 / M_PI).epsilon(1e-14));
  CHECK(normalization_constant(Domain::unit_disk(), 1) == doctest::Approx(2 / M_PI).epsilon(1e-14));
  CHECK(normalization_constant(Domain::unit_ball(2), 0) == doctest::Approx(2 / (M_PI * M_PI)).epsilon(1e-14));
  CHECK(normalization_constant(Domain::matrix_ball(), 0) == doctest::Approx(12 / std::pow(M_PI, 4)));
  CHECK_THROWS_AS(normalization_constant(Domain::unit_disk(), -1.0), Error);

  // Independent oracle: midpoint sum of (1-r^2)^nu on a fine polar grid of the disk.
  for (double nu : {0.0, 1.0, 2.5}) {
    const int m = 200000;
    double mass = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = (i + 0.5) / m;
      mass += std::pow(1 - r * r, nu) * r * (2 * M_PI) / m;
    }
    CHECK(normalization_constant(Domain::unit_disk(), nu) == doctest::Approx(1 / mass).epsilon(1e-8));
  }

  // Matrix ball: crude Monte Carlo over the box [-1,1]^8 with the membership test.
  const auto mb = Domain::matrix_ball();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const int samples = 400000;
  double acc = 0.0;
  for (int k = 0; k < samples; ++k) {
    Point z{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    if (mb.polar(z).max() < 1) acc += mb.h(z, z).real();
  }
  const double mass1 = acc / samples * 256.0;
  CHECK(1.0 / normalization_constant(mb, 1) == doctest::Approx(mass1).epsilon(3e-2));
}

TEST_CASE("disk rule") {
  const auto disk = Domain::unit_disk();
  const auto rule = build_rule(disk, 0, 40, 64);
  CHECK(std::abs(integrate(rule, [](const Point&) { return cplx(1); }) - 1.0) < 1e-12);
  CHECK(std::abs(integrate(rule, [](const Point& z) { return z[0]; })) < 1e-12);
  CHECK(std::abs(integrate(rule, [](const Point& z) { return z[0] * z[0]; })) < 1e-12);
  CHECK(std::abs(integrate(rule, [](const Point& z) { return std::norm(z[0]); }) - 0.5) < 1e-10);
  double lsum = 0.0;
  for (size_t i = 0; i < rule.size(); ++i) lsum += rule.lebesgue_weight(i);
  CHECK(lsum == doctest::Approx(M_PI).epsilon(1e-12));

  // |z|^{2k} against nu = 1.5: Beta integral (nu+1) B(k+1, nu+1)
  const auto r15 = build_rule(disk, 1.5);
  for (int k = 0; k < 10; ++k) {
    const double exact = 2.5 * std::exp(std::lgamma(k + 1) + std::lgamma(2.5) - std::lgamma(k + 3.5));
    CHECK(integrate(r15, [k](const Point& z) { return std::pow(std::norm(z[0]), k); }).real() ==
          doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("ball and matrix rules") {
  for (int n : {2, 3}) {
    const auto d = Domain::unit_ball(n);
    for (double nu : {0.0, 1.0}) {
      const auto rule = build_rule(d, nu);
      CHECK(integrate(rule, [](const Point&) { return cplx(1); }).real() == doctest::Approx(1.0).epsilon(1e-13));
      // |z_1|^2 integrates to 1/(n + nu + 1) against dv_nu
      CHECK(integrate(rule, [](const Point& z) { return std::norm(z[0]); }).real() ==
            doctest::Approx(1.0 / (n + nu + 1)).epsilon(1e-12));
      CHECK(std::abs(integrate(rule, [](const Point& z) { return z[0] * std::conj(z[1]); })) < 1e-13);
      if (nu == 0.0) {
        double lsum = 0.0;
        for (size_t i = 0; i < rule.size(); ++i) lsum += rule.lebesgue_weight(i);
        CHECK(lsum * normalization_constant(d, 0) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
  const auto mb = Domain::matrix_ball();
  const auto rule = build_rule(mb, 0.0);
  for (const auto& x : rule.nodes) REQUIRE(mb.interior(x));
  // Lebesgue mass of the matrix ball is pi^4/12.
  double lsum = 0.0;
  for (size_t i = 0; i < rule.size(); ++i) lsum += rule.lebesgue_weight(i);
  CHECK(lsum == doctest::Approx(std::pow(M_PI, 4) / 12).epsilon(1e-10));
}

TEST_CASE("measure transformation under phi_z") {
  const auto disk = Domain::unit_disk();
  for (double nu : {0.0, 1.0}) {
    const auto rule = build_rule(disk, nu);
    const double g = 2;
    // f = |h(w,z0)|^{-2(nu+g)} h(z0,z0)^{nu+g} integrates to 1
    const Point z0{0.4};
    const cplx one = integrate(rule, [&](const Point& w) {
      return std::pow(disk.h(z0, z0).real(), nu + g) / std::pow(std::abs(disk.h(w, z0)), 2 * (nu + g));
    });
    CHECK(std::abs(one - 1.0) < 1e-10);
  }
  std::mt19937_64 rng(23);
  for (const auto& d : {Domain::unit_disk(), Domain::unit_ball(2)}) {
    const double nu = 0.5;
    const auto rule = build_rule(d, nu);
    const double e = nu + d.genus();
    for (int k = 0; k < 5; ++k) {
      const Point z = bltest::random_point(d, rng, 0.5);
      auto f = [](const Point& y) { return y[0] * y[0] * std::conj(y[0]) + 0.5 * std::conj(y[y.n - 1]) + 1.0; };
      const cplx lhs = integrate(rule, [&](const Point& w) { return f(d.phi(z, w)); });
      const cplx rhs = integrate(rule, [&](const Point& y) {
        return f(y) * std::pow(d.h(z, z).real(), e) / std::pow(std::abs(d.h(y, z)), 2 * e);
      });
      CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-8);
    }
  }
}

TEST_CASE("graded disk rule resolves boundary-concentrated integrands") {
  const auto disk = Domain::unit_disk();
  for (double t : {0.9, 0.99, 0.999}) {
    for (double theta : {0.0, 2.0}) {
      const Point z{std::polar(t, theta)};
      const auto rule = disk_graded_rule(0.0, z, 1 - t);
      CHECK(integrate(rule, [](const Point&) { return cplx(1); }).real() == doctest::Approx(1.0).epsilon(1e-13));
      // Poisson-like kernel |k_z|^2 has total mass 1 and concentrates at z/|z|.
      const cplx one = integrate(rule, [&](const Point& w) {
        return std::pow(disk.h(z, z).real(), 2) / std::pow(std::abs(disk.h(w, z)), 4);
      });
      CHECK(std::abs(one - 1.0) < 1e-10);
      // mean value: int (phi_z(w))^2 dv_0 = z^2
      const cplx mv = integrate(rule, [&](const Point& w) { return std::pow(disk.phi(z, w)[0], 2); });
      CHECK(std::abs(mv - z[0] * z[0]) < 1e-10);
    }
  }
}

TEST_CASE("refinement convergence") {
  const auto disk = Domain::unit_disk();
  auto f = [](const Point& z) { return std::exp(z[0]) * std::conj(z[0]) + std::norm(z[0]); };
  const cplx a = integrate(build_rule(disk, 0.3, 30, 64), f);
  const cplx b = integrate(build_rule(disk, 0.3, 60, 64), f);
  CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("non-finite integrand is rejected") {
  const auto rule = build_rule(Domain::unit_disk(), 0, 4, 4);
  CHECK_THROWS_AS(integrate(rule, [](const Point&) { return cplx(NAN, 0); }), Error);
}
