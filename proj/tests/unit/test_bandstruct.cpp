#include <cmath>
#include <memory>

#include "bergman_limits/bandstruct.hpp"
#include "bergman_limits/toeplitz.hpp"
#include "doctest.h"

using namespace bl;

namespace {

std::shared_ptr<const MetricCover> cover(double t, double extent, int density = kCoverDensity) {
  return std::make_shared<const MetricCover>(build_cover(Domain::unit_disk(), t, extent, density));
}

}  // namespace

TEST_CASE("disk cover and partition certificate") {
  const auto c = cover(0.5, 0.99);
  CHECK(c->cells.size() > 100);
  CHECK(c->overlap >= 2);
  const PartitionOfUnity pu(c);
  const auto cert = certify_partition(pu, 10000, 3);
  for (const auto& chk : cert.checks) {
    CAPTURE(chk.name);
    CAPTURE(chk.worst);
    CHECK(chk.passed);
  }
  CHECK_NOTHROW(build_partition(c, 500, 4));

  // Every node is owned by its nearest center.
  const Domain disk = Domain::unit_disk();
  for (size_t i = 0; i < c->nodes.size(); i += 97) {
    const int own = c->owner[i];
    const double d = disk.distance(c->nodes[i], c->cells[own].center);
    for (const auto& cell : c->cells) CHECK(d <= disk.distance(c->nodes[i], cell.center) + 1e-12);
  }
  CHECK_THROWS_AS(build_cover(disk, 0.5, 1.0), Error);
  CHECK_THROWS_AS(build_cover(disk, 1.0, 0.5), Error);
}

TEST_CASE("degenerate cover has one cell") {
  const auto c = cover(0.95, 0.05);
  CHECK(c->cells.size() == 1);
  CHECK(c->overlap == 1);
  const PartitionOfUnity pu(c);
  const auto v = pu.values(Point{cplx(0.01, 0.02)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].phi == 1.0);
  CHECK(v[0].psi == 1.0);
}

TEST_CASE("overlap count under node refinement") {
  // Measured N grows slowly as the node grid resolves cell boundaries better; see the README.
  const auto coarse = cover(0.5, 0.9, 4);
  const auto fine = cover(0.5, 0.9, 8);
  CHECK(coarse->cells.size() == fine->cells.size());
  CHECK(fine->overlap >= coarse->overlap);
  CHECK(fine->overlap <= 1.25 * coarse->overlap);
}

TEST_CASE("band profiles") {
  const Domain disk = Domain::unit_disk();
  const std::vector<double> omegas{1, 2, 3, 4};
  const auto proj = band_profile(KernelOperator::projection(disk, 0), omegas);
  for (size_t k = 0; k < proj.size(); ++k) {
    CAPTURE(k);
    CHECK(proj[k].pairs > 0);
    if (k > 0) CHECK(proj[k].norm < proj[k - 1].norm);
  }
  CHECK(proj.back().norm <= 0.1 * proj.front().norm);

  const auto mult = band_profile(KernelOperator::multiplication(disk, 0, parse_symbol("z + abs2(z)", disk)), omegas);
  for (const auto& b : mult) CHECK(b.norm == 0.0);

  // k_0 (x) k_0 has the constant kernel 1: the block norm is sqrt(|E| |F|) in measure,
  // which the cells far out only shrink, so the profile still decreases.
  const auto r1 = band_profile(KernelOperator::rank_one(disk, 0, disk.origin()), omegas);
  for (size_t k = 1; k < r1.size(); ++k) CHECK(r1[k].norm <= r1[k - 1].norm);
  CHECK(r1.back().norm < r1.front().norm);
}

TEST_CASE("commutators with the partition") {
  const Domain disk = Domain::unit_disk();
  const PartitionOfUnity pu(cover(0.4, 0.95));
  CHECK(commutator_decay(KernelOperator::identity(disk, 0), pu) == 0.0);
  CHECK(commutator_decay(KernelOperator::multiplication(disk, 0, parse_symbol("z", disk)), pu, 2.0, 4) == 0.0);

  const auto tz = KernelOperator::toeplitz(disk, 0, parse_symbol("z", disk));
  double prev = 1e300;
  for (double t : {0.4, 0.2, 0.1}) {
    const double c = commutator_decay(tz, PartitionOfUnity(cover(t, 0.99)), 2.0, 6);
    CAPTURE(t);
    CHECK(c < prev);
    CHECK(c > 0.0);
    prev = c;
  }
}

TEST_CASE("localization norms") {
  const Domain disk = Domain::unit_disk();
  const auto c = cover(0.5, 0.99);
  const PartitionOfUnity pu(c);
  const Region all = [](const Point&) { return true; };
  const Region shell = [](const Point& x) {
    const double r = std::abs(x[0]);
    return r >= 0.9 && r <= 0.99;
  };

  const auto id = localization_norms(KernelOperator::identity(disk, 0), shell, pu);
  CHECK(id.triple_norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.lower_norm == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.probes == 64);
  const auto two = localization_norms(KernelOperator::identity(disk, 0, 2.0), all, pu);
  CHECK(two.lower_norm == doctest::Approx(2.0).epsilon(1e-14));

  const auto decay = localization_norms(KernelOperator::toeplitz(disk, 0, parse_symbol("1 - abs2(z)", disk)), shell, pu);
  CHECK(decay.triple_norm <= 0.2);

  for (const auto* a : {&id, &two, &decay}) {
    CHECK(a->triple_norm <= a->norm_f);
    CHECK(a->lower_norm <= a->lower_norm_t);
  }
  const Region empty = [](const Point&) { return false; };
  CHECK_THROWS_AS(localization_norms(KernelOperator::identity(disk, 0), empty, pu), Error);
}
