#include <climits>

#include "doctest.h"
#include "instances.hpp"
#include "padyn/disk.hpp"

using namespace padyn;

namespace {

PadicNumber R(const FieldPtr& F, const Q& q) { return PadicNumber::from_rational(F, q); }
Disk D(const FieldPtr& F, const Q& c, const Q& t) { return Disk{R(F, c), t, true}; }

}  // namespace

TEST_CASE("disk image examples") {
  auto Q2 = field_create(2, {}, 64), Q3 = field_create(3, {}, 64);
  for (long p : {2L, 3L}) {
    auto F = field_create(p, {}, 64);
    auto lin = RationalMap::from_rationals(F, {0, p}, {1});
    auto im = disk_image(lin, D(F, 0, 0));
    CHECK(im.image.t == 1);
    CHECK(im.degree == 1);
  }
  auto half = RationalMap::from_rationals(Q2, {0, Q(-1, 2), Q(1, 2)}, {1});
  auto im = disk_image(half, D(Q2, 0, 0));
  // z(z-1)/2 is integral on Z_2, though the C_p image has radius 2
  CHECK(im.image.t == 0);
  CHECK(im.cp_t == -1);
  CHECK(im.degree == 2);
  CHECK(oracle::net_image_valuation({0, Q(-1, 2), Q(1, 2)}, {1}, 0, 0, 2, 10) == 0);

  auto sq = RationalMap::from_rationals(Q3, {0, 0, 1}, {1});
  auto is = disk_image(sq, D(Q3, 1, 1));
  CHECK(is.image.t == 1);
  CHECK(is.degree == 1);
  CHECK(oracle::net_image_valuation({0, 0, 1}, {1}, 1, 1, 3, 10) == 1);
}

TEST_CASE("disk image matches the residue net on random instances") {
  std::mt19937_64 rng(101);
  int done = 0;
  while (done < 60) {
    auto k = random_disk_case(rng);
    if (k.den.size() == 2 && oracle::eval(k.num, -k.den[0]) == 0) continue;
    auto F = field_create(k.p, {}, 64);
    auto phi = RationalMap::from_rationals(F, k.num, k.den);
    if (phi.degree() < 1) continue;
    if (!oracle::pole_free(k.den, k.c, k.t, k.p)) {
      CHECK_THROWS_AS(disk_image(phi, D(F, k.c, k.t)), Error);
      continue;
    }
    auto im = disk_image(phi, D(F, k.c, k.t));
    const long net = oracle::net_image_valuation(k.num, k.den, k.c, k.t, k.p, 8);
    CAPTURE(k.p);
    CAPTURE(k.t);
    CAPTURE(k.c.get_str());
    if (net == LONG_MAX) {
      CHECK(im.image.t >= 40);
    } else {
      CHECK(im.image.t == net);
    }
    auto ser = oracle::taylor(k.num, k.den, k.c, 4 * phi.degree() + 8);
    auto ref = oracle::image_formula(ser, k.t, k.p, phi.degree());
    CHECK(im.cp_t == ref.t_image);
    CHECK(im.degree == ref.degree);
    // the L-realized image never exceeds the C_p image
    CHECK(im.image.t >= im.cp_t);
    ++done;
  }
}

TEST_CASE("nested or disjoint") {
  std::mt19937_64 rng(5);
  auto Q2 = field_create(2, {}, 64);
  for (int i = 0; i < 300; ++i) {
    auto a = D(Q2, oracle::random_rational(rng, 2, 0, 4), Q(static_cast<long>(rng() % 5)));
    auto b = D(Q2, oracle::random_rational(rng, 2, 0, 4), Q(static_cast<long>(rng() % 5)));
    auto rel = disk_relation(a, b);
    const bool a_in_b = b.contains(a.center) && a.t >= b.t;
    const bool b_in_a = a.contains(b.center) && b.t >= a.t;
    if (a_in_b && b_in_a) CHECK(rel == DiskRelation::Equal);
    else if (a_in_b) CHECK(rel == DiskRelation::FirstInsideSecond);
    else if (b_in_a) CHECK(rel == DiskRelation::SecondInsideFirst);
    else {
      CHECK(rel == DiskRelation::Disjoint);
      CHECK_FALSE(a.contains(b.center));
      CHECK_FALSE(b.contains(a.center));
    }
  }
}

TEST_CASE("injectivity examples") {
  auto Q3 = field_create(3, {}, 64);
  auto sq = RationalMap::from_rationals(Q3, {0, 0, 1}, {1});
  auto r = injectivity_check(sq, D(Q3, 1, 1));
  CHECK(r.injective);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->t == Q(1, 2));
  CHECK(oracle::net_injective({0, 0, 1}, 1, 1, 3, 8));
  CHECK_FALSE(injectivity_check(sq, D(Q3, 0, 0)).injective);

  std::vector<Q> cube{0, Q(-1, 3), 0, Q(1, 3)};
  auto psi = RationalMap::from_rationals(Q3, cube, {1});
  for (long a = 0; a < 3; ++a) {
    CHECK(injectivity_check(psi, D(Q3, a, 1)).injective);
    CHECK(oracle::net_injective(cube, a, 1, 3, 8));
  }
}

TEST_CASE("derivative from diameters") {
  for (long p : {2L, 3L}) {
    auto F = field_create(p, {}, 64);
    auto lin = RationalMap::from_rationals(F, {0, p}, {1});
    CHECK(derivative_via_diam(lin, D(F, 0, 0), R(F, 0)) == PPow::of(-1));
  }
  auto Q2 = field_create(2, {}, 64), Q3 = field_create(3, {}, 64);
  auto half = RationalMap::from_rationals(Q2, {0, Q(-1, 2), Q(1, 2)}, {1});
  for (long a = 0; a < 2; ++a) CHECK(derivative_via_diam(half, D(Q2, a, 1), R(Q2, a)) == PPow::of(1));
  auto sq = RationalMap::from_rationals(Q3, {0, 0, 1}, {1});
  CHECK(derivative_via_diam(sq, D(Q3, 1, 2), R(Q3, 1)) == sq.deriv_abs(R(Q3, 1)));
  try {
    (void)derivative_via_diam(sq, D(Q3, 0, 0), R(Q3, 0));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCertifiedInjective);
  }
}

TEST_CASE("derivative lower bound never exceeds |phi'|") {
  std::mt19937_64 rng(77);
  int done = 0;
  while (done < 100) {
    auto k = random_disk_case(rng);
    if (k.den.size() == 2 && oracle::eval(k.num, -k.den[0]) == 0) continue;
    if (!oracle::pole_free(k.den, k.c, k.t, k.p)) continue;
    auto F = field_create(k.p, {}, 64);
    auto phi = RationalMap::from_rationals(F, k.num, k.den);
    auto disk = D(F, k.c, k.t);
    Q step = 1;
    for (long i = 0; i < k.t; ++i) step *= k.p;
    Q x = k.c + step * static_cast<long>(rng() % 5);
    auto px = R(F, x);
    PPow lb;
    try {
      lb = derivative_lower_bound(phi, disk, px);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CriticalPointInDisk);
      CHECK(weierstrass_degree_q(phi.wronskian(), disk.center, disk.t) > 0);
      continue;
    }
    CHECK(lb <= phi.deriv_abs(px));
    if (injectivity_check(phi, disk).injective) CHECK(derivative_via_diam(phi, disk, px) == phi.deriv_abs(px));
    ++done;
  }
  // monomial, injective: tight
  auto Q3 = field_create(3, {}, 64);
  auto lin = RationalMap::from_rationals(Q3, {0, 9}, {1});
  CHECK(derivative_lower_bound(lin, D(Q3, 0, 0), R(Q3, 0)) == PPow::of(-2));
}

TEST_CASE("annulus images") {
  auto Q3 = field_create(3, {}, 64), Q2 = field_create(2, {}, 64);
  auto sq = RationalMap::from_rationals(Q3, {0, 0, 1}, {1});
  auto ai = annulus_image(sq, Annulus{R(Q3, 0), 2, 1});
  CHECK(ai.degree == 2);
  CHECK(ai.image.t_inner == 4);
  CHECK(ai.image.t_outer == 2);
  CHECK(ai.image.modulus() == 2);

  auto half = RationalMap::from_rationals(Q2, {0, Q(-1, 2), Q(1, 2)}, {1});
  Annulus A{R(Q2, 1), 5, 2};
  auto hi = annulus_image(half, A);
  CHECK(hi.degree == 1);
  CHECK(hi.image.modulus() == A.modulus());

  auto pole = RationalMap::from_rationals(Q3, {1, 0, 1}, {-3, 1});
  try {
    (void)annulus_image(pole, Annulus{R(Q3, 0), 2, 0});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleInAnnulus);
  }
}
