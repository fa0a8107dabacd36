#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "padyn/orbit.hpp"

using namespace padyn;

namespace {

PadicNumber R(const FieldPtr& F, const Q& q) { return PadicNumber::from_rational(F, q); }
Point P(const FieldPtr& F, const Q& q) { return Point::at(R(F, q)); }

RationalMap half_map(const FieldPtr& F) { return RationalMap::from_rationals(F, {0, Q(-1, 2), Q(1, 2)}, {1}); }
RationalMap third_map(const FieldPtr& F) { return RationalMap::from_rationals(F, {0, Q(-1, 3), 0, Q(1, 3)}, {1}); }
// z (z - 1)^2 / 2
RationalMap cusp_map(const FieldPtr& F) { return RationalMap::from_rationals(F, {0, Q(1, 2), -1, Q(1, 2)}, {1}); }

}  // namespace

TEST_CASE("classify_point examples") {
  auto Q2 = field_create(2, {}, 64), Q3 = field_create(3, {}, 64);
  auto phi = half_map(Q2);
  CHECK(classify_point(phi, P(Q2, 2), 32).verdict == Verdict::JuliaCandidate);
  auto esc = classify_point(phi, P(Q2, Q(1, 2)), 32);
  CHECK(esc.verdict == Verdict::FatouCertified);
  CHECK(esc.budget_used <= 2);
  auto sq = RationalMap::from_rationals(Q3, {0, 0, 1}, {1});
  CHECK(classify_point(sq, P(Q3, 1), 64).verdict == Verdict::Unknown);
  // 0 is superattracting for z^2
  CHECK(classify_point(sq, P(Q3, 3), 64).verdict == Verdict::FatouCertified);
}

TEST_CASE("escaping orbits grow beyond the escape radius") {
  auto Q2 = field_create(2, {}, 64);
  auto phi = half_map(Q2);
  auto Rad = *escape_radius(phi);
  Point z = P(Q2, Q(1, 4));
  Q last = -z.z.valuation();
  REQUIRE(last > Rad);
  for (int i = 0; i < 5; ++i) {
    z = phi.eval(z);
    Q now = -z.z.valuation();
    CHECK(now > last);
    last = now;
  }
}

TEST_CASE("subhyperbolicity verdicts") {
  auto Q2 = field_create(2, {}, 64), Q3 = field_create(3, {}, 64);
  auto a = is_subhyperbolic(half_map(Q2), 64);
  CHECK(a.verdict == SubhypVerdict::Subhyperbolic);
  CHECK(a.julia_critical.empty());
  auto b = is_subhyperbolic(third_map(Q3), 64);
  CHECK(b.verdict == SubhypVerdict::Subhyperbolic);
  CHECK(b.julia_critical.empty());
  CHECK(b.post.crit.outside_L == 2);

  auto c = is_subhyperbolic(cusp_map(Q2), 64);
  CHECK(c.verdict == SubhypVerdict::Subhyperbolic);
  REQUIRE(c.julia_critical.size() == 1);
  const auto& o = c.post.orbits[c.julia_critical[0]];
  CHECK(o.c.z.equals(R(Q2, 1)));
  // 1 -> 0, fixed with |phi'(0)| = 2
  REQUIRE(o.period.has_value());
  CHECK(*o.period == 1);
  CHECK(o.multiplier_abs > PPow::one());
}

TEST_CASE("every Julia critical orbit of a subhyperbolic verdict is resolved") {
  auto Q2 = field_create(2, {}, 64);
  auto hits = find_subhyperbolic_candidates(3, 1, 2, 32);
  for (auto& h : hits) {
    REQUIRE(h.report.verdict == SubhypVerdict::Subhyperbolic);
    for (int j : h.report.julia_critical) {
      const auto& o = h.report.post.orbits[j];
      REQUIRE(o.period.has_value());
      // replay: orbit[preperiod + period] equals orbit[preperiod]
      Point a = o.orbit[*o.preperiod];
      Point b = a;
      for (int k = 0; k < *o.period; ++k) b = h.map.eval(b);
      CHECK(a.same(b));
      CHECK(cycle_multiplier(h.map, {a}) >= PPow::one());
    }
  }
}

TEST_CASE("candidate search") {
  CHECK(find_subhyperbolic_candidates(2, 0, 3, 16).empty());
  CHECK(find_subhyperbolic_candidates(2, 2, 3, 16).empty());
}

TEST_CASE("julia samples for (z^2 - z)/2") {
  auto Q2 = field_create(2, {}, 64);
  auto phi = half_map(Q2);
  auto js = julia_samples(phi, 1000, 12, 7);
  CHECK(js.seed.z.is_zero());
  CHECK(js.seed.multiplier == PPow::of(1));
  CHECK(js.points.size() == 1000);
  for (size_t i = 0; i < js.points.size(); i += 37) {
    CHECK(js.points[i].valuation() >= 0);
    Point z = Point::at(js.points[i]);
    for (int k = 0; k < 12; ++k) z = phi.eval(z);
    CHECK(z.z.equals(js.seed.z));
  }
  auto d0 = julia_samples(phi, 3, 0, 7);
  for (auto& z : d0.points) CHECK(z.equals(d0.seed.z));
}

TEST_CASE("julia samples for (z^3 - z)/3 fill residue classes") {
  auto Q3 = field_create(3, {}, 64);
  auto js = julia_samples(third_map(Q3), 800, 3, 11);
  std::set<long> classes;
  for (auto& z : js.points)
    for (long a = 0; a < 27; ++a)
      if ((z - R(Q3, a)).vpi() >= 3) classes.insert(a);
  CHECK(classes.size() == 27);
}

TEST_CASE("julia samples are reproducible from the seed") {
  auto Q2 = field_create(2, {}, 64);
  auto a = julia_samples(half_map(Q2), 50, 8, 99), b = julia_samples(half_map(Q2), 50, 8, 99);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].equals(b.points[i]));
}

TEST_CASE("alpha on abstract webs") {
  // c (deg 2) -> z fixed
  OrbitWeb w1{{2, 1}, {1, 1}};
  CHECK(alpha_web(w1, 1) == 2);
  // c1 (deg 2) -> c2 (deg 2) -> z fixed
  OrbitWeb w2{{2, 2, 1}, {1, 2, 2}};
  CHECK(alpha_web(w2, 2) == 4);
  // degrees (3, 2)
  OrbitWeb w3{{3, 2, 1}, {1, 2, 2}};
  CHECK(alpha_web(w3, 2) == 6);
  // multiplicative along the chain
  CHECK(alpha_web(w3, 2) == alpha_web(w3, 1) * w3.local_degree[1]);
}

TEST_CASE("alpha on the cusp map") {
  auto Q2 = field_create(2, {}, 64);
  auto phi = cusp_map(Q2);
  auto pd = postcritical_set(phi, 64);
  CHECK(alpha(phi, P(Q2, 0), pd) == 2);
  const long d = phi.degree();
  long bound = 1;
  for (int i = 0; i < 2 * d - 2; ++i) bound *= d;
  CHECK(alpha(phi, P(Q2, 0), pd) < bound);
}

TEST_CASE("julia samples prune walks with no preimage in L") {
  auto Q2 = field_create(2, {}, 64);
  auto phi = RationalMap::from_rationals(Q2, {Q(-1, 2), 0, Q(1, 2), 0, -2}, {1});
  auto js = julia_samples(phi, 200, 10, 1);
  CHECK(js.points.size() == 200);
  CHECK(js.pruned > 0);
  for (auto& z : js.points) {
    Point w = Point::at(z);
    for (int k = 0; k < 10; ++k) w = phi.eval(w);
    CHECK((w.z - js.seed.z).vpi() >= 1);
  }
}
