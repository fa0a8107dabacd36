#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracle.hpp"
#include "padyn/kernels.hpp"
#include "padyn/statistics.hpp"

using namespace padyn;

namespace {

Observable centered_indicator() { return Observable::indicator(2, 1).centered_uniform(); }

std::vector<long double> as_ld(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("observables") {
  auto g = Observable::from_table(2, 2, {Q(0), Q(1), Q(2), Q(3)});
  CHECK(g.is_exact());
  CHECK(g.mean_uniform() == Q(3, 2));
  auto e = g.extended(3);
  REQUIRE(e.size() == 8);
  // index sum a_i d^(i-1): extending adds a most significant symbol
  for (std::uint64_t i = 0; i < 8; ++i) CHECK(e.values[i] == g.values[i % 4]);
  CHECK(centered_indicator().mean_uniform() == 0);
  auto u = Observable::from_table(2, 1, {Q(0), Q(5)});
  auto cb = coboundary(u);
  CHECK(cb.m == 2);
  // u(a_2) - u(a_1)
  CHECK(cb.exact[0] == 0);
  CHECK(cb.exact[1] == -5);
  CHECK(cb.exact[2] == 5);
  CHECK(cb.exact[3] == 0);
  CHECK(Observable::constant(3, Q(2)).values == std::vector<double>{2, 2, 2});
}

TEST_CASE("birkhoff sums") {
  std::vector<int> a(200);
  for (size_t i = 0; i < a.size(); ++i) a[i] = static_cast<int>((i + 1) % 2);
  CHECK(birkhoff_sum(Observable::constant(2, 1), a, 100) == 100);
  CHECK(birkhoff_sum(Observable::indicator(2, 1), a, 10) == 5);
  auto g = Observable::from_table(2, 2, {Q(0), Q(1), Q(2), Q(3)});
  // blocks (1,0) -> index 1, (0,1) -> index 2
  CHECK(birkhoff_sum(g, a, 4) == 1 + 2 + 1 + 2);
}

TEST_CASE("cylinder measures are shift invariant") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Q> tab;
    for (int i = 0; i < 9; ++i) tab.push_back(Q(static_cast<long>(rng() % 7) - 3, 4));
    auto T = transfer_matrix(Observable::from_table(3, 2, tab));
    auto mu = equilibrium_measure(T);
    for (int len = 1; len <= 4; ++len) {
      auto a = cylinder_measures(mu, len), b = cylinder_measures(mu, len + 1);
      CHECK(std::accumulate(a.begin(), a.end(), 0.0) == doctest::Approx(1).epsilon(1e-13));
      const size_t n = a.size();
      for (size_t w = 0; w < n; ++w) {
        // refinements on the right: w followed by s, index w + s d^len
        double right = 0, left = 0;
        for (size_t s = 0; s < 3; ++s) right += b[w + s * n];
        // refinements on the left: s followed by w, index s + 3 w
        for (size_t s = 0; s < 3; ++s) left += b[s + 3 * w];
        CHECK(std::abs(right - a[w]) < 1e-14);
        CHECK(std::abs(left - a[w]) < 1e-14);
      }
    }
  }
}

TEST_CASE("pressure closed forms") {
  for (int d : {2, 3, 5}) {
    auto pr = pressure_and_equilibrium(Observable::constant(d, 0));
    CHECK(std::abs(pr.pressure - std::log(static_cast<double>(d))) < 1e-12);
    for (double c : pr.cylinders) CHECK(std::abs(c - 1.0 / d) < 1e-12);
  }
  for (auto ab : {std::pair<double, double>{0.3, -1.2}, {2.0, 0.5}, {-0.7, -0.7}}) {
    auto pr = pressure_and_equilibrium(Observable::from_doubles(2, 1, {ab.first, ab.second}));
    const double Z = std::exp(ab.first) + std::exp(ab.second);
    CHECK(std::abs(pr.pressure - std::log(Z)) < 1e-10);
    CHECK(std::abs(pr.cylinders[0] - std::exp(ab.first) / Z) < 1e-10);
  }
}

TEST_CASE("pressure against the Perron root oracle") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2), m = 2;
    std::vector<double> tab(d * d);
    for (auto& x : tab) x = (static_cast<double>(rng() % 2001) - 1000) / 700;
    auto T = transfer_matrix(Observable::from_doubles(d, m, tab));
    const long double ref = oracle::perron_root(as_ld(T.M), T.n);
    CHECK(std::abs(T.pressure - std::log(ref)) < 1e-11);
    CHECK(T.M.size() == T.n * T.n);
    for (double x : T.M) CHECK(x >= 0);
  }
}

TEST_CASE("pressure is convex along a line") {
  auto f = Observable::from_doubles(2, 2, {0.1, -0.4, 0.9, 0.0});
  auto g = Observable::from_doubles(2, 2, {1, 0, -1, 0.5});
  std::vector<double> P;
  for (int i = -10; i <= 10; ++i) P.push_back(pressure_and_equilibrium(f + scaled(g, i * 0.2)).pressure);
  for (size_t i = 1; i + 1 < P.size(); ++i) CHECK(P[i - 1] + P[i + 1] - 2 * P[i] >= -1e-12);
}

TEST_CASE("cohomologous potentials share the equilibrium state") {
  auto f = Observable::from_table(2, 2, {Q(1, 3), Q(-1), Q(0), Q(2, 5)});
  auto u = Observable::from_table(2, 2, {Q(0), Q(3, 2), Q(-1), Q(1, 7)});
  const Q A(5, 4);
  auto f1 = plus_constant(f + coboundary(u), A);
  auto a = pressure_and_equilibrium(f), b = pressure_and_equilibrium(f1);
  CHECK(std::abs(b.pressure - a.pressure - A.get_d()) < 1e-10);
  auto ca = cylinder_measures(a.equilibrium, 4), cb = cylinder_measures(b.equilibrium, 4);
  for (size_t i = 0; i < ca.size(); ++i) CHECK(std::abs(ca[i] - cb[i]) < 1e-10);
}

TEST_CASE("exact correlations vanish beyond the cylinder window") {
  std::mt19937_64 rng(4);
  const std::vector<Q> probs{Q(1, 3), Q(2, 3)};
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Q> g, chi;
    for (int i = 0; i < 4; ++i) {
      g.push_back(Q(static_cast<long>(rng() % 9) - 4, 3));
      chi.push_back(Q(static_cast<long>(rng() % 9) - 4, 5));
    }
    auto G = Observable::from_table(2, 2, g), X = Observable::from_table(2, 2, chi);
    for (int lag = 0; lag <= 5; ++lag) {
      const Q lib = exact_correlation(G, X, lag, probs);
      CHECK(lib == oracle::bernoulli_cov(g, chi, 2, 2, lag, probs));
      if (lag >= 2) CHECK(lib == 0);
    }
  }
  auto c = Observable::constant(2, 3);
  for (int lag = 0; lag < 4; ++lag) CHECK(exact_correlation(c, c, lag, {Q(1, 2), Q(1, 2)}) == 0);
}

TEST_CASE("sampled correlations decay at the spectral rate") {
  // +-1/2 on repeated / alternating pairs: a Markov chain with second eigenvalue tanh(1/2)
  auto f = Observable::from_doubles(2, 2, {0.5, -0.5, -0.5, 0.5});
  auto pr = pressure_and_equilibrium(f);
  auto T = transfer_matrix(f);
  const double ratio = second_eigen_ratio(T);
  CHECK(ratio == doctest::Approx(std::tanh(0.5)).epsilon(1e-9));
  auto g = Observable::indicator(2, 1);
  auto rep = correlation_decay(g, g, pr.equilibrium, 6, 400, 4000, 77);
  CHECK(rep.fit.ok);
  CHECK(rep.fit.r2 > 0.9);
  CHECK(std::abs(std::exp(-rep.fit.beta) - ratio) < 0.1);
}

TEST_CASE("second eigenvalue of a rank one matrix") {
  auto T = transfer_matrix(Observable::from_doubles(2, 1, {0.4, -0.1}));
  CHECK(second_eigen_ratio(T) < 1e-12);
}

TEST_CASE("Green-Kubo variance") {
  auto mu = MarkovMeasure::uniform(2);
  auto s = sigma_squared(centered_indicator(), mu, 10, 1000, 2000, 42);
  CHECK(std::abs(s.sigma2 - 0.25) < 0.01);
  CHECK(s.noise_level);
  auto z = sigma_squared(Observable::constant(2, 0), mu, 10, 1000, 200, 42);
  CHECK(z.sigma2 == 0);
  auto u = Observable::from_table(2, 2, {Q(0), Q(1), Q(-2), Q(1, 2)});
  auto cb = sigma_squared(coboundary(u), mu, 10, 1000, 2000, 42);
  CHECK(std::abs(cb.sigma2) < 1e-2);
}

TEST_CASE("CLT degenerate branches") {
  auto mu = MarkovMeasure::uniform(2);
  auto z = clt_test(Observable::constant(2, 0), mu, 100, 500, 0, 1);
  CHECK(z.degenerate);
  CHECK(z.max_abs == 0);
  CHECK(z.pass);
  auto u = Observable::from_table(2, 1, {Q(0), Q(1)});
  auto c = clt_test(coboundary(u), mu, 1000, 500, 1e-14, 1);
  CHECK(c.degenerate);
  // |S_n| <= 1 and the empirical mean is subtracted
  CHECK(c.max_abs <= 2 / std::sqrt(1000.0));
}

TEST_CASE("CLT distance shrinks along a factor-4 ladder") {
  auto mu = MarkovMeasure::uniform(2);
  auto g = centered_indicator();
  std::vector<double> ks;
  for (size_t orbits : {625, 2500, 10000}) ks.push_back(clt_test(g, mu, 1000, orbits, 0.25, 42).ks_lattice);
  CHECK(ks[0] > ks[1]);
  CHECK(ks[1] > ks[2]);
  CHECK(ks[2] < 0.02);
}

TEST_CASE("lattice span of the normalized sums") {
  auto c = clt_test(centered_indicator(), MarkovMeasure::uniform(2), 400, 300, 0.25, 3);
  REQUIRE(c.span.has_value());
  CHECK(*c.span == 1);
}

TEST_CASE("binomial tail rate matches the direct sum") {
  for (int n : {8, 16, 40})
    for (double q : {0.5, 0.3})
      for (int k = 0; k <= n; k += 3) {
        const long double up = oracle::binomial_tail(n, q, k, true), lo = oracle::binomial_tail(n, q, k, false);
        CHECK(std::abs(binomial_tail_rate(n, q, static_cast<double>(k) / n, true) - std::log(up) / n) < 1e-12);
        CHECK(std::abs(binomial_tail_rate(n, q, static_cast<double>(k) / n, false) - std::log(lo) / n) < 1e-12);
      }
}

TEST_CASE("large deviation rows") {
  auto f = Observable::constant(2, 0);
  auto g = Observable::indicator(2, 1);
  auto rows = large_deviation_check(f, g, {0.0, 0.5}, 16, 20000, 9);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].level == doctest::Approx(0.5));
  CHECK(rows[0].pressure_rate == doctest::Approx(0).epsilon(1e-12));
  CHECK(rows[0].observed);
  // P(S_16 >= 8) is about 0.6, so the rate is close to 0
  CHECK(std::abs(rows[0].empirical) < 0.05);
  CHECK(rows[1].level > 0.5);
  CHECK(rows[1].pressure_rate < 0);
}

TEST_CASE("coboundary search") {
  auto u = Observable::from_table(2, 2, {Q(0), Q(3), Q(-1, 2), Q(7, 3)});
  auto g = plus_constant(coboundary(u), Q(2));
  auto r = coboundary_check(g, 3);
  REQUIRE(r.found);
  CHECK(r.constant == 2);
  // recovered u agrees with the planted one up to an additive constant
  auto w = Observable::from_table(2, r.memory, r.u);
  auto back = plus_constant(coboundary(w), r.constant);
  auto ge = g.extended(back.m);
  for (size_t i = 0; i < back.size(); ++i) CHECK(back.exact[i] == ge.exact[i]);
  auto ue = u.extended(r.memory);
  const Q shift = ue.exact[0] - r.u[0];
  for (size_t i = 0; i < r.u.size(); ++i) CHECK(ue.exact[i] - r.u[i] == shift);

  CHECK_FALSE(coboundary_check(centered_indicator(), 4).found);
  auto k = coboundary_check(Observable::constant(2, 5), 2);
  REQUIRE(k.found);
  CHECK(k.constant == 5);
  for (auto& x : k.u) CHECK(x == 0);
}

TEST_CASE("LIL envelope") {
  auto pts = lil_envelope(centered_indicator(), MarkovMeasure::uniform(2), 5000, 50, 0.25, 7, 12);
  REQUIRE(pts.size() >= 2);
  for (size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].n > pts[i - 1].n);
  for (auto& p : pts) {
    CHECK(p.n >= 3);
    const double n = p.n;
    CHECK(p.loglog == doctest::Approx(std::sqrt(2 * 0.25 * n * std::log(std::log(n)))));
    CHECK(p.logn == doctest::Approx(std::sqrt(2 * 0.25 * n * std::log(n) * std::log(n))));
  }
}

TEST_CASE("parallel kernels match their serial references") {
  auto g = Observable::from_doubles(2, 2, {0.5, -1, 0.25, 2});
  auto mu = equilibrium_measure(transfer_matrix(Observable::from_doubles(2, 2, {0.1, 0, -0.3, 0.4})));
  const auto ref = birkhoff_sums_serial(g, mu, 300, 257, 11);
  const auto lref = lag_products_serial(g, g, mu, 300, 257, 8, 11);
  for (int t : {1, 2, 4}) {
    set_threads(t);
    CHECK(birkhoff_sums(g, mu, 300, 257, 11) == ref);
    auto lp = lag_products(g, g, mu, 300, 257, 8, 11);
    CHECK(lp.cross == lref.cross);
    CHECK(lp.mean_g == lref.mean_g);
    CHECK(lp.count == lref.count);
  }
  set_threads(0);
}

TEST_CASE("orbit streams are reproducible") {
  auto mu = MarkovMeasure::uniform(3);
  auto a = sample_words(mu, 20, 50, 5), b = sample_words(mu, 20, 50, 5), c = sample_words(mu, 20, 50, 6);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(stream_seed(1, 0) != stream_seed(1, 1));
  CHECK(stream_seed(1, 0) != stream_seed(2, 0));
}
