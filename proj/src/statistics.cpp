#include "padyn/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace padyn {

namespace {

std::uint64_t ipow(int d, int m) {
  std::uint64_t r = 1;
  for (int i = 0; i < m; ++i) r *= d;
  return r;
}

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * std::sqrt(2.0))); }

}  // namespace

double birkhoff_sum(const Observable& g, const std::vector<int>& a, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be >= 0");
  if (n == 0) return 0;
  if (static_cast<int>(a.size()) < n + g.m - 1) throw Error(ErrorKind::InvalidArgument, "word too short for S_n");
  double s = 0;
  for (int k = 0; k < n; ++k) s += g.values[block_index(a.data() + k, g.d, g.m)];
  return s;
}

double PulledObservable::at(const PadicNumber& z) const {
  auto path = cover_path(*cover, z);
  if (static_cast<int>(path.size()) <= g.m)
    throw Error(ErrorKind::OrbitLeavesCoveredRegion, z.str() + " is not in a level-" + std::to_string(g.m) + " disk");
  double v = by_disk[path[g.m]];
  if (std::isnan(v)) throw Error(ErrorKind::OrbitLeavesCoveredRegion, z.str() + " lies in a disk without a code");
  return v;
}

PulledObservable pull_back(const Observable& g, const CodingTree& T, const CoverSequence& C) {
  if (g.d != T.d) throw Error(ErrorKind::InvalidArgument, "alphabet and degree differ");
  if (T.depth() < g.m || C.n_levels() < g.m)
    throw Error(ErrorKind::DepthExceeded, "tree and cover need depth >= " + std::to_string(g.m));
  PulledObservable P;
  P.g = g;
  P.cover = &C;
  P.by_disk.assign(C.levels[g.m].size(), std::numeric_limits<double>::quiet_NaN());
  const auto& nodes = T.levels[g.m - 1];
  for (std::uint64_t idx = 0; idx < nodes.size(); ++idx) {
    auto path = cover_path(C, nodes[idx]);
    if (static_cast<int>(path.size()) <= g.m)
      throw Error(ErrorKind::OrbitLeavesCoveredRegion, "tree node " + nodes[idx].str() + " outside the cover");
    P.by_disk[path[g.m]] = g.values[idx];
  }
  return P;
}

double birkhoff_sum_map(const PulledObservable& g, const PadicNumber& z, int n) {
  double s = 0;
  Point cur = Point::at(z);
  const RationalMap& phi = g.cover->map;
  for (int k = 0; k < n; ++k) {
    if (cur.inf) throw Error(ErrorKind::OrbitLeavesCoveredRegion, "orbit reaches infinity");
    s += g.at(cur.z);
    if (k + 1 < n) cur = phi.eval(cur);
  }
  return s;
}

std::vector<std::vector<PadicNumber>> sample_balanced_measure(const CodingTree& T, size_t n_orbits, int orbit_length,
                                                              std::uint64_t seed) {
  if (orbit_length < 1) throw Error(ErrorKind::InvalidArgument, "orbit length must be >= 1");
  std::vector<std::vector<PadicNumber>> out;
  const int D = T.depth();
  const std::uint64_t leaves = T.levels[D - 1].size();
  for (size_t i = 0; i < n_orbits; ++i) {
    std::mt19937_64 rng(stream_seed(seed, i));
    std::uint64_t idx = 0, w = 1;
    for (int k = 0; k < D; ++k) {
      idx += (rng() % T.d) * w;
      w *= T.d;
    }
    std::vector<PadicNumber> orbit{T.levels[D - 1][idx % leaves]};
    Point cur = Point::at(orbit[0]);
    for (int k = 1; k < orbit_length; ++k) {
      cur = T.map.eval(cur);
      if (cur.inf) throw Error(ErrorKind::FiberDeficient, "sampled orbit reaches infinity");
      orbit.push_back(cur.z);
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

std::vector<std::vector<int>> sample_words(const MarkovMeasure& mu, size_t count, int len, std::uint64_t seed) {
  std::vector<std::vector<int>> out(count);
  for (size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(stream_seed(seed, i));
    sample_word(mu, rng, len, out[i]);
  }
  return out;
}

OrbitStats orbit_stats(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits, std::uint64_t seed) {
  OrbitStats s;
  s.n = n;
  s.samples = n_orbits;
  s.seed = seed;
  s.birkhoff = birkhoff_sums(g, mu, n, n_orbits, seed);
  double sum = 0;
  for (double x : s.birkhoff) sum += x;
  s.mean = sum / (static_cast<double>(n_orbits) * n);
  double v = 0;
  for (double x : s.birkhoff) v += (x - n * s.mean) * (x - n * s.mean);
  s.variance = n_orbits > 1 ? v / ((n_orbits - 1.0) * n) : 0;
  return s;
}

DecayFit fit_decay(const std::vector<double>& c, int first_lag, const std::vector<double>& noise) {
  DecayFit f;
  std::vector<double> xs, ys;
  for (size_t l = first_lag; l < c.size(); ++l)
    if (std::abs(c[l]) > 3 * noise[l] && c[l] != 0) {
      xs.push_back(static_cast<double>(l));
      ys.push_back(std::log(std::abs(c[l])));
    }
  f.points = static_cast<int>(xs.size());
  if (xs.size() < 2) return f;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  f.beta = -slope;
  f.C = std::exp(my - slope * mx);
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.ok = f.beta > 0;
  return f;
}

SigmaReport sigma_squared(const Observable& g, const MarkovMeasure& mu, int lag_cap, int n, size_t n_orbits,
                          std::uint64_t seed) {
  SigmaReport r;
  r.seed = seed;
  LagProducts lp = lag_products(g, g, mu, n, n_orbits, lag_cap, seed);
  r.positions = lp.count;
  r.covariance = lp.covariance();
  r.variance = r.covariance[0];
  double s = r.variance;
  for (int l = 1; l <= lag_cap; ++l) s += 2 * r.covariance[l];
  std::vector<double> noise;
  for (int l = 0; l <= lag_cap; ++l)
    noise.push_back(std::abs(r.variance) / std::sqrt(static_cast<double>(n_orbits) * (n - l)));
  r.fit = fit_decay(r.covariance, 1, noise);
  if (r.fit.points >= 2) {
    if (!r.fit.ok)
      throw Error(ErrorKind::NonSummableCorrelations, "fitted decay rate " + std::to_string(r.fit.beta) + " <= 0");
    const double q = std::exp(-r.fit.beta);
    r.tail_bound = 2 * r.fit.C * std::pow(q, lag_cap + 1) / (1 - q);
  } else {
    r.noise_level = true;
  }
  r.sigma2 = std::max(0.0, s);
  return r;
}

namespace {

// common lattice span of the table values, if rational
std::optional<double> lattice_span(const Observable& g) {
  if (!g.is_exact()) return std::nullopt;
  Z den = 1;
  for (auto& q : g.exact) den = lcm(den, Z(q.get_den()));
  Z h = 0;
  for (auto& q : g.exact) {
    Q diff = (q - g.exact[0]) * den;
    diff.canonicalize();
    h = gcd(h, Z(diff.get_num()));
  }
  if (h == 0) return std::nullopt;
  return Q(h, den).get_d();
}

}  // namespace

CltReport clt_test(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits, double sigma2,
                   std::uint64_t seed, double threshold) {
  CltReport r;
  r.sigma2 = sigma2;
  r.threshold = threshold;
  std::vector<double> S = birkhoff_sums(g, mu, n, n_orbits, seed);
  const double N = static_cast<double>(n_orbits);
  double mean = 0;
  for (double x : S) mean += x;
  mean /= N * n;
  const double rn = std::sqrt(static_cast<double>(n));
  for (double x : S) r.z.push_back((x - n * mean) / rn);
  std::vector<double> z = r.z;
  std::sort(z.begin(), z.end());
  for (double v : z) r.max_abs = std::max(r.max_abs, std::abs(v));
  if (sigma2 <= 1e-12) {
    r.degenerate = true;
    // Levy-Prokhorov distance to the point mass at 0
    std::vector<double> a;
    for (double v : z) a.push_back(std::abs(v));
    std::sort(a.begin(), a.end());
    double eps = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      const double tail = (a.size() - i) / N;
      eps = std::max(eps, std::min(a[i], tail));
    }
    r.ks = r.ks_lattice = eps;
    r.pass = eps < threshold;
    return r;
  }
  const double sd = std::sqrt(sigma2);
  for (size_t i = 0; i < z.size(); ++i) {
    const double F = normal_cdf(z[i], sd);
    r.ks = std::max({r.ks, (i + 1) / N - F, F - i / N});
  }
  r.span = lattice_span(g);
  if (r.span) {
    // ECDF on the lattice against Phi at the half-span midpoints
    const double h = *r.span / rn / 2;
    size_t i = 0;
    while (i < z.size()) {
      size_t j = i;
      while (j < z.size() && std::abs(z[j] - z[i]) < h) ++j;
      const double below = i / N, upto = j / N;
      r.ks_lattice = std::max({r.ks_lattice, std::abs(upto - normal_cdf(z[i] + h, sd)),
                               std::abs(below - normal_cdf(z[i] - h, sd))});
      i = j;
    }
  } else {
    r.ks_lattice = r.ks;
  }
  r.pass = (r.span ? r.ks_lattice : r.ks) < threshold;
  return r;
}

DecayReport correlation_decay(const Observable& g, const Observable& chi, const MarkovMeasure& mu, int n_max, int n,
                              size_t n_orbits, std::uint64_t seed) {
  DecayReport r;
  LagProducts lp = lag_products(g, chi, mu, n, n_orbits, n_max, seed);
  LagProducts vg = lag_products(g, g, mu, n, n_orbits, 0, seed);
  LagProducts vc = lag_products(chi, chi, mu, n, n_orbits, 0, seed);
  const double sd = std::sqrt(std::abs(vg.covariance()[0] * vc.covariance()[0]));
  std::vector<double> noise;
  for (double c : lp.covariance()) r.values.push_back(std::abs(c));
  for (int l = 0; l <= n_max; ++l) noise.push_back(sd / std::sqrt(static_cast<double>(n_orbits) * (n - l)));
  r.fit = fit_decay(r.values, 1, noise);
  return r;
}

Q exact_correlation(const Observable& g0, const Observable& chi0, int lag, const std::vector<Q>& probs) {
  if (!g0.is_exact() || !chi0.is_exact()) throw Error(ErrorKind::InvalidArgument, "exact tables required");
  if (static_cast<int>(probs.size()) != g0.d || g0.d != chi0.d) throw Error(ErrorKind::InvalidArgument, "alphabet mismatch");
  if (lag < 0) throw Error(ErrorKind::InvalidArgument, "lag must be >= 0");
  const int m = std::max(g0.m, chi0.m), d = g0.d;
  const Observable g = g0.extended(m), chi = chi0.extended(m);
  const int len = lag + m;
  if (len > 22) throw Error(ErrorKind::InvalidArgument, "exact correlation limited to words of length <= 22");
  const std::uint64_t words = ipow(d, len);
  Q eg = 0, ec = 0, egc = 0;
  std::vector<int> w(len);
  for (std::uint64_t i = 0; i < words; ++i) {
    std::uint64_t x = i;
    Q p = 1;
    for (int j = 0; j < len; ++j) {
      w[j] = static_cast<int>(x % d);
      x /= d;
      p *= probs[w[j]];
    }
    const Q& a = g.exact[block_index(w.data(), d, m)];
    const Q& b = chi.exact[block_index(w.data() + lag, d, m)];
    eg += p * a;
    ec += p * b;
    egc += p * a * b;
  }
  Q c = egc - eg * ec;
  c.canonicalize();
  return c;
}

PressureReport pressure_and_equilibrium(const Observable& f) {
  PressureReport r;
  TransferMatrix T = transfer_matrix(f);
  r.pressure = T.pressure;
  r.iterations = T.iterations;
  r.equilibrium = equilibrium_measure(T);
  r.cylinders = cylinder_measures(r.equilibrium, f.m);
  r.second_ratio = second_eigen_ratio(T);
  return r;
}

double integrate(const Observable& g, const MarkovMeasure& mu) {
  auto cyl = cylinder_measures(mu, g.m);
  double s = 0;
  for (size_t i = 0; i < cyl.size(); ++i) s += cyl[i] * g.values[i];
  return s;
}

double binomial_tail_rate(int n, double q, double level, bool upper) {
  const double x = n * level;
  const int k0 = upper ? static_cast<int>(std::ceil(x - 1e-9)) : static_cast<int>(std::floor(x + 1e-9));
  auto logpmf = [&](int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(q) +
           (n - k) * std::log1p(-q);
  };
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (int k = 0; k <= n; ++k)
    if (upper ? k >= k0 : k <= k0) {
      terms.push_back(logpmf(k));
      mx = std::max(mx, terms.back());
    }
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  double s = 0;
  for (double t : terms) s += std::exp(t - mx);
  return (mx + std::log(s)) / n;
}

std::vector<LdRow> large_deviation_check(const Observable& f, const Observable& g, const std::vector<double>& t_grid,
                                         int n, size_t n_orbits, std::uint64_t seed) {
  TransferMatrix T0 = transfer_matrix(f);
  MarkovMeasure mu = equilibrium_measure(T0);
  std::vector<double> S = birkhoff_sums(g, mu, n, n_orbits, seed);
  std::vector<LdRow> rows;
  for (double t : t_grid) {
    LdRow r;
    r.t = t;
    TransferMatrix Tt = transfer_matrix(f + scaled(g, t));
    r.level = integrate(g, equilibrium_measure(Tt));
    r.pressure_rate = -t * r.level + Tt.pressure - T0.pressure;
    const double x = n * r.level;
    for (double s : S)
      if (t >= 0 ? s >= x - 1e-9 : s <= x + 1e-9) ++r.hits;
    r.observed = r.hits > 0;
    if (r.observed) {
      const double p = static_cast<double>(r.hits) / n_orbits;
      r.empirical = std::log(p) / n;
      r.se = std::sqrt((1 - p) / (n_orbits * p)) / n;
    } else {
      r.empirical = -std::numeric_limits<double>::infinity();
    }
    rows.push_back(r);
  }
  return rows;
}

namespace {

// Gauss-Jordan over Q; returns a solution or nothing when inconsistent
std::optional<std::vector<Q>> solve_exact(std::vector<std::vector<Q>> A, std::vector<Q> b) {
  const size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    Q inv = 1 / A[r][c];
    for (size_t j = c; j < cols; ++j) A[r][j] *= inv;
    b[r] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      Q f = A[i][c];
      for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Q> x(cols, 0);
  for (size_t i = 0; i < r; ++i) {
    x[pivot_col[i]] = b[i];
    x[pivot_col[i]].canonicalize();
  }
  return x;
}

}  // namespace

CoboundaryResult coboundary_check(const Observable& g, int m_search) {
  if (!g.is_exact()) throw Error(ErrorKind::InvalidArgument, "coboundary search needs an exact table");
  const int d = g.d;
  for (int mem = 0; mem <= m_search; ++mem) {
    const int M = std::max(g.m, mem + 1);
    const Observable G = g.extended(M);
    const std::uint64_t words = ipow(d, M), nu = ipow(d, mem);
    // unknowns u(1..nu-1) with u(0) = 0, then the constant
    const size_t cols = (nu - 1) + 1;
    std::vector<std::vector<Q>> A(words, std::vector<Q>(cols, 0));
    std::vector<Q> b(words);
    for (std::uint64_t w = 0; w < words; ++w) {
      const std::uint64_t pre = w % nu, sh = (w / d) % nu;
      if (mem > 0) {
        if (sh) A[w][sh - 1] += 1;
        if (pre) A[w][pre - 1] -= 1;
      }
      A[w][cols - 1] = 1;
      b[w] = G.exact[w];
    }
    auto x = solve_exact(A, b);
    if (!x) continue;
    CoboundaryResult r;
    r.found = true;
    r.memory = mem;
    r.u.assign(nu, 0);
    for (std::uint64_t i = 1; i < nu; ++i) r.u[i] = (*x)[i - 1];
    r.constant = (*x)[cols - 1];
    return r;
  }
  return {};
}

std::vector<LilPoint> lil_envelope(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits,
                                   double sigma2, std::uint64_t seed, int checkpoints) {
  std::vector<int> marks;
  for (int c = 1; c <= checkpoints; ++c) {
    int k = static_cast<int>(std::round(std::pow(static_cast<double>(n), static_cast<double>(c) / checkpoints)));
    if (k >= 3 && (marks.empty() || k > marks.back())) marks.push_back(k);
  }
  std::vector<LilPoint> out(marks.size());
  const double mean = integrate(g, mu);
  std::vector<int> w;
  for (size_t i = 0; i < n_orbits; ++i) {
    std::mt19937_64 rng(stream_seed(seed, i));
    sample_word(mu, rng, n + g.m - 1, w);
    double s = 0;
    size_t c = 0;
    for (int k = 1; k <= n && c < marks.size(); ++k) {
      s += g.values[block_index(w.data() + k - 1, g.d, g.m)];
      if (k == marks[c]) {
        out[c].max_abs = std::max(out[c].max_abs, std::abs(s - k * mean));
        ++c;
      }
    }
  }
  for (size_t c = 0; c < marks.size(); ++c) {
    const double k = marks[c];
    out[c].n = marks[c];
    out[c].loglog = std::sqrt(2 * sigma2 * k * std::log(std::log(k)));
    out[c].logn = std::sqrt(2 * sigma2 * k * std::log(k) * std::log(k));
  }
  return out;
}

}  // namespace padyn
