#include "padyn/kernels.hpp"

#include <omp.h>

#include <exception>

namespace padyn {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

namespace {

// g(sigma^k a) for k < n
void values_on(const Observable& g, int n, const std::vector<int>& word, std::vector<double>& out) {
  out.resize(n);
  const std::uint64_t top = [&] {
    std::uint64_t t = 1;
    for (int i = 1; i < g.m; ++i) t *= g.d;
    return t;
  }();
  std::uint64_t idx = block_index(word.data(), g.d, g.m);
  for (int k = 0; k < n; ++k) {
    out[k] = g.values[idx];
    if (k + 1 < n) idx = idx / g.d + static_cast<std::uint64_t>(word[k + g.m]) * top;
  }
}

double orbit_sum(const Observable& g, const MarkovMeasure& mu, int n, std::uint64_t s, std::vector<int>& word,
                 std::vector<double>& vals) {
  std::mt19937_64 rng(s);
  sample_word(mu, rng, n + g.m - 1, word);
  values_on(g, n, word, vals);
  double acc = 0;
  for (double v : vals) acc += v;
  return acc;
}

struct OrbitLag {
  std::vector<double> cross;
  double sum_g = 0, sum_chi = 0;
};

// g and chi share the memory m
void orbit_lag(const Observable& g, const Observable& chi, const MarkovMeasure& mu, int n, int max_lag,
               std::uint64_t s, std::vector<int>& word, std::vector<double>& gv, std::vector<double>& cv,
               OrbitLag& out) {
  std::mt19937_64 rng(s);
  sample_word(mu, rng, n + g.m - 1, word);
  values_on(g, n, word, gv);
  values_on(chi, n, word, cv);
  out.cross.assign(max_lag + 1, 0.0);
  out.sum_g = out.sum_chi = 0;
  for (int k = 0; k < n; ++k) {
    out.sum_g += gv[k];
    out.sum_chi += cv[k];
  }
  for (int l = 0; l <= max_lag && l < n; ++l) {
    double acc = 0;
    for (int k = 0; k + l < n; ++k) acc += gv[k] * cv[k + l];
    out.cross[l] = acc;
  }
}

LagProducts reduce_lags(const std::vector<OrbitLag>& per, int n, int max_lag) {
  LagProducts r;
  r.cross.assign(max_lag + 1, 0.0);
  double sg = 0, sc = 0;
  for (auto& o : per) {
    sg += o.sum_g;
    sc += o.sum_chi;
    for (int l = 0; l <= max_lag; ++l) r.cross[l] += o.cross[l];
  }
  r.count = per.size() * static_cast<size_t>(n);
  r.mean_g = sg / r.count;
  r.mean_chi = sc / r.count;
  for (int l = 0; l <= max_lag; ++l) {
    const double pairs = static_cast<double>(per.size()) * (n - l);
    r.cross[l] = pairs > 0 ? r.cross[l] / pairs : 0.0;
  }
  return r;
}

void check_args(int n, int max_lag) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "orbit length must be >= 1");
  if (max_lag < 0 || max_lag >= n) throw Error(ErrorKind::InvalidArgument, "lag must lie in [0, n)");
}

}  // namespace

std::vector<double> LagProducts::covariance() const {
  std::vector<double> c;
  for (double x : cross) c.push_back(x - mean_g * mean_chi);
  return c;
}

std::vector<double> birkhoff_sums(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits,
                                  std::uint64_t seed) {
  check_args(n, 0);
  std::vector<double> out(n_orbits);
  const long N = static_cast<long>(n_orbits);
#pragma omp parallel
  {
    std::vector<int> word;
    std::vector<double> vals;
#pragma omp for schedule(static)
    for (long i = 0; i < N; ++i) out[i] = orbit_sum(g, mu, n, stream_seed(seed, i), word, vals);
  }
  return out;
}

std::vector<double> birkhoff_sums_serial(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits,
                                         std::uint64_t seed) {
  check_args(n, 0);
  std::vector<double> out(n_orbits);
  std::vector<int> word;
  std::vector<double> vals;
  for (size_t i = 0; i < n_orbits; ++i) out[i] = orbit_sum(g, mu, n, stream_seed(seed, i), word, vals);
  return out;
}

LagProducts lag_products(const Observable& g0, const Observable& chi0, const MarkovMeasure& mu, int n,
                         size_t n_orbits, int max_lag, std::uint64_t seed) {
  check_args(n, max_lag);
  const int m = std::max(g0.m, chi0.m);
  const Observable g = g0.extended(m), chi = chi0.extended(m);
  std::vector<OrbitLag> per(n_orbits);
  const long N = static_cast<long>(n_orbits);
#pragma omp parallel
  {
    std::vector<int> word;
    std::vector<double> gv, cv;
#pragma omp for schedule(static)
    for (long i = 0; i < N; ++i) orbit_lag(g, chi, mu, n, max_lag, stream_seed(seed, i), word, gv, cv, per[i]);
  }
  return reduce_lags(per, n, max_lag);
}

LagProducts lag_products_serial(const Observable& g0, const Observable& chi0, const MarkovMeasure& mu, int n,
                                size_t n_orbits, int max_lag, std::uint64_t seed) {
  check_args(n, max_lag);
  const int m = std::max(g0.m, chi0.m);
  const Observable g = g0.extended(m), chi = chi0.extended(m);
  std::vector<OrbitLag> per(n_orbits);
  std::vector<int> word;
  std::vector<double> gv, cv;
  for (size_t i = 0; i < n_orbits; ++i) orbit_lag(g, chi, mu, n, max_lag, stream_seed(seed, i), word, gv, cv, per[i]);
  return reduce_lags(per, n, max_lag);
}

std::vector<PPow> expansion_margins(const RhoMetric& M, const std::vector<Point>& samples) {
  std::vector<PPow> out(samples.size());
  std::exception_ptr err;
  const long N = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < N; ++i) {
    try {
      out[i] = expansion_at(M, samples[i]).ratio;
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<PPow> expansion_margins_serial(const RhoMetric& M, const std::vector<Point>& samples) {
  std::vector<PPow> out;
  for (auto& z : samples) out.push_back(expansion_at(M, z).ratio);
  return out;
}

}  // namespace padyn
