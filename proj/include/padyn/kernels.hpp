#pragma once

#include <cstdint>
#include <vector>

#include "padyn/metric.hpp"
#include "padyn/shift.hpp"

namespace padyn {

/// Threads used by the parallel kernels; <= 0 keeps the OpenMP default.
void set_threads(int n);
int max_threads();

/// S_n g along n_orbits independent mu-orbits; orbit i uses stream_seed(seed, i).
std::vector<double> birkhoff_sums(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits,
                                  std::uint64_t seed);
std::vector<double> birkhoff_sums_serial(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits,
                                         std::uint64_t seed);

/// Empirical E[g_k chi_(k+l)] for l = 0..max_lag over all orbit positions with k+l < n.
struct LagProducts {
  std::vector<double> cross;
  double mean_g = 0;
  double mean_chi = 0;
  size_t count = 0;  // orbit positions
  std::vector<double> covariance() const;
};
LagProducts lag_products(const Observable& g, const Observable& chi, const MarkovMeasure& mu, int n,
                         size_t n_orbits, int max_lag, std::uint64_t seed);
LagProducts lag_products_serial(const Observable& g, const Observable& chi, const MarkovMeasure& mu, int n,
                                size_t n_orbits, int max_lag, std::uint64_t seed);

/// rho(phi z)|phi'(z)|/rho(z) at every sample.
std::vector<PPow> expansion_margins(const RhoMetric& M, const std::vector<Point>& samples);
std::vector<PPow> expansion_margins_serial(const RhoMetric& M, const std::vector<Point>& samples);

}  // namespace padyn
