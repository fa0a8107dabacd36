#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "padyn/coding.hpp"
#include "padyn/kernels.hpp"
#include "padyn/shift.hpp"

namespace padyn {

/// S_n g(a) = sum_{k<n} g(sigma^k a); a needs n+m-1 symbols.
double birkhoff_sum(const Observable& g, const std::vector<int>& a, int n);

/// g o h^-1 on the Julia set: g read off the level-m cover disk holding the point.
struct PulledObservable {
  Observable g;
  const CoverSequence* cover = nullptr;
  std::vector<double> by_disk;  // indexed by level-m cover disk, NaN where no tree node lands
  double at(const PadicNumber& z) const;
};
PulledObservable pull_back(const Observable& g, const CodingTree& T, const CoverSequence& C);
/// Throws OrbitLeavesCoveredRegion.
double birkhoff_sum_map(const PulledObservable& g, const PadicNumber& z, int n);

/// Orbits of the balanced measure: uniform words through the tree, then forward images.
std::vector<std::vector<PadicNumber>> sample_balanced_measure(const CodingTree& T, size_t n_orbits, int orbit_length,
                                                              std::uint64_t seed);
/// Symbol words of length len drawn from mu.
std::vector<std::vector<int>> sample_words(const MarkovMeasure& mu, size_t count, int len, std::uint64_t seed);

struct OrbitStats {
  int n = 0;
  size_t samples = 0;
  std::vector<double> birkhoff;
  double mean = 0;      // of S_n / n
  double variance = 0;  // of S_n / sqrt(n)
  std::uint64_t seed = 0;
};
OrbitStats orbit_stats(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits, std::uint64_t seed);

struct DecayFit {
  double beta = 0;
  double C = 0;
  double r2 = 0;
  int points = 0;
  bool ok = false;
};
/// Least squares of log|c_l| on l over the entries above the noise floor.
DecayFit fit_decay(const std::vector<double>& c, int first_lag, const std::vector<double>& noise);

struct SigmaReport {
  double sigma2 = 0;
  double variance = 0;
  std::vector<double> covariance;  // lags 0..lag_cap
  DecayFit fit;
  double tail_bound = 0;
  bool noise_level = false;  // no lag >= 1 stands out of the sampling noise
  size_t positions = 0;
  std::uint64_t seed = 0;
};
/// Green-Kubo Var(g) + 2 sum_{l=1}^{lag_cap} Cov(g, g o sigma^l); throws NonSummableCorrelations.
SigmaReport sigma_squared(const Observable& g, const MarkovMeasure& mu, int lag_cap, int n, size_t n_orbits,
                          std::uint64_t seed);

struct CltReport {
  double sigma2 = 0;
  double ks = 0;          // sup |F_n - Phi| over the line
  double ks_lattice = 0;  // continuity-corrected on the lattice of S_n, when g is rational
  std::optional<double> span;
  bool degenerate = false;
  double max_abs = 0;  // degenerate branch: max |S_n - n mean| / sqrt(n)
  double threshold = 0.02;
  bool pass = false;
  std::vector<double> z;  // normalized sums
};
CltReport clt_test(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits, double sigma2,
                   std::uint64_t seed, double threshold = 0.02);

struct DecayReport {
  std::vector<double> values;  // |Cov(g, chi o sigma^l)|, l = 0..n_max
  DecayFit fit;
};
DecayReport correlation_decay(const Observable& g, const Observable& chi, const MarkovMeasure& mu, int n_max, int n,
                              size_t n_orbits, std::uint64_t seed);
/// Exact Cov(g, chi o sigma^l) under a Bernoulli measure with rational weights.
Q exact_correlation(const Observable& g, const Observable& chi, int lag, const std::vector<Q>& probs);

struct PressureReport {
  double pressure = 0;
  MarkovMeasure equilibrium;
  std::vector<double> cylinders;  // measures of the m-words
  int iterations = 0;
  double second_ratio = 0;
};
PressureReport pressure_and_equilibrium(const Observable& f);
/// Integral of g against an equilibrium state.
double integrate(const Observable& g, const MarkovMeasure& mu);

struct LdRow {
  double t = 0;
  double level = 0;          // integral of g against mu_{f+tg}
  double pressure_rate = 0;  // -t level + P(f+tg) - P(f)
  double empirical = 0;      // (1/n) log of the observed frequency
  double se = 0;             // standard error of empirical
  size_t hits = 0;
  bool observed = false;
};
/// Half-line events S_n g >= n level (t >= 0) or <= n level (t < 0) under mu_f.
std::vector<LdRow> large_deviation_check(const Observable& f, const Observable& g, const std::vector<double>& t_grid,
                                         int n, size_t n_orbits, std::uint64_t seed);
/// (1/n) log P(Bin(n, q) >= k) or <= k, exact.
double binomial_tail_rate(int n, double q, double level, bool upper);

struct CoboundaryResult {
  bool found = false;
  int memory = 0;
  std::vector<Q> u;  // u(a_1..a_memory), normalized so u(0..0) = 0
  Q constant = 0;    // g = u o sigma - u + constant
};
CoboundaryResult coboundary_check(const Observable& g, int m_search);

struct LilPoint {
  int n = 0;
  double max_abs = 0;  // max over orbits of |S_n - n mean|
  double loglog = 0;   // sqrt(2 sigma2 n log log n)
  double logn = 0;     // sqrt(2 sigma2 n log n log n)
};
std::vector<LilPoint> lil_envelope(const Observable& g, const MarkovMeasure& mu, int n, size_t n_orbits,
                                   double sigma2, std::uint64_t seed, int checkpoints = 32);

}  // namespace padyn
