#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "padyn/padic.hpp"

namespace padyn {

/// Function on the full d-shift depending on the first m symbols.
/// Table index of (a_1..a_m) is sum a_i d^(i-1).
struct Observable {
  int d = 2;
  int m = 1;
  std::vector<double> values;
  std::vector<Q> exact;  // empty when the table is not rational

  static Observable from_table(int d, int m, const std::vector<Q>& table);
  static Observable from_doubles(int d, int m, const std::vector<double>& table);
  static Observable constant(int d, const Q& c);
  /// 1 when the first symbol equals s.
  static Observable indicator(int d, int s);

  size_t size() const { return values.size(); }
  bool is_exact() const { return !exact.empty(); }
  /// Same function as an m2-cylinder, m2 >= m.
  Observable extended(int m2) const;
  /// Mean under the uniform Bernoulli measure.
  Q mean_uniform() const;
  Observable centered_uniform() const;
};

Observable operator+(const Observable& a, const Observable& b);
Observable scaled(const Observable& a, double t);
Observable plus_constant(const Observable& a, const Q& c);
/// u o sigma - u, an (m+1)-cylinder.
Observable coboundary(const Observable& u);

std::uint64_t block_index(const int* syms, int d, int m);

/// Markov measure of memory k: initial law on k-blocks, then P(next | last k symbols).
struct MarkovMeasure {
  int d = 2;
  int k = 0;
  std::vector<double> initial;  // d^k
  std::vector<double> trans;    // d^k rows of d

  static MarkovMeasure bernoulli(const std::vector<double>& p);
  static MarkovMeasure uniform(int d) { return bernoulli(std::vector<double>(d, 1.0 / d)); }
  double prob(std::uint64_t block, int next) const { return trans[block * d + next]; }
};

/// mu[w] for a word w (a_1 first).
double cylinder_measure(const MarkovMeasure& mu, const std::vector<int>& w);
/// Measures of all words of length len.
std::vector<double> cylinder_measures(const MarkovMeasure& mu, int len);

/// Independent stream for orbit i of a run seeded with seed.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t i);
double uniform01(std::mt19937_64& rng);

/// Fills out with a word of length len drawn from mu.
void sample_word(const MarkovMeasure& mu, std::mt19937_64& rng, int len, std::vector<int>& out);

/// Transfer matrix on m-blocks, M[w][w'] = exp f(w) when w' extends sigma w.
struct TransferMatrix {
  int d = 2;
  int m = 1;
  size_t n = 0;
  std::vector<double> M;  // row-major n x n
  double leading = 0;
  std::vector<double> left, right;
  double pressure = 0;
  int iterations = 0;
};

/// Leading eigen-data by power iteration; throws PowerIterationStall.
TransferMatrix transfer_matrix(const Observable& f, int max_iter = 100000, double tol = 1e-15);
/// Equilibrium state of f as a Markov measure of memory m.
MarkovMeasure equilibrium_measure(const TransferMatrix& T);
/// |lambda_2| / lambda_1 over the full spectrum.
double second_eigen_ratio(const TransferMatrix& T);

}  // namespace padyn
