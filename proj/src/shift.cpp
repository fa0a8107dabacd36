#include "padyn/shift.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace padyn {

namespace {

std::uint64_t ipow(int d, int m) {
  std::uint64_t r = 1;
  for (int i = 0; i < m; ++i) r *= d;
  return r;
}

void check_shape(int d, int m, size_t n) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "alphabet size must be >= 2");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "cylinder memory must be >= 1");
  if (n != ipow(d, m)) throw Error(ErrorKind::InvalidArgument, "table size must be d^m");
}

}  // namespace

Observable Observable::from_table(int d, int m, const std::vector<Q>& table) {
  check_shape(d, m, table.size());
  Observable g;
  g.d = d;
  g.m = m;
  g.exact = table;
  for (auto& q : table) g.values.push_back(q.get_d());
  return g;
}

Observable Observable::from_doubles(int d, int m, const std::vector<double>& table) {
  check_shape(d, m, table.size());
  Observable g;
  g.d = d;
  g.m = m;
  g.values = table;
  return g;
}

Observable Observable::constant(int d, const Q& c) { return from_table(d, 1, std::vector<Q>(d, c)); }

Observable Observable::indicator(int d, int s) {
  std::vector<Q> t(d, 0);
  t.at(s) = 1;
  return from_table(d, 1, t);
}

Observable Observable::extended(int m2) const {
  if (m2 < m) throw Error(ErrorKind::InvalidArgument, "cannot shrink an observable");
  if (m2 == m) return *this;
  const std::uint64_t base = ipow(d, m), n2 = ipow(d, m2);
  Observable g;
  g.d = d;
  g.m = m2;
  for (std::uint64_t i = 0; i < n2; ++i) {
    g.values.push_back(values[i % base]);
    if (is_exact()) g.exact.push_back(exact[i % base]);
  }
  return g;
}

Q Observable::mean_uniform() const {
  Q s = 0;
  if (is_exact())
    for (auto& q : exact) s += q;
  else
    for (double v : values) s += Q(v);
  s /= static_cast<long>(size());
  s.canonicalize();
  return s;
}

Observable Observable::centered_uniform() const { return plus_constant(*this, -mean_uniform()); }

Observable operator+(const Observable& a, const Observable& b) {
  if (a.d != b.d) throw Error(ErrorKind::InvalidArgument, "alphabet mismatch");
  const int m = std::max(a.m, b.m);
  Observable x = a.extended(m), y = b.extended(m), r;
  r.d = a.d;
  r.m = m;
  for (size_t i = 0; i < x.size(); ++i) {
    r.values.push_back(x.values[i] + y.values[i]);
    if (x.is_exact() && y.is_exact()) r.exact.push_back(x.exact[i] + y.exact[i]);
  }
  return r;
}

Observable scaled(const Observable& a, double t) {
  Observable r = a;
  r.exact.clear();
  for (auto& v : r.values) v *= t;
  return r;
}

Observable plus_constant(const Observable& a, const Q& c) {
  Observable r = a;
  const double cd = c.get_d();
  for (auto& v : r.values) v += cd;
  for (auto& q : r.exact) {
    q += c;
    q.canonicalize();
  }
  return r;
}

Observable coboundary(const Observable& u) {
  const int d = u.d, m = u.m;
  const std::uint64_t n = ipow(d, m + 1), base = ipow(d, m);
  Observable g;
  g.d = d;
  g.m = m + 1;
  for (std::uint64_t i = 0; i < n; ++i) {
    // (a_1..a_{m+1}): prefix i mod d^m, shifted word i / d
    const std::uint64_t pre = i % base, sh = i / d;
    g.values.push_back(u.values[sh] - u.values[pre]);
    if (u.is_exact()) {
      Q q = u.exact[sh] - u.exact[pre];
      q.canonicalize();
      g.exact.push_back(q);
    }
  }
  return g;
}

std::uint64_t block_index(const int* syms, int d, int m) {
  std::uint64_t idx = 0, w = 1;
  for (int i = 0; i < m; ++i) {
    idx += static_cast<std::uint64_t>(syms[i]) * w;
    w *= d;
  }
  return idx;
}

MarkovMeasure MarkovMeasure::bernoulli(const std::vector<double>& p) {
  if (p.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two symbols");
  double s = 0;
  for (double x : p) {
    if (!(x >= 0)) throw Error(ErrorKind::InvalidArgument, "negative probability");
    s += x;
  }
  if (std::abs(s - 1) > 1e-12) throw Error(ErrorKind::InvalidArgument, "probabilities must sum to 1");
  MarkovMeasure mu;
  mu.d = static_cast<int>(p.size());
  mu.k = 0;
  mu.initial = {1.0};
  mu.trans = p;
  return mu;
}

double cylinder_measure(const MarkovMeasure& mu, const std::vector<int>& w) {
  const int len = static_cast<int>(w.size());
  if (len < mu.k) {
    double s = 0;
    std::vector<int> x = w;
    x.push_back(0);
    for (int a = 0; a < mu.d; ++a) {
      x.back() = a;
      s += cylinder_measure(mu, x);
    }
    return s;
  }
  double p = mu.initial[block_index(w.data(), mu.d, mu.k)];
  for (int i = mu.k; i < len && p > 0; ++i) p *= mu.prob(block_index(w.data() + i - mu.k, mu.d, mu.k), w[i]);
  return p;
}

std::vector<double> cylinder_measures(const MarkovMeasure& mu, int len) {
  const std::uint64_t n = ipow(mu.d, len);
  std::vector<double> out(n);
  std::vector<int> w(len);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::uint64_t x = i;
    for (int j = 0; j < len; ++j) {
      w[j] = static_cast<int>(x % mu.d);
      x /= mu.d;
    }
    out[i] = cylinder_measure(mu, w);
  }
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t i) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

namespace {

int draw(const double* p, int n, double u) {
  double c = 0;
  for (int i = 0; i < n - 1; ++i) {
    c += p[i];
    if (u < c) return i;
  }
  return n - 1;
}

}  // namespace

void sample_word(const MarkovMeasure& mu, std::mt19937_64& rng, int len, std::vector<int>& out) {
  out.resize(len);
  const int k = mu.k, d = mu.d;
  int start = std::min(k, len);
  if (k > 0) {
    std::uint64_t b = draw(mu.initial.data(), static_cast<int>(mu.initial.size()), uniform01(rng));
    std::vector<int> blk(k);
    for (int j = 0; j < k; ++j) {
      blk[j] = static_cast<int>(b % d);
      b /= d;
    }
    for (int j = 0; j < start; ++j) out[j] = blk[j];
  }
  for (int i = start; i < len; ++i) {
    std::uint64_t b = k ? block_index(out.data() + i - k, d, k) : 0;
    out[i] = draw(&mu.trans[b * d], d, uniform01(rng));
  }
}

TransferMatrix transfer_matrix(const Observable& f, int max_iter, double tol) {
  TransferMatrix T;
  T.d = f.d;
  T.m = f.m;
  T.n = f.size();
  const size_t n = T.n;
  const int d = f.d;
  const std::uint64_t top = ipow(d, f.m - 1);
  T.M.assign(n * n, 0.0);
  for (size_t w = 0; w < n; ++w)
    for (int a = 0; a < d; ++a) T.M[w * n + (w / d + a * top)] = std::exp(f.values[w]);

  auto iterate = [&](bool transpose, std::vector<double>& v, double& lam) {
    v.assign(n, 1.0 / n);
    std::vector<double> nx(n);
    for (int it = 1; it <= max_iter; ++it) {
      std::fill(nx.begin(), nx.end(), 0.0);
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
          double a = transpose ? T.M[j * n + i] : T.M[i * n + j];
          if (a != 0) nx[i] += a * v[j];
        }
      double s = 0;
      for (double x : nx) s += x;
      double diff = 0;
      for (size_t i = 0; i < n; ++i) {
        nx[i] /= s;
        diff = std::max(diff, std::abs(nx[i] - v[i]));
      }
      v.swap(nx);
      lam = s;
      if (diff < tol) return it;
    }
    throw Error(ErrorKind::PowerIterationStall, "no convergence in " + std::to_string(max_iter) + " iterations");
  };
  double lam_r = 0, lam_l = 0;
  T.iterations = iterate(false, T.right, lam_r);
  T.iterations = std::max(T.iterations, iterate(true, T.left, lam_l));
  T.leading = lam_r;
  T.pressure = std::log(lam_r);
  return T;
}

MarkovMeasure equilibrium_measure(const TransferMatrix& T) {
  MarkovMeasure mu;
  mu.d = T.d;
  mu.k = T.m;
  const size_t n = T.n;
  const std::uint64_t top = ipow(T.d, T.m - 1);
  double z = 0;
  for (size_t w = 0; w < n; ++w) z += T.left[w] * T.right[w];
  mu.initial.resize(n);
  for (size_t w = 0; w < n; ++w) mu.initial[w] = T.left[w] * T.right[w] / z;
  mu.trans.resize(n * T.d);
  for (size_t w = 0; w < n; ++w) {
    double s = 0;
    for (int a = 0; a < T.d; ++a) {
      const size_t w2 = w / T.d + a * top;
      mu.trans[w * T.d + a] = T.M[w * n + w2] * T.right[w2] / (T.leading * T.right[w]);
      s += mu.trans[w * T.d + a];
    }
    for (int a = 0; a < T.d; ++a) mu.trans[w * T.d + a] /= s;
  }
  return mu;
}

double second_eigen_ratio(const TransferMatrix& T) {
  const Eigen::Index n = static_cast<Eigen::Index>(T.n);
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = T.M[i * n + j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < n; ++i) mods.push_back(std::abs(es.eigenvalues()[i]));
  std::sort(mods.rbegin(), mods.rend());
  return mods.size() > 1 ? mods[1] / mods[0] : 0.0;
}

}  // namespace padyn
