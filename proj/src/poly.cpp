#include "padyn/poly.hpp"

#include <algorithm>
#include <optional>

namespace padyn {

Poly poly_trim(Poly P) {
  while (!P.empty() && P.back().is_zero()) P.pop_back();
  return P;
}

int poly_degree(const Poly& P) {
  for (int i = static_cast<int>(P.size()) - 1; i >= 0; --i)
    if (!P[i].is_zero()) return i;
  return -1;
}

Poly poly_add(const Poly& a, const Poly& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  Poly r(std::max(a.size(), b.size()), PadicNumber::zero(a[0].field()));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& c : nb) c = -c;
  return poly_add(a, nb);
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, PadicNumber::zero(a[0].field()));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  return r;
}

Poly poly_scale(const Poly& a, const PadicNumber& s) {
  Poly r = a;
  for (auto& c : r) c = c * s;
  return r;
}

Poly taylor_shift(const Poly& P, const PadicNumber& c) {
  Poly a = P;
  const int n = static_cast<int>(a.size()) - 1;
  if (c.is_exact_zero()) return a;
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) a[j] = a[j] + c * a[j + 1];
  return a;
}

Poly taylor_shift_scaled(const Poly& P, const PadicNumber& c, long k) {
  Poly a = taylor_shift(P, c);
  if (k == 0 || a.empty()) return a;
  const FieldPtr& F = a[0].field();
  if (F->e == 1) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = a[i].mul_pi_pow(k * static_cast<long>(i));
    return a;
  }
  PadicNumber pk = PadicNumber::uniformizer(F).pow(k);
  PadicNumber acc = PadicNumber::from_int(F, 1);
  for (size_t i = 1; i < a.size(); ++i) {
    acc = acc * pk;
    a[i] = a[i] * acc;
  }
  return a;
}

int weierstrass_degree_q(const Poly& P, const PadicNumber& c, const Q& t) {
  Poly T = taylor_shift(P, c);
  int best = -1;
  Q bestv;
  for (int i = 0; i < static_cast<int>(T.size()); ++i) {
    if (T[i].is_zero()) continue;
    Q v = T[i].valuation() + t * i;
    if (best < 0 || v <= bestv) {
      best = i;
      bestv = v;
    }
  }
  return std::max(best, 0);
}

int weierstrass_degree_open_q(const Poly& P, const PadicNumber& c, const Q& t) {
  Poly T = taylor_shift(P, c);
  int best = -1;
  Q bestv;
  for (int i = 0; i < static_cast<int>(T.size()); ++i) {
    if (T[i].is_zero()) continue;
    Q v = T[i].valuation() + t * i;
    if (best < 0 || v < bestv) {
      best = i;
      bestv = v;
    }
  }
  return std::max(best, 0);
}

int weierstrass_degree(const Poly& P, const PadicNumber& c, long k) {
  Q t(k, P.empty() ? 1 : P[0].field()->e);
  t.canonicalize();
  return weierstrass_degree_q(P, c, t);
}

namespace {

struct Vertex {
  int i;
  Q v;
};

std::vector<Vertex> lower_hull(const std::vector<Vertex>& pts) {
  std::vector<Vertex> h;
  for (const auto& q : pts) {
    while (h.size() >= 2) {
      const Vertex& a = h[h.size() - 2];
      const Vertex& b = h.back();
      // drop b if it lies on or above segment a-q
      Q lhs = (b.v - a.v) * (q.i - a.i);
      Q rhs = (q.v - a.v) * (b.i - a.i);
      if (lhs >= rhs) h.pop_back();
      else break;
    }
    h.push_back(q);
  }
  return h;
}

bool in_max_ideal(const PadicNumber& x) { return x.is_zero() || x.vpi() > 0; }

PadicNumber newton(const Poly& P, const Poly& D, PadicNumber z, int max_iter = 400) {
  for (int it = 0; it < max_iter; ++it) {
    PadicNumber v = poly_eval(P, z);
    if (v.is_zero()) break;
    PadicNumber d = poly_eval(D, z);
    if (d.is_zero()) break;
    PadicNumber dz = v / d;
    z = z - dz;
    if (dz.is_zero()) break;
  }
  return z;
}

Poly scale_pi(Poly T, long k) {
  if (k == 0 || T.empty()) return T;
  const FieldPtr& F = T[0].field();
  if (F->e == 1) {
    for (size_t i = 0; i < T.size(); ++i) T[i] = T[i].mul_pi_pow(k * static_cast<long>(i));
    return T;
  }
  PadicNumber pk = PadicNumber::uniformizer(F).pow(k);
  PadicNumber acc = PadicNumber::from_int(F, 1);
  for (size_t i = 1; i < T.size(); ++i) {
    acc = acc * pk;
    T[i] = T[i] * acc;
  }
  return T;
}

long binom(long n, long k) {
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r.get_si();
}

void roots_near(const Poly& P, const Poly& D, const PadicNumber& c, const std::optional<Q>& minv, int depth,
                int cap, const std::vector<PadicNumber>& reps, std::vector<PolyRoot>& out) {
  const FieldPtr& F = c.field();
  const int e = F->e;
  Poly T = taylor_shift(P, c);
  const int n = static_cast<int>(T.size()) - 1;
  int z0 = 0;
  while (z0 <= n && T[z0].is_zero()) ++z0;
  if (z0 > 0) out.push_back({c, z0});
  std::vector<Vertex> pts;
  for (int i = z0; i <= n; ++i)
    if (!T[i].is_zero()) pts.push_back({i, T[i].valuation()});
  auto hull = lower_hull(pts);
  for (size_t s = 0; s + 1 < hull.size(); ++s) {
    const Vertex& a = hull[s];
    const Vertex& b = hull[s + 1];
    Q slope = (a.v - b.v) / Q(b.i - a.i);
    slope.canonicalize();
    if (minv && slope <= *minv) continue;
    Q ke = slope * e;
    ke.canonicalize();
    if (ke.get_den() != 1) continue;  // these roots live in a ramified extension of L
    long k = ke.get_num().get_si();
    Q mq = (a.v + slope * a.i) * e;
    mq.canonicalize();
    long m = mq.get_num().get_si();
    Poly R = scale_pi(T, k);
    std::vector<PadicNumber> u;
    for (int i = a.i; i <= b.i; ++i) u.push_back(R[i].mul_pi_pow(-m));
    const int len = b.i - a.i;
    for (size_t ri = 1; ri < reps.size(); ++ri) {
      const PadicNumber& r = reps[ri];
      int mu = 0;
      for (int j = 0; j <= len; ++j) {
        PadicNumber h = PadicNumber::zero(F);
        PadicNumber rp = PadicNumber::from_int(F, 1);
        for (int i = j; i <= len; ++i) {
          if (i > j) rp = rp * r;
          long bc = binom(i, j) % F->p;
          if (bc == 0) continue;
          h = h + u[i] * rp * PadicNumber::from_int(F, bc);
        }
        if (!in_max_ideal(h)) break;
        ++mu;
      }
      if (mu == 0) continue;
      PadicNumber c1 = c + r.mul_pi_pow(k);
      if (mu == 1) {
        out.push_back({newton(P, D, c1), 1});
        continue;
      }
      if (depth + 1 > cap)
        throw Error(ErrorKind::ResidueSearchDepthExceeded,
                    "root cluster of size " + std::to_string(mu) + " near " + c1.str() + " not separated");
      PadicNumber c2 = c1;
      Poly Pd = P;
      for (int j = 0; j < mu - 1; ++j) Pd = poly_derivative(Pd);
      Poly Dd = poly_derivative(Pd);
      PadicNumber cand = newton(Pd, Dd, c1);
      PadicNumber diff = cand - c1;
      if (poly_eval(Pd, cand).is_zero() && (diff.is_zero() || diff.vpi() > k)) c2 = cand;
      roots_near(P, D, c2, Q(k, e), depth + 1, cap, reps, out);
    }
  }
}

}  // namespace

std::vector<PolyRoot> poly_roots(const Poly& P0, int depth_cap) {
  Poly P = poly_trim(P0);
  if (P.size() <= 1) return {};
  const FieldPtr& F = P[0].field();
  Poly D = poly_derivative(P);
  std::vector<PolyRoot> out;
  roots_near(P, D, PadicNumber::zero(F), std::nullopt, 0, depth_cap, residue_representatives(F), out);
  std::sort(out.begin(), out.end(),
            [](const PolyRoot& a, const PolyRoot& b) { return PadicNumber::canonical_less(a.z, b.z); });
  return out;
}

}  // namespace padyn
