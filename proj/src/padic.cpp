#include "padyn/padic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace padyn {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

Q q_floor_to(const Q& x, long den) {
  Z num = x.get_num() * den;
  Z q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
  Q r(q, den);
  r.canonicalize();
  return r;
}

Q q_ceil_to(const Q& x, long den) {
  Z num = x.get_num() * den;
  Z q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
  Q r(q, den);
  r.canonicalize();
  return r;
}

std::string q_str(const Q& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Q q_parse(const std::string& s) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t.empty()) throw Error(ErrorKind::ConfigParse, "empty rational");
  auto slash = t.find('/');
  auto ok_int = [](const std::string& u) {
    if (u.empty()) return false;
    size_t i = (u[0] == '-' || u[0] == '+') ? 1 : 0;
    if (i == u.size()) return false;
    for (; i < u.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(u[i]))) return false;
    return true;
  };
  std::string a = t.substr(0, slash);
  std::string b = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!ok_int(a) || !ok_int(b)) throw Error(ErrorKind::ConfigParse, "bad rational '" + s + "'");
  if (a[0] == '+') a = a.substr(1);
  if (b[0] == '+') b = b.substr(1);
  Q r{Z(a), Z(b)};
  if (r.get_den() == 0) throw Error(ErrorKind::ConfigParse, "zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- PPow

PPow PPow::operator*(const PPow& o) const {
  if (is_zero() || o.is_zero()) {
    if (is_inf() || o.is_inf()) throw Error(ErrorKind::InvalidArgument, "0 * inf in PPow");
    return zero();
  }
  if (is_inf() || o.is_inf()) return inf();
  return of(x + o.x);
}

PPow PPow::operator/(const PPow& o) const {
  if (o.is_zero()) {
    if (is_zero()) throw Error(ErrorKind::InvalidArgument, "0 / 0 in PPow");
    return inf();
  }
  if (o.is_inf()) {
    if (is_inf()) throw Error(ErrorKind::InvalidArgument, "inf / inf in PPow");
    return zero();
  }
  if (is_zero()) return zero();
  if (is_inf()) return inf();
  return of(x - o.x);
}

PPow PPow::pow(const Q& e) const {
  if (e == 0) return one();
  if (finite()) return of(x * e);
  bool positive = e > 0;
  if (is_zero()) return positive ? zero() : inf();
  return positive ? inf() : zero();
}

bool PPow::operator==(const PPow& o) const {
  if (kind != o.kind) return false;
  return kind != Kind::Finite || x == o.x;
}

bool PPow::operator<(const PPow& o) const {
  auto rank = [](Kind k) { return k == Kind::Zero ? 0 : (k == Kind::Finite ? 1 : 2); };
  if (kind != o.kind) return rank(kind) < rank(o.kind);
  return kind == Kind::Finite && x < o.x;
}

long double PPow::value(long p) const {
  if (is_zero()) return 0.0L;
  if (is_inf()) return INFINITY;
  long double ex = static_cast<long double>(x.get_num().get_d()) / static_cast<long double>(x.get_den().get_d());
  return std::pow(static_cast<long double>(p), ex);
}

std::string PPow::str(long p) const {
  if (is_zero()) return "0";
  if (is_inf()) return "inf";
  return std::to_string(p) + "^(" + q_str(x) + ")";
}

PPow parse_ppow(const std::string& s, long p) {
  std::string t;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) t.push_back(ch);
  if (t == "0") return PPow::zero();
  if (t == "inf") return PPow::inf();
  auto caret = t.find('^');
  if (caret == std::string::npos) {
    Q v = q_parse(t);
    if (v == 1) return PPow::one();
    // plain integer powers of p are accepted
    Z num = v.get_num(), den = v.get_den();
    long k = 0;
    while (num % p == 0 && num != 0) { num /= p; ++k; }
    while (den % p == 0) { den /= p; --k; }
    if (num != 1 || den != 1) throw Error(ErrorKind::ConfigParse, "not a power of p: '" + s + "'");
    return PPow::of(k);
  }
  std::string base = t.substr(0, caret);
  std::string ex = t.substr(caret + 1);
  if (base != "p" && base != std::to_string(p))
    throw Error(ErrorKind::ConfigParse, "bad p-power base in '" + s + "'");
  if (ex.size() >= 2 && ex.front() == '(' && ex.back() == ')') ex = ex.substr(1, ex.size() - 2);
  return PPow::of(q_parse(ex));
}

// ---------------------------------------------------------------- F_p[x] helpers

namespace {

using FpPoly = std::vector<long>;  // low to high

void fp_trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

long fp_inv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = ((a % p) + p) % p;
  while (nr) {
    long q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  return ((t % p) + p) % p;
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, long p) {
  fp_trim(a);
  long inv = fp_inv(m.back(), p);
  while (a.size() >= m.size()) {
    long c = a.back() * inv % p;
    size_t off = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) a[off + i] = ((a[off + i] - c * m[i]) % p + p) % p;
    fp_trim(a);
  }
  return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, long p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return fp_mod(r, m, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, p);
    a = b;
    b = r;
  }
  if (!a.empty()) {
    long inv = fp_inv(a.back(), p);
    for (auto& c : a) c = c * inv % p;
  }
  return a;
}

// x^(p^k) mod m
FpPoly fp_frobenius_power(const FpPoly& m, long p, int k) {
  FpPoly x = fp_mod({0, 1}, m, p);
  for (int i = 0; i < k; ++i) {
    FpPoly base = x, acc = {1};
    long e = p;
    while (e) {
      if (e & 1) acc = fp_mulmod(acc, base, m, p);
      base = fp_mulmod(base, base, m, p);
      e >>= 1;
    }
    x = acc;
  }
  return x;
}

FpPoly fp_sub_x(FpPoly a, long p) {
  if (a.size() < 2) a.resize(2, 0);
  a[1] = ((a[1] - 1) % p + p) % p;
  fp_trim(a);
  return a;
}

// number of distinct monic irreducible factors of m (degree >= 1) over F_p
int fp_distinct_irreducible_factors(const FpPoly& m, long p) {
  int n = static_cast<int>(m.size()) - 1;
  std::vector<int> count(n + 1, 0);
  int total = 0;
  for (int d = 1; d <= n; ++d) {
    FpPoly g = fp_gcd(m, fp_sub_x(fp_frobenius_power(m, p, d), p), p);
    int deg = static_cast<int>(g.size()) - 1;
    for (int dd = 1; dd < d; ++dd)
      if (d % dd == 0) deg -= dd * count[dd];
    count[d] = deg / d;
    total += count[d];
  }
  return total;
}

bool fp_irreducible(const FpPoly& m, long p) {
  int n = static_cast<int>(m.size()) - 1;
  if (n <= 0) return false;
  if (n == 1) return true;
  FpPoly xn = fp_frobenius_power(m, p, n);
  FpPoly x = fp_mod({0, 1}, m, p);
  if (xn != x) return false;
  for (int q = 2; q <= n; ++q) {
    if (n % q) continue;
    bool prime = true;
    for (int r = 2; r * r <= q; ++r)
      if (q % r == 0) prime = false;
    if (!prime) continue;
    FpPoly g = fp_gcd(m, fp_sub_x(fp_frobenius_power(m, p, n / q), p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

long vp_z(const Z& x, const Z& P, long p) {
  if (x == 0) return LONG_MAX / 4;
  if (p == 2) return static_cast<long>(mpz_scan1(x.get_mpz_t(), 0));
  Z t;
  return static_cast<long>(mpz_remove(t.get_mpz_t(), x.get_mpz_t(), P.get_mpz_t()));
}

long vp_q(const Q& x, const Z& P, long p) {
  if (x == 0) return LONG_MAX / 4;
  return vp_z(x.get_num(), P, p) - vp_z(x.get_den(), P, p);
}

// p-integral rational -> integer mod p^K
Z zp_of(const Q& q, const Field& F, long K) {
  Z m = F.pw(K);
  Z den = q.get_den();
  Z inv;
  if (!mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()))
    throw Error(ErrorKind::UnsupportedDefiningPolynomial, "coefficient not p-integral");
  Z r = q.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

void fill_powers(Field& F) {
  long cap = 12 * F.prec + 256;
  F.powers.resize(cap);
  F.powers[0] = 1;
  for (long i = 1; i < cap; ++i) F.powers[i] = F.powers[i - 1] * F.P;
}

void check_monic(const std::vector<Q>& poly) {
  if (poly.size() < 2 || poly.back() != 1)
    throw Error(ErrorKind::UnsupportedDefiningPolynomial, "defining polynomial must be monic of degree >= 1");
}

bool is_eisenstein(const std::vector<Q>& poly, const Field& F) {
  size_t n = poly.size() - 1;
  for (size_t i = 0; i < n; ++i)
    if (vp_q(poly[i], F.P, F.p) < 1) return false;
  return vp_q(poly[0], F.P, F.p) == 1;
}

FpPoly reduce_mod_p(const std::vector<Q>& poly, const Field& F) {
  FpPoly r;
  for (auto& c : poly) r.push_back(zp_of(c, F, 1).get_si());
  return r;
}

}  // namespace

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

const Z& Field::pw(long k) const {
  if (k >= 0 && k < static_cast<long>(powers.size())) return powers[k];
  thread_local Z tmp;
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "negative power of p requested");
  mpz_pow_ui(tmp.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(k));
  return tmp;
}

Z Field::A() const {
  Z a;
  mpz_pow_ui(a.get_mpz_t(), P.get_mpz_t(), static_cast<unsigned long>(f));
  return a;
}

std::string Field::describe() const {
  std::ostringstream os;
  os << "Q_" << p;
  if (n > 1) os << " extension e=" << e << " f=" << f;
  return os.str();
}

namespace {

std::shared_ptr<Field> base_field(long p, long precision) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
  if (precision < 4) throw Error(ErrorKind::PrecisionTooSmall, "precision must be at least 4 digits");
  auto F = std::make_shared<Field>();
  F->p = p;
  F->P = p;
  F->prec = precision;
  fill_powers(*F);
  return F;
}

void set_unramified(Field& F, const std::vector<Q>& h) {
  F.f = static_cast<int>(h.size()) - 1;
  F.h.clear();
  for (auto& c : h) F.h.push_back(zp_of(c, F, 4 * F.prec + 32));
  F.unram_spec = h;
}

void set_eisenstein(Field& F, const std::vector<Q>& g) {
  F.e = static_cast<int>(g.size()) - 1;
  F.g.clear();
  for (auto& c : g) F.g.push_back(zp_of(c, F, 4 * F.prec + 32));
  F.eis_spec = g;
}

}  // namespace

FieldPtr field_create(long p, const std::vector<Q>& poly, long precision) {
  auto F = base_field(p, precision);
  if (poly.empty()) return F;
  check_monic(poly);
  F->defining = poly;
  if (poly.size() == 2) return F;
  for (auto& c : poly)
    if (vp_q(c, F->P, p) < 0)
      throw Error(ErrorKind::UnsupportedDefiningPolynomial, "coefficients must be p-integral");
  if (is_eisenstein(poly, *F)) {
    set_eisenstein(*F, poly);
  } else {
    FpPoly red = reduce_mod_p(poly, *F);
    if (fp_irreducible(red, p)) {
      set_unramified(*F, poly);
    } else {
      // Newton polygon with more than one slope, or coprime factors mod p: reducible
      size_t n = poly.size() - 1;
      std::vector<long> v(n + 1);
      for (size_t i = 0; i <= n; ++i) v[i] = vp_q(poly[i], F->P, p);
      bool multi_slope = false;
      if (v[0] < LONG_MAX / 8) {
        // slope from (0, v0) to (n, 0); any point strictly below the chord means two segments
        for (size_t i = 1; i < n; ++i)
          if (v[i] < LONG_MAX / 8 && static_cast<long>(n) * v[i] < static_cast<long>(n - i) * v[0])
            multi_slope = true;
      } else {
        multi_slope = true;  // x divides the polynomial
      }
      if (multi_slope || fp_distinct_irreducible_factors(red, p) >= 2)
        throw Error(ErrorKind::ReducibleDefiningPolynomial, "defining polynomial factors over Q_p");
      throw Error(ErrorKind::UnsupportedDefiningPolynomial,
                  "only Eisenstein or unramified (irreducible mod p) polynomials, or towers of the two");
    }
  }
  F->n = F->e * F->f;
  return F;
}

FieldPtr field_create_tower(long p, const std::vector<Q>& unramified, const std::vector<Q>& eisenstein,
                            long precision) {
  auto F = base_field(p, precision);
  if (!unramified.empty() && unramified.size() > 2) {
    check_monic(unramified);
    FpPoly red = reduce_mod_p(unramified, *F);
    if (!fp_irreducible(red, p))
      throw Error(fp_distinct_irreducible_factors(red, p) >= 2 ? ErrorKind::ReducibleDefiningPolynomial
                                                               : ErrorKind::UnsupportedDefiningPolynomial,
                  "unramified layer must be irreducible mod p");
    set_unramified(*F, unramified);
  }
  if (!eisenstein.empty() && eisenstein.size() > 2) {
    check_monic(eisenstein);
    if (!is_eisenstein(eisenstein, *F))
      throw Error(ErrorKind::UnsupportedDefiningPolynomial, "ramified layer must be Eisenstein over Z_p");
    set_eisenstein(*F, eisenstein);
  }
  F->n = F->e * F->f;
  return F;
}

// ---------------------------------------------------------------- raw O_L arithmetic

namespace {

using Vec = std::vector<Z>;

void vec_mod(Vec& a, const Field& F, long R) {
  if (R <= 0) {
    for (auto& c : a) c = 0;
    return;
  }
  const Z& m = F.pw(R);
  for (auto& c : a) mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
}

Vec vmul(const Field& F, const Vec& a, const Vec& b, long R) {
  if (F.n == 1) {
    Vec r{a[0] * b[0]};
    vec_mod(r, F, R);
    return r;
  }
  const int f = F.f, e = F.e;
  const int W = 2 * f - 1, H = 2 * e - 1;
  std::vector<Z> t(static_cast<size_t>(W) * H);
  auto at = [&](int i, int j) -> Z& { return t[static_cast<size_t>(i) + static_cast<size_t>(W) * j]; };
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) {
      const Z& x = a[i + f * j];
      if (x == 0) continue;
      for (int l = 0; l < e; ++l)
        for (int k = 0; k < f; ++k) {
          const Z& y = b[k + f * l];
          if (y == 0) continue;
          mpz_addmul(at(i + k, j + l).get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        }
    }
  if (f > 1) {
    for (int J = 0; J < H; ++J)
      for (int I = W - 1; I >= f; --I) {
        Z c = at(I, J);
        if (c == 0) continue;
        at(I, J) = 0;
        for (int u = 0; u < f; ++u) mpz_submul(at(I - f + u, J).get_mpz_t(), c.get_mpz_t(), F.h[u].get_mpz_t());
      }
  }
  if (e > 1) {
    for (int J = H - 1; J >= e; --J)
      for (int I = 0; I < f; ++I) {
        Z c = at(I, J);
        if (c == 0) continue;
        at(I, J) = 0;
        for (int u = 0; u < e; ++u) mpz_submul(at(I, J - e + u).get_mpz_t(), c.get_mpz_t(), F.g[u].get_mpz_t());
      }
  }
  Vec r(F.n);
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i) r[i + f * j] = at(i, j);
  vec_mod(r, F, R);
  return r;
}

Vec basis_vec(const Field& F, int i, int j) {
  Vec v(F.n);
  v[i + F.f * j] = 1;
  return v;
}

// inverse of a residue-field element given by coefficients of w^i (mod p)
Vec residue_inverse(const Field& F, const Vec& unit) {
  const long p = F.p;
  if (F.f == 1) {
    Z r = unit[0] % F.P;
    Z inv;
    mpz_invert(inv.get_mpz_t(), r.get_mpz_t(), F.P.get_mpz_t());
    Vec out(F.n);
    out[0] = inv;
    return out;
  }
  FpPoly hm;
  for (auto& c : F.h) hm.push_back(Z(c % F.P).get_si());
  FpPoly a;
  for (int i = 0; i < F.f; ++i) a.push_back(Z(((unit[i] % F.P) + F.P) % F.P).get_si());
  fp_trim(a);
  // a^(q-2) in F_q
  Z q = F.A();
  Z ex = q - 2;
  FpPoly acc = {1}, base = fp_mod(a, hm, p);
  while (ex > 0) {
    if (mpz_odd_p(ex.get_mpz_t())) acc = fp_mulmod(acc, base, hm, p);
    base = fp_mulmod(base, base, hm, p);
    ex >>= 1;
  }
  Vec out(F.n);
  for (size_t i = 0; i < acc.size(); ++i) out[i] = acc[i];
  return out;
}


// Rational reconstruction of u mod m with |a|,|b| <= sqrt(m/2); returns false if none.
bool rational_reconstruct(const Z& u, const Z& m, Z& a, Z& b) {
  Z bound;
  Z half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  Z r0 = m, r1 = u, t0 = 0, t1 = 1;
  while (r1 > bound) {
    Z q = r0 / r1;
    Z r2 = r0 - q * r1;
    Z t2 = t0 - q * t1;
    r0 = r1; r1 = r2; t0 = t1; t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return false;
  // only accept genuinely small fractions
  Z prod = abs(r1) * abs(t1);
  if (prod * prod >= bound) return false;
  Z g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return false;
  a = r1;
  b = t1;
  if (b < 0) { a = -a; b = -b; }
  return true;
}

std::string coeff_str(const Z& c, const Field& F, long R) {
  if (R <= 0) return "0";
  Z m = F.pw(R);
  Z a, b;
  if (rational_reconstruct(c, m, a, b)) {
    Z bb = b;
    // the unit part should have a p-free denominator
    if (bb % F.P != 0) {
      if (b == 1) return a.get_str();
      return a.get_str() + "/" + b.get_str();
    }
  }
  return c.get_str();
}

}  // namespace

// ---------------------------------------------------------------- PadicNumber

PadicNumber PadicNumber::zero(const FieldPtr& F) {
  PadicNumber x;
  x.F_ = F;
  x.zero_ = true;
  x.abs_ = kExact;
  x.s_ = kExact;
  x.c_.assign(F->n, 0);
  x.vpi_ = kExact;
  return x;
}

PadicNumber PadicNumber::zero_at(const FieldPtr& F, long abs) {
  if (abs >= kExact) return zero(F);
  PadicNumber x;
  x.F_ = F;
  x.zero_ = true;
  x.abs_ = abs;
  x.s_ = abs;
  x.c_.assign(F->n, 0);
  x.vpi_ = abs * F->e;
  return x;
}

PadicNumber PadicNumber::from_coeffs(const FieldPtr& F, long shift, std::vector<Z> c, long abs) {
  if (static_cast<int>(c.size()) != F->n) throw Error(ErrorKind::InvalidArgument, "coefficient vector size");
  PadicNumber x;
  x.F_ = F;
  x.s_ = shift;
  x.c_ = std::move(c);
  x.abs_ = std::min(abs, shift + F->prec);
  x.zero_ = false;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::from_rational(const FieldPtr& F, const Q& q) {
  if (q == 0) return zero(F);
  long v = vp_q(q, F->P, F->p);
  Z num = q.get_num(), den = q.get_den();
  Z t;
  if (v > 0) {
    mpz_divexact(t.get_mpz_t(), num.get_mpz_t(), F->pw(v).get_mpz_t());
    num = t;
  } else if (v < 0) {
    mpz_divexact(t.get_mpz_t(), den.get_mpz_t(), F->pw(-v).get_mpz_t());
    den = t;
  }
  Z m = F->pw(F->prec);
  Z inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Z u = num * inv;
  mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
  std::vector<Z> c(F->n);
  c[0] = u;
  return from_coeffs(F, v, std::move(c), v + F->prec);
}

PadicNumber PadicNumber::from_int(const FieldPtr& F, long v) { return from_rational(F, Q(v)); }

PadicNumber PadicNumber::uniformizer(const FieldPtr& F) {
  if (F->e == 1) return from_int(F, F->p);
  std::vector<Z> c(F->n);
  c[F->f] = 1;
  return from_coeffs(F, 0, std::move(c), F->prec);
}

PadicNumber PadicNumber::generator(const FieldPtr& F) {
  // the element x of Q_p[x]/(poly)
  std::vector<Z> c(F->n);
  if (F->n == 1) {
    c[0] = 0;
    if (!F->defining.empty()) return from_rational(F, -F->defining[0]);
    return zero(F);
  }
  if (F->f > 1 && F->e == 1) c[1] = 1;
  else if (F->e > 1 && F->f == 1) c[1] = 1;
  else c[1] = 1;  // w in a tower
  return from_coeffs(F, 0, std::move(c), F->prec);
}

void PadicNumber::normalize() {
  const Field& F = *F_;
  if (zero_) return;
  long R = abs_ - s_;
  if (R <= 0) {
    *this = zero_at(F_, abs_);
    return;
  }
  vec_mod(c_, F, R);
  long m = LONG_MAX;
  for (auto& c : c_)
    if (c != 0) m = std::min(m, vp_z(c, F.P, F.p));
  if (m == LONG_MAX) {
    *this = zero_at(F_, abs_);
    return;
  }
  if (m > 0) {
    const Z& d = F.pw(m);
    for (auto& c : c_)
      if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    s_ += m;
    R -= m;
  }
  if (R > F.prec) {
    R = F.prec;
    abs_ = s_ + R;
    vec_mod(c_, F, R);
  }
  long best = LONG_MAX;
  for (int j = 0; j < F.e; ++j)
    for (int i = 0; i < F.f; ++i) {
      const Z& c = c_[i + F.f * j];
      if (c == 0) continue;
      best = std::min(best, F.e * vp_z(c, F.P, F.p) + j);
    }
  vpi_ = s_ * F.e + best;
}

Q PadicNumber::valuation() const {
  Q v(vpi_, F_->e);
  v.canonicalize();
  return v;
}

PPow PadicNumber::abs_val() const {
  if (zero_) return PPow::zero();
  return PPow::of(-valuation());
}

PadicNumber PadicNumber::with_abs(long abs) const {
  if (abs >= abs_) return *this;
  if (zero_) return zero_at(F_, abs);
  PadicNumber x = *this;
  x.abs_ = abs;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
  if (F_ != o.F_) throw Error(ErrorKind::FieldMismatch, "operands live in different fields");
  if (is_exact_zero()) return o;
  if (o.is_exact_zero()) return *this;
  long abs = std::min(abs_, o.abs_);
  long s = std::min(s_, o.s_);
  if (abs - s <= 0) return zero_at(F_, abs);
  std::vector<Z> c(F_->n);
  if (!zero_) {
    const Z& m = F_->pw(s_ - s);
    for (int k = 0; k < F_->n; ++k) c[k] = c_[k] * m;
  }
  if (!o.zero_) {
    const Z& m = F_->pw(o.s_ - s);
    for (int k = 0; k < F_->n; ++k) mpz_addmul(c[k].get_mpz_t(), o.c_[k].get_mpz_t(), m.get_mpz_t());
  }
  PadicNumber x;
  x.F_ = F_;
  x.s_ = s;
  x.c_ = std::move(c);
  x.abs_ = abs;
  x.zero_ = false;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  PadicNumber x = *this;
  for (auto& c : x.c_) c = -c;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
  if (F_ != o.F_) throw Error(ErrorKind::FieldMismatch, "operands live in different fields");
  if (is_exact_zero() || o.is_exact_zero()) return zero(F_);
  const long e = F_->e;
  long fa = zero_ ? abs_ : floor_div(vpi_, e);
  long fb = o.zero_ ? o.abs_ : floor_div(o.vpi_, e);
  long abs = std::min(abs_ + fb, o.abs_ + fa);
  if (zero_ || o.zero_) return zero_at(F_, abs);
  long s = s_ + o.s_;
  if (abs - s <= 0) return zero_at(F_, abs);
  PadicNumber x;
  x.F_ = F_;
  x.s_ = s;
  x.c_ = vmul(*F_, c_, o.c_, abs - s);
  x.abs_ = abs;
  x.zero_ = false;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) throw Error(ErrorKind::DivisionByIndistinguishableZero, "inverse of " + str());
  const Field& F = *F_;
  long R = abs_ - s_;
  long k = vpi_ - s_ * F.e;
  Vec t = c_;
  long Rt = R;
  if (k > 0) {
    t = vmul(F, c_, basis_vec(F, 0, static_cast<int>(F.e - k)), R + 2);
    for (auto& c : t) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), F.P.get_mpz_t());
    Rt = R - 1;
  }
  if (Rt <= 0) throw Error(ErrorKind::DivisionByIndistinguishableZero, "no precision left to invert");
  Vec y = residue_inverse(F, t);
  // error starts at pi^1 and squares each step
  long err = 1;
  while (err < F.e * Rt) {
    err *= 2;
    long cur = std::min(ceil_div(err, F.e), Rt);
    Vec ty = vmul(F, t, y, cur);
    Vec corr(F.n);
    for (int i = 0; i < F.n; ++i) corr[i] = -ty[i];
    corr[0] += 2;
    y = vmul(F, y, corr, cur);
  }
  long shift = -s_;
  long abs = -s_ + R;
  if (k > 0) {
    y = vmul(F, y, basis_vec(F, 0, static_cast<int>(F.e - k)), Rt + 2);
    shift -= 1;
    abs = -s_ + R - 2;
  }
  PadicNumber x;
  x.F_ = F_;
  x.s_ = shift;
  x.c_ = std::move(y);
  x.abs_ = abs;
  x.zero_ = false;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const {
  if (F_ != o.F_) throw Error(ErrorKind::FieldMismatch, "operands live in different fields");
  if (o.zero_) throw Error(ErrorKind::DivisionByIndistinguishableZero, "divisor is zero at precision");
  return *this * o.inverse();
}

PadicNumber PadicNumber::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  PadicNumber acc = from_int(F_, 1), base = *this;
  while (k) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return acc;
}

PadicNumber PadicNumber::mul_pi_pow(long k) const {
  if (k == 0 || is_exact_zero()) return *this;
  if (F_->e == 1) {
    PadicNumber x = *this;
    if (x.zero_) return zero_at(F_, abs_ + k);
    x.s_ += k;
    x.abs_ += k;
    x.vpi_ += k;
    return x;
  }
  return *this * uniformizer(F_).pow(k);
}

PadicNumber PadicNumber::truncate_pi(long n) const {
  const Field& F = *F_;
  if (zero_) return zero(F_);
  std::vector<Z> c(F.n);
  bool any = false;
  for (int j = 0; j < F.e; ++j) {
    long kj = ceil_div(n - j, F.e);
    for (int i = 0; i < F.f; ++i) {
      const Z& cij = c_[i + F.f * j];
      if (kj <= s_ || cij == 0) continue;
      Z r;
      mpz_fdiv_r(r.get_mpz_t(), cij.get_mpz_t(), F.pw(kj - s_).get_mpz_t());
      c[i + F.f * j] = r;
      if (r != 0) any = true;
    }
  }
  if (!any) return zero(F_);
  return from_coeffs(F_, s_, std::move(c), s_ + F.prec);
}

long PadicNumber::residue_index() const {
  if (zero_) return 0;
  if (vpi_ < 0) throw Error(ErrorKind::InvalidArgument, "residue of a non-integral element");
  if (s_ > 0) return 0;
  long idx = 0, mult = 1;
  for (int i = 0; i < F_->f; ++i) {
    Z r = c_[i] % F_->P;
    idx += r.get_si() * mult;
    mult *= F_->p;
  }
  return idx;
}

bool PadicNumber::canonical_less(const PadicNumber& a, const PadicNumber& b) {
  if (a.zero_ != b.zero_) return a.zero_;
  if (a.zero_) return false;
  if (a.s_ != b.s_) return a.s_ < b.s_;
  long R = std::min(a.abs_ - a.s_, b.abs_ - b.s_);
  const Z& m = a.F_->pw(std::max(R, 0L));
  for (size_t k = 0; k < a.c_.size(); ++k) {
    Z x, y;
    mpz_fdiv_r(x.get_mpz_t(), a.c_[k].get_mpz_t(), m.get_mpz_t());
    mpz_fdiv_r(y.get_mpz_t(), b.c_[k].get_mpz_t(), m.get_mpz_t());
    // compare p-adic digits from the lowest one
    while (x != y) {
      Z dx, dy;
      mpz_fdiv_r(dx.get_mpz_t(), x.get_mpz_t(), a.F_->P.get_mpz_t());
      mpz_fdiv_r(dy.get_mpz_t(), y.get_mpz_t(), a.F_->P.get_mpz_t());
      if (dx != dy) return dx < dy;
      x /= a.F_->P;
      y /= a.F_->P;
    }
  }
  return false;
}

std::string PadicNumber::str() const {
  const Field& F = *F_;
  if (is_exact_zero()) return "0";
  if (zero_) return "O(" + std::to_string(F.p) + "^" + std::to_string(abs_) + ")";
  long R = abs_ - s_;
  std::string scale;
  if (s_ > 0) scale = std::to_string(F.p) + "^" + std::to_string(s_);
  if (s_ < 0) scale = std::to_string(F.p) + "^(" + std::to_string(s_) + ")";
  if (F.n == 1) {
    std::string u = coeff_str(c_[0], F, R);
    if (scale.empty()) return u;
    if (u == "1") return scale;
    return u + "*" + scale;
  }
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (int j = 0; j < F.e; ++j)
    for (int i = 0; i < F.f; ++i) {
      const Z& c = c_[i + F.f * j];
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << coeff_str(c, F, R);
      if (i > 0) os << "*w" << (i > 1 ? "^" + std::to_string(i) : "");
      if (j > 0) os << "*pi" << (j > 1 ? "^" + std::to_string(j) : "");
    }
  os << ")";
  if (!scale.empty()) os << "*" << scale;
  return os.str();
}

std::optional<Q> PadicNumber::to_rational() const {
  if (F_->n != 1) return std::nullopt;
  if (zero_) return Q(0);
  long R = abs_ - s_;
  Z a, b;
  Q u;
  if (rational_reconstruct(c_[0], F_->pw(R), a, b) && b % F_->P != 0) u = Q(a, b);
  else u = Q(c_[0]);
  u.canonicalize();
  if (s_ >= 0) return u * Q(F_->pw(s_));
  return u / Q(F_->pw(-s_));
}

Q PadicNumber::norm_valuation() const {
  const Field& F = *F_;
  if (zero_) return Q(abs_);
  const int n = F.n;
  long R = abs_ - s_;
  long K = R + 2;
  // multiplication-by-u matrix over Z_p in the basis w^i pi^j
  std::vector<Vec> M(n, Vec(n));
  for (int col = 0; col < n; ++col) {
    Vec b(n);
    b[col] = 1;
    Vec prod = vmul(F, c_, b, K);
    for (int row = 0; row < n; ++row) M[row][col] = prod[row];
  }
  long vdet = 0;
  const Z& mod = F.pw(K);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    long best = LONG_MAX;
    for (int r = c; r < n; ++r) {
      if (M[r][c] == 0) continue;
      long v = vp_z(M[r][c], F.P, F.p);
      if (v < best) { best = v; piv = r; }
    }
    if (piv < 0) return Q(abs_);  // singular at this precision
    std::swap(M[piv], M[c]);
    vdet += best;
    Z pu;
    mpz_divexact(pu.get_mpz_t(), M[c][c].get_mpz_t(), F.pw(best).get_mpz_t());
    Z inv;
    mpz_invert(inv.get_mpz_t(), pu.get_mpz_t(), mod.get_mpz_t());
    for (int r = c + 1; r < n; ++r) {
      if (M[r][c] == 0) continue;
      Z q;
      mpz_divexact(q.get_mpz_t(), M[r][c].get_mpz_t(), F.pw(best).get_mpz_t());
      q = q * inv;
      mpz_fdiv_r(q.get_mpz_t(), q.get_mpz_t(), mod.get_mpz_t());
      for (int k = c; k < n; ++k) {
        mpz_submul(M[r][k].get_mpz_t(), q.get_mpz_t(), M[c][k].get_mpz_t());
        mpz_fdiv_r(M[r][k].get_mpz_t(), M[r][k].get_mpz_t(), mod.get_mpz_t());
      }
    }
  }
  Q v(s_ * n + vdet, n);
  v.canonicalize();
  return v;
}

PadicNumber arith(const PadicNumber& a, const PadicNumber& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div: return a / b;
  }
  return a;
}

std::vector<PadicNumber> residue_representatives(const FieldPtr& F) {
  long q = F->A().get_si();
  std::vector<PadicNumber> out;
  out.reserve(q);
  for (long idx = 0; idx < q; ++idx) {
    std::vector<Z> c(F->n);
    long t = idx;
    bool any = false;
    for (int i = 0; i < F->f; ++i) {
      c[i] = t % F->p;
      if (t % F->p) any = true;
      t /= F->p;
    }
    if (!any) out.push_back(PadicNumber::zero(F));
    else out.push_back(PadicNumber::from_coeffs(F, 0, std::move(c), F->prec));
  }
  return out;
}

PadicNumber poly_eval(const Poly& P, const PadicNumber& z) {
  if (P.empty()) return PadicNumber::zero(z.field());
  PadicNumber acc = P.back();
  for (size_t k = P.size() - 1; k-- > 0;) acc = acc * z + P[k];
  return acc;
}

Poly poly_derivative(const Poly& P) {
  Poly d;
  for (size_t k = 1; k < P.size(); ++k)
    d.push_back(P[k] * PadicNumber::from_int(P[k].field(), static_cast<long>(k)));
  if (d.empty() && !P.empty()) d.push_back(PadicNumber::zero(P[0].field()));
  return d;
}

Poly poly_from_rationals(const FieldPtr& F, const std::vector<Q>& c) {
  Poly P;
  for (auto& q : c) P.push_back(PadicNumber::from_rational(F, q));
  return P;
}

PadicNumber hensel_lift(const Poly& P, const PadicNumber& residue_root) {
  Poly D = poly_derivative(P);
  PadicNumber z = residue_root;
  PadicNumber v = poly_eval(P, z), d = poly_eval(D, z);
  if (!v.is_zero()) {
    if (d.is_zero() || !(v.abs_val() < d.abs_val() * d.abs_val()))
      throw Error(ErrorKind::HenselConditionFails, "|P(r)| >= |P'(r)|^2 at r = " + residue_root.str());
  }
  for (int it = 0; it < 256 && !v.is_zero(); ++it) {
    PadicNumber dz = v / d;
    z = z - dz;
    if (dz.is_zero()) break;
    v = poly_eval(P, z);
    d = poly_eval(D, z);
    if (d.is_zero()) break;
  }
  return z;
}

HaarMeasure haar_disk_measure(const Field& F, const Q& n) {
  if (n.get_den() != 1)
    throw Error(ErrorKind::RadiusNotInValueGroup, "radius exponent " + q_str(n) + " is not an integer power of |pi_L|");
  Z A = F.A();
  long k = n.get_num().get_si();
  Z Ak;
  mpz_pow_ui(Ak.get_mpz_t(), A.get_mpz_t(), static_cast<unsigned long>(k >= 0 ? k : -k));
  Q disk = k >= 0 ? Q(1, 1) / Q(Ak) : Q(Ak);
  Q sphere = disk * Q(A - 1) / Q(A);
  disk.canonicalize();
  sphere.canonicalize();
  return {disk, sphere};
}

}  // namespace padyn
