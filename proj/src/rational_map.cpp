#include "padyn/rational_map.hpp"

#include <algorithm>
#include <sstream>

namespace padyn {

namespace {

// determinant by p-adic Gaussian elimination with minimal-valuation pivots
PadicNumber det(std::vector<std::vector<PadicNumber>> M, const FieldPtr& F) {
  const size_t n = M.size();
  PadicNumber acc = PadicNumber::from_int(F, 1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = n;
    for (size_t r = c; r < n; ++r) {
      if (M[r][c].is_zero()) continue;
      if (piv == n || M[r][c].vpi() < M[piv][c].vpi()) piv = r;
    }
    if (piv == n) return PadicNumber::zero_at(F, 0);
    if (piv != c) {
      std::swap(M[piv], M[c]);
      acc = -acc;
    }
    acc = acc * M[c][c];
    PadicNumber inv = M[c][c].inverse();
    for (size_t r = c + 1; r < n; ++r) {
      if (M[r][c].is_zero()) continue;
      PadicNumber q = M[r][c] * inv;
      for (size_t k = c; k < n; ++k) M[r][k] = M[r][k] - q * M[c][k];
    }
  }
  return acc;
}

PadicNumber resultant(const Poly& a, const Poly& b, const FieldPtr& F) {
  const int m = poly_degree(a), n = poly_degree(b);
  const int N = m + n;
  std::vector<std::vector<PadicNumber>> S(N, std::vector<PadicNumber>(N, PadicNumber::zero(F)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) S[r][r + m - k] = a[k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) S[n + r][r + n - k] = b[k];
  return det(S, F);
}

Poly reversed(const Poly& P, int d, const FieldPtr& F) {
  Poly r(d + 1, PadicNumber::zero(F));
  for (int k = 0; k < static_cast<int>(P.size()) && k <= d; ++k) r[d - k] = P[k];
  return r;
}

Poly wronskian_of(const Poly& N, const Poly& D) {
  return poly_trim(poly_sub(poly_mul(poly_derivative(N), D), poly_mul(N, poly_derivative(D))));
}

struct Chart {
  Poly N, D;
  PadicNumber u;
};

Chart chart_at(const RationalMap& phi, const Point& z) {
  const FieldPtr& F = phi.field();
  Chart c;
  if (z.inf) {
    c.N = reversed(phi.num(), phi.degree(), F);
    c.D = reversed(phi.den(), phi.degree(), F);
    c.u = PadicNumber::zero(F);
  } else {
    c.N = phi.num();
    c.D = phi.den();
    c.u = z.z;
  }
  if (phi.eval(z).inf) std::swap(c.N, c.D);
  return c;
}

int leading_zeros(const Poly& T) {
  int k = 0;
  while (k < static_cast<int>(T.size()) && T[k].is_zero()) ++k;
  return k;
}

std::string poly_str(const Poly& P) {
  std::ostringstream os;
  bool first = true;
  for (int k = static_cast<int>(P.size()) - 1; k >= 0; --k) {
    if (P[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << P[k].str();
    if (k > 0) os << "*z" << (k > 1 ? "^" + std::to_string(k) : "");
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace

RationalMap::RationalMap(FieldPtr F, Poly num, Poly den) : F_(std::move(F)) {
  num_ = poly_trim(std::move(num));
  den_ = poly_trim(std::move(den));
  if (den_.empty()) throw Error(ErrorKind::InvalidArgument, "denominator is zero");
  if (num_.empty()) num_.push_back(PadicNumber::zero(F_));
  for (auto& c : num_)
    if (c.field() != F_) throw Error(ErrorKind::FieldMismatch, "numerator coefficient from another field");
  for (auto& c : den_)
    if (c.field() != F_) throw Error(ErrorKind::FieldMismatch, "denominator coefficient from another field");
  dn_ = std::max(poly_degree(num_), 0);
  dd_ = poly_degree(den_);
  d_ = std::max(dn_, dd_);
  if (dd_ > 0 && poly_degree(num_) > 0 && resultant(num_, den_, F_).is_zero())
    throw Error(ErrorKind::InvalidArgument, "numerator and denominator share a root at working precision");
  W_ = wronskian_of(num_, den_);
}

RationalMap RationalMap::from_rationals(const FieldPtr& F, const std::vector<Q>& num, const std::vector<Q>& den) {
  return RationalMap(F, poly_from_rationals(F, num), poly_from_rationals(F, den));
}

Point RationalMap::eval(const Point& z) const {
  if (z.inf) {
    if (dn_ > dd_) return Point::infinity();
    if (dn_ < dd_) return Point::at(PadicNumber::zero(F_));
    return Point::at(num_[dn_] / den_[dd_]);
  }
  PadicNumber a = poly_eval(num_, z.z), b = poly_eval(den_, z.z);
  if (b.is_zero()) {
    if (a.is_zero())
      throw Error(ErrorKind::IndeterminateAtPrecision, "0/0 at z = " + z.z.str());
    return Point::infinity();
  }
  return Point::at(a / b);
}

PadicNumber RationalMap::eval_finite(const PadicNumber& z) const {
  Point w = eval(Point::at(z));
  if (w.inf) throw Error(ErrorKind::PoleAtPoint, "pole at z = " + z.str());
  return w.z;
}

PadicNumber RationalMap::derivative(const PadicNumber& z) const {
  PadicNumber b = poly_eval(den_, z);
  if (b.is_zero()) throw Error(ErrorKind::PoleAtPoint, "pole at z = " + z.str());
  return poly_eval(W_, z) / (b * b);
}

PPow RationalMap::deriv_abs(const PadicNumber& z) const {
  PadicNumber b = poly_eval(den_, z);
  if (b.is_zero()) throw Error(ErrorKind::PoleAtPoint, "pole at z = " + z.str());
  PadicNumber w = poly_eval(W_, z);
  if (w.is_zero()) return PPow::zero();
  return w.abs_val() / (b.abs_val() * b.abs_val());
}

PPow RationalMap::chart_deriv_abs(const Point& z) const {
  Chart c = chart_at(*this, z);
  PadicNumber b = poly_eval(c.D, c.u);
  PadicNumber w = poly_eval(wronskian_of(c.N, c.D), c.u);
  if (w.is_zero()) return PPow::zero();
  return w.abs_val() / (b.abs_val() * b.abs_val());
}

std::vector<PadicNumber> RationalMap::taylor(const PadicNumber& center, int order) const {
  Poly A = taylor_shift(num_, center), B = taylor_shift(den_, center);
  if (B[0].is_zero()) throw Error(ErrorKind::PoleAtCenter, "pole at center " + center.str());
  PadicNumber inv = B[0].inverse();
  std::vector<PadicNumber> C;
  for (int k = 0; k <= order; ++k) {
    PadicNumber acc = k < static_cast<int>(A.size()) ? A[k] : PadicNumber::zero(F_);
    for (int j = 1; j <= k && j < static_cast<int>(B.size()); ++j) acc = acc - B[j] * C[k - j];
    C.push_back(acc * inv);
  }
  return C;
}

RationalMap RationalMap::compose(const RationalMap& inner) const {
  const Poly& N = inner.num_;
  const Poly& D = inner.den_;
  std::vector<Poly> Np{{PadicNumber::from_int(F_, 1)}}, Dp{{PadicNumber::from_int(F_, 1)}};
  for (int k = 1; k <= d_; ++k) {
    Np.push_back(poly_mul(Np.back(), N));
    Dp.push_back(poly_mul(Dp.back(), D));
  }
  Poly rn, rd;
  for (int k = 0; k <= d_; ++k) {
    Poly term = poly_mul(Np[k], Dp[d_ - k]);
    if (k < static_cast<int>(num_.size()) && !num_[k].is_exact_zero()) rn = poly_add(rn, poly_scale(term, num_[k]));
    if (k < static_cast<int>(den_.size()) && !den_[k].is_exact_zero()) rd = poly_add(rd, poly_scale(term, den_[k]));
  }
  return RationalMap(F_, rn, rd);
}

RationalMap RationalMap::iterate(int m) const {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "iterate count must be >= 1");
  RationalMap r = *this;
  for (int i = 1; i < m; ++i) r = compose(r);
  return r;
}

std::string RationalMap::str() const { return "(" + poly_str(num_) + ")/(" + poly_str(den_) + ")"; }

std::vector<Preimage> preimages(const RationalMap& phi, const Point& w, int depth_cap) {
  std::vector<Preimage> out;
  const FieldPtr& F = phi.field();
  Poly P;
  int inf_mult = 0;
  if (w.inf) {
    P = phi.den();
    inf_mult = phi.deg_num() - phi.deg_den();
  } else {
    if (w.z.field() != F) throw Error(ErrorKind::FieldMismatch, "target point from another field");
    P = poly_trim(poly_sub(phi.num(), poly_scale(phi.den(), w.z)));
    if (P.empty()) throw Error(ErrorKind::IndeterminateAtPrecision, "map is constant at precision");
    inf_mult = phi.degree() - poly_degree(P);
  }
  for (auto& r : poly_roots(P, depth_cap)) out.push_back({Point::at(r.z), r.multiplicity});
  if (inf_mult > 0) out.push_back({Point::infinity(), inf_mult});
  (void)F;
  return out;
}

int local_degree(const RationalMap& phi, const Point& z) {
  Chart c = chart_at(phi, z);
  Poly W = wronskian_of(c.N, c.D);
  return 1 + leading_zeros(taylor_shift(W, c.u));
}

CriticalData critical_points(const RationalMap& phi, int depth_cap) {
  CriticalData cd;
  cd.expected = 2 * phi.degree() - 2;
  const Poly& W = phi.wronskian();
  for (auto& r : poly_roots(W, depth_cap)) {
    cd.points.push_back({Point::at(r.z), r.multiplicity + 1});
    cd.found += r.multiplicity;
  }
  int at_inf = cd.expected - std::max(poly_degree(W), 0);
  if (at_inf > 0) {
    cd.points.push_back({Point::infinity(), at_inf + 1});
    cd.found += at_inf;
  }
  cd.outside_L = cd.expected - cd.found;
  return cd;
}

std::optional<Q> escape_radius(const RationalMap& phi) {
  const int dn = phi.deg_num(), dd = phi.deg_den();
  if (dn <= dd) return std::nullopt;
  const Poly& N = phi.num();
  const Poly& D = phi.den();
  Q va = N[dn].valuation(), vb = D[dd].valuation();
  Q R = 0;
  for (int k = 0; k < dn; ++k)
    if (!N[k].is_zero()) R = std::max(R, Q((va - N[k].valuation()) / (dn - k)));
  for (int k = 0; k < dd; ++k)
    if (!D[k].is_zero()) R = std::max(R, Q((vb - D[k].valuation()) / (dd - k)));
  if (dn - dd - 1 > 0) {
    R = std::max(R, Q((va - vb) / (dn - dd - 1)));
  } else if (!(va < vb)) {
    return std::nullopt;
  }
  R.canonicalize();
  return R;
}

bool certified_escaping(const RationalMap& phi, const Point& z) {
  auto R = escape_radius(phi);
  if (!R) return false;
  if (z.inf) return true;
  if (z.z.is_zero()) return false;
  return -z.z.valuation() > *R;
}

PPow cycle_multiplier(const RationalMap& phi, const std::vector<Point>& cycle) {
  PPow m = PPow::one();
  for (auto& z : cycle) m = m * phi.chart_deriv_abs(z);
  return m;
}

long orbit_precision_floor(const Field& F) { return std::max(4L, F.prec / 4); }

PostcriticalData postcritical_set(const RationalMap& phi, int max_steps, bool throw_unresolved) {
  if (max_steps < 1) throw Error(ErrorKind::InvalidArgument, "max_steps must be >= 1");
  PostcriticalData pd;
  pd.crit = critical_points(phi);
  for (auto& cp : pd.crit.points) {
    CriticalOrbit co;
    co.c = cp.z;
    co.local_degree = cp.local_degree;
    Point z = cp.z;
    const long floor = orbit_precision_floor(*phi.field());
    for (int step = 0; step < max_steps && !co.resolved(); ++step) {
      z = phi.eval(z);
      co.orbit.push_back(z);
      if (!z.precise(floor)) break;
      const int i = static_cast<int>(co.orbit.size()) - 1;
      for (int j = 0; j < i; ++j) {
        if (co.orbit[j].same_certain(z, floor)) {
          co.preperiod = j;
          co.period = i - j;
          std::vector<Point> cyc(co.orbit.begin() + j, co.orbit.begin() + i);
          co.multiplier_abs = cycle_multiplier(phi, cyc);
          break;
        }
      }
      if (!co.period && certified_escaping(phi, z)) co.escaping = true;
    }
    if (!co.resolved() && throw_unresolved)
      throw Error(ErrorKind::OrbitUnresolved, "critical orbit of " + cp.z.str() + " unresolved after " +
                                                  std::to_string(max_steps) + " steps");
    pd.orbits.push_back(std::move(co));
  }
  return pd;
}

}  // namespace padyn
