#include "padyn/disk.hpp"

#include <algorithm>

namespace padyn {

bool Disk::contains(const PadicNumber& z) const {
  PadicNumber d = z - center;
  if (d.is_zero()) return true;
  return closed ? d.valuation() >= t : d.valuation() > t;
}

Disk Disk::closed_in_L() const {
  const long e = center.field()->e;
  Q tl = closed ? q_ceil_to(t, e) : q_floor_to(t, e) + Q(1, e);
  tl.canonicalize();
  return {center, tl, true};
}

std::string Disk::str() const {
  return std::string(closed ? "Dbar(" : "D(") + center.str() + ", p^(" + q_str(-t) + "))";
}

namespace {

// a subset of b (radii as C_p disks)
bool inside(const Disk& a, const Disk& b) {
  bool radius_ok;
  if (a.closed && !b.closed) radius_ok = a.t > b.t;
  else radius_ok = a.t >= b.t;
  return radius_ok && b.contains(a.center);
}

long ceil_pi_units(const Q& t, long e) {
  Q x = q_ceil_to(t, e) * e;
  x.canonicalize();
  return x.get_num().get_si();
}

int deg_on(const Poly& P, const Disk& D) {
  return D.closed ? weierstrass_degree_q(P, D.center, D.t) : weierstrass_degree_open_q(P, D.center, D.t);
}

struct CoeffMax {
  Q value;
  int largest = 0;
  int smallest = 0;
  bool any = false;
};

// max_k |c_k| p^(-t k) over k >= 1, expressed as the minimal valuation
CoeffMax coeff_max(const std::vector<PadicNumber>& c, const Q& t, int kmax) {
  CoeffMax m;
  for (int k = 1; k <= kmax && k < static_cast<int>(c.size()); ++k) {
    if (c[k].is_zero()) continue;
    Q v = c[k].valuation() + t * k;
    if (!m.any || v < m.value) {
      m.value = v;
      m.largest = m.smallest = k;
      m.any = true;
    } else if (v == m.value) {
      m.largest = k;
    }
  }
  return m;
}

constexpr int kSupDepthCap = 16;

// sup over z in c0 + pi^n O_L of |phi(z) - phi(c0)|, as a valuation in pi-units
long l_sup_valuation(const RationalMap& phi, const PadicNumber& c0, long n, int depth,
                     const std::vector<PadicNumber>& reps) {
  const FieldPtr& F = phi.field();
  const int d = phi.degree();
  auto c = phi.taylor(c0, d);
  std::vector<PadicNumber> g(d + 1, PadicNumber::zero(F));
  long M = PadicNumber::kExact;
  for (int k = 1; k <= d; ++k) {
    g[k] = c[k].mul_pi_pow(n * k);
    if (!g[k].is_zero()) M = std::min(M, g[k].vpi());
  }
  if (M == PadicNumber::kExact) return M;
  for (size_t ri = 1; ri < reps.size(); ++ri) {
    PadicNumber s = PadicNumber::zero(F), rp = PadicNumber::from_int(F, 1);
    for (int k = 1; k <= d; ++k) {
      rp = rp * reps[ri];
      s = s + g[k] * rp;
    }
    if (!s.is_zero() && s.vpi() == M) return M;
  }
  if (depth >= kSupDepthCap) return M;
  PadicNumber fc = phi.eval_finite(c0);
  long best = PadicNumber::kExact;
  for (size_t ri = 0; ri < reps.size(); ++ri) {
    PadicNumber cr = ri == 0 ? c0 : c0 + reps[ri].mul_pi_pow(n);
    long inner = l_sup_valuation(phi, cr, n + 1, depth + 1, reps);
    if (ri > 0) {
      PadicNumber diff = phi.eval_finite(cr) - fc;
      if (!diff.is_zero()) inner = std::min(inner, diff.vpi());
    }
    best = std::min(best, inner);
  }
  return best;
}

}  // namespace

DiskRelation disk_relation(const Disk& a, const Disk& b) {
  bool ab = inside(a, b), ba = inside(b, a);
  if (ab && ba) return DiskRelation::Equal;
  if (ab) return DiskRelation::FirstInsideSecond;
  if (ba) return DiskRelation::SecondInsideFirst;
  return DiskRelation::Disjoint;
}

DiskImage disk_image(const RationalMap& phi, const Disk& D) {
  if (deg_on(phi.den(), D) > 0) throw Error(ErrorKind::PoleInDisk, "pole inside " + D.str());
  const FieldPtr& F = phi.field();
  const int d = phi.degree();
  auto c = phi.taylor(D.center, d);
  DiskImage out;
  CoeffMax m = coeff_max(c, D.t, d);
  out.degree = m.any ? m.largest : 0;
  Disk DL = D.closed_in_L();
  long n = ceil_pi_units(DL.t, F->e);
  long sup = l_sup_valuation(phi, D.center, n, 0, residue_representatives(F));
  if (!m.any || sup >= PadicNumber::kExact) {
    out.cp_t = Q(PadicNumber::kExact);
    out.image = {c[0], Q(PadicNumber::kExact), true};
    return out;
  }
  out.cp_t = m.value;
  out.image = {c[0], Q(sup, F->e), true};
  if (!D.closed) out.image = {c[0], Q(sup - 1, F->e), false};  // same L-points, stated as an open disk
  out.image.t.canonicalize();
  return out;
}

DiskImage disk_image_cp(const RationalMap& phi, const Disk& D) {
  if (deg_on(phi.den(), D) > 0) throw Error(ErrorKind::PoleInDisk, "pole inside " + D.str());
  auto c = phi.taylor(D.center, phi.degree());
  CoeffMax m = coeff_max(c, D.t, phi.degree());
  DiskImage out;
  out.degree = m.any ? m.largest : 0;
  out.cp_t = m.any ? m.value : Q(PadicNumber::kExact);
  out.image = {c[0], out.cp_t, D.closed};
  return out;
}

InjectivityResult injectivity_check(const RationalMap& phi, const Disk& D1) {
  const long p = phi.field()->p;
  Disk D2 = D1;
  D2.t = D1.t - Q(1, p - 1);
  D2.t.canonicalize();
  InjectivityResult r;
  if (deg_on(phi.wronskian(), D2) == 0 && deg_on(phi.den(), D2) == 0) {
    r.injective = true;
    r.witness = D2;
  }
  return r;
}

PPow derivative_via_diam(const RationalMap& phi, const Disk& D, const PadicNumber& x) {
  if (!D.contains(x)) throw Error(ErrorKind::InvalidArgument, "point outside the disk");
  if (!injectivity_check(phi, D).injective)
    throw Error(ErrorKind::NotCertifiedInjective, "no injectivity witness for " + D.str());
  DiskImage im = disk_image(phi, D);
  return PPow::of(D.t - im.cp_t);
}

AnnulusImage annulus_image(const RationalMap& phi, const Annulus& A) {
  if (!(A.t_outer < A.t_inner)) throw Error(ErrorKind::InvalidArgument, "annulus radii out of order");
  if (weierstrass_degree_open_q(phi.den(), A.center, A.t_outer) > 0)
    throw Error(ErrorKind::PoleInAnnulus, "pole inside the outer disk of the annulus");
  const int d = phi.degree();
  auto c = phi.taylor(A.center, d);
  CoeffMax in = coeff_max(c, A.t_inner, d);
  CoeffMax out = coeff_max(c, A.t_outer, d);
  if (!in.any || in.largest != out.smallest)
    throw Error(ErrorKind::UnequalWeierstrassDegrees,
                "inner degree " + std::to_string(in.largest) + ", outer degree " + std::to_string(out.smallest));
  const int m = in.largest;
  AnnulusImage r;
  r.degree = m;
  Q v = c[m].valuation();
  r.image = {c[0], v + A.t_inner * m, v + A.t_outer * m};
  r.image.t_inner.canonicalize();
  r.image.t_outer.canonicalize();
  return r;
}

PPow derivative_lower_bound(const RationalMap& phi, const Disk& D, const PadicNumber& x) {
  if (!D.contains(x)) throw Error(ErrorKind::InvalidArgument, "point outside the disk");
  if (deg_on(phi.wronskian(), D) > 0) throw Error(ErrorKind::CriticalPointInDisk, "critical point in " + D.str());
  DiskImage im = disk_image(phi, D);
  const long p = phi.field()->p;
  Q ex = D.t - im.cp_t - Q(im.degree - 1, p - 1);
  ex.canonicalize();
  return PPow::of(ex);
}

}  // namespace padyn
