#include "padyn/metric.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace padyn {

namespace {

long vp(long k, long p) {
  long v = 0;
  while (k % p == 0) {
    k /= p;
    ++v;
  }
  return v;
}

PPow abs_int(long k, long p) { return PPow::of(Q(-vp(k, p))); }

// smallest k with p^k >= 4, so p^-k <= 1/4
long quarter_exponent(long p) { return p == 2 ? 2 : (p == 3 ? 2 : 1); }

int taylor_order(const RationalMap& phi) { return phi.is_polynomial() ? phi.degree() : 3 * phi.degree() + 2; }

// |phi(z) - phi(x)| = |c_deg| |z - x|^deg and |phi'(z)| = |deg c_deg| |z - x|^(deg-1) on Dbar(x, p^-t)
bool monomial_on(const RationalMap& phi, const PadicNumber& x, int deg, const Q& t) {
  if (!phi.is_polynomial() && weierstrass_degree_q(phi.den(), x, t) > 0) return false;
  const long p = phi.field()->p;
  const int K = taylor_order(phi);
  auto c = phi.taylor(x, std::max(K, deg));
  if (c[deg].is_zero()) return false;
  const Q vd = c[deg].valuation() + t * deg;
  const Q vdd = c[deg].valuation() + vp(deg, p) + t * (deg - 1);
  for (int k = 1; k < static_cast<int>(c.size()); ++k) {
    if (k == deg || c[k].is_zero()) continue;
    if (k < deg) return false;
    if (!(c[k].valuation() + t * k > vd)) return false;
    if (!(c[k].valuation() + vp(k, p) + t * (k - 1) > vdd)) return false;
  }
  return true;
}

PPow leading_abs(const RationalMap& phi, const PadicNumber& x, int deg) {
  auto c = phi.taylor(x, deg);
  return c[deg].abs_val();
}

int node_index(const IndexAssignment& A, const PadicNumber& z) {
  for (size_t j = 0; j < A.nodes.size(); ++j)
    if ((z - A.nodes[j].z).is_zero()) return static_cast<int>(j);
  return -1;
}

int crit_index(const IndexAssignment& A, const PadicNumber& z) {
  for (size_t j = 0; j < A.crit.size(); ++j)
    if ((z - A.crit[j].z).is_zero()) return static_cast<int>(j);
  return -1;
}

// D_theta value on the critical disk at radius p^-t
PPow crit_value(const IndexAssignment& A, const CritDisk& c, const Q& t) {
  const IndexEntry& img = A.nodes[c.image];
  Q x = img.beta.x + c.a_abs.x + abs_int(c.deg, A.p).x - t * (c.deg - 1) - img.xi * (c.a_abs.x - t * c.deg);
  return PPow::of(x);
}

PPow node_limit(const IndexAssignment& A, int j) {
  const IndexEntry& n = A.nodes[j];
  if (n.spec.fixed) return n.spec.a_abs.pow(1 - n.xi);
  const IndexEntry& nx = A.nodes[n.spec.next];
  return nx.beta * n.spec.a_abs.pow(1 - nx.xi) * abs_int(n.spec.deg, A.p) / n.beta;
}

}  // namespace

bool ppow_greater(const PPow& a, const Q& r, long p) {
  if (a.is_inf()) return true;
  if (a.is_zero()) return false;
  if (r <= 0) return true;
  const Z& u = a.x.get_num();
  const unsigned long v = a.x.get_den().get_ui();
  Z lhs = r.get_den(), rhs = r.get_num(), pp;
  mpz_pow_ui(lhs.get_mpz_t(), lhs.get_mpz_t(), v);
  mpz_pow_ui(rhs.get_mpz_t(), rhs.get_mpz_t(), v);
  mpz_ui_pow_ui(pp.get_mpz_t(), static_cast<unsigned long>(p), Z(abs(u)).get_ui());
  if (u >= 0) lhs *= pp;
  else rhs *= pp;
  return lhs > rhs;
}

IndexAssignment solve_indices(const std::vector<NodeSpec>& specs, long p, int e, const Q& anchor_t) {
  IndexAssignment A;
  A.p = p;
  A.e = e;
  const int n = static_cast<int>(specs.size());
  A.nodes.resize(n);
  std::vector<int> state(n, 0);
  const long k4 = quarter_exponent(p);
  std::function<void(int)> solve = [&](int j) {
    if (state[j] == 2) return;
    if (state[j] == 1) throw Error(ErrorKind::InvalidArgument, "orbit structure has a cycle without a fixed anchor");
    state[j] = 1;
    IndexEntry& E = A.nodes[j];
    E.spec = specs[j];
    if (!E.spec.a_abs.finite()) throw Error(ErrorKind::InvalidArgument, "node multiplier must be finite and nonzero");
    if (E.spec.fixed) {
      E.xi = 1 - Q(1, 2 * E.spec.alpha);
      E.eps_t = anchor_t;
      E.beta = PPow::of(-anchor_t - 1);
    } else {
      const int nx = E.spec.next;
      if (nx < 0 || nx >= n) throw Error(ErrorKind::InvalidArgument, "node successor out of range");
      solve(nx);
      const IndexEntry& N = A.nodes[nx];
      E.xi = 1 - E.spec.deg * (1 - N.xi);
      E.eps_t = (N.eps_t + E.spec.a_abs.x) / E.spec.deg;
      E.beta = N.beta * E.spec.a_abs.pow(1 - N.xi) * abs_int(E.spec.deg, p) * PPow::of(Q(-k4));
    }
    E.xi.canonicalize();
    E.eps_t.canonicalize();
    E.u_t = E.eps_t;
    if (E.xi > 0) {
      Q ut = -E.beta.x / E.xi;
      ut.canonicalize();
      if (ut > E.u_t) E.u_t = ut;
    }
    state[j] = 2;
  };
  for (int j = 0; j < n; ++j) solve(j);
  return A;
}

std::vector<std::string> check_inequalities(const IndexAssignment& A) {
  std::vector<std::string> bad;
  auto fail = [&](size_t j, const std::string& what) { bad.push_back("node " + std::to_string(j) + ": " + what); };
  for (size_t j = 0; j < A.nodes.size(); ++j) {
    const IndexEntry& E = A.nodes[j];
    const Q one_minus = 1 - E.xi;
    const Q inv_alpha(1, E.spec.alpha);
    if (!(E.xi > 0 && E.xi < 1)) fail(j, "xi outside (0,1)");
    if (E.spec.fixed) {
      if (!(one_minus > 0 && one_minus < inv_alpha)) fail(j, "anchor bound 0 < 1-xi < 1/alpha");
      if (!(E.beta.x < -E.eps_t)) fail(j, "anchor beta < eps");
    } else {
      const IndexEntry& N = A.nodes[E.spec.next];
      if (one_minus != E.spec.deg * (1 - N.xi)) fail(j, "pullback 1-xi_j = deg (1-xi_{j+1})");
      if (!(one_minus > 0 && one_minus < inv_alpha)) fail(j, "degree bound 0 < 1-xi < 1/alpha");
      PPow ratio = N.beta * E.spec.a_abs.pow(1 - N.xi) * abs_int(E.spec.deg, A.p) / E.beta;
      if (!ppow_greater(ratio, 2, A.p)) fail(j, "beta recursion beta_j < beta_{j+1}|a_j|^(1-xi_{j+1})|deg|/2");
    }
    if (E.beta.x + E.xi * E.u_t < 0) fail(j, "normalization beta/u^xi >= 1");
    if (E.u_t < E.eps_t) fail(j, "theta disk larger than the Step-1 disk");
  }
  return bad;
}

std::vector<RegionCheck> region_certificates(const IndexAssignment& A) {
  std::vector<RegionCheck> out;
  for (size_t j = 0; j < A.nodes.size(); ++j) {
    const IndexEntry& E = A.nodes[j];
    const int idx = static_cast<int>(j);
    if (E.spec.fixed) {
      const Q om = 1 - E.xi;
      PPow r1 = E.spec.a_abs.pow(om);
      out.push_back({"R1", idx, r1, 1, ppow_greater(r1, 1, A.p)});
      PPow r0 = PPow::of(E.spec.a_abs.x * om + E.eps_t * om);
      out.push_back({"R0", idx, r0, 1, ppow_greater(r0, 1, A.p)});
      // outer shell of the theta disk: |z - z_l| > u/|a|
      PPow r0u = PPow::of(E.spec.a_abs.x * om - E.xi * E.u_t - E.beta.x);
      out.push_back({"R0u", idx, r0u, 1, ppow_greater(r0u, 1, A.p)});
    } else {
      PPow v = node_limit(A, idx);
      out.push_back({"j", idx, v, 2, ppow_greater(v, 2, A.p)});
    }
  }
  for (size_t c = 0; c < A.crit.size(); ++c) {
    PPow v = crit_value(A, A.crit[c], A.crit[c].t);
    out.push_back({"crit", static_cast<int>(c), v, 1, ppow_greater(v, 1, A.p)});
  }
  return out;
}

ThetaWeight make_theta(const RationalMap& phi, const SubhyperbolicityReport& rep, int budget) {
  ThetaWeight th;
  th.base = phi;
  th.map = phi;
  const FieldPtr& F = phi.field();
  th.A.p = F->p;
  th.A.e = F->e;
  if (rep.julia_critical.empty()) return th;

  long m = 1;
  for (int i : rep.julia_critical) {
    const CriticalOrbit& o = rep.post.orbits[i];
    if (!o.period || !(o.multiplier_abs > PPow::one()))
      throw Error(ErrorKind::NonRepellingLandingCycle, "critical orbit of " + o.c.str() + " does not land on a repelling cycle");
    m = std::lcm(m, static_cast<long>(*o.period));
  }
  SubhyperbolicityReport r2 = rep;
  if (m > 1) {
    th.map = phi.iterate(static_cast<int>(m));
    th.m = static_cast<int>(m);
    r2 = is_subhyperbolic(th.map, budget);
    if (r2.verdict != SubhypVerdict::Subhyperbolic)
      throw Error(ErrorKind::NonRepellingLandingCycle, "iterate phi^" + std::to_string(m) + " is not resolved");
  }
  const RationalMap& psi = th.map;
  const PostcriticalData& pd = r2.post;
  // Fatou-certified orbits never reach a node; alpha only needs the rest
  PostcriticalData pj = pd;
  pj.orbits.clear();
  for (auto& o : pd.orbits)
    if (o.resolved()) pj.orbits.push_back(o);

  std::vector<PadicNumber> zs;
  std::vector<NodeSpec> specs;
  auto node_of = [&](const Point& z) {
    if (z.inf) throw Error(ErrorKind::NonRepellingLandingCycle, "critical orbit meets infinity");
    for (size_t i = 0; i < zs.size(); ++i)
      if (zs[i].equals(z.z)) return static_cast<int>(i);
    zs.push_back(z.z);
    specs.push_back({});
    return static_cast<int>(zs.size()) - 1;
  };
  for (int i : r2.julia_critical) {
    const CriticalOrbit& o = pd.orbits[i];
    if (*o.period != 1) throw Error(ErrorKind::NonRepellingLandingCycle, "landing cycle not fixed by the iterate");
    const int pre = *o.preperiod;
    std::vector<int> idx;
    for (int k = 0; k <= pre; ++k) idx.push_back(node_of(o.orbit[k]));
    specs[idx[pre]].fixed = true;
    for (int k = 0; k < pre; ++k) specs[idx[k]].next = idx[k + 1];
  }
  for (size_t j = 0; j < zs.size(); ++j) {
    NodeSpec& s = specs[j];
    s.deg = local_degree(psi, Point::at(zs[j]));
    s.a_abs = s.deg == 1 ? psi.deriv_abs(zs[j]) : leading_abs(psi, zs[j], s.deg);
    s.alpha = alpha(psi, Point::at(zs[j]), pj);
    if (s.fixed && !(s.a_abs > PPow::one()))
      throw Error(ErrorKind::NonRepellingLandingCycle, "fixed point " + zs[j].str() + " is not repelling");
  }
  std::vector<CritDisk> crit;
  for (int i : r2.julia_critical) {
    const CriticalOrbit& o = pd.orbits[i];
    bool is_node = false;
    for (auto& z : zs)
      if (z.equals(o.c.z)) is_node = true;
    if (is_node) continue;
    crit.push_back({o.c.z, o.local_degree, leading_abs(psi, o.c.z, o.local_degree), node_of(o.orbit[0]), 0});
  }
  std::vector<PadicNumber> obstacles;
  auto add_obstacle = [&](const Point& z) {
    if (z.inf) return;
    for (auto& n : zs)
      if (n.equals(z.z)) return;
    for (auto& o : obstacles)
      if (o.equals(z.z)) return;
    obstacles.push_back(z.z);
  };
  for (auto& c : pd.crit.points) add_obstacle(c.z);
  for (auto& o : pd.orbits)
    for (auto& z : o.orbit) add_obstacle(z);

  const long e = F->e;
  std::string blocking = "no admissible radius";
  for (long s = 1; s <= 64 * e; ++s) {
    IndexAssignment A = solve_indices(specs, F->p, F->e, Q(s, e));
    for (size_t j = 0; j < zs.size(); ++j) A.nodes[j].z = zs[j];
    bool ok = true;
    std::vector<Disk> step1;
    for (size_t j = 0; j < zs.size() && ok; ++j) {
      const IndexEntry& E = A.nodes[j];
      if (!monomial_on(psi, E.z, E.spec.deg, E.eps_t)) {
        ok = false;
        blocking = "no monomial behavior at " + E.z.str();
        break;
      }
      Q t = E.spec.fixed ? E.eps_t - E.spec.a_abs.x : E.eps_t;
      t.canonicalize();
      step1.push_back({E.z, t, true});
    }
    for (size_t a = 0; a < step1.size() && ok; ++a) {
      for (size_t b = a + 1; b < step1.size() && ok; ++b)
        if (disk_relation(step1[a], step1[b]) != DiskRelation::Disjoint) {
          ok = false;
          blocking = "disks at " + zs[a].str() + " and " + zs[b].str() + " overlap";
        }
      for (auto& o : obstacles)
        if (ok && step1[a].contains(o)) {
          ok = false;
          blocking = "postcritical point " + o.str() + " inside the disk at " + zs[a].str();
        }
    }
    if (!ok) continue;
    A.crit = crit;
    for (size_t c = 0; c < A.crit.size() && ok; ++c) {
      CritDisk& cd = A.crit[c];
      bool found = false;
      for (long k = 1; k <= 64 * e && !found; ++k) {
        Q t(k, e);
        t.canonicalize();
        Disk D{cd.z, t, true};
        bool good = monomial_on(psi, cd.z, cd.deg, t) && ppow_greater(crit_value(A, cd, t), 1, F->p);
        for (auto& E : A.nodes)
          if (good && disk_relation(D, Disk{E.z, E.u_t, true}) != DiskRelation::Disjoint) good = false;
        for (auto& o : obstacles)
          if (good && !o.equals(cd.z) && D.contains(o)) good = false;
        for (size_t c2 = 0; c2 < c && good; ++c2)
          if (disk_relation(D, Disk{A.crit[c2].z, A.crit[c2].t, true}) != DiskRelation::Disjoint) good = false;
        if (good) {
          cd.t = t;
          found = true;
        }
      }
      if (!found) {
        ok = false;
        blocking = "no expanding disk around critical point " + cd.z.str();
      }
    }
    if (ok) {
      th.A = A;
      return th;
    }
  }
  throw Error(ErrorKind::CannotSeparateDisks, blocking);
}

PPow theta_eval(const ThetaWeight& th, const Point& z) {
  if (z.inf) return PPow::one();
  for (auto& E : th.A.nodes) {
    PadicNumber d = z.z - E.z;
    if (d.is_zero()) return PPow::inf();
    Q v = d.valuation();
    if (v >= E.u_t) return PPow::of(E.beta.x + E.xi * v);
  }
  return PPow::one();
}

PPow theta_derivative(const ThetaWeight& th, const Point& z) {
  const RationalMap& psi = th.map;
  if (!z.inf) {
    int j = node_index(th.A, z.z);
    if (j >= 0) return node_limit(th.A, j);
    if (crit_index(th.A, z.z) >= 0) return PPow::inf();
  }
  Point w = psi.eval(z);
  PPow dv = psi.chart_deriv_abs(z);
  PPow tw = theta_eval(th, w);
  if (tw.is_inf()) return PPow::inf();
  if (dv.is_zero()) return PPow::zero();
  return tw * dv / theta_eval(th, z);
}

namespace {

// D_theta at z is determined by the digits z carries
bool decided_at(const ThetaWeight& th, const Point& z) {
  if (z.inf || z.z.abs_prec() >= PadicNumber::kExact) return true;
  if (z.z.abs_prec() < 1) return false;
  for (auto& E : th.A.nodes)
    if ((z.z - E.z).is_zero()) return false;
  for (auto& c : th.A.crit)
    if ((z.z - c.z).is_zero()) return false;
  return !th.map.chart_deriv_abs(z).is_zero();
}

}  // namespace

std::vector<PPow> theta_derivative_chain(const ThetaWeight& th, const Point& z, int n) {
  std::vector<PPow> out;
  Point cur = z;
  PPow acc = PPow::one();
  for (int k = 1; k <= n; ++k) {
    if (!decided_at(th, cur)) break;
    Point nx = th.map.eval(cur);
    if (!decided_at(th, nx)) break;
    PPow d = theta_derivative(th, cur);
    if (acc.finite() && !acc.is_zero()) acc = acc * d;
    else if (acc.finite() && d.is_inf()) acc = d;
    out.push_back(acc);
    cur = nx;
  }
  return out;
}

std::vector<Point> wbar_samples(const ThetaWeight& th, int per_disk) {
  std::vector<Point> out;
  const FieldPtr& F = th.map.field();
  auto reps = residue_representatives(F);
  const PadicNumber& unit = reps[1];
  auto ring = [&](const PadicNumber& c, const Q& t) {
    Q n0 = q_ceil_to(t, F->e) * F->e;
    n0.canonicalize();
    long k0 = n0.get_num().get_si();
    for (long k = k0; k < k0 + per_disk; ++k) out.push_back(Point::at(c + unit.mul_pi_pow(k)));
  };
  for (auto& E : th.A.nodes) ring(E.z, E.u_t);
  for (auto& c : th.A.crit) ring(c.z, c.t);
  return out;
}

LocalExpansionReport verify_local_expansion(const ThetaWeight& th, const std::vector<Point>& wbar,
                                            const std::vector<Point>& julia) {
  LocalExpansionReport r;
  r.C0 = PPow::inf();
  r.C0_hat = PPow::inf();
  for (auto& z : wbar) {
    PPow d = theta_derivative(th, z);
    if (!(d > PPow::one())) throw Error(ErrorKind::ExpansionViolated, "D_theta <= 1 at " + z.str());
    if (d < r.C0_hat) r.C0_hat = d;
    if (d < r.C0) r.C0 = d;
    ++r.checked;
  }
  for (auto& z : julia) {
    PPow d = theta_derivative(th, z);
    if (d < r.C0) r.C0 = d;
    ++r.checked;
  }
  return r;
}

IterationReport find_iteration_count(const ThetaWeight& th, const PPow& lambda, const std::vector<Point>& samples,
                                     int n_cap) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no samples");
  if (lambda < PPow::one()) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 1");
  IterationReport r;
  std::vector<std::vector<PPow>> chains;
  r.horizon = n_cap;
  for (auto& z : samples) {
    chains.push_back(theta_derivative_chain(th, z, n_cap));
    r.horizon = std::min(r.horizon, static_cast<int>(chains.back().size()));
  }
  if (r.horizon < 1) throw Error(ErrorKind::BudgetExceeded, "sample orbits lose precision immediately");
  r.C0 = PPow::inf();
  r.C1 = PPow::inf();
  r.n_max = 1;
  for (auto& ch : chains) {
    int nz = 0;
    for (int k = 0; k < r.horizon; ++k)
      if (ch[k] > PPow::one()) {
        nz = k + 1;
        break;
      }
    if (nz == 0) throw Error(ErrorKind::BudgetExceeded, "no expansion within " + std::to_string(r.horizon) + " steps");
    r.n_max = std::max(r.n_max, nz);
    if (ch[0] < r.C0) r.C0 = ch[0];
    if (ch[nz - 1] < r.C1) r.C1 = ch[nz - 1];
  }
  int N = r.n_max;
  for (; N <= r.horizon; N += r.n_max) {
    bool ok = true;
    for (auto& ch : chains)
      for (int n = N; n <= r.horizon && ok; ++n)
        if (!(ch[n - 1] > lambda)) ok = false;
    if (ok) break;
  }
  if (N > r.horizon)
    throw Error(ErrorKind::BudgetExceeded, "no N <= " + std::to_string(r.horizon) + " reaches lambda on every sample");
  r.N = N;
  if (r.C0.finite() && r.C1.finite() && r.C1.x > 0) {
    Q c0 = r.C0.x < 0 ? r.C0.x : Q(0);
    Q need = lambda.x - r.n_max * c0;
    Q k = need / r.C1.x;
    long kk = floor_div(k.get_num().get_si(), k.get_den().get_si()) + 1;
    r.N_bound = static_cast<int>(std::max(1L, kk) * r.n_max);
  }
  return r;
}

RhoMetric make_rho(const ThetaWeight& th, int N, const PPow& lambda) {
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "N must be >= 1");
  RhoMetric M;
  M.theta = th;
  M.N = N;
  M.lambda = lambda;
  std::vector<PadicNumber> level;
  auto add = [&](std::vector<PadicNumber>& v, const PadicNumber& z) {
    for (auto& w : v)
      if (w.equals(z)) return false;
    v.push_back(z);
    return true;
  };
  for (auto& E : th.A.nodes) add(level, E.z);
  for (auto& c : th.A.crit) add(level, c.z);
  for (auto& c : critical_points(th.base).points)
    if (!c.z.inf) add(level, c.z.z);
  M.special = level;
  for (int j = 1; j < N; ++j) {
    std::vector<PadicNumber> next;
    for (auto& s : level)
      for (auto& pre : preimages(th.base, Point::at(s)))
        if (!pre.z.inf && add(M.special, pre.z.z)) next.push_back(pre.z.z);
    level = next;
  }
  return M;
}

namespace {

struct RhoParts {
  bool special = false;
  PPow value;
};

RhoParts rho_parts(const RhoMetric& M, const Point& z) {
  if (z.inf) throw Error(ErrorKind::OutsideDomain, "rho is not defined at infinity");
  const RationalMap& phi = M.theta.base;
  std::vector<Point> pts{z};
  for (int j = 1; j < M.N; ++j) {
    pts.push_back(phi.eval(pts.back()));
    if (pts.back().inf) throw Error(ErrorKind::OutsideDomain, z.str() + " reaches infinity within N steps");
  }
  Q x = 0;
  RhoParts r;
  for (int j = 0; j < M.N; ++j) {
    PPow t = theta_eval(M.theta, pts[j]);
    if (t.is_inf()) r.special = true;
    else x += t.x / M.N;
    if (j <= M.N - 2) {
      PPow d = phi.deriv_abs(pts[j].z);
      if (d.is_zero()) r.special = true;
      else x += d.x * Q(M.N - 1 - j, M.N);
    }
  }
  x.canonicalize();
  r.value = PPow::of(x);
  return r;
}

bool constant_on(const RhoMetric& M, const Disk& D) {
  const RationalMap& phi = M.theta.base;
  Disk E = D;
  for (int j = 0; j < M.N; ++j) {
    for (auto& n : M.theta.A.nodes)
      if (E.contains(n.z)) return false;
    if (j <= M.N - 2) {
      if (weierstrass_degree_q(phi.wronskian(), E.center, E.t) > 0) return false;
      if (!phi.is_polynomial() && weierstrass_degree_q(phi.den(), E.center, E.t) > 0) return false;
    }
    if (j == M.N - 1) break;
    try {
      DiskImage im = disk_image_cp(phi, E);
      E = {im.image.center, im.cp_t, true};
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

long double pow_p(long p, const Q& x) {
  return std::exp(static_cast<long double>(x.get_d()) * std::log(static_cast<long double>(p)));
}

}  // namespace

PPow rho_eval(const RhoMetric& M, const Point& z) {
  RhoParts r = rho_parts(M, z);
  if (!r.special) return r.value;
  RadialModel m = find_radial_model(M, z.z);
  if (m.kappa > 0) return PPow::inf();
  if (m.kappa < 0) return PPow::zero();
  return PPow::of(m.c0);
}

std::optional<RadialModel> radial_model(const RhoMetric& M, const PadicNumber& x, long n) {
  const RationalMap& phi = M.theta.base;
  const IndexAssignment& A = M.theta.A;
  const long e = phi.field()->e;
  Q t0(n, e);
  t0.canonicalize();
  Disk D0{x, t0, true};
  for (auto& s : M.special)
    if (!(s - x).is_zero() && D0.contains(s)) return std::nullopt;
  Disk E = D0;
  Point cur = Point::at(x);
  try {
    for (int j = 0; j < M.N; ++j) {
      if (cur.inf) return std::nullopt;
      int nj = node_index(A, cur.z);
      if (nj >= 0) {
        if (E.t < A.nodes[nj].u_t) return std::nullopt;
      } else {
        for (auto& nd : A.nodes)
          if (E.contains(nd.z)) return std::nullopt;
      }
      if (j == M.N - 1) break;
      int deg = local_degree(phi, cur);
      if (!monomial_on(phi, cur.z, deg, E.t)) return std::nullopt;
      DiskImage im = disk_image_cp(phi, E);
      cur = phi.eval(cur);
      E = {cur.z, im.cp_t, true};
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  PadicNumber one = PadicNumber::from_int(phi.field(), 1);
  Q X[3];
  for (int k = 0; k < 3; ++k) {
    RhoParts r = rho_parts(M, Point::at(x + one.mul_pi_pow(n + k)));
    if (r.special) return std::nullopt;
    X[k] = r.value.x;
  }
  if (X[2] - X[1] != X[1] - X[0]) return std::nullopt;
  RadialModel m;
  m.kappa = e * (X[1] - X[0]);
  m.kappa.canonicalize();
  m.c0 = X[0] - m.kappa * Q(n, e);
  m.c0.canonicalize();
  m.n_valid = n;
  return m;
}

RadialModel find_radial_model(const RhoMetric& M, const PadicNumber& x, long n0, long n_cap) {
  for (long n = n0; n < n0 + n_cap; ++n)
    if (auto m = radial_model(M, x, n)) return *m;
  throw Error(ErrorKind::DepthExceeded, "no radial model of rho around " + x.str());
}

namespace {

constexpr int kIntegralDepthCap = 64;

long double radial_integral(const RhoMetric& M, const RadialModel& m, long n) {
  const FieldPtr& F = M.theta.base.field();
  const long double q = std::pow(static_cast<long double>(F->p), F->f);
  const long double r0 = pow_p(F->p, m.kappa / F->e) / q;
  if (!(r0 < 1)) throw Error(ErrorKind::SeriesDivergence, "radial series ratio " + std::to_string(static_cast<double>(r0)));
  Q lead = m.c0 + m.kappa * Q(n, F->e);
  return pow_p(F->p, lead) * std::pow(q, -static_cast<long double>(n)) * (1 - 1 / q) / (1 - r0);
}

long double integral_disk(const RhoMetric& M, const PadicNumber& c, long n, int depth,
                          const std::vector<PadicNumber>& reps);

long double integral_rec(const RhoMetric& M, const PadicNumber& c, long n, int depth,
                         const std::vector<PadicNumber>& reps) {
  if (depth > kIntegralDepthCap) throw Error(ErrorKind::DepthExceeded, "integral recursion too deep");
  std::pair<std::string, long> key{c.str(), n};
  if (M.cache) {
    std::lock_guard<std::mutex> lock(M.cache->mu);
    auto it = M.cache->values.find(key);
    if (it != M.cache->values.end()) return it->second;
  }
  const long double v = integral_disk(M, c, n, depth, reps);
  if (M.cache) {
    std::lock_guard<std::mutex> lock(M.cache->mu);
    M.cache->values.emplace(std::move(key), v);
  }
  return v;
}

long double integral_disk(const RhoMetric& M, const PadicNumber& c, long n, int depth,
                          const std::vector<PadicNumber>& reps) {
  const FieldPtr& F = M.theta.base.field();
  Q t(n, F->e);
  t.canonicalize();
  Disk D{c, t, true};
  std::vector<const PadicNumber*> inside;
  for (auto& s : M.special)
    if (D.contains(s)) inside.push_back(&s);
  if (inside.size() == 1)
    if (auto m = radial_model(M, *inside[0], n)) return radial_integral(M, *m, n);
  if (inside.empty() && constant_on(M, D)) {
    const long double q = std::pow(static_cast<long double>(F->p), F->f);
    return rho_eval(M, Point::at(c)).value(F->p) * std::pow(q, -static_cast<long double>(n));
  }
  long double sum = 0;
  for (auto& r : reps) {
    PadicNumber child = (c + r.mul_pi_pow(n)).truncate_pi(n + 1);
    sum += integral_rec(M, child, n + 1, depth + 1, reps);
  }
  return sum;
}

}  // namespace

long double rho_integral(const RhoMetric& M, const PadicNumber& c, long n) {
  auto reps = residue_representatives(M.theta.base.field());
  return integral_rec(M, c.truncate_pi(n), n, 0, reps);
}

long double rho_distance(const RhoMetric& M, const PadicNumber& z, const PadicNumber& w) {
  PadicNumber d = z - w;
  if (d.is_zero()) return 0;
  return rho_integral(M, z, d.vpi());
}

SeriesSums node_series(const IndexAssignment& A, int j, int f, int terms) {
  const IndexEntry& E = A.nodes.at(j);
  const long double q = std::pow(static_cast<long double>(A.p), f);
  const long double ratio = pow_p(A.p, E.xi / A.e) / q;
  const long double B = pow_p(A.p, E.beta.x);
  SeriesSums s;
  long double acc = 0, term = 1;
  for (int n = 1; n <= terms; ++n) {
    term *= ratio;
    acc += term;
    s.partial.push_back(B * (q - 1) / q * acc);
  }
  s.limit = B * (q - 1) / q * ratio / (1 - ratio);
  return s;
}

ExpansionSample expansion_at(const RhoMetric& M, const Point& z) {
  const RationalMap& phi = M.theta.base;
  ExpansionSample s;
  s.z = z;
  Point w = phi.eval(z);
  PPow rz = rho_eval(M, z), rw = rho_eval(M, w);
  PPow dv = phi.chart_deriv_abs(z);
  s.ratio = rw * dv / rz;
  // theta(phi^N z) |(phi^N)'(z)| / theta(z)
  PPow dn = PPow::one();
  Point cur = z;
  for (int k = 0; k < M.N; ++k) {
    dn = dn * phi.chart_deriv_abs(cur);
    cur = phi.eval(cur);
  }
  dn = dn * theta_eval(M.theta, cur) / theta_eval(M.theta, z);
  s.identity_ok = s.ratio == dn.pow(Q(1, M.N));
  return s;
}

ExpansionReport verify_expansion(const RhoMetric& M, const std::vector<Point>& samples) {
  ExpansionReport r;
  const PPow bound = M.lambda.pow(Q(1, M.N));
  for (auto& z : samples) {
    ExpansionSample s = expansion_at(M, z);
    if (!(s.ratio > bound) || !s.identity_ok)
      throw Error(ErrorKind::ExpansionViolated, "expansion fails at " + z.str() + " (ratio " +
                                                    s.ratio.str(M.theta.base.field()->p) + ")");
    if (s.ratio < r.min_ratio) r.min_ratio = s.ratio;
    r.samples.push_back(std::move(s));
  }
  return r;
}

}  // namespace padyn
