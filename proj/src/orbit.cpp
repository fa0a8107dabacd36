#include "padyn/orbit.hpp"

#include <algorithm>
#include <set>

namespace padyn {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::FatouCertified: return "FatouCertified";
    case Verdict::JuliaCandidate: return "JuliaCandidate";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

const char* to_string(SubhypVerdict v) {
  switch (v) {
    case SubhypVerdict::Subhyperbolic: return "Subhyperbolic";
    case SubhypVerdict::NotSubhyperbolic: return "NotSubhyperbolic";
    case SubhypVerdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

std::optional<long> attracting_certificate(const RationalMap& phi, const std::vector<Point>& cycle) {
  if (cycle.empty()) return std::nullopt;
  for (auto& y : cycle)
    if (y.inf) return std::nullopt;
  const long e = phi.field()->e;
  for (long n : {1L, 2L, 4L, 8L, 16L, 32L}) {
    Disk D0{cycle[0].z, Q(n, e), true};
    D0.t.canonicalize();
    Disk D = D0;
    bool ok = true;
    try {
      for (size_t i = 0; i < cycle.size(); ++i) {
        DiskImage im = disk_image(phi, D);
        D = {im.image.center, im.cp_t, true};
      }
    } catch (const Error&) {
      ok = false;
    }
    if (ok && D.t > D0.t && D0.contains(D.center)) return n;
  }
  return std::nullopt;
}

Classification classify_point(const RationalMap& phi, const Point& z, int budget) {
  if (budget < 1) throw Error(ErrorKind::InvalidArgument, "budget must be >= 1");
  const long floor = orbit_precision_floor(*phi.field());
  Classification c;
  c.point = z;
  std::vector<Point> visited;
  bool expanding = true;
  Point cur = z;
  for (int it = 0;; ++it) {
    c.budget_used = it;
    if (certified_escaping(phi, cur)) {
      c.verdict = Verdict::FatouCertified;
      c.reason = "escapes to the infinity basin";
      return c;
    }
    for (size_t j = 0; j < visited.size(); ++j) {
      if (!visited[j].same_certain(cur, floor)) continue;
      std::vector<Point> cyc(visited.begin() + static_cast<long>(j), visited.end());
      PPow m = cycle_multiplier(phi, cyc);
      std::string per = std::to_string(cyc.size());
      if (m < PPow::one()) {
        if (attracting_certificate(phi, cyc)) {
          c.verdict = Verdict::FatouCertified;
          c.reason = "attracting cycle of period " + per;
        } else {
          c.verdict = Verdict::Unknown;
          c.reason = "attracting cycle of period " + per + " without contraction certificate";
        }
      } else if (m > PPow::one()) {
        c.verdict = Verdict::JuliaCandidate;
        c.reason = "lands on repelling cycle of period " + per + ", multiplier " + m.str(phi.field()->p);
      } else {
        c.verdict = Verdict::Unknown;
        c.reason = "indifferent cycle of period " + per;
      }
      return c;
    }
    if (!cur.precise(floor)) break;
    visited.push_back(cur);
    if (!(phi.chart_deriv_abs(cur) > PPow::one())) expanding = false;
    if (it >= budget) break;
    cur = phi.eval(cur);
  }
  if (expanding && !visited.empty()) {
    c.verdict = Verdict::JuliaCandidate;
    c.reason = "expansion at every visited point";
  } else {
    c.verdict = Verdict::Unknown;
    c.reason = "budget exhausted";
  }
  return c;
}

SubhyperbolicityReport is_subhyperbolic(const RationalMap& phi, int budget) {
  SubhyperbolicityReport r;
  r.post = postcritical_set(phi, budget, false);
  bool undecided = false, wandering = false;
  for (size_t i = 0; i < r.post.orbits.size(); ++i) {
    const CriticalOrbit& o = r.post.orbits[i];
    Classification cls = classify_point(phi, o.c, budget);
    r.critical_verdicts.push_back(cls);
    if (cls.verdict == Verdict::FatouCertified) continue;
    if (o.period && o.multiplier_abs > PPow::one()) {
      r.julia_critical.push_back(static_cast<int>(i));
    } else if (!o.resolved() && cls.verdict == Verdict::JuliaCandidate) {
      wandering = true;
      r.note += "critical point " + o.c.str() + " expands along an unresolved orbit; ";
    } else {
      undecided = true;
      r.note += "critical point " + o.c.str() + ": " + cls.reason + "; ";
    }
  }
  if (r.post.crit.outside_L > 0)
    r.note += std::to_string(r.post.crit.outside_L) + " critical multiplicity outside L not examined; ";
  if (wandering) r.verdict = SubhypVerdict::NotSubhyperbolic;
  else if (undecided) r.verdict = SubhypVerdict::Undecided;
  else r.verdict = SubhypVerdict::Subhyperbolic;
  if (r.verdict == SubhypVerdict::Subhyperbolic && r.julia_critical.empty()) r.note += "hyperbolic; ";
  return r;
}

std::vector<Point> postcritical_points(const PostcriticalData& pd) {
  std::vector<Point> out;
  for (auto& o : pd.orbits)
    for (auto& z : o.orbit) {
      bool dup = false;
      for (auto& w : out)
        if (w.same(z)) dup = true;
      if (!dup) out.push_back(z);
    }
  return out;
}

RepellingSeed find_repelling_seed(const RationalMap& phi, const std::vector<Point>& avoid, int max_period) {
  for (int n = 1; n <= max_period; ++n) {
    RationalMap psi = phi.iterate(n);
    Poly P = poly_sub(psi.num(), poly_mul(psi.den(), {PadicNumber::zero(phi.field()), PadicNumber::from_int(phi.field(), 1)}));
    std::vector<PolyRoot> roots;
    try {
      roots = poly_roots(P);
    } catch (const Error&) {
      continue;
    }
    for (auto& r : roots) {
      std::vector<Point> cyc{Point::at(r.z)};
      bool bad = false;
      for (int k = 1; k < n && !bad; ++k) {
        Point nx = phi.eval(cyc.back());
        if (nx.inf) bad = true;
        cyc.push_back(nx);
      }
      if (bad) continue;
      for (auto& y : cyc)
        for (auto& a : avoid)
          if (a.same(y)) bad = true;
      if (bad) continue;
      PPow m = cycle_multiplier(phi, cyc);
      if (!(m > PPow::one())) continue;
      return {r.z, n, m};
    }
  }
  throw Error(ErrorKind::NoSeedFound, "no repelling cycle of period <= " + std::to_string(max_period) +
                                         " in L outside the postcritical set");
}

JuliaSampleSet julia_samples(const RationalMap& phi, int count, int depth, std::uint64_t seed,
                             const std::vector<Point>& avoid) {
  JuliaSampleSet out;
  out.seed = find_repelling_seed(phi, avoid);
  std::mt19937_64 rng(seed);
  // a walk stuck at a point with no preimage in L is dropped and restarted
  const long max_dead = 64L * std::max(count, 1);
  long dead = 0;
  while (static_cast<int>(out.points.size()) < count) {
    PadicNumber z = out.seed.z;
    bool stuck = false;
    for (int s = 0; s < depth && !stuck; ++s) {
      std::vector<PadicNumber> choices;
      for (auto& pre : preimages(phi, Point::at(z))) {
        if (pre.z.inf) continue;
        for (int k = 0; k < pre.multiplicity; ++k) choices.push_back(pre.z.z);
      }
      if (static_cast<int>(choices.size()) < phi.degree()) ++out.pruned;
      if (choices.empty()) {
        stuck = true;
        if (++dead > max_dead) throw Error(ErrorKind::PreimageEscapesL, "no preimage of " + z.str() + " in L");
        break;
      }
      z = choices[rng() % choices.size()];
    }
    if (!stuck) out.points.push_back(z);
  }
  return out;
}

long alpha_web(const OrbitWeb& web, int target) {
  const int n = static_cast<int>(web.next.size());
  long a = 1;
  // u counts when phi^k(u) = target for some k >= 1
  for (int u = 0; u < n; ++u) {
    int x = web.next[u];
    for (int step = 0; step <= n && x >= 0; ++step) {
      if (x == target) {
        a *= web.local_degree[u];
        break;
      }
      x = web.next[x];
    }
  }
  return a;
}

WebBuild build_web(const RationalMap& phi, const PostcriticalData& pd) {
  WebBuild b;
  auto index_of = [&](const Point& z) {
    for (size_t i = 0; i < b.nodes.size(); ++i)
      if (b.nodes[i].same(z)) return static_cast<int>(i);
    b.nodes.push_back(z);
    b.web.next.push_back(-1);
    b.web.local_degree.push_back(local_degree(phi, z));
    return static_cast<int>(b.nodes.size()) - 1;
  };
  for (auto& o : pd.orbits) {
    if (o.escaping) continue;
    // the orbit ends on a repeat of orbit[preperiod], so the cycle closes through index_of
    int prev = index_of(o.c);
    for (size_t k = 0; k < o.orbit.size(); ++k) {
      int cur = index_of(o.orbit[k]);
      b.web.next[prev] = cur;
      prev = cur;
    }
  }
  return b;
}

long alpha(const RationalMap& phi, const Point& z, const PostcriticalData& pd) {
  if (!pd.all_resolved()) throw Error(ErrorKind::UnresolvedBackwardOrbit, "some critical orbit is unresolved");
  WebBuild b = build_web(phi, pd);
  for (size_t i = 0; i < b.nodes.size(); ++i)
    if (b.nodes[i].same(z)) return alpha_web(b.web, static_cast<int>(i));
  throw Error(ErrorKind::UnresolvedBackwardOrbit, z.str() + " is not in the resolved postcritical web");
}

namespace {

std::vector<Q> height_values(long h) {
  std::set<Q> vals;
  for (long b = 1; b <= h; ++b)
    for (long a = -h; a <= h; ++a) {
      Q q(a, b);
      q.canonicalize();
      vals.insert(q);
    }
  return {vals.begin(), vals.end()};
}

}  // namespace

std::vector<CandidateMap> find_subhyperbolic_candidates(int degree, long height, long p, int budget, long precision,
                                                        size_t max_hits) {
  std::vector<CandidateMap> hits;
  if (degree < 2 || height < 1) return hits;
  FieldPtr F = field_create(p, {}, precision);
  std::vector<Q> vals = height_values(height);
  const size_t V = vals.size();
  std::vector<size_t> idx(degree + 1, 0);
  while (true) {
    std::vector<Q> c(degree + 1);
    for (int k = 0; k <= degree; ++k) c[k] = vals[idx[k]];
    if (c[degree] != 0) {
      try {
        RationalMap phi = RationalMap::from_rationals(F, c, {1});
        SubhyperbolicityReport rep = is_subhyperbolic(phi, budget);
        if (rep.verdict == SubhypVerdict::Subhyperbolic && !rep.julia_critical.empty()) {
          hits.push_back({phi, c, rep});
          if (max_hits && hits.size() >= max_hits) return hits;
        }
      } catch (const Error&) {
      }
    }
    int k = 0;
    while (k <= degree && ++idx[k] == V) idx[k++] = 0;
    if (k > degree) break;
  }
  return hits;
}

}  // namespace padyn
