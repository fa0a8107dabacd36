#include "padyn/coding.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "padyn/orbit.hpp"

namespace padyn {

namespace {

Disk canonical_disk(const PadicNumber& c, const Q& t) {
  const long e = c.field()->e;
  Q tl = q_ceil_to(t, e);
  tl.canonicalize();
  Q te = tl * e;
  long n = te.get_num().get_si();
  return {c.truncate_pi(n), tl, true};
}

std::string disk_key(const Disk& D) { return q_str(D.t) + "|" + D.center.str(); }

// radius exponent of the component of phi^-1(D) around a preimage y of D's center
Q component_t(const RationalMap& phi, const PadicNumber& y, const Disk& D) {
  const int K = phi.is_polynomial() ? phi.degree() : 3 * phi.degree() + 2;
  auto c = phi.taylor(y, K);
  bool any = false;
  Q t;
  for (int k = 1; k <= K; ++k) {
    if (c[k].is_zero()) continue;
    Q tk = (D.t - c[k].valuation()) / k;
    if (!any || tk > t) t = tk;
    any = true;
  }
  if (!any) throw Error(ErrorKind::IndeterminateAtPrecision, "map is constant near " + y.str());
  t.canonicalize();
  if (!phi.is_polynomial()) {
    const long e = phi.field()->e;
    while (weierstrass_degree_q(phi.den(), y, t) > 0) t = q_floor_to(t, e) + Q(1, e);
  }
  return t;
}

}  // namespace

CoverSequence build_cover_from(const RationalMap& phi, std::vector<Disk> base, int n_levels) {
  if (n_levels < 0) throw Error(ErrorKind::InvalidArgument, "n_levels must be >= 0");
  CoverSequence C;
  C.map = phi;
  C.levels.emplace_back();
  for (auto& b : base) {
    Disk D = canonical_disk(b.center, b.closed ? b.t : q_floor_to(b.t, b.center.field()->e) + Q(1, b.center.field()->e));
    bool covered = false;
    for (auto& u : C.levels[0])
      if (u.disk.t <= D.t && u.disk.contains(D.center)) covered = true;
    if (covered) continue;
    auto& L0 = C.levels[0];
    L0.erase(std::remove_if(L0.begin(), L0.end(),
                            [&](const CoverDisk& u) { return D.t <= u.disk.t && D.contains(u.disk.center); }),
             L0.end());
    L0.push_back({D, -1, -1, {}});
  }
  std::sort(C.levels[0].begin(), C.levels[0].end(), [](const CoverDisk& a, const CoverDisk& b) {
    return PadicNumber::canonical_less(a.disk.center, b.disk.center);
  });
  const int d = phi.degree();
  for (int n = 1; n <= n_levels; ++n) {
    auto& prev = C.levels[n - 1];
    std::vector<CoverDisk> cur;
    std::unordered_set<std::string> seen;
    for (size_t i = 0; i < prev.size(); ++i) {
      const Disk& D = prev[i].disk;
      int found = 0;
      for (auto& pre : preimages(phi, Point::at(D.center))) {
        if (pre.z.inf) continue;
        found += pre.multiplicity;
        Disk child = canonical_disk(pre.z.z, component_t(phi, pre.z.z, D));
        if (!seen.insert(disk_key(child)).second) continue;
        cur.push_back({child, static_cast<int>(i), -1, {}});
      }
      if (found < d) ++C.pruned;
    }
    std::sort(cur.begin(), cur.end(), [](const CoverDisk& a, const CoverDisk& b) {
      return PadicNumber::canonical_less(a.disk.center, b.disk.center);
    });
    std::unordered_map<std::string, int> prev_keys;
    std::vector<Q> radii;
    for (size_t j = 0; j < prev.size(); ++j) {
      prev_keys[disk_key(prev[j].disk)] = static_cast<int>(j);
      if (std::find(radii.begin(), radii.end(), prev[j].disk.t) == radii.end()) radii.push_back(prev[j].disk.t);
    }
    for (size_t k = 0; k < cur.size(); ++k) {
      for (auto& t : radii) {
        if (t > cur[k].disk.t) continue;
        auto it = prev_keys.find(disk_key(canonical_disk(cur[k].disk.center, t)));
        if (it == prev_keys.end()) continue;
        cur[k].container = it->second;
        prev[it->second].children.push_back(static_cast<int>(k));
        break;
      }
    }
    C.levels.push_back(std::move(cur));
  }
  return C;
}

CoverSequence build_cover(const RationalMap& phi, const std::vector<PadicNumber>& samples, int n_levels) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no samples to cover");
  std::vector<Disk> base;
  for (auto& z : samples) base.push_back({z, Q(0), true});
  return build_cover_from(phi, base, n_levels);
}

std::vector<int> cover_path(const CoverSequence& C, const PadicNumber& z) {
  std::vector<int> path;
  const auto& L0 = C.levels[0];
  for (size_t i = 0; i < L0.size(); ++i)
    if (L0[i].disk.contains(z)) {
      path.push_back(static_cast<int>(i));
      break;
    }
  for (int n = 1; n <= C.n_levels() && !path.empty() && static_cast<int>(path.size()) == n; ++n)
    for (int c : C.levels[n - 1][path.back()].children)
      if (C.levels[n][c].disk.contains(z)) {
        path.push_back(c);
        break;
      }
  return path;
}

int separation(const CoverSequence& C, const PadicNumber& x, const PadicNumber& y) {
  auto px = cover_path(C, x), py = cover_path(C, y);
  if (px.empty()) throw Error(ErrorKind::PointNotCovered, x.str());
  if (py.empty()) throw Error(ErrorKind::PointNotCovered, y.str());
  if (px[0] != py[0]) return -1;
  size_t n = 0;
  while (n + 1 < px.size() && n + 1 < py.size() && px[n + 1] == py[n + 1]) ++n;
  return static_cast<int>(n);
}

VisualDistance visual_distance(const VisualMetric& M, const PadicNumber& x, const PadicNumber& y) {
  VisualDistance r;
  int s = separation(M.cover, x, y);
  if (s < 0) {
    r.value = 1;
    r.sep = 0;
    return r;
  }
  r.sep = s;
  if (s == M.cover.n_levels() || (x - y).is_zero()) {
    r.depth_limited = true;
    r.value = 0;
    return r;
  }
  r.value = std::pow(M.Lambda, s);
  return r;
}

std::optional<double> cover_diameter(const VisualMetric& M, int n, int idx) {
  const CoverSequence& C = M.cover;
  if (n < 0 || n >= C.n_levels()) return std::nullopt;
  std::vector<PadicNumber> probes;
  for (int c : C.levels[n][idx].children) probes.push_back(C.levels[n + 1][c].disk.center);
  if (probes.size() < 2) return std::nullopt;
  double diam = 0;
  for (size_t i = 0; i < probes.size(); ++i)
    for (size_t j = i + 1; j < probes.size(); ++j)
      diam = std::max(diam, visual_distance(M, probes[i], probes[j]).value);
  return diam;
}

HolderFit holder_bridge_check(const VisualMetric& V, const RhoMetric& R,
                              const std::vector<std::pair<PadicNumber, PadicNumber>>& pairs) {
  HolderFit f;
  std::vector<double> xs, ys;
  for (auto& [a, b] : pairs) {
    double vi = visual_distance(V, a, b).value;
    double rl = static_cast<double>(rho_distance(R, a, b));
    if (vi == 0 || rl == 0) {
      ++f.zero_pairs;
      continue;
    }
    xs.push_back(std::log(rl));
    ys.push_back(std::log(vi));
  }
  f.pairs = xs.size();
  if (xs.size() < 2) return f;
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  for (size_t i = 0; i < xs.size(); ++i)
    f.residual = std::max(f.residual, std::abs(ys[i] - f.intercept - f.slope * xs[i]));
  return f;
}

std::uint64_t word_index(const Word& a, int d, int len) {
  if (static_cast<int>(a.size()) < len) throw Error(ErrorKind::InvalidArgument, "word too short");
  std::uint64_t idx = 0, w = 1;
  for (int i = 0; i < len; ++i) {
    if (a[i] < 0 || a[i] >= d) throw Error(ErrorKind::InvalidArgument, "symbol out of range");
    idx += static_cast<std::uint64_t>(a[i]) * w;
    w *= d;
  }
  return idx;
}

Word word_of(std::uint64_t idx, int d, int len) {
  Word a(len);
  for (int i = 0; i < len; ++i) {
    a[i] = static_cast<int>(idx % d);
    idx /= d;
  }
  return a;
}

double dist_sigma(const Word& a, const Word& b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t j = 0; j < n; ++j)
    if (a[j] != b[j]) return std::ldexp(1.0, -static_cast<int>(j + 1));
  return 0;
}

namespace {

std::vector<PadicNumber> fiber(const RationalMap& phi, const PadicNumber& w) {
  std::vector<PadicNumber> out;
  for (auto& pre : preimages(phi, Point::at(w))) {
    if (pre.z.inf) continue;
    for (int k = 0; k < pre.multiplicity; ++k) out.push_back(pre.z.z);
  }
  std::stable_sort(out.begin(), out.end(), PadicNumber::canonical_less);
  return out;
}

// larger is closer
long closeness(const PadicNumber& a, const PadicNumber& b) {
  PadicNumber d = a - b;
  return d.is_zero() ? PadicNumber::kExact : d.vpi();
}

}  // namespace

PadicNumber default_base_point(const RationalMap& phi, const std::vector<Point>& postcritical) {
  RepellingSeed seed = find_repelling_seed(phi, postcritical);
  for (auto& z : fiber(phi, seed.z)) {
    bool post = false;
    for (auto& q : postcritical)
      if (q.same(Point::at(z))) post = true;
    if (!post) return z;
  }
  throw Error(ErrorKind::BasePointPostcritical, "every preimage of the seed is postcritical");
}

CodingTree build_coding_tree(const RationalMap& phi, const PadicNumber& w, int depth,
                             const std::vector<Point>& postcritical) {
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be >= 0");
  for (auto& q : postcritical)
    if (q.same(Point::at(w))) throw Error(ErrorKind::BasePointPostcritical, w.str());
  CodingTree T;
  T.map = phi;
  T.base = w;
  T.d = phi.degree();
  const int d = T.d;
  const int L = std::max(1, depth);
  auto f0 = fiber(phi, w);
  if (static_cast<int>(f0.size()) < d)
    throw Error(ErrorKind::FiberDeficient, "only " + std::to_string(f0.size()) + " preimages of " + w.str() + " in L");
  for (size_t i = 1; i < f0.size(); ++i)
    if ((f0[i] - f0[i - 1]).is_zero()) throw Error(ErrorKind::BasePointPostcritical, w.str() + " is a critical value");
  T.levels.push_back(f0);
  std::uint64_t width = d;  // d^k
  for (int k = 1; k < L; ++k) {
    const auto& prev = T.levels[k - 1];
    std::vector<PadicNumber> cur(width * d);
    for (std::uint64_t tau = 0; tau < width; ++tau) {
      auto fb = fiber(phi, prev[tau]);
      if (static_cast<int>(fb.size()) < d)
        throw Error(ErrorKind::FiberDeficient, "fiber of " + prev[tau].str() + " at level " + std::to_string(k) +
                                                   " has " + std::to_string(fb.size()) + " points in L");
      std::vector<bool> used(fb.size(), false);
      for (int j = 0; j < d; ++j) {
        const std::uint64_t idx = j + d * tau;
        const PadicNumber& ref = prev[idx % width];
        int best = -1;
        long best_c = 0;
        for (size_t c = 0; c < fb.size(); ++c) {
          if (used[c]) continue;
          long cl = closeness(ref, fb[c]);
          if (best < 0 || cl > best_c) {
            best = static_cast<int>(c);
            best_c = cl;
          }
        }
        used[best] = true;
        cur[idx] = fb[best];
      }
    }
    T.levels.push_back(std::move(cur));
    width *= d;
  }
  return T;
}

PadicNumber h_approx(const CodingTree& T, const Word& alpha, int k) {
  if (k < 0 || k >= T.depth()) throw Error(ErrorKind::DepthExceeded, "k = " + std::to_string(k));
  return T.node(k, word_index(alpha, T.d, k + 1));
}

std::vector<long> cauchy_steps(const CodingTree& T, const Word& alpha) {
  std::vector<long> out;
  for (int k = 0; k + 1 < T.depth(); ++k) out.push_back(closeness(h_approx(T, alpha, k + 1), h_approx(T, alpha, k)));
  return out;
}

SemiconjugacyReport verify_semiconjugacy(const CodingTree& T, const CoverSequence* cover) {
  SemiconjugacyReport r;
  const RationalMap& phi = T.map;
  for (int k = 0; k < T.depth(); ++k) {
    const auto& lv = T.levels[k];
    for (std::uint64_t idx = 0; idx < lv.size(); ++idx) {
      Point img = phi.eval(Point::at(lv[idx]));
      const PadicNumber& target = k == 0 ? T.base : T.levels[k - 1][idx / T.d];
      ++r.relations;
      if (img.inf || !(img.z - target).is_zero())
        throw Error(ErrorKind::SemiconjugacyViolated,
                    "level " + std::to_string(k) + " word " + std::to_string(idx) + " at " + lv[idx].str());
    }
  }
  const int D = T.depth();
  r.min_truncation_vpi = PadicNumber::kExact;
  if (D >= 2) {
    const auto& leaves = T.levels[D - 1];
    for (std::uint64_t idx = 0; idx < leaves.size(); ++idx) {
      // sigma alpha extended by the symbol 0
      r.min_truncation_vpi =
          std::min(r.min_truncation_vpi, closeness(T.levels[D - 2][idx / T.d], T.levels[D - 1][idx / T.d]));
    }
  }
  if (cover) {
    const int n = std::min(D, cover->n_levels());
    const auto& lv = cover->levels[n];
    r.cover_disks = lv.size();
    size_t hit = 0;
    for (auto& u : lv)
      for (auto& z : T.levels[D - 1])
        if (u.disk.contains(z)) {
          ++hit;
          break;
        }
    r.cover_hit = hit;
  }
  return r;
}

}  // namespace padyn
