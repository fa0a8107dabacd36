#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "output.hpp"
#include "padyn/coding.hpp"
#include "padyn/kernels.hpp"
#include "padyn/metric.hpp"
#include "padyn/orbit.hpp"
#include "padyn/statistics.hpp"

namespace padyn::cli {

namespace fs = std::filesystem;

namespace {

struct Loaded {
  FieldPtr F;
  RationalMap phi;
};

Loaded load_map(const JobConfig& c) {
  if (!c.field || !c.map) throw Error(ErrorKind::ConfigParse, "this command needs field and map sections");
  Loaded L;
  L.F = make_field(*c.field);
  L.phi = RationalMap::from_rationals(L.F, c.map->num, c.map->den);
  return L;
}

Json point_json(const Point& z) { return z.str(); }

std::string join_points(const std::vector<Point>& pts, size_t cap) {
  std::string s;
  for (size_t i = 0; i < pts.size() && i < cap; ++i) {
    if (i) s += ' ';
    s += pts[i].str();
  }
  if (pts.size() > cap) s += " ...";
  return s;
}

Json map_json(const Loaded& L) {
  Json j;
  j["field"] = L.F->describe();
  j["map"] = L.phi.str();
  j["degree"] = L.phi.degree();
  return j;
}

int verdict_exit(SubhypVerdict v) {
  switch (v) {
    case SubhypVerdict::Subhyperbolic: return kOk;
    case SubhypVerdict::NotSubhyperbolic: return kNotSubhyperbolic;
    case SubhypVerdict::Undecided: return kUndecided;
  }
  return kUndecided;
}

Json analyze_json(const Loaded& L, const SubhyperbolicityReport& rep) {
  const long p = L.F->p;
  Json j = map_json(L);
  j["verdict"] = to_string(rep.verdict);
  j["note"] = rep.note;
  j["critical_found"] = rep.post.crit.found;
  j["critical_expected"] = rep.post.crit.expected;
  j["critical_outside_field"] = rep.post.crit.outside_L;
  Json crit = Json::array();
  for (size_t i = 0; i < rep.post.orbits.size(); ++i) {
    const auto& o = rep.post.orbits[i];
    Json r;
    r["point"] = point_json(o.c);
    r["local_degree"] = o.local_degree;
    r["escaping"] = o.escaping;
    r["preperiod"] = o.preperiod ? Json(*o.preperiod) : Json("unresolved");
    r["period"] = o.period ? Json(*o.period) : Json("unresolved");
    r["multiplier_abs"] = o.period ? Json(o.multiplier_abs.str(p)) : Json(nullptr);
    if (i < rep.critical_verdicts.size()) {
      r["verdict"] = to_string(rep.critical_verdicts[i].verdict);
      r["reason"] = rep.critical_verdicts[i].reason;
    }
    r["orbit"] = join_points(o.orbit, 16);
    crit.push_back(r);
  }
  j["critical_orbits"] = crit;
  j["julia_critical"] = rep.julia_critical;
  return j;
}

}  // namespace

int cmd_analyze(const JobConfig& c) {
  Loaded L = load_map(c);
  auto rep = is_subhyperbolic(L.phi, c.analyze.budget);
  const fs::path out(c.out);
  write_json(out / "analyze.json", analyze_json(L, rep));
  Csv csv({"critical_point", "local_degree", "step", "point"});
  for (const auto& o : rep.post.orbits)
    for (size_t k = 0; k < o.orbit.size(); ++k)
      csv.row({o.c.str(), std::to_string(o.local_degree), std::to_string(k + 1), o.orbit[k].str()});
  write_atomic(out / "postcritical.csv", csv.str());
  return verdict_exit(rep.verdict);
}

int cmd_metric(const JobConfig& c) {
  Loaded L = load_map(c);
  const long p = L.F->p;
  const fs::path out(c.out);
  auto rep = is_subhyperbolic(L.phi, c.analyze.budget);
  if (rep.verdict != SubhypVerdict::Subhyperbolic) {
    Json j = analyze_json(L, rep);
    j["metric"] = "skipped: map not certified subhyperbolic";
    write_json(out / "metric.json", j);
    return verdict_exit(rep.verdict);
  }
  const PPow lambda = parse_ppow(c.metric.lambda, p);
  if (!lambda.finite()) throw Error(ErrorKind::ConfigParse, "metric.lambda must be a positive power of p");

  Json j = map_json(L);
  j["lambda"] = lambda.str(p);
  auto th = make_theta(L.phi, rep, c.analyze.budget);
  j["theta_iterate"] = th.m;
  Json nodes = Json::array();
  for (const auto& E : th.A.nodes) {
    Json r;
    r["point"] = E.z.valid() ? Json(E.z.str()) : Json(nullptr);
    r["fixed"] = E.spec.fixed;
    r["next"] = E.spec.next;
    r["deg"] = E.spec.deg;
    r["a_abs"] = E.spec.a_abs.str(p);
    r["alpha"] = E.spec.alpha;
    r["xi"] = q_str(E.xi);
    r["beta"] = E.beta.str(p);
    r["eps_t"] = q_str(E.eps_t);
    r["u_t"] = q_str(E.u_t);
    nodes.push_back(r);
  }
  j["nodes"] = nodes;
  Json crit = Json::array();
  for (const auto& D : th.A.crit)
    crit.push_back({{"point", D.z.str()}, {"deg", D.deg}, {"a_abs", D.a_abs.str(p)}, {"image", D.image},
                    {"t", q_str(D.t)}});
  j["critical_disks"] = crit;
  j["violated_inequalities"] = check_inequalities(th.A);
  Json regions = Json::array();
  for (const auto& r : region_certificates(th.A))
    regions.push_back(
        {{"region", r.name}, {"index", r.index}, {"value", r.value.str(p)}, {"bound", q_str(r.bound)}, {"ok", r.ok}});
  j["regions"] = regions;

  auto js = julia_samples(L.phi, c.metric.samples, c.metric.sample_depth, c.seed, postcritical_points(rep.post));
  std::vector<Point> pts;
  for (const auto& z : js.points) pts.push_back(Point::at(z));
  j["samples"] = pts.size();
  j["samples_pruned"] = js.pruned;
  auto wb = wbar_samples(th, c.metric.wbar_per_disk);
  auto le = verify_local_expansion(th, wb, pts);
  j["C0"] = le.C0.str(p);
  j["C0_hat"] = le.C0_hat.str(p);
  auto all = pts;
  all.insert(all.end(), wb.begin(), wb.end());
  auto it = find_iteration_count(th, lambda, all, c.metric.n_cap);
  const int N = it.N * th.m;
  j["N"] = N;
  j["n_max"] = it.n_max;
  j["C1"] = it.C1.str(p);
  j["N_bound"] = it.N_bound ? Json(*it.N_bound) : Json(nullptr);
  j["horizon"] = it.horizon;
  auto M = make_rho(th, N, lambda);
  j["special_points"] = M.special.size();
  Json radial = Json::array();
  for (const auto& s : M.special) {
    try {
      auto rm = find_radial_model(M, s);
      radial.push_back({{"point", s.str()}, {"kappa", q_str(rm.kappa)}, {"c0", q_str(rm.c0)}, {"n", rm.n_valid}});
    } catch (const Error& e) {
      radial.push_back({{"point", s.str()}, {"error", e.what()}});
    }
  }
  j["radial_models"] = radial;

  Csv csv({"sample", "point", "ratio", "identity_ok"});
  int code = kOk;
  try {
    auto ex = verify_expansion(M, pts);
    for (size_t i = 0; i < ex.samples.size(); ++i)
      csv.row({std::to_string(i), ex.samples[i].z.str(), ex.samples[i].ratio.str(p),
               ex.samples[i].identity_ok ? "1" : "0"});
    j["min_ratio"] = ex.min_ratio.str(p);
    j["expansion"] = "verified";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ExpansionViolated) throw;
    j["expansion"] = "violated";
    j["witness"] = e.what();
    code = kExpansionViolated;
  }
  Json dist = Json::array();
  for (int i = 0; i + 1 < static_cast<int>(pts.size()) && i < c.metric.distance_pairs; ++i)
    dist.push_back({{"z", pts[i].str()},
                    {"w", pts[i + 1].str()},
                    {"rho_distance", num(static_cast<double>(rho_distance(M, pts[i].z, pts[i + 1].z)))}});
  j["distances"] = dist;
  write_atomic(out / "margins.csv", csv.str());
  write_json(out / "metric.json", j);
  return code;
}

int cmd_code(const JobConfig& c) {
  Loaded L = load_map(c);
  const long p = L.F->p;
  const fs::path out(c.out);
  auto post = postcritical_set(L.phi, c.analyze.budget, false);
  auto pc = postcritical_points(post);
  auto w = default_base_point(L.phi, pc);
  auto T = build_coding_tree(L.phi, w, c.code.depth, pc);
  auto C = build_cover(L.phi, {T.base}, c.code.cover_levels);
  auto sc = verify_semiconjugacy(T, &C);

  Json j = map_json(L);
  j["base_point"] = T.base.str();
  j["depth"] = T.depth();
  j["relations"] = sc.relations;
  j["min_truncation_vpi"] =
      sc.min_truncation_vpi >= PadicNumber::kExact / 2 ? Json("exact") : Json(sc.min_truncation_vpi);
  j["cover_disks"] = sc.cover_disks ? Json(*sc.cover_disks) : Json(nullptr);
  j["cover_hit"] = sc.cover_hit ? Json(*sc.cover_hit) : Json(nullptr);
  j["cover_pruned"] = C.pruned;

  Json levels = Json::array();
  VisualMetric V{C, 0.5};
  for (int n = 0; n <= C.n_levels(); ++n) {
    Q tmin = C.levels[n].empty() ? Q(0) : C.levels[n][0].disk.t, tmax = tmin;
    for (const auto& D : C.levels[n]) {
      tmin = std::min(tmin, D.disk.t);
      tmax = std::max(tmax, D.disk.t);
    }
    size_t probed = 0, exact = 0;
    if (n < C.n_levels())
      for (size_t i = 0; i < C.levels[n].size(); ++i)
        if (auto dm = cover_diameter(V, n, static_cast<int>(i))) {
          ++probed;
          if (*dm == std::ldexp(1.0, -n)) ++exact;
        }
    levels.push_back({{"level", n},
                      {"disks", C.levels[n].size()},
                      {"radius_min", PPow::of(-tmax).str(p)},
                      {"radius_max", PPow::of(-tmin).str(p)},
                      {"visual_diameters_probed", probed},
                      {"visual_diameters_exact", exact}});
  }
  j["cover_levels"] = levels;

  Json cauchy;
  std::mt19937_64 rng(stream_seed(c.seed, 0));
  Word zeros(T.depth(), 0), tops(T.depth(), T.d - 1), rnd(T.depth());
  for (auto& a : rnd) a = static_cast<int>(rng() % T.d);
  cauchy["zeros"] = cauchy_steps(T, zeros);
  cauchy["ones"] = cauchy_steps(T, tops);
  cauchy["random"] = cauchy_steps(T, rnd);
  std::string word;
  for (int a : rnd) word += std::to_string(a);
  cauchy["random_word"] = word;
  j["cauchy_vpi"] = cauchy;

  Csv csv({"level", "index", "word", "point"});
  for (int k = 0; k < T.depth(); ++k)
    for (std::uint64_t i = 0; i < T.levels[k].size(); ++i) {
      std::string ws;
      for (int a : word_of(i, T.d, k + 1)) ws += std::to_string(a);
      csv.row({std::to_string(k), std::to_string(i), ws, T.levels[k][i].str()});
    }
  write_atomic(out / "tree.csv", csv.str());
  write_json(out / "coding.json", j);
  return kOk;
}

namespace {

Json fit_json(const DecayFit& f) {
  return {{"beta", num(f.beta)}, {"C", num(f.C)}, {"r2", num(f.r2)}, {"points", f.points}, {"ok", f.ok}};
}

bool is_constant(const Observable& f) {
  for (double v : f.values)
    if (v != f.values[0]) return false;
  return true;
}

}  // namespace

int cmd_stats(const JobConfig& c) {
  const auto& S = c.stats;
  const fs::path out(c.out);
  Json j;
  j["seed"] = c.seed;
  j["d"] = S.d;
  j["n"] = S.n;
  j["orbits"] = S.orbits;

  auto section = [&](const char* name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      j["failed"] = {{"section", name}, {"error", e.what()}};
      write_json(out / "stats.json", j);
      throw;
    }
  };

  const Observable g = make_observable(S.g, S.d);
  const Observable chi = S.chi ? make_observable(*S.chi, S.d) : g;
  const Observable f = S.potential.table.empty() ? Observable::constant(S.d, 0) : make_observable(S.potential, S.d);
  const bool uniform = is_constant(f);
  MarkovMeasure mu;

  section("pressure", [&] {
    auto pr = pressure_and_equilibrium(f);
    mu = uniform ? MarkovMeasure::uniform(S.d) : pr.equilibrium;
    std::vector<std::string> cyl;
    for (double x : pr.cylinders) cyl.push_back(num(x));
    j["pressure"] = {{"value", num(pr.pressure)},
                     {"log_d", num(std::log(static_cast<double>(S.d)))},
                     {"iterations", pr.iterations},
                     {"second_eigen_ratio", num(pr.second_ratio)},
                     {"cylinders", cyl}};
    j["mean_g"] = num(integrate(g, mu));
  });

  double sigma2 = 0;
  section("sigma", [&] {
    auto sr = sigma_squared(g, mu, S.lag_cap, S.n, S.orbits, c.seed);
    sigma2 = sr.sigma2;
    std::vector<std::string> cov;
    for (double x : sr.covariance) cov.push_back(num(x));
    j["sigma2"] = {{"value", num(sr.sigma2)},  {"variance", num(sr.variance)},
                   {"covariance", cov},        {"fit", fit_json(sr.fit)},
                   {"tail_bound", num(sr.tail_bound)}, {"noise_level", sr.noise_level}};
  });

  section("clt", [&] {
    auto cr = clt_test(g, mu, S.n, S.orbits, sigma2, c.seed + 1, S.threshold);
    j["clt"] = {{"ks", num(cr.ks)},
                {"ks_lattice", num(cr.ks_lattice)},
                {"span", cr.span ? Json(num(*cr.span)) : Json(nullptr)},
                {"degenerate", cr.degenerate},
                {"max_abs", num(cr.max_abs)},
                {"threshold", num(cr.threshold)},
                {"pass", cr.pass}};
    Csv csv({"orbit", "z"});
    for (size_t i = 0; i < cr.z.size(); ++i) csv.row({std::to_string(i), num(cr.z[i])});
    write_atomic(out / "clt.csv", csv.str());
    write_atomic(out / "histogram.svg",
                 histogram_svg(cr.z, S.histogram_bins, cr.degenerate ? 0 : sigma2,
                               "normalized Birkhoff sums, n = " + std::to_string(S.n)));
  });

  section("decay", [&] {
    auto dr = correlation_decay(g, chi, mu, S.decay_lags, S.n, S.orbits, c.seed + 2);
    Csv csv({"lag", "abs_cov", "exact"});
    std::vector<std::string> exact(dr.values.size());
    if (uniform && g.is_exact() && chi.is_exact()) {
      std::vector<Q> probs(S.d, Q(1, S.d));
      for (size_t l = 0; l < dr.values.size(); ++l)
        if (l + std::max(g.m, chi.m) <= 22) exact[l] = q_str(exact_correlation(g, chi, static_cast<int>(l), probs));
    }
    for (size_t l = 0; l < dr.values.size(); ++l) csv.row({std::to_string(l), num(dr.values[l]), exact[l]});
    write_atomic(out / "decay.csv", csv.str());
    j["decay"] = {{"fit", fit_json(dr.fit)}, {"exact", exact}};
  });

  section("large_deviations", [&] {
    auto rows = large_deviation_check(f, g, S.ld.t, S.ld.n, S.ld.orbits, c.seed + 3);
    // two-valued 1-cylinder g under a uniform measure: S_n is affine in a binomial count
    std::optional<std::pair<double, double>> two;
    double q = 0;
    if (uniform && g.m == 1) {
      auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
      bool ok = *hi > *lo;
      for (double v : g.values) ok = ok && (v == *lo || v == *hi);
      if (ok) {
        two = {{*lo, *hi}};
        q = static_cast<double>(std::count(g.values.begin(), g.values.end(), *hi)) / S.d;
      }
    }
    Csv csv({"t", "level", "pressure_rate", "binomial_rate", "empirical", "se", "hits", "observed"});
    Json arr = Json::array();
    for (const auto& r : rows) {
      std::string bin;
      if (two)
        bin = num(binomial_tail_rate(S.ld.n, q, (r.level - two->first) / (two->second - two->first), r.t >= 0));
      csv.row({num(r.t), num(r.level), num(r.pressure_rate), bin, num(r.empirical), num(r.se),
               std::to_string(r.hits), r.observed ? "1" : "0"});
      arr.push_back({{"t", num(r.t)},
                     {"level", num(r.level)},
                     {"pressure_rate", num(r.pressure_rate)},
                     {"binomial_rate", two ? Json(bin) : Json(nullptr)},
                     {"empirical", num(r.empirical)},
                     {"se", num(r.se)},
                     {"hits", r.hits},
                     {"observed", r.observed}});
    }
    write_atomic(out / "ld.csv", csv.str());
    j["large_deviations"] = arr;
  });

  section("coboundary", [&] {
    if (!g.is_exact()) {
      j["coboundary"] = "skipped: observable not rational";
      return;
    }
    auto cb = coboundary_check(g, S.coboundary_memory);
    Json r;
    r["found"] = cb.found;
    if (cb.found) {
      r["memory"] = cb.memory;
      std::vector<std::string> u;
      for (const auto& q : cb.u) u.push_back(q_str(q));
      r["u"] = u;
      r["constant"] = q_str(cb.constant);
    }
    j["coboundary"] = r;
  });

  section("lil", [&] {
    auto pts = lil_envelope(g, mu, S.n, S.orbits, sigma2, c.seed + 4, S.lil_checkpoints);
    Csv csv({"n", "max_abs", "loglog", "logn"});
    for (const auto& q : pts) csv.row({std::to_string(q.n), num(q.max_abs), num(q.loglog), num(q.logn)});
    write_atomic(out / "lil.csv", csv.str());
  });

  if (c.map && S.map_orbits > 0) {
    section("map", [&] {
      Loaded L = load_map(c);
      if (L.phi.degree() != S.d) {
        j["map"] = "skipped: alphabet differs from the map degree";
        return;
      }
      auto post = postcritical_set(L.phi, c.analyze.budget, false);
      auto pc = postcritical_points(post);
      auto T = build_coding_tree(L.phi, default_base_point(L.phi, pc), S.tree_depth, pc);
      auto C = build_cover(L.phi, {T.base}, S.tree_depth);
      auto P = pull_back(g, T, C);
      const int D = T.depth(), steps = D - g.m + 1;
      std::mt19937_64 rng(stream_seed(c.seed + 5, 0));
      size_t agree = 0;
      double worst = 0;
      for (int i = 0; i < S.map_orbits; ++i) {
        const std::uint64_t idx = rng() % T.levels[D - 1].size();
        const double a = birkhoff_sum_map(P, T.levels[D - 1][idx], steps);
        const double b = birkhoff_sum(g, word_of(idx, T.d, D), steps);
        worst = std::max(worst, std::abs(a - b));
        if (std::abs(a - b) < 1e-12) ++agree;
      }
      j["map"] = {{"tree_depth", D}, {"steps", steps}, {"orbits", S.map_orbits}, {"agree", agree},
                  {"max_abs_difference", num(worst)}};
    });
  }

  write_json(out / "stats.json", j);
  return kOk;
}

int cmd_report(const JobConfig& c) {
  const fs::path out(c.out);
  Json summary;
  std::string md = "# padyn report\n\n";
  for (const char* name : {"analyze", "metric", "coding", "stats"}) {
    const fs::path f = out / (std::string(name) + ".json");
    if (!fs::exists(f)) continue;
    std::ifstream in(f);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::ConfigParse, f.string() + ": " + e.what());
    }
    Json s;
    auto copy = [&](const char* k) {
      if (j.contains(k)) s[k] = j[k];
    };
    if (std::string(name) == "analyze") {
      copy("map"), copy("verdict"), copy("note");
    } else if (std::string(name) == "metric") {
      copy("map"), copy("lambda"), copy("N"), copy("min_ratio"), copy("expansion");
    } else if (std::string(name) == "coding") {
      copy("map"), copy("relations"), copy("cover_disks"), copy("cover_hit"), copy("min_truncation_vpi");
    } else {
      if (j.contains("pressure")) s["pressure"] = j["pressure"]["value"];
      if (j.contains("sigma2")) s["sigma2"] = j["sigma2"]["value"];
      if (j.contains("clt")) s["clt_pass"] = j["clt"]["pass"];
      copy("failed");
    }
    summary[name] = s;
    md += "## " + std::string(name) + "\n\n";
    for (auto it = s.begin(); it != s.end(); ++it) md += "- " + it.key() + ": " + it.value().dump() + "\n";
    md += "\n";
  }
  if (summary.empty()) throw Error(ErrorKind::InvalidArgument, "no payloads in " + out.string());
  write_json(out / "summary.json", summary);
  write_atomic(out / "summary.md", md);
  return kOk;
}

}  // namespace padyn::cli
