#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace padyn::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigParse, msg); }

void only_keys(const YAML::Node& n, const std::string& where, std::set<std::string> allowed) {
  if (!n.IsMap()) fail(where + ": expected a section");
  for (auto it = n.begin(); it != n.end(); ++it) {
    auto k = it->first.as<std::string>();
    if (!allowed.count(k)) fail(where + ": unknown key '" + k + "'");
  }
}

std::string scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(key + ": expected a scalar");
  return n.Scalar();
}

long get_long(const YAML::Node& n, const std::string& key, long lo, long hi) {
  const std::string s = scalar(n, key);
  size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    fail(key + ": not an integer: '" + s + "'");
  }
  if (pos != s.size()) fail(key + ": not an integer: '" + s + "'");
  if (v < lo || v > hi) fail(key + " = " + s + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double get_double(const YAML::Node& n, const std::string& key, double lo, double hi) {
  const std::string s = scalar(n, key);
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(key + ": not a number: '" + s + "'");
  }
  if (pos != s.size()) fail(key + ": not a number: '" + s + "'");
  if (!(v >= lo && v <= hi)) fail(key + " = " + s + " out of range");
  return v;
}

bool get_bool(const YAML::Node& n, const std::string& key) {
  const std::string s = scalar(n, key);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(key + ": expected true or false");
}

std::vector<Q> get_rationals(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(key + ": expected a list of rationals");
  std::vector<Q> out;
  for (const auto& x : n) out.push_back(q_parse(scalar(x, key)));
  return out;
}

template <class T, class F>
void opt(const YAML::Node& sec, const char* key, T& dst, F get) {
  if (sec[key]) dst = get(sec[key], key);
}

ObservableSpec read_observable(const YAML::Node& n, const std::string& where) {
  only_keys(n, where, {"kind", "symbol", "m", "table", "center"});
  ObservableSpec s;
  if (n["kind"]) s.kind = scalar(n["kind"], where + ".kind");
  if (s.kind != "indicator" && s.kind != "table") fail(where + ".kind must be indicator or table");
  if (n["symbol"]) s.symbol = static_cast<int>(get_long(n["symbol"], where + ".symbol", 0, 63));
  if (n["m"]) s.m = static_cast<int>(get_long(n["m"], where + ".m", 1, 12));
  if (n["table"]) s.table = get_rationals(n["table"], where + ".table");
  if (n["center"]) s.center = get_bool(n["center"], where + ".center");
  if (s.kind == "table" && s.table.empty()) fail(where + ": table observable without a table");
  return s;
}

JobConfig from_yaml(const YAML::Node& root) {
  JobConfig c;
  if (!root.IsMap()) fail("top level must be a mapping");
  only_keys(root, "config", {"field", "map", "analyze", "metric", "code", "stats", "seed", "out"});
  if (root["seed"]) {
    const std::string s = scalar(root["seed"], "seed");
    try {
      size_t pos = 0;
      c.seed = std::stoull(s, &pos);
      if (pos != s.size() || s[0] == '-') throw std::invalid_argument(s);
    } catch (const std::exception&) {
      fail("seed: not a nonnegative integer: '" + s + "'");
    }
  }
  if (root["out"]) c.out = scalar(root["out"], "out");

  if (auto f = root["field"]) {
    only_keys(f, "field", {"p", "poly", "unramified", "eisenstein", "precision"});
    FieldSpec fs;
    if (!f["p"]) fail("field.p is required");
    fs.p = get_long(f["p"], "field.p", 2, 1000003);
    if (f["poly"]) fs.poly = get_rationals(f["poly"], "field.poly");
    if (f["unramified"]) fs.unramified = get_rationals(f["unramified"], "field.unramified");
    if (f["eisenstein"]) fs.eisenstein = get_rationals(f["eisenstein"], "field.eisenstein");
    if (!fs.poly.empty() && (!fs.unramified.empty() || !fs.eisenstein.empty()))
      fail("field: give either poly or unramified/eisenstein, not both");
    if (f["precision"]) fs.precision = get_long(f["precision"], "field.precision", 4, 4096);
    c.field = fs;
  }
  if (auto m = root["map"]) {
    only_keys(m, "map", {"num", "den"});
    MapSpec ms;
    if (!m["num"]) fail("map.num is required");
    ms.num = get_rationals(m["num"], "map.num");
    if (m["den"]) ms.den = get_rationals(m["den"], "map.den");
    if (ms.num.empty() || ms.den.empty()) fail("map: empty coefficient list");
    c.map = ms;
  }
  if (c.map && !c.field) fail("map given without a field");

  if (auto a = root["analyze"]) {
    only_keys(a, "analyze", {"budget"});
    opt(a, "budget", c.analyze.budget, [](auto& n, auto k) { return (int)get_long(n, k, 1, 100000); });
  }
  if (auto m = root["metric"]) {
    only_keys(m, "metric", {"lambda", "samples", "sample_depth", "wbar_per_disk", "n_cap", "distance_pairs"});
    if (m["lambda"]) c.metric.lambda = scalar(m["lambda"], "metric.lambda");
    auto in = [](long lo, long hi) { return [=](auto& n, auto k) { return (int)get_long(n, k, lo, hi); }; };
    opt(m, "samples", c.metric.samples, in(1, 1000000));
    opt(m, "sample_depth", c.metric.sample_depth, in(1, 64));
    opt(m, "wbar_per_disk", c.metric.wbar_per_disk, in(0, 64));
    opt(m, "n_cap", c.metric.n_cap, in(1, 256));
    opt(m, "distance_pairs", c.metric.distance_pairs, in(0, 100000));
  }
  if (auto m = root["code"]) {
    only_keys(m, "code", {"depth", "cover_levels"});
    auto in = [](long lo, long hi) { return [=](auto& n, auto k) { return (int)get_long(n, k, lo, hi); }; };
    opt(m, "depth", c.code.depth, in(1, 20));
    opt(m, "cover_levels", c.code.cover_levels, in(0, 20));
  }
  if (auto s = root["stats"]) {
    only_keys(s, "stats",
              {"d", "n", "orbits", "lag_cap", "threshold", "observable", "chi", "potential", "decay_lags",
               "large_deviations", "coboundary_memory", "lil_checkpoints", "histogram_bins", "tree_depth",
               "map_orbits"});
    auto& S = c.stats;
    auto in = [](long lo, long hi) { return [=](auto& n, auto k) { return (int)get_long(n, k, lo, hi); }; };
    opt(s, "d", S.d, in(2, 64));
    opt(s, "n", S.n, in(1, 100000000));
    if (s["orbits"]) S.orbits = get_long(s["orbits"], "stats.orbits", 1, 100000000);
    opt(s, "lag_cap", S.lag_cap, in(0, 100000));
    if (s["threshold"]) S.threshold = get_double(s["threshold"], "stats.threshold", 1e-9, 1);
    if (s["observable"]) S.g = read_observable(s["observable"], "stats.observable");
    if (s["chi"]) S.chi = read_observable(s["chi"], "stats.chi");
    if (s["potential"]) S.potential = read_observable(s["potential"], "stats.potential");
    opt(s, "decay_lags", S.decay_lags, in(1, 1000));
    if (auto ld = s["large_deviations"]) {
      only_keys(ld, "stats.large_deviations", {"t", "n", "orbits"});
      if (ld["t"]) {
        if (!ld["t"].IsSequence()) fail("stats.large_deviations.t: expected a list");
        S.ld.t.clear();
        for (const auto& x : ld["t"]) S.ld.t.push_back(get_double(x, "stats.large_deviations.t", -50, 50));
      }
      opt(ld, "n", S.ld.n, in(1, 100000));
      if (ld["orbits"]) S.ld.orbits = get_long(ld["orbits"], "stats.large_deviations.orbits", 1, 100000000);
    }
    opt(s, "coboundary_memory", S.coboundary_memory, in(0, 8));
    opt(s, "lil_checkpoints", S.lil_checkpoints, in(1, 1000));
    opt(s, "histogram_bins", S.histogram_bins, in(2, 1000));
    opt(s, "tree_depth", S.tree_depth, in(1, 16));
    opt(s, "map_orbits", S.map_orbits, in(0, 100000));
    if (S.lag_cap >= S.n) fail("stats.lag_cap must be < stats.n");
    if (S.decay_lags >= S.n) fail("stats.decay_lags must be < stats.n");
  }
  return c;
}

}  // namespace

JobConfig parse_config(const std::string& text) {
  try {
    return from_yaml(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    fail(std::string("syntax: ") + e.what());
  }
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  JobConfig c = parse_config(ss.str());
  c.source = path;
  return c;
}

Observable make_observable(const ObservableSpec& s, int d) {
  Observable g;
  if (s.kind == "indicator") {
    if (s.symbol >= d) fail("indicator symbol " + std::to_string(s.symbol) + " outside the alphabet");
    g = Observable::indicator(d, s.symbol);
  } else {
    std::uint64_t need = 1;
    for (int i = 0; i < s.m; ++i) need *= d;
    if (s.table.size() != need)
      fail("observable table has " + std::to_string(s.table.size()) + " entries, d^m = " + std::to_string(need));
    g = Observable::from_table(d, s.m, s.table);
  }
  return s.center ? g.centered_uniform() : g;
}

FieldPtr make_field(const FieldSpec& f) {
  if (!f.unramified.empty() || !f.eisenstein.empty())
    return field_create_tower(f.p, f.unramified, f.eisenstein, f.precision);
  return field_create(f.p, f.poly, f.precision);
}

}  // namespace padyn::cli
