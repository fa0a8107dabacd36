#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padyn/padic.hpp"
#include "padyn/shift.hpp"

namespace padyn::cli {

struct FieldSpec {
  long p = 2;
  std::vector<Q> poly;  // defining polynomial, low to high; empty for Q_p
  std::vector<Q> unramified, eisenstein;
  long precision = 64;
};

struct MapSpec {
  std::vector<Q> num;
  std::vector<Q> den{Q(1)};
};

struct AnalyzeParams {
  int budget = 64;
};

struct MetricParams {
  std::string lambda = "1";
  int samples = 1000;
  int sample_depth = 8;
  int wbar_per_disk = 3;
  int n_cap = 32;
  int distance_pairs = 0;
};

struct CodeParams {
  int depth = 10;
  int cover_levels = 10;
};

struct ObservableSpec {
  std::string kind = "indicator";  // indicator | table
  int symbol = 1;
  int m = 1;
  std::vector<Q> table;
  bool center = true;
};

struct LdParams {
  std::vector<double> t{-1, -0.5, 0.5, 1};
  int n = 16;
  long orbits = 100000;
};

struct StatsParams {
  int d = 2;
  int n = 1000;
  long orbits = 10000;
  int lag_cap = 20;
  double threshold = 0.02;
  ObservableSpec g;
  std::optional<ObservableSpec> chi;
  ObservableSpec potential{"table", 0, 1, {}, false};
  int decay_lags = 6;
  LdParams ld;
  int coboundary_memory = 3;
  int lil_checkpoints = 24;
  int histogram_bins = 40;
  int tree_depth = 8;
  int map_orbits = 64;
};

struct JobConfig {
  std::optional<FieldSpec> field;
  std::optional<MapSpec> map;
  AnalyzeParams analyze;
  MetricParams metric;
  CodeParams code;
  StatsParams stats;
  std::uint64_t seed = 42;
  std::string out = "out";
  std::string source;  // path it was read from
};

/// Reads and validates a config file; throws Error(ConfigParse).
JobConfig load_config(const std::string& path);
JobConfig parse_config(const std::string& text);

/// Table of the observable as an exact m-cylinder function on the d-shift.
Observable make_observable(const ObservableSpec& s, int d);

FieldPtr make_field(const FieldSpec& f);

}  // namespace padyn::cli
