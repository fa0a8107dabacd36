#include "config.hpp"
#include "doctest.h"

using namespace padyn;
using namespace padyn::cli;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  auto c = parse_config("field: {p: 3, precision: 40}\nmap: {num: [0, -1/3, 0, 1/3]}\nseed: 7\nout: x\n");
  REQUIRE(c.field.has_value());
  CHECK(c.field->p == 3);
  CHECK(c.field->precision == 40);
  REQUIRE(c.map.has_value());
  CHECK(c.map->num.size() == 4);
  CHECK(c.map->num[1] == Q(-1, 3));
  CHECK(c.map->den == std::vector<Q>{Q(1)});
  CHECK(c.seed == 7);
  CHECK(c.out == "x");
  CHECK(c.stats.n == 1000);
  CHECK(c.code.depth == 10);
}

TEST_CASE("config rejects bad input") {
  CHECK(kind_of("field: {p: 2}\nbogus: 1\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("field: {p: 2, prec: 10}\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("map: {num: [1, 2]}\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("field: {p: 2}\nmap: {num: [1, x]}\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("seed: -3\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("stats: {n: 10, lag_cap: 10}\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("stats: {observable: {kind: spline}}\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("field: [1, 2\n") == ErrorKind::ConfigParse);
  CHECK(kind_of("- 1\n- 2\n") == ErrorKind::ConfigParse);
  CHECK_THROWS_AS(load_config("/nonexistent/job.yaml"), Error);
}

TEST_CASE("observables from specs") {
  ObservableSpec s;
  s.kind = "indicator";
  s.symbol = 1;
  s.center = true;
  auto g = make_observable(s, 2);
  CHECK(g.values == std::vector<double>{-0.5, 0.5});
  s.symbol = 2;
  CHECK_THROWS_AS(make_observable(s, 2), Error);
  ObservableSpec t{"table", 0, 2, {Q(0), Q(0), Q(0), Q(1)}, false};
  CHECK(make_observable(t, 2).values == std::vector<double>{0, 0, 0, 1});
  t.table.pop_back();
  CHECK_THROWS_AS(make_observable(t, 2), Error);
}
