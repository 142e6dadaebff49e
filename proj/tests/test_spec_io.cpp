#include <doctest.h>

#include <cmath>
#include <sstream>

#include "convtail/analysis.hpp"
#include "convtail/spec_io.hpp"

using namespace convtail;

TEST_CASE("distribution specs parse, serialize, and round-trip losslessly") {
  const Distribution p = distribution_from_json_text(
      R"({"kind":"parametric","family":"pareto","params":[2.0]})");
  CHECK(p.family() == Family::Pareto);

  const Distribution a = distribution_from_json_text(
      R"({"kind":"atomic","points":[0.5,1.5],"log_masses":[-0.6931471805599453,-0.6931471805599453]})");
  CHECK(a.points().size() == 2);

  const Distribution g = distribution_from_json_text(
      R"({"kind":"grid","dx":0.25,"log_tail":[0,-0.25,-0.5,-0.75]})");
  CHECK(g.grid_dx() == 0.25);

  const Distribution c = distribution_from_json_text(
      R"({"kind":"counterexample","variant":1,"gamma_hat":0.001,"n_atoms":8})");
  CHECK(c.points().size() == 8);

  // write-then-read reproduces tails exactly at sample points
  for (const Distribution* d : {&p, &a, &g, &c}) {
    const Distribution back = distribution_from_json_text(distribution_to_json_text(*d));
    const double hi = std::min(d->max_x(), 500.0);
    for (double x : {0.0, hi * 0.3, hi * 0.99})
      CHECK(back.log_tail(x) == d->log_tail(x));
  }

  // malformed specs fail with a message naming the offending field
  try {
    distribution_from_json_text(R"({"kind":"parametric"})");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("missing field") != std::string::npos);
  }
  try {
    distribution_from_json_text(R"({"kind":"wat"})");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("kind") != std::string::npos);
  }
  CHECK_THROWS_AS(distribution_from_json_text("not json"), std::invalid_argument);
}

TEST_CASE("curve CSV carries the documented header and round-trip numbers") {
  const RatioCurve c = ratio_curve(make_parametric("exponential", {1.0}), 10.0, 16);
  const std::string csv = curve_to_csv(c);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,log_tail_base,log_tail_conv,bracket,ratio,running_min");
  std::string row;
  std::getline(in, row);
  // first column re-parses to the exact stored double
  const double x0 = std::stod(row.substr(0, row.find(',')));
  CHECK(x0 == c.xs[0]);
  size_t rows = 1;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == c.xs.size());
}

TEST_CASE("report and verdict serialization") {
  const ConsistencyReport r = theorem_consistency(make_parametric("pareto", {2.0}), 200.0);
  const std::string j = report_to_json_text(r, 0);
  CHECK(j.find("\"contradiction\": false") != std::string::npos);
  CHECK(j.find("\"liminf_proxy\"") != std::string::npos);
  CHECK(j.find("\"condition2\"") != std::string::npos);
  CHECK(j.find("\"horizon\"") != std::string::npos);

  const ClassVerdict v = is_long_tailed(make_parametric("pareto", {2.0}), 200.0);
  const std::string vj = verdict_to_json_text(v);
  CHECK(vj.find("\"class\": \"L\"") != std::string::npos);
  CHECK(vj.find("\"satisfied\"") != std::string::npos);
}
