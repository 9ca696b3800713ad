#include <string>

#include "confext/cli.hpp"
#include "doctest.h"

using namespace confext::cli;

namespace {

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("configuration errors") {
  RunConfig c = config("verify-thm1");
  c.a = 1.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.a = -1.0;  // a = 2 - n is the endpoint, not admitted here
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.a = 0.995;
  CHECK(validate(c).size() == 1);

  RunConfig s = config("sweep");
  s.a_min = 0.5;
  s.a_max = 0.1;
  s.a_step = 0.1;
  CHECK_THROWS_AS(validate(s), ConfigError);
  s.a_max = 0.6;
  CHECK_NOTHROW(validate(s));
  s.a = 0.2;
  CHECK_THROWS_AS(validate(s), ConfigError);

  RunConfig f = config("verify-carleman");
  f.format = "csv";
  CHECK_THROWS_AS(validate(f), ConfigError);
  f.format = "json";
  f.n = 3;
  CHECK_THROWS_AS(validate(f), ConfigError);
  f.n.reset();
  f.resolution = 2;
  CHECK_THROWS_AS(validate(f), ConfigError);

  RunConfig t = config("verify-thm1");
  CHECK_THROWS_AS(add_tolerance_override(t, "nonsense=1"), ConfigError);
  CHECK_THROWS_AS(add_tolerance_override(t, "saturation=abc"), ConfigError);
  add_tolerance_override(t, "saturation=2e-3");
  CHECK(t.tolerances.at("saturation") == 2e-3);
}

TEST_CASE("reports are deterministic apart from timing") {
  RunConfig c = config("verify-carleman");
  c.samples = 5;
  const Report a = run(c);
  const Report b = run(c);
  CHECK(a.exit_code() == 0);
  CHECK(a.json(false) == b.json(false));
  CHECK(a.json(false).find("timing") == std::string::npos);
  CHECK(a.json(true).find("wall_time_s") != std::string::npos);
}

TEST_CASE("a failing check sets exit code 1") {
  RunConfig c = config("verify-carleman");
  c.samples = 0;
  add_tolerance_override(c, "carleman_equality=1e-300");
  const Report r = run(c);
  CHECK(r.failed() >= 1);
  CHECK(r.exit_code() == 1);
}

TEST_CASE("exit code precedence") {
  Report r;
  r.records.resize(2);
  CHECK(r.exit_code() == 0);
  r.records[0].status = Status::error;
  CHECK(r.exit_code() == 2);
  r.records[1].status = Status::fail;
  CHECK(r.exit_code() == 1);
}

TEST_CASE("sweep csv") {
  RunConfig c = config("sweep");
  c.n = 2;
  c.a_min = 0.25;
  c.a_max = 0.75;
  c.a_step = 0.25;
  c.format = "csv";
  const Report r = run(c);
  CHECK(r.exit_code() == 0);
  const std::string csv = r.csv();
  CHECK(csv.rfind("n,a,S,error\n", 0) == 0);
  CHECK(r.table.size() == 3);
}

}
