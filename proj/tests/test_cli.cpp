#include <doctest.h>

#include <cstdlib>
#include <json.hpp>
#include <random>
#include <sstream>

#include "hsg/config.hpp"
#include "hsg/errors.hpp"
#include "hsg/table.hpp"
#include "hsg/verify.hpp"

using namespace hsg;

TEST_CASE("shortest double formatting round-trips") {
  std::mt19937_64 rng(91);
  for (int i = 0; i < 2000; ++i) {
    double x;
    if (i % 3 == 0) {
      x = std::ldexp(static_cast<double>(rng()) - 9.2e18, static_cast<int>(rng() % 64) - 32);
    } else {
      x = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * 1e3 - 500.0;
    }
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0 / 0.0) == "inf");
  CHECK(format_double(-1.0 / 0.0) == "-inf");
}

TEST_CASE("csv writer escapes and terminates rows with LF") {
  Table t({"name", "value"});
  t.add_row({std::string("plain"), 1.5});
  t.add_row({std::string("with,comma \"quoted\""), std::optional<double>{}});
  const std::string out = t.to_string(TableFormat::Csv);
  CHECK(out == "name,value\nplain,1.5\n\"with,comma \"\"quoted\"\"\",\n");
  CHECK_THROWS_AS(t.add_row({std::string("too"), 1.0, 2.0}), DomainError);
}

TEST_CASE("jsonl rows parse as json with the header keys") {
  Table t({"word", "kappa", "flag", "opt"});
  t.add_row({std::string("123"), 1.0 / 3.0, true, std::optional<double>{0.25}});
  t.add_row({std::string(""), 0.5, false, std::optional<double>{}});
  std::istringstream lines(t.to_string(TableFormat::Jsonl));
  std::string line;
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto obj = nlohmann::json::parse(line);
    ++rows;
    CHECK(obj.contains("word"));
    CHECK(obj.contains("kappa"));
    CHECK(obj.contains("flag"));
    if (rows == 1) {
      CHECK(obj["kappa"].get<double>() == 1.0 / 3.0);
      CHECK(obj["flag"].get<bool>() == true);
      CHECK(obj["opt"].get<double>() == 0.25);
    } else {
      CHECK(obj["opt"].is_null());
    }
  }
  CHECK(rows == 2);
}

TEST_CASE("table emission is reproducible") {
  const auto make = [] {
    Table t({"a", "b"});
    for (int i = 0; i < 100; ++i) {
      t.add_row({static_cast<std::int64_t>(i), std::sqrt(static_cast<double>(i))});
    }
    return t.to_string(TableFormat::Csv);
  };
  CHECK(make() == make());
}

TEST_CASE("config validation names the offending field") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  RunConfig bad = cfg;
  bad.depth = 25;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("depth"), ConfigError);
  bad = cfg;
  bad.samples = 0;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("samples"), ConfigError);
  bad = cfg;
  bad.theta_grid = {0.1, 0.2};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("theta"), ConfigError);
  bad = cfg;
  bad.theta_grid = {0.1, -0.2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.format = "xml";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.norm_c = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.word = "124";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("eigenvalue checks pass and fault injection trips the beta check") {
  VerifyOverrides clean;
  clean.name_filter = {"c01_eigenvalue"};
  const VerifySummary good = run_verify(1, clean);
  REQUIRE(good.checks.size() == 4);
  CHECK(good.all_pass());

  VerifyOverrides broken = clean;
  broken.beta_override = 0.61;
  const VerifySummary bad = run_verify(1, broken);
  CHECK(!bad.all_pass());
  bool beta_failed = false;
  for (const CheckResult& r : bad.checks) {
    if (r.name.find("beta") != std::string::npos) beta_failed = !r.pass;
  }
  CHECK(beta_failed);
}

TEST_CASE("verify table excludes wall-clock rows unless asked") {
  VerifyOverrides filter;
  filter.name_filter = {"c01_eigenvalue"};
  const VerifySummary summary = run_verify(1, filter);
  const Table stable = verify_table(summary, false);
  const Table full = verify_table(summary, true);
  CHECK(full.rows() == stable.rows() + 1);
  CHECK(stable.header() ==
        std::vector<std::string>{"check_name", "status", "measured", "threshold"});
}
