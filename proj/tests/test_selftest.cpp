#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>

#include "chfs/selftest.hpp"

using namespace chfs::selftest;

// The individual properties are exercised at full sample counts by the
// acceptance binary; here the harness itself is under test, so a reduced
// sweep keeps the unit run fast.
static Options reduced() {
  Options o;
  o.z_samples = 500;
  o.field_tau_pairs = 10;
  o.random_fields = 20;
  o.oracle_fields = 5;
  return o;
}

TEST_CASE("selftest harness") {
  std::vector<CheckResult> results = run_all(reduced());

  SECTION("all checks pass") {
    for (const CheckResult& r : results) {
      INFO(r.name << ": " << r.detail);
      CHECK(r.pass);
    }
    CHECK(failures(results) == 0);
  }

  SECTION("every suite contributes and names are unique") {
    std::set<std::string> names;
    std::set<std::string> prefixes;
    for (const CheckResult& r : results) {
      CHECK(names.insert(r.name).second);
      prefixes.insert(r.name.substr(0, r.name.find('/')));
    }
    std::set<std::string> expected = {"grid", "phi",     "ops", "energy",
                                      "stepper", "harness", "io"};
    CHECK(prefixes == expected);
    CHECK(results.size() >= 40);
  }

  SECTION("report format") {
    std::string text = format_results(results);
    CHECK(text.find("[PASS]") != std::string::npos);
    CHECK(text.find("checks passed") != std::string::npos);
    CHECK(text.find("[FAIL]") == std::string::npos);

    std::vector<CheckResult> bad = results;
    bad[0].pass = false;
    bad[0].detail = "synthetic failure";
    std::string bad_text = format_results(bad);
    CHECK(bad_text.find("[FAIL]") != std::string::npos);
    CHECK(bad_text.find("synthetic failure") != std::string::npos);
    CHECK(failures(bad) == 1);
  }
}
