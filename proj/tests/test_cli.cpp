#include <doctest.h>

#include <sstream>

#include "lpv/cli.hpp"

using namespace lpv;
using namespace lpv::cli;

namespace {

const char* kLevel9Config = R"({
  "k": 2,
  "N": 9,
  "D0": [13, 5],
  "D": [28, 53, 88, 152, 161, 172],
  "mode": "table",
  "points": ["1", "1/2", "4/5", "0"],
  "format": "csv"
})";

std::pair<int, std::string> run_to_string(const JobConfig& cfg) {
    std::ostringstream out, err;
    int rc = run_job(cfg, out, err);
    return {rc, out.str()};
}

}  // namespace

TEST_CASE("rational rendering and parsing round-trip") {
    CHECK(render_rational(parse_rational("-25/343")) == "-25/343");
    CHECK(render_rational(parse_rational("0")) == "0");
    CHECK(render_rational(parse_rational("17272/25")) == "17272/25");
    CHECK(render_rational(rational(4, 2)) == "2");      // integers drop the /1
    CHECK(parse_rational("6/4") == rational(3, 2));     // canonicalized
    CHECK(parse_rational("-6/4") == rational(-3, 2));
    for (const char* bad : {"", "-", "1/0", "1//2", "a", "1/ 2", "2.5", "+3"})
        CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
}

TEST_CASE("config parsing and D0 auto-selection") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    CHECK(cfg.k == 2);
    CHECK(cfg.N == 9);
    CHECK(cfg.d0_auto.size() == 2);
    CHECK(cfg.discriminants.size() == 6);
    CHECK(cfg.points.size() == 4);
    CHECK(cfg.mode == "table");

    // (D|3) = 1 -> 13, (D|3) = -1 -> 5
    CHECK(*select_d0(cfg, 28) == 13);
    CHECK(*select_d0(cfg, 53) == 5);
    CHECK(*select_d0(cfg, 88) == 13);
    CHECK(*select_d0(cfg, 152) == 5);
    CHECK(*select_d0(cfg, 161) == 5);
    CHECK(*select_d0(cfg, 172) == 13);

    JobConfig explicit_d0 = cfg;
    explicit_d0.d0_explicit = Integer(13);
    CHECK(*select_d0(explicit_d0, 53) == 13);  // explicit overrides

    JobConfig none = cfg;
    none.d0_auto = {Integer(5)};
    CHECK_FALSE(select_d0(none, 28).has_value());
}

TEST_CASE("table mode reproduces the level-9 reference table as csv") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    const std::string expected =
        "D,1,1/2,4/5,0\n"
        "28,0,12,96/25,0\n"
        "53,0,-3/2,-12/25,0\n"
        "88,0,-12,-96/25,0\n"
        "152,0,24,192/25,0\n"
        "161,0,21,168/25,0\n"
        "172,0,0,0,0\n";
    CHECK(out == expected);
}

TEST_CASE("text and json renderings carry identical values") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    cfg.discriminants = {Integer(28)};
    cfg.format = "text";
    auto [rc1, text] = run_to_string(cfg);
    CHECK(rc1 == 0);
    CHECK(text.find("12") != std::string::npos);
    CHECK(text.find("96/25") != std::string::npos);

    cfg.format = "json";
    auto [rc2, js] = run_to_string(cfg);
    CHECK(rc2 == 0);
    CHECK(js.find("\"1/2\": \"12\"") != std::string::npos);
    CHECK(js.find("\"4/5\": \"96/25\"") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    cfg.discriminants = {Integer(88), Integer(172)};
    auto [rc1, a] = run_to_string(cfg);
    auto [rc2, b] = run_to_string(cfg);
    CHECK(rc1 == 0);
    CHECK(rc2 == 0);
    CHECK(a == b);
}

TEST_CASE("empty candidate list is a successful empty table") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    cfg.discriminants.clear();
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    CHECK(out == "D,1,1/2,4/5,0\n");
}

TEST_CASE("denominator budget is enforced") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    cfg.points = {parse_rational("1/20011")};
    cfg.max_denominator = 1000;
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 2);
    cfg.force = true;
    cfg.discriminants = {Integer(28)};
    // forcing works (slowly); shrink the job to keep the test snappy
    cfg.points = {parse_rational("1/101")};
    auto [rc2, out2] = run_to_string(cfg);
    CHECK(rc2 == 0);
}

TEST_CASE("skipped rows carry reasons") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    cfg.discriminants = {Integer(12), Integer(28)};  // gcd(12, 9) > 1
    cfg.format = "json";
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    CHECK(out.find("skipped") != std::string::npos);
    CHECK(out.find("28") != std::string::npos);
}

TEST_CASE("decide mode emits verdicts") {
    JobConfig cfg = parse_config_text(kLevel9Config);
    cfg.mode = "decide";
    cfg.format = "csv";
    cfg.discriminants = {Integer(28), Integer(172)};
    cfg.threads = 2;
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    CHECK(out.find("28,NONVANISHING") != std::string::npos);
    CHECK(out.find("172,VANISHING") != std::string::npos);
}

TEST_CASE("zagier mode reports reference values") {
    JobConfig cfg;
    cfg.mode = "zagier";
    cfg.N = 9;
    cfg.zagier_delta = 2236;
    cfg.points = {parse_rational("0"), parse_rational("1/2"), parse_rational("1/5")};
    cfg.format = "csv";
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    CHECK(out == "x,p\n0,696\n1/2,680\n1/5,17272/25\n");
}

TEST_CASE("level-25 row with the lifted operator through the cli") {
    JobConfig cfg = parse_config_text(R"({
      "k": 2, "N": 25, "D0": [21, 8], "D": [56],
      "hecke": [{"p": 7, "shift": 6}, {"p": 2, "shift": 4}],
      "mode": "table", "format": "csv", "threads": 2,
      "points": ["1", "1/4", "2/7"]
    })");
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    CHECK(out ==
          "D,1,1/4,2/7\n"
          "56,0,-25/343,-1160/16807\n");
}

TEST_CASE("range-filtered candidates report their rejection reasons") {
    JobConfig cfg = parse_config_text(R"({
      "k": 2, "N": 9, "D0": [13, 5],
      "D": {"from": 5, "to": 30},
      "mode": "table", "format": "json", "points": ["0", "1/2"]
    })");
    std::ostringstream out, err;
    int rc = run_job(cfg, out, err);
    CHECK(rc == 0);
    std::string js = out.str(), diag = err.str();
    // valid rows survive
    CHECK(js.find("\"D\": \"28\"") != std::string::npos);
    CHECK(js.find("\"D\": \"8\"") != std::string::npos);
    // rejected candidates are all named with a reason
    CHECK(diag.find("D=12") != std::string::npos);  // (12|3) = 0 matches no D0
    CHECK(diag.find("D=13") != std::string::npos);  // 13*13 is a square
    CHECK(js.find("square") != std::string::npos);
    CHECK(js.find("no D0 candidate") != std::string::npos);
}

TEST_CASE("eigenvalue assertions ride along in decide reports") {
    JobConfig cfg = parse_config_text(R"({
      "k": 2, "N": 9, "D0": 13, "D": [28], "mode": "decide",
      "format": "json",
      "al_assertion": "input eigenform has involution eigenvalue +1"
    })");
    auto [rc, out] = run_to_string(cfg);
    CHECK(rc == 0);
    CHECK(out.find("involution eigenvalue") != std::string::npos);
}

TEST_CASE("invalid configuration yields exit code 2") {
    CHECK_THROWS(parse_config_text("{not json"));
    {
        // a bad operator spec is a job-level validation failure
        JobConfig cfg = parse_config_text(kLevel9Config);
        cfg.hecke = {{3, 1}};  // 3 divides the level
        std::ostringstream out, err;
        CHECK(run_job(cfg, out, err) == 2);
    }
    JobConfig cfg;
    cfg.mode = "zagier";
    cfg.N = 9;
    cfg.zagier_delta = 0;
    std::ostringstream out, err;
    CHECK(run_job(cfg, out, err) == 2);

    JobConfig bad;
    bad.mode = "no-such-mode";
    CHECK(run_job(bad, out, err) == 2);
}
