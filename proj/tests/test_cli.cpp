#include "oqc/cli.hpp"
#include "oqc/errors.hpp"
#include "oqc/run_config.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace oqc::cli;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::string temp_file(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/oqc_test_" + name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("backhaul outage as JSON") {
    const auto r = run({"outage", "backhaul", "--scenario", "II", "--mu-bar-pkts", "1000", "--eta", "100",
                        "--arrival", "poisson", "--deadline", "0.003"});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["p_e"].get<double>() == doctest::Approx(0.1244).epsilon(1e-3));
    CHECK(j["lower_bound"].get<double>() <= j["p_e"].get<double>());
    CHECK(j["inputs"]["servers"] == 1);

    const auto d = run({"outage", "backhaul", "--scenario", "II", "--mu-bar-pkts", "1000", "--eta", "100",
                        "--arrival", "deterministic", "--deadline", "0.003"});
    REQUIRE(d.code == kExitOk);
    CHECK(json::parse(d.out)["p_e"].get<double>() == doctest::Approx(0.0498).epsilon(1e-3));
}

TEST_CASE("wireless outage as JSON") {
    const auto r = run({"outage", "wireless", "--tier", "1", "--eta", "100", "--arrival", "poisson",
                        "--deadline-ratio", "0.3", "--bandwidth", "50000"});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["inputs"]["deadline_s"].get<double>() == doctest::Approx(0.003));
    CHECK(j["lower_bound"].get<double>() <= j["p_e"].get<double>());
    CHECK(j["p_e"].get<double>() <= j["upper_bound"].get<double>());
    CHECK(j["inputs"]["hcn"]["tiers"].size() == 3);
}

TEST_CASE("design outputs") {
    const auto w = run({"design", "wireless", "--alpha", "4", "--eta", "1000", "--arrival", "deterministic",
                        "--target-pe", "0.1", "--deadline", "0.001", "--refine"});
    REQUIRE(w.code == kExitOk);
    const auto jw = json::parse(w.out);
    CHECK(jw["min_bandwidth_hz"].get<double>() == doctest::Approx(51255.7).epsilon(1e-5));
    CHECK(jw["deterministic_exact_hz"].get<double>() == doctest::Approx(190627.5).epsilon(1e-5));

    const auto b = run({"design", "backhaul", "--N", "3", "--eta", "100", "--arrival", "poisson", "--target-pe",
                        "0.1", "--deadline", "0.003"});
    REQUIRE(b.code == kExitOk);
    const auto jb = json::parse(b.out);
    CHECK(jb["status"] == "feasible");
    CHECK(jb["mean_rate_bps"].get<double>() >= jb["deadline_bound_bps"].get<double>());
    CHECK(jb["mean_rate_bps"].get<double>() >= jb["outdating_bound_bps"].get<double>());

    // The rate is a necessary bound: any slower backhaul misses the target.
    const auto slower = run({"outage", "backhaul", "--N", "3", "--mu-bar-bps",
                             std::to_string(0.99 * jb["mean_rate_bps"].get<double>()), "--eta", "100", "--arrival",
                             "poisson", "--deadline", "0.003"});
    REQUIRE(slower.code == kExitOk);
    CHECK(json::parse(slower.out)["p_e"].get<double>() > 0.1);

    // Deterministic arrivals on equal rates achieve the deadline bound exactly.
    const auto det = run({"design", "backhaul", "--N", "3", "--eta", "100", "--arrival", "deterministic",
                          "--target-pe", "0.1", "--deadline", "0.003"});
    REQUIRE(det.code == kExitOk);
    const double rate = json::parse(det.out)["mean_rate_bps"].get<double>();
    std::ostringstream rs;
    rs.precision(17);
    rs << rate;
    const auto back = run({"outage", "backhaul", "--N", "3", "--mu-bar-bps", rs.str(), "--eta", "100", "--arrival",
                           "deterministic", "--deadline", "0.003"});
    REQUIRE(back.code == kExitOk);
    CHECK(json::parse(back.out)["p_e"].get<double>() == doctest::Approx(0.1).epsilon(1e-6));

    CHECK(run({"design", "wireless", "--eta", "1000", "--target-pe", "0.1"}).code == kExitUsage);
}

TEST_CASE("figure 4 CSV") {
    const auto r = run({"figure", "4"});
    REQUIRE(r.code == kExitOk);
    const auto ls = lines(r.out);
    CHECK(ls.front() == oqc::scenarios::kCsvHeader);
    CHECK(ls.size() == 1 + 3 * 41);
    int legacy = 0;
    for (const auto& l : ls) legacy += l.find(",legacy,") != std::string::npos;
    CHECK(legacy == 41);
}

TEST_CASE("sweep over bandwidth") {
    const auto r = run({"sweep", "--param", "W", "--from", "1e4", "--to", "1e6", "--points", "5", "--log",
                        "--channel", "wireless"});
    REQUIRE(r.code == kExitOk);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 6);
    CHECK(ls[1].rfind("10000,", 0) == 0);
    CHECK(ls[5].rfind("1000000,", 0) == 0);
}

TEST_CASE("CSV to a file") {
    const std::string path = "/tmp/oqc_test_fig.csv";
    std::remove(path.c_str());
    const auto r = run({"figure", "2", "--points", "4", "--output", path});
    REQUIRE(r.code == kExitOk);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == oqc::scenarios::kCsvHeader);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"outage", "foo"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"figure", "9"}).code == kExitUsage);
    CHECK(run({"outage", "backhaul", "--eta", "-1"}).code == kExitUsage);
    CHECK(run({"outage", "backhaul", "--arrival", "bursty"}).code == kExitUsage);
    CHECK(run({"outage", "wireless", "--tier", "4", "--bandwidth", "5e4"}).code == kExitUsage);
    const auto e = run({"outage", "backhaul", "--no-such-flag"});
    CHECK(e.code == kExitUsage);
    CHECK_FALSE(e.err.empty());
    CHECK(e.out.empty());
}

TEST_CASE("help exits with 0") {
    const auto r = run({"--help"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("outage") != std::string::npos);
}

TEST_CASE("config files") {
    const auto good = temp_file("good.json", R"({"backhaul": {"scenario": "II", "mu_bar_bps": 30000},
        "overhead": {"B_bits": 30, "arrival": {"eta_per_s": 100, "kind": "poisson"}},
        "deadline": {"seconds": 0.003}})");
    const auto r = run({"outage", "backhaul", "--config", good});
    REQUIRE(r.code == kExitOk);
    CHECK(json::parse(r.out)["p_e"].get<double>() == doctest::Approx(0.1244).epsilon(1e-3));

    CHECK(run({"outage", "backhaul", "--config", temp_file("bad.json", R"({"bogus": 1})")}).code == kExitUsage);
    CHECK(run({"outage", "backhaul", "--config", temp_file("nested.json", R"({"overhead": {"B_bit": 30}})")}).code ==
          kExitUsage);
    CHECK(run({"outage", "backhaul", "--config", temp_file("syntax.json", "{")}).code == kExitUsage);
    CHECK(run({"outage", "backhaul", "--config", "/tmp/oqc_test_missing.json"}).code == kExitUsage);
    CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"mc": {"samples": 10}})")), oqc::ConfigError);
}

TEST_CASE("config round trip") {
    const auto cfg = RunConfig::from_json(json::parse(R"({"backhaul": {"rates_bps": [30000, 45000]},
        "overhead": {"B_bits": 30, "arrival": {"eta_per_s": 50, "kind": "gamma", "shape": 4}},
        "deadline": {"ratio": 0.5}})"));
    const auto again = RunConfig::from_json(cfg.to_json());
    REQUIRE(again.rates_bps.has_value());
    CHECK(again.rates_bps->size() == 2);
    CHECK(again.arrival_kind == "gamma");
    CHECK(again.arrival_shape == 4.0);
    CHECK(again.deadline_ratio == 0.5);
}

TEST_CASE("simulate reports the analytic value next to the estimate") {
    const auto r = run({"simulate", "backhaul", "--scenario", "II", "--mu-bar-pkts", "1000", "--eta", "100",
                        "--arrival", "poisson", "--deadline", "0.003", "--samples", "20000", "--seed", "3"});
    REQUIRE(r.code == kExitOk);
    const auto j = json::parse(r.out);
    CHECK(j["mc"]["n"] == 20000);
    CHECK(j["analytic"].get<double>() == doctest::Approx(0.1244).epsilon(1e-3));
    CHECK(j["contains_analytic"].get<bool>());
}
