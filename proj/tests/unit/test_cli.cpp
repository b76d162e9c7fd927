#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "offswitch/io.hpp"
#include "cli/commands.hpp"

using namespace offswitch;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result lab(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(OFFSWITCH_TEST_TMPDIR) + "/" + name; }

void write_file(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        std::vector<std::string> cells;
        std::istringstream cs(line);
        for (std::string cell; std::getline(cs, cell, ',');) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("search rule grammar") {
    CHECK(cli::parse_search_rule("eu").kind == SearchRule::Kind::ExpectedUtility);
    CHECK(*cli::parse_search_rule("reu:power:2").risk == RiskFunction::power(2));
    CHECK(cli::parse_search_rule("gamma-maximin").credal_members == 2);
    CHECK(cli::parse_search_rule("gamma-maximin:3").credal_members == 3);
    const auto f = cli::parse_search_rule("faulty:complement:0.5");
    CHECK(*f.updater == Updater::make_faulty(0.5, Misupdate::complement()));
    CHECK_THROWS(cli::parse_search_rule("reu:cubic"));
    CHECK_THROWS(cli::parse_search_rule("faulty:complement:1.5"));

    CHECK(cli::parse_count_range("3").min == 3);
    CHECK(cli::parse_count_range("2-5").max == 5);
    CHECK_THROWS(cli::parse_count_range("5-2"));
}

TEST_CASE("scenario tables") {
    auto r = lab({"scenario", "alice-basic"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("defer") != std::string::npos);
    CHECK(r.out.find("18") != std::string::npos);

    r = lab({"scenario", "alice-noisy"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("39.68") != std::string::npos);
    CHECK(r.out.find("0.01219512") != std::string::npos);

    CHECK(lab({"scenario", "nobody"}).code == cli::kUsageError);
    CHECK(lab({"frobnicate"}).code == cli::kUsageError);
    CHECK(lab({"--help"}).code == cli::kSuccess);
}

TEST_CASE("scenario JSON round-trips") {
    const auto r = lab({"scenario", "alice-noisy", "--epsilon", "0.5", "--json"});
    REQUIRE(r.code == cli::kSuccess);
    const auto j = io::parse_text(r.out);
    const auto report = io::parse_offswitch_report(j.at("report"));
    CHECK(report == best_option(UtilityDistribution::uniform(-10, 90), 0.5));
}

TEST_CASE("scenario files") {
    const auto good = tmp("scenario_ok.json");
    write_file(good, R"({"label":"mine","prior":{"kind":"discrete","atoms":[[10,0.5],[-4,0.5]]},"epsilon":0,
        "rule":{"kind":"risk-weighted","risk":{"kind":"power","k":2}}})");
    auto r = lab({"scenario", good, "--json"});
    REQUIRE(r.code == cli::kSuccess);
    const auto j = io::parse_text(r.out);
    CHECK(io::parse_offswitch_report(j.at("report")).eu_defer == doctest::Approx(5.0));
    CHECK(j.contains("voi"));

    const auto bad = tmp("scenario_bad.json");
    write_file(bad, R"({"label":"mine","prior":{"kind":"uniform","lo":0,"hi":1},"epsilon":0,"colour":"red"})");
    r = lab({"scenario", bad});
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("sweep") {
    const auto r = lab({"sweep", "alice-confident"});
    REQUIRE(r.code == cli::kSuccess);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 52);
    CHECK(rows[0] == std::vector<std::string>{"epsilon", "eu_act", "eu_defer", "eu_learn", "best"});
    double last_defer = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double eps = std::stod(rows[i][0]);
        const double defer = std::stod(rows[i][2]);
        CHECK(std::stod(rows[i][3]) >= defer - 1e-12);
        CHECK(rows[i][4] == (eps < 0.5 / 41 ? "defer" : "act"));
        if (i > 1) CHECK(defer < last_defer);
        last_defer = defer;
    }

    const auto path = tmp("sweep.csv");
    CHECK(lab({"sweep", "alice-basic", "--steps", "5", "--out", path}).code == cli::kSuccess);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(csv_rows(buf.str()).size() == 6);

    CHECK(lab({"sweep", "alice-basic", "--lo", "0.1", "--hi", "0.1"}).code == cli::kUsageError);
    CHECK(lab({"sweep", "alice-basic", "--hi", "1.5"}).code == cli::kUsageError);
}

TEST_CASE("check") {
    auto r = lab({"check", "good", "--trials", "500", "--seed", "7"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("violations=0") != std::string::npos);
    CHECK(lab({"check", "theorem1", "--trials", "500"}).code == cli::kSuccess);
    CHECK(lab({"check", "good", "--trials", "0"}).code == cli::kUsageError);
    CHECK(lab({"check", "pythagoras"}).code == cli::kUsageError);
}

TEST_CASE("search and witness replay") {
    auto r = lab({"search", "--rule", "eu"});
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.find("Good") != std::string::npos);
    CHECK(lab({"search", "--rule", "faulty:stay:0.5"}).code == cli::kUsageError);

    const auto path = tmp("witnesses.json");
    r = lab({"search", "--rule", "reu:power:2", "--trials", "2000", "--seed", "1", "--out", path});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(r.out.find("witnesses=") != std::string::npos);
    CHECK(lab({"verify-witness", path}).code == cli::kSuccess);

    // Tamper with a recorded value and the replay must notice.
    std::ifstream in(path);
    auto j = io::json::parse(in);
    REQUIRE(j.is_array());
    j[0]["voi"] = j[0]["voi"].get<double>() + 1.0;
    const auto tampered = tmp("witnesses_tampered.json");
    write_file(tampered, j.dump());
    CHECK(lab({"verify-witness", tampered}).code == cli::kCheckFailed);

    r = lab({"search", "--rule", "reu:power:2", "--trials", "3", "--states", "2", "--acts", "2", "--signals", "1"});
    CHECK(r.code == cli::kNoWitness);
}

TEST_CASE("report") {
    const auto r = lab({"report"});
    CHECK(r.code == cli::kSuccess);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("0.01219512") != std::string::npos);
}

TEST_CASE("repeated invocations are byte-identical") {
    const std::vector<std::vector<std::string>> commands = {
        {"scenario", "alice-noisy", "--json"},
        {"sweep", "alice-basic", "--steps", "7"},
        {"search", "--rule", "gamma-maximin:2", "--trials", "3000", "--seed", "4"},
        {"report"},
    };
    for (const auto& c : commands) {
        const auto a = lab(c);
        const auto b = lab(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        CHECK(a.err == b.err);
    }
}
