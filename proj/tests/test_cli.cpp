#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lra/cli.hpp"
#include "lra/fixtures.hpp"

using namespace lra;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "lra");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("lra_test_" + name);
}

} // namespace

TEST_CASE("solve the toy problem") {
    const auto r = run({"solve", "toy", "--at", "0.5", "--T", "4,16"});
    REQUIRE(r.code == 0);
    const auto doc = Json::parse(r.out);
    CHECK(doc["d_star"]["value"].get<double>() == doctest::Approx(-0.5));
    CHECK(doc["k_star"]["value"].get<double>() == doctest::Approx(-0.5));
    CHECK(doc["v_per"]["value"].get<double>() == doctest::Approx(-0.5));
    CHECK(doc["V_T"][0]["T"] == 4);
    CHECK(doc["V_T"][0]["value"].get<double>() == doctest::Approx(-0.25));
    for (const auto& link : doc["chain"]) {
        CHECK(link["lower_holds"].get<bool>());
        CHECK(link["upper_holds"].get<bool>());
    }
    CHECK(doc["feedback"]["labels"].size() == 21);
    CHECK_FALSE(doc["k_star"]["cap_active"].get<bool>());
}

TEST_CASE("solve the constant and three-state problems") {
    auto doc = Json::parse(run({"solve", "constant", "--states", "4", "--cost", "1.5"}).out);
    for (const char* key : {"d_star", "k_star", "v_per"})
        CHECK(doc[key]["value"].get<double>() == doctest::Approx(1.5));
    for (const auto& v : doc["V_T"])
        CHECK(v["value"].get<double>() == doctest::Approx(1.5));
    for (const auto& v : doc["h_alpha"])
        CHECK(v["value"].get<double>() == doctest::Approx(1.5));

    doc = Json::parse(run({"solve", "threestate", "--y0", "0"}).out);
    CHECK(doc["k_star"]["value"].get<double>() == doctest::Approx(2.0));
    doc = Json::parse(run({"solve", "threestate", "--y0", "2"}).out);
    CHECK(doc["k_star"]["value"].get<double>() == doctest::Approx(4.0));
    CHECK(doc["v_per"]["value"].get<double>() == doctest::Approx(4.0));
}

TEST_CASE("solve in CSV form") {
    const auto r = run({"solve", "threestate", "--format", "csv", "--T", "10"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"quantity", "param", "value"});
    CHECK(rows[1][0] == "V_T");
}

TEST_CASE("horizon sweep on the toy problem") {
    const auto r = run({"sweep", "toy", "--at", "0.5", "--T", "2,4,8,16,32,64,128,256,512,1024"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[0] ==
          std::vector<std::string>{"param_name", "param", "value", "gap_to_dstar", "rho_to_W"});
    REQUIRE(rows.size() == 11);
    double T = 2;
    for (std::size_t i = 1; i < rows.size(); ++i, T *= 2) {
        CHECK(rows[i][0] == "T");
        CHECK(std::stod(rows[i][1]) == T);
        CHECK(std::stod(rows[i][2]) + 0.5 == doctest::Approx(1.0 / T).epsilon(1e-12));
        CHECK(std::stod(rows[i][3]) == doctest::Approx(1.0 / T).epsilon(1e-9));
        CHECK(std::stod(rows[i][4]) >= 0.0);
    }
}

TEST_CASE("perturbation and discount sweeps") {
    auto rows = parse_csv(run({"sweep", "random", "--states", "10", "--seed", "3", "--theta",
                               "0,0.05,0.1,0.5,1,2"})
                              .out);
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][2]) >= std::stod(rows[i - 1][2]) - 1e-9);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][4]) <= 1e-9); // optimizers lie in W

    rows = parse_csv(run({"sweep", "threestate", "--y0", "0", "--alpha", "0.9,0.99,0.999"}).out);
    REQUIRE(rows.size() == 4);
    double prev = 1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double gap = std::abs(std::stod(rows[i][2]) - 2.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("sweep requires exactly one parameter list") {
    CHECK(run({"sweep", "toy"}).code == 2);
    CHECK(run({"sweep", "toy", "--T", "2", "--alpha", "0.5"}).code == 2);
}

TEST_CASE("verify passes on the fixtures") {
    auto r = run({"verify", "toy", "--at", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(run({"verify", "threestate", "--all-states"}).code == 0);
    CHECK(run({"verify", "random", "--states", "12", "--actions", "3", "--seed", "5",
               "--all-states"})
              .code == 0);
    r = run({"verify", "toy", "--format", "json"});
    CHECK(Json::parse(r.out).is_array());
}

TEST_CASE("viability violations exit with status 1") {
    auto doc = problem_to_json(three_state_problem());
    // drop state 2's only transition and cost
    auto drop = [](Json& list) {
        Json kept = Json::array();
        for (const auto& e : list)
            if (e[0] != 2)
                kept.push_back(e);
        list = kept;
    };
    drop(doc["transitions"]);
    drop(doc["costs"]);
    const auto path = temp_file("nonviable.json");
    std::ofstream(path) << doc.dump();
    const auto r = run({"verify", path.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("viability") != std::string::npos);
    CHECK(run({"solve", path.string()}).code == 1);
    std::filesystem::remove(path);
}

TEST_CASE("usage and schema errors exit with status 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"solve"}).code == 2);
    CHECK(run({"solve", "no-such-problem.json"}).code == 2);
    CHECK(run({"solve", "toy", "--y0", "99"}).code == 2);
    CHECK(run({"solve", "toy", "--at", "0.55"}).code == 2);
    CHECK(run({"solve", "toy", "--format", "xml"}).code == 2);

    const auto path = temp_file("bad.json");
    std::ofstream(path) << R"({"states": [[0]], "actions": ["a"], "transitions": [[0,0,0]], "costs": []})";
    const auto r = run({"solve", path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("schema") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("output is deterministic and can go to a file") {
    const std::vector<std::string> args{"solve", "random", "--states", "9", "--seed", "17"};
    CHECK(run(args).out == run(args).out);

    const auto path = temp_file("out.csv");
    const auto r = run({"sweep", "toy", "--T", "2,4", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "param_name,param,value,gap_to_dstar,rho_to_W");
    std::filesystem::remove(path);
}

TEST_CASE("problem files load like built-ins") {
    const auto path = temp_file("three.json");
    std::ofstream(path) << problem_to_json(three_state_problem()).dump();
    const auto a = Json::parse(run({"solve", path.string(), "--y0", "1"}).out);
    const auto b = Json::parse(run({"solve", "threestate", "--y0", "1"}).out);
    CHECK(a["k_star"]["value"] == b["k_star"]["value"]);
    CHECK(a["V_T"] == b["V_T"]);
    std::filesystem::remove(path);
}
