#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "typent/cli.hpp"
#include "typent/errors.hpp"

using namespace typent;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
    const auto r = run(std::move(args));
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

// CSV rows "quantity,index,value" keyed by "quantity[index]".
std::map<std::string, std::string> csv_fields(const std::string& text) {
    std::map<std::string, std::string> fields;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // config
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const auto a = line.find(',');
        const auto b = line.find(',', a + 1);
        fields[line.substr(0, a) + "[" + line.substr(a + 1, b - a - 1) + "]"] = line.substr(b + 1);
    }
    return fields;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("typical: two by three") {
    const auto j = run_json({"typical", "--n", "2", "--m", "3"});
    CHECK(std::abs(j["spectrum"][0].get<double>() - 0.8535534) < 1e-7);
    CHECK(std::abs(j["spectrum"][1].get<double>() - 0.1464466) < 1e-7);
    CHECK(j["xi"] == 4.0);
    CHECK(j["purity_closed_form"] == 0.75);
    CHECK(j["purity_recomputed"].get<double>() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(j["trace_inverse_closed_form"] == 8.0);
    CHECK(j["oracle"]["max_abs_difference"].get<double>() < 1e-10);
    CHECK(j["config"]["command"] == "typical");
    CHECK(j["config"]["n"] == 2);
    CHECK(j["config"]["m"] == 3);
}

TEST_CASE("typical: trivial and boundary cases") {
    const auto one = run_json({"typical", "--n", "1", "--m", "5"});
    CHECK(one["spectrum"] == json::array({1.0}));
    CHECK(one["purity_closed_form"] == 1.0);

    const auto bal = run_json({"typical", "--n", "2", "--m", "2"});
    CHECK(bal["spectrum"] == json::array({1.0, 0.0}));
    CHECK_FALSE(bal.contains("trace_inverse_closed_form"));
    CHECK(bal["determinant"] == 0.0);

    CHECK(run({"typical", "--n", "3", "--m", "2"}).code == cli::kUsageError);
    CHECK(run({"typical", "--n", "0", "--m", "2"}).code == cli::kUsageError);
    CHECK(run({"typical", "--n", "2"}).code == cli::kUsageError);
    CHECK(run({"typical", "--n", "two", "--m", "3"}).code == cli::kUsageError);
    CHECK(run({"bogus"}).code == cli::kUsageError);
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("isopurity examples") {
    const auto j = run_json({"isopurity", "--n", "2", "--purity", "0.625"});
    CHECK(j["spectrum"][0].get<double>() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(j["spectrum"][1].get<double>() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(j["eta"].get<double>() == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(j["feasible"] == true);
    CHECK(j["threshold"]["beta_plus"] == 2.0);

    const auto edge = run_json({"isopurity", "--n", "64", "--beta", "2"});
    CHECK(edge["feasible"] == true);
    CHECK(edge["min_eigenvalue"].get<double>() * 64 < 0.15);

    CHECK(run({"isopurity", "--n", "2", "--purity", "0.5"}).code == cli::kInfeasible);
    CHECK(run({"isopurity", "--n", "8", "--beta", "0.5"}).code == cli::kInfeasible);
    CHECK(run({"isopurity", "--n", "2", "--purity", "0.6", "--beta", "1"}).code == cli::kUsageError);
    CHECK(run({"isopurity", "--n", "2"}).code == cli::kUsageError);
    CHECK(run({"isopurity", "--n", "2", "--m", "3", "--eta", "8"}).code == cli::kUsageError);
}

TEST_CASE("isopurity scan tolerates infeasible points") {
    const auto r = run({"isopurity", "--n", "8", "--beta", "0.5", "--scan", "--points", "9",
                        "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# config ", 0) == 0);
    std::getline(in, line);
    CHECK(line == "n,eta,beta,purity,min_eigenvalue,feasible");
    int rows = 0;
    bool saw_true = false;
    bool saw_false = false;
    while (std::getline(in, line)) {
        ++rows;
        saw_true |= line.ends_with(",true");
        saw_false |= line.ends_with(",false");
    }
    CHECK(rows == 9);
    CHECK(saw_true);
    CHECK(saw_false);
}

TEST_CASE("sample: two qubit purity") {
    const auto j = run_json({"sample", "--n", "2", "--m", "2", "--samples", "100000", "--seed", "7",
                             "--functional", "purity"});
    CHECK(std::abs(j["mean"].get<double>() - 0.8) <= 3 * j["std_error"].get<double>());
    CHECK(j["count"] == 100000);
    CHECK(j["seed"] == 7);
    CHECK(j["functional"] == "purity");
    CHECK(j["config"]["samples"] == 100000);
    CHECK(run({"sample", "--n", "2", "--m", "2", "--samples", "10", "--functional", "nope"}).code ==
          cli::kUsageError);
}

TEST_CASE("density: 512 rows with zero endpoints") {
    const auto r = run({"density", "--kind", "semicircle", "--beta", "2", "--format", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::vector<std::string> rows;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "lambda,density");
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 512);
    CHECK(rows.front() == "0,0");
    CHECK(rows.back() == "2,0");
    CHECK(run({"density", "--kind", "semicircle"}).code == cli::kUsageError);
    CHECK(run({"density", "--kind", "semicircle", "--beta", "1"}).code == cli::kUsageError);
    CHECK(run({"density", "--kind", "mp", "--format", "csv"}).code == 0);
}

TEST_CASE("converge: decreasing KS column") {
    const auto j = run_json({"converge", "--beta", "2", "--n", "32,64,128"});
    const auto& rows = j["convergence"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["n"] == 32);
    CHECK(rows[1]["ks_distance"].get<double>() < rows[0]["ks_distance"].get<double>());
    CHECK(rows[2]["ks_distance"].get<double>() < rows[1]["ks_distance"].get<double>());
    CHECK(run({"converge", "--beta", "2", "--n", "32,x"}).code == cli::kUsageError);
    CHECK(run({"converge", "--beta", "0.01", "--n", "8"}).code == cli::kUsageError);
}

TEST_CASE("formulas table") {
    const auto r = run({"formulas", "--n", "2", "--m", "3", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\nquantity,N,M,value,paper_formula_id\n") != std::string::npos);
    CHECK(r.out.find("typical_purity,2,3,0.75,typical_purity") != std::string::npos);
}

TEST_CASE("json and csv carry the same numbers") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"typical", "--n", "4", "--m", "9"},
             {"isopurity", "--n", "5", "--purity", "0.25"},
             {"sample", "--n", "3", "--m", "4", "--samples", "500", "--seed", "2",
              "--functional", "entropy"}}) {
        const auto j = run_json(args);
        auto csv_args = args;
        csv_args.insert(csv_args.end(), {"--format", "csv"});
        const auto r = run(csv_args);
        REQUIRE(r.code == 0);
        const auto fields = csv_fields(r.out);
        int compared = 0;
        for (const auto& [key, value] : j.items()) {
            if (key == "config") continue;
            if (value.is_number_float()) {
                CHECK(std::stod(fields.at(key + "[]")) == value.get<double>());
                ++compared;
            } else if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i) {
                    CHECK(std::stod(fields.at(key + "[" + std::to_string(i) + "]")) ==
                          value[i].get<double>());
                    ++compared;
                }
            }
        }
        CHECK(compared >= 2);
    }
}

TEST_CASE("commands are deterministic") {
    const std::vector<std::string> args{"sample", "--n", "4", "--m", "4", "--samples", "3000",
                                        "--seed", "11", "--functional", "det", "--threads", "3"};
    const auto a = run(args);
    auto single = args;
    single.back() = "1";
    const auto b = run(single);
    CHECK(a.code == 0);
    CHECK(json::parse(a.out)["mean"] == json::parse(b.out)["mean"]);
    CHECK(run(args).out == a.out);
}

TEST_CASE("config file with command-line precedence") {
    const auto path = temp_path("typent_cli_test.cfg");
    {
        std::ofstream f(path);
        f << "# defaults\n\nn = 3\nm=3\nformat=json\nbeta=4\n";
    }
    const auto j = run_json({"typical", "--config", path, "--m", "5"});
    CHECK(j["config"]["n"] == 3);
    CHECK(j["config"]["m"] == 5);
    CHECK(j["xi"] == 12.0);

    // beta in the file yields to an explicit --purity.
    const auto iso = run_json({"isopurity", "--config=" + path, "--purity", "0.5"});
    CHECK(iso["config"]["purity"] == 0.5);
    CHECK(iso["config"]["beta"].is_null());

    CHECK(run({"typical", "--config", temp_path("typent_missing.cfg")}).code == cli::kUsageError);
    std::remove(path.c_str());
}

TEST_CASE("parse_config") {
    const auto entries = cli::parse_config("a=1\n  # note\n--b = two words \n\n");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0] == std::pair<std::string, std::string>{"a", "1"});
    CHECK(entries[1] == std::pair<std::string, std::string>{"b", "two words"});
    CHECK_THROWS_AS(cli::parse_config("novalue\n"), DomainError);
}

TEST_CASE("output file") {
    const auto path = temp_path("typent_cli_out.json");
    const auto r = run({"typical", "--n", "2", "--m", "4", "--output", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto j = json::parse(in);
    CHECK(j["trace_inverse_closed_form"] == 6.0);
    CHECK(j["config"]["output_path"] == path);
    std::remove(path.c_str());
}
