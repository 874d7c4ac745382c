// SPDX-License-Identifier: Apache-2.0
//
// gdof-lab: GDoF laboratory for the MISO broadcast channel with partial CSIT
// Copyright (C) 2026 The gdof-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "gdof/cli/instance_io.hpp"
#include "gdof/cli/output.hpp"
#include "gdof/cli/run.hpp"

using namespace gdof::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch()
{
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("gdof_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << content;
    return p.string();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& s)
{
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        lines.push_back(l);
    return lines;
}

const std::vector<std::string> kBudgetHeader{"budget", "d_sum", "b11", "b12", "b21", "b22"};

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("number formatting")
    {
        CHECK(format_number(1.65) == "1.65");
        CHECK(format_number(0.1 + 0.2) == "0.3");
        CHECK(format_number(1e12) == "1e+12");
        CHECK(format_number(-0.0) == "0");
        CHECK(format_fixed2(1.7) == "1.70");
        CHECK(format_fixed2(2) == "2.00");
        CHECK(format_fixed2(1.625) == "1.625");
        CHECK(json_number(0.1 + 0.2).get<double>() == 0.3);
        CHECK(json_number(NAN).is_null());
    }

    TEST_CASE("gdof2 on the worked instance")
    {
        const auto inst = write_file("worked.json", R"({"alpha": [[1,0.75],[0.5,1]], "beta": [[0.4,0.4],[0.2,0.2]]})");
        const auto r = call({"gdof2", "--instance", inst});
        CHECK(r.code == kExitOk);
        CHECK(r.out == "D1=1.65 D2=1.70 d_sum=1.65\n");
        const auto j = call({"gdof2", "--instance", inst, "--format", "json"});
        REQUIRE(j.code == kExitOk);
        const auto parsed = nlohmann::json::parse(j.out);
        CHECK_NOTHROW(validate_json(OutputKind::Gdof2, parsed));
        CHECK(parsed["binding"] == "D1");
    }

    TEST_CASE("gdofk")
    {
        const auto r = call({"gdofk", "--K", "5", "--alpha", "1", "--beta", "0"});
        CHECK(r.code == kExitOk);
        CHECK(r.out == "d_sum=1\n");
        const auto j = call({"gdofk", "--K", "4", "--alpha", "0.6", "--beta", "0.3", "--format", "json"});
        CHECK(nlohmann::json::parse(j.out)["d_sum"].get<double>() == 3.1);
        const auto bad = call({"gdofk", "--K", "4", "--alpha", "0.6", "--beta", "0.7"});
        CHECK(bad.code == kExitValidation);
        CHECK(bad.err.find("--beta") != std::string::npos);
    }

    TEST_CASE("validation errors exit with 2 and name the field")
    {
        const auto inst = write_file("bad.json", R"({"alpha": [[1,0.5],[0.5,1]], "beta": [[0.2,0.7],[0,0]]})");
        const auto r = call({"gdof2", "--instance", inst});
        CHECK(r.code == kExitValidation);
        CHECK(r.err.find("beta[0][1]") != std::string::npos);

        const auto extra = write_file("extra.json", R"({"alpha": [[1,1],[1,1]], "beta": [[0,0],[0,0]], "gamma": 1})");
        const auto e = call({"gdof2", "--instance", extra});
        CHECK(e.code == kExitValidation);
        CHECK(e.err.find("gamma") != std::string::npos);

        const auto shape = write_file("shape.json", R"({"alpha": [[1,1],[1]], "beta": [[0,0],[0,0]]})");
        CHECK(call({"gdof2", "--instance", shape}).err.find("alpha[1]") != std::string::npos);

        CHECK(call({"frobnicate"}).code == kExitValidation);
        CHECK(call({"gdof2", "--instance", (scratch() / "missing.json").string()}).code == kExitValidation);
        CHECK(call({"achieve", "--instance", inst}).code == kExitValidation);
    }

    TEST_CASE("achieve needs a seed")
    {
        const auto inst = write_file("c3.json", R"({"alpha": [[1,0.5],[0.3,0.7]], "beta": [[0.4,0.4],[0.3,0.3]]})");
        const auto r = call({"achieve", "--instance", inst});
        CHECK(r.code == kExitValidation);
        CHECK(r.err.find("--seed") != std::string::npos);
    }

    TEST_CASE("budget output")
    {
        const auto inst = write_file("ones.json", R"({"alpha": [[1,1],[1,1]]})");
        const auto r = call({"budget", "--instance", inst, "--budgets", "0,1,2,3,4,5"});
        REQUIRE(r.code == kExitOk);
        CHECK_NOTHROW(validate_csv(r.out, kBudgetHeader));
        const auto lines = split_lines(r.out);
        CHECK(lines[1].rfind("0,1,", 0) == 0);
        CHECK(lines[3].rfind("2,1.5,", 0) == 0);
        CHECK(lines[6].rfind("5,2,", 0) == 0);
        const auto j = call({"budget", "--instance", inst, "--format", "json"});
        CHECK_NOTHROW(validate_json(OutputKind::Budget, nlohmann::json::parse(j.out)));
    }

    TEST_CASE("sweeps")
    {
        const auto inst = write_file("ones_b.json", R"({"alpha": [[1,1],[1,1]], "beta": [[0,0],[0,0]]})");
        const auto r = call({"sweep", "--axis", "beta", "--instance", inst, "--grid", "0,0.25,0.5,1"});
        REQUIRE(r.code == kExitOk);
        CHECK(r.out == "beta,D1,D2,d_sum\n0,1,1,1\n0.25,1.25,1.25,1.25\n0.5,1.5,1.5,1.5\n1,2,2,2\n");
        CHECK_NOTHROW(validate_csv_numeric(r.out, "beta"));

        const auto b = call({"sweep", "--axis", "budget", "--instance", inst, "--grid", "0,2"});
        CHECK(b.code == kExitOk);
        CHECK(split_lines(b.out)[2].rfind("2,1.5,", 0) == 0);

        CHECK(call({"sweep", "--axis", "beta", "--instance", inst, "--grid", ""}).code == kExitValidation);
        CHECK(call({"sweep", "--axis", "beta", "--instance", inst}).code == kExitValidation);
        CHECK(call({"sweep", "--axis", "spin", "--instance", inst, "--grid", "1"}).code == kExitValidation);
        CHECK(call({"sweep", "--axis", "beta", "--instance", inst, "--grid", "0,1.5"}).code == kExitValidation);

        const auto k = write_file("k.json", R"({"K": 3, "alpha": 1, "beta": 0})");
        const auto kr = call({"sweep", "--axis", "beta", "--instance", k, "--grid", "0,0.5,1"});
        CHECK(kr.out == "beta,d_sum\n0,1\n0.5,2\n1,3\n");
    }

    TEST_CASE("achieve outputs validate and are reproducible across worker counts")
    {
        const auto inst = write_file("c3b.json", R"({"alpha": [[1,0.5],[0.3,0.7]], "beta": [[0.4,0.4],[0.3,0.3]]})");
        const auto a = call({"achieve", "--instance", inst, "--seed", "5", "--trials", "40", "--threads", "1"});
        const auto b = call({"achieve", "--instance", inst, "--seed", "5", "--trials", "40", "--threads", "3"});
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
        CHECK_NOTHROW(validate_json(OutputKind::AchieveJson, nlohmann::json::parse(a.out)));

        const auto csv = call({"achieve", "--instance", inst, "--seed", "5", "--trials", "40", "--format", "csv"});
        CHECK_NOTHROW(validate_csv(csv.out, {"P", "rate_user1", "rate_user2"}));

        const auto k = write_file("k3.json", R"({"K": 3, "alpha": 0.6, "beta": 0.3})");
        const auto kc = call({"achieve", "--instance", k, "--seed", "5", "--trials", "20", "--format", "csv"});
        CHECK_NOTHROW(validate_csv(kc.out, {"P", "rate_user1", "rate_user2", "rate_user3"}));

        const auto strict = call({"achieve", "--instance", inst, "--seed", "5", "--trials", "20", "--check",
                                  "--tolerance", "0"});
        CHECK(strict.code == kExitAssertion);
        CHECK(call({"achieve", "--instance", inst, "--seed", "5", "--p-grid", "1e6,1e7"}).code == kExitValidation);
    }

    TEST_CASE("environment worker cap does not change output")
    {
        const auto inst = write_file("c1.json", R"({"alpha": [[1,0.4],[0.8,0.6]], "beta": [[0.3,0.3],[0.4,0.4]]})");
        ::setenv("GDOF_LAB_THREADS", "1", 1);
        const auto a = call({"achieve", "--instance", inst, "--seed", "11", "--trials", "30"});
        ::setenv("GDOF_LAB_THREADS", "4", 1);
        const auto b = call({"achieve", "--instance", inst, "--seed", "11", "--trials", "30"});
        ::unsetenv("GDOF_LAB_THREADS");
        CHECK(a.out == b.out);
    }

    TEST_CASE("aligned image set commands")
    {
        const auto inst = write_file("flat.json", R"({"alpha": [[1,1],[1,1]], "beta": [[0,0],[0,0]]})");
        const auto out = (scratch() / "size.csv").string();
        const auto summary = (scratch() / "size.json").string();
        const auto r = call({"ais-size", "--instance", inst, "--seed", "3", "--draws", "5", "--out", out, "--summary",
                             summary});
        REQUIRE(r.code == kExitOk);
        CHECK_NOTHROW(validate_csv(read_file(out), {"p_bar", "mean_size", "draws"}));
        const auto sj = nlohmann::json::parse(read_file(summary));
        CHECK_NOTHROW(validate_json(OutputKind::AisSizeJson, sj));
        CHECK(sj["pass"] == true);
        for (const auto& e : fs::directory_iterator(scratch()))
            CHECK(e.path().string().find(".tmp.") == std::string::npos);

        const auto again = call({"ais-size", "--instance", inst, "--seed", "3", "--draws", "5", "--format", "json",
                                 "--threads", "2"});
        CHECK(nlohmann::json::parse(again.out)["mean_size"] == sj["mean_size"]);

        const auto capped = call({"ais-size", "--instance", inst, "--seed", "3", "--cap", "100"});
        CHECK(capped.code == kExitValidation);
        CHECK(capped.err.find("cap") != std::string::npos);

        const auto p = call({"ais-prob", "--instance", inst, "--seed", "3", "--pairs", "20", "--trials", "100",
                             "--format", "json"});
        REQUIRE(p.code == kExitOk);
        CHECK_NOTHROW(validate_json(OutputKind::AisProb, nlohmann::json::parse(p.out)));
        const auto pc = call({"ais-prob", "--instance", inst, "--seed", "3", "--pairs", "20", "--trials", "100"});
        CHECK_NOTHROW(validate_csv(pc.out, {"lambda1", "lambda2", "nu1", "nu2", "estimate", "bound", "sigma", "pass"}));
    }

    TEST_CASE("schema validators reject malformed output")
    {
        CHECK_THROWS(validate_csv("budget,d_sum\n0,1\n", kBudgetHeader));
        CHECK_THROWS(validate_csv("budget,d_sum,b11,b12,b21,b22\n0,1,0,0,0\n", kBudgetHeader));
        CHECK_THROWS(validate_csv("budget,d_sum,b11,b12,b21,b22\n0,x,0,0,0,0\n", kBudgetHeader));
        CHECK_THROWS(validate_csv("budget,d_sum,b11,b12,b21,b22\n", kBudgetHeader));
        CHECK_THROWS(validate_json(OutputKind::AisSizeJson, nlohmann::json{{"fitted_exponent", 1}}));
        CHECK_THROWS(validate_json(OutputKind::Gdof2, nlohmann::json::array()));
    }

    TEST_CASE("instance round trip")
    {
        const auto j = nlohmann::json::parse(R"({"name": "x", "alpha": [[1,0.5],[0.25,1]], "beta": [[0.25,0.5],[0,0]]})");
        const Instance inst = parse_instance(j);
        CHECK(to_json(inst) == j);
        const auto k = nlohmann::json::parse(R"({"K": 3, "alpha": 0.5, "beta": 0.25})");
        CHECK(to_json(parse_instance(k)) == k);
        CHECK_THROWS_AS(parse_instance(nlohmann::json::parse(R"({"K": 2.5, "alpha": 0.5, "beta": 0})")), ValidationError);
        CHECK_THROWS_AS(parse_instance(nlohmann::json::parse(R"({"alpha": [[1,1],[1,1]]})")), ValidationError);
        CHECK_NOTHROW(parse_instance(nlohmann::json::parse(R"({"alpha": [[1,1],[1,1]]})"), true));
    }
}
