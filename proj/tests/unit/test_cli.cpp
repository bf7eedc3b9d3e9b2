#include <doctest.h>

#include "scenopt/cli.hpp"
#include "scenopt/errors.hpp"
#include "test_support.hpp"

#include <fstream>
#include <sstream>

using namespace scenopt;
namespace fs = std::filesystem;

namespace
{
    void write_file(const fs::path &path, const std::string &text)
    {
        std::ofstream(path) << text;
    }

    std::string read_file(const fs::path &path)
    {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    const std::string kToyScenarios = "prob,HI,LO\n"
                                      "0.2,0.02,0.01\n"
                                      "0.2,-0.03,0.0\n"
                                      "0.2,0.01,-0.01\n"
                                      "0.2,0.04,0.02\n"
                                      "0.2,-0.02,0.005\n";

    const std::string kSmallConfig = R"({
        "mu": -1.0, "delta": -0.025, "epsilon": 0.1, "gamma": 100,
        "b": 20, "operator_counts": [10, 40, 20, 10], "initial_population": 100,
        "max_generations": 60, "stagnation_patience": 0, "seed": 3
    })";
} // namespace

TEST_CASE("histogram")
{
    const Distribution d{{-0.03, 0.0, 0.03}, {0.2, 0.5, 0.3}};
    const auto bins = cli::histogram(d);
    REQUIRE(bins.size() == 30);
    CHECK(bins.front().low == -0.03);
    CHECK(bins.back().high == 0.03);
    CHECK(bins.front().probability == doctest::Approx(0.2));
    CHECK(bins.back().probability == doctest::Approx(0.3));
    CHECK(bins[14].probability + bins[15].probability == doctest::Approx(0.5));
    double total = 0.0;
    for (const auto &b : bins)
        total += b.probability;
    CHECK(total == doctest::Approx(1.0));

    const auto flat = cli::histogram(Distribution{{0.01, 0.01}, {0.5, 0.5}});
    CHECK(flat.front().probability == 1.0);
    CHECK(flat.front().low == flat.front().high);

    std::ostringstream os;
    cli::write_histogram_csv(os, cli::histogram(d, 2));
    CHECK(os.str() == "bin_low,bin_high,probability\n-0.03,0,0.2\n0,0.03,0.8\n");
}

TEST_CASE("relative gap")
{
    CHECK(cli::relative_gap(1.001, 1.0) == doctest::Approx(0.001));
    CHECK(cli::relative_gap(0.9, 1.0) < 0.0);
    CHECK(cli::relative_gap(0.5, 0.0) == 0.5);
}

TEST_CASE("cli commands")
{
    const auto dir = testing::scratch_dir("cli");
    std::ostringstream out, err;

    SUBCASE("ingest")
    {
        write_file(dir / "six.csv", "date,X\n2009-01-02,100\n2009-01-05,101\n2009-01-06,99\n"
                                    "2009-01-07,102\n2009-01-08,103\n2009-01-09,110\n");
        CHECK(cli::cmd_ingest(dir / "six.csv", dir / "six_sc.csv", out, err) == 0);
        const auto sc = read_scenarios_csv(dir / "six_sc.csv");
        CHECK(sc.num_scenarios() == 1);
        CHECK(sc.at(0, 0) == doctest::Approx(0.1));
        CHECK(out.str().find("1 scenarios x 1 assets") != std::string::npos);

        write_file(dir / "empty.csv", "");
        CHECK(cli::cmd_ingest(dir / "empty.csv", dir / "x.csv", out, err) == 1);
        CHECK(err.str().find("FormatError") != std::string::npos);
    }

    SUBCASE("optimize, determinism and compare")
    {
        write_file(dir / "toy.csv", kToyScenarios);
        write_file(dir / "cfg.json", kSmallConfig);

        cli::OptimizeArgs args{dir / "toy.csv", dir / "cfg.json", dir / "P1.json", {}, {}, {}, {}, {}};
        REQUIRE(cli::cmd_optimize(args, out, err) == 0);
        const auto first = read_file(dir / "P1.json");
        args.output = dir / "P1_again.json";
        REQUIRE(cli::cmd_optimize(args, out, err) == 0);
        CHECK(read_file(dir / "P1_again.json") == first);

        const auto result = nlohmann::json::parse(first);
        for (const char *key : {"weights", "mean", "std_dev", "shortfall_probability", "raw_variance", "penalty",
                                "fitness", "generations", "seed"})
            CHECK(result.contains(key));
        CHECK(result.at("seed") == 3);
        CHECK(result.at("weights").contains("HI"));

        const auto hist = read_file(dir / "P1.histogram.csv");
        CHECK(hist.rfind("bin_low,bin_high,probability\n", 0) == 0);
        CHECK(std::count(hist.begin(), hist.end(), '\n') == 31);

        args.output = dir / "P2.json";
        args.constraint = true;
        REQUIRE(cli::cmd_optimize(args, out, err) == 0);
        const auto p2 = nlohmann::json::parse(read_file(dir / "P2.json"));
        CHECK(p2.at("probabilistic_constraint_enabled") == true);
        CHECK(p2.at("shortfall_probability").get<double>() <= 0.1 + 1e-12);

        std::ostringstream table;
        REQUIRE(cli::cmd_compare(dir / "toy.csv", {dir / "P1.json", dir / "P2.json"}, -0.025, table, err) == 0);
        const auto t = table.str();
        CHECK(t.find("P1") != std::string::npos);
        CHECK(t.find("P2") != std::string::npos);
        CHECK(t.find("1/N") != std::string::npos);
        CHECK(t.find("Mean") != std::string::npos);
        CHECK(t.find("Std.Dev.") != std::string::npos);
        CHECK(t.find("Prob.") != std::string::npos);
    }

    SUBCASE("optimize on one asset")
    {
        write_file(dir / "one.csv", "prob,ONLY\n0.5,0.01\n0.5,-0.02\n");
        write_file(dir / "cfg1.json", kSmallConfig);
        cli::OptimizeArgs args{dir / "one.csv", dir / "cfg1.json", dir / "one.json", {}, {}, {}, {}, false};
        REQUIRE(cli::cmd_optimize(args, out, err) == 0);
        const auto r = nlohmann::json::parse(read_file(dir / "one.json"));
        CHECK(r.at("weights").at("ONLY") == 1.0);
    }

    SUBCASE("optimize without delta while the constraint is on")
    {
        write_file(dir / "toy.csv", kToyScenarios);
        write_file(dir / "nodelta.json", R"({"probabilistic_constraint_enabled": true})");
        cli::OptimizeArgs args{dir / "toy.csv", dir / "nodelta.json", dir / "bad.json", {}, {}, {}, {}, {}};
        CHECK(cli::cmd_optimize(args, out, err) == 1);
        CHECK(err.str().find("ConfigError") != std::string::npos);
        CHECK(err.str().find("delta") != std::string::npos);
    }

    SUBCASE("compare edge cases")
    {
        write_file(dir / "const.csv", "A,B\n0.01,0.01\n0.01,0.01\n");
        write_file(dir / "r.json", R"({"weights": {"A": 0.5, "B": 0.5}})");
        std::ostringstream table;
        REQUIRE(cli::cmd_compare(dir / "const.csv", {dir / "r.json"}, 1.0, table, err) == 0);
        CHECK(table.str().find("0.000000") != std::string::npos);
        CHECK(table.str().find("1.000000") != std::string::npos);

        write_file(dir / "wrong.json", R"({"weights": {"A": 0.5, "C": 0.5}})");
        CHECK(cli::cmd_compare(dir / "const.csv", {dir / "wrong.json"}, 0.0, table, err) == 1);
        CHECK(err.str().find("ValidationError") != std::string::npos);
    }

    SUBCASE("verify")
    {
        write_file(dir / "toy.csv", kToyScenarios);
        write_file(dir / "cfg.json", kSmallConfig);
        cli::VerifyArgs args;
        args.scenarios = dir / "toy.csv";
        args.config = dir / "cfg.json";
        CHECK(cli::cmd_verify(args, out, err) == 0);
        CHECK(out.str().find("PASS") != std::string::npos);

        // perfect hedge: zero variance only at (0.5, 0.5), which random genotypes miss
        write_file(dir / "hedge.csv", "A,B\n0.1,-0.1\n-0.1,0.1\n");
        write_file(dir / "lazy.json", R"({"mu": -1.0, "b": 20, "initial_population": 3,
            "operator_counts": [1, 1, 1, 0], "max_generations": 0, "seed": 9})");
        args.scenarios = dir / "hedge.csv";
        args.config = dir / "lazy.json";
        args.tolerance = 1e-9;
        CHECK(cli::cmd_verify(args, out, err) == 1);

        std::string wide = "A0";
        std::string row = "0.01";
        for (int i = 1; i < 30; ++i)
        {
            wide += ",A" + std::to_string(i);
            row += ",0.01";
        }
        write_file(dir / "wide.csv", wide + "\n" + row + "\n");
        args.scenarios = dir / "wide.csv";
        CHECK(cli::cmd_verify(args, out, err) == 1);
        CHECK(err.str().find("ComplexityGuardError") != std::string::npos);
    }
}
