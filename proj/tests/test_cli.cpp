#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "plr/commands.hpp"
#include "plr/construct.hpp"
#include "plr/criterion.hpp"
#include "plr/io.hpp"

using namespace plr;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("plr_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

    ConstructionRecord read_record(const std::string& name) const {
        std::istringstream in(slurp(path(name)));
        return read_construction(in);
    }

    fs::path dir_;
};

// Data lines (not '#' comments) of a text output.
std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::string last_field(const std::string& line, char sep = ' ') { return line.substr(line.rfind(sep) + 1); }

}  // namespace

TEST_F(CliTest, FastConstructionMatchesNaiveOracle) {
    ASSERT_EQ(cli({"construct", "--method", "fast-cbc", "-b", "2", "-m", "4", "-s", "5", "--alpha", "0.5", "--weights",
                   "const:1", "-o", path("c.txt")})
                  .code,
              kExitOk);
    const auto rec = read_record("c.txt");
    const Modulus p(rec.p);
    const auto table = build_log_table(p, *rec.g);
    const auto naive = cbc_naive(p, 5, 0.5, WeightSequence::constant(1), &table);
    ASSERT_EQ(rec.per_dim_B.size(), 5U);
    for (std::size_t d = 0; d < 5; ++d) {
        EXPECT_EQ(rec.q[d], naive.gv[d]);
        EXPECT_NEAR(rec.per_dim_B[d], naive.per_dim_B[d], 1e-12 * naive.per_dim_B[d]);
    }
    EXPECT_EQ(rec.p.to_digit_string(), "10011");
}

TEST_F(CliTest, KorobovOneDimension) {
    ASSERT_EQ(cli({"construct", "--method", "korobov", "-b", "2", "-m", "3", "-s", "1", "--alpha", "1", "-o",
                   path("k.txt")})
                  .code,
              kExitOk);
    const auto rec = read_record("k.txt");
    EXPECT_EQ(rec.q[0].to_digit_string(), "1");
    EXPECT_NEAR(rec.per_dim_B[0], one_dim_closed_form({1.0, 2, 3}, 1.0), 1e-18);
}

TEST_F(CliTest, NaiveConstructionReproducesPrintedValue) {
    const auto r = cli({"construct", "--method", "naive-cbc", "-b", "2", "-m", "4", "-s", "1", "--alpha", "1",
                        "--weights", "const:1", "-o", path("n.txt")});
    ASSERT_EQ(r.code, kExitOk);
    char shown[16];
    std::snprintf(shown, sizeof shown, "%.2e", read_record("n.txt").per_dim_B[0]);
    EXPECT_STREQ(shown, "8.14e-05");
}

TEST_F(CliTest, ScoreEquidistributedMatrix) {
    write("id.txt", "2 4 1\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    const auto r = cli({"score", "--input", path("id.txt"), "--alpha", "0.5", "--weights", "const:1"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 2U);
    char shown[16];
    std::snprintf(shown, sizeof shown, "%.2e", std::stod(last_field(lines[1])));
    EXPECT_STREQ(shown, "3.91e-03");
}

TEST_F(CliTest, ScoreRoundTripsConstruction) {
    for (const char* method : {"fast-cbc", "naive-cbc", "korobov"}) {
        ASSERT_EQ(cli({"construct", "--method", method, "-b", "3", "-m", "4", "-s", "4", "--alpha", "0.75", "--weights",
                       "geom:0.875", "-o", path("r.txt")})
                      .code,
                  kExitOk);
        const auto rec = read_record("r.txt");
        const auto r = cli({"score", "--input", path("r.txt"), "--format", "csv"});
        ASSERT_EQ(r.code, kExitOk);
        const auto lines = data_lines(r.out);
        ASSERT_EQ(lines.size(), 2U);
        const double B = std::stod(last_field(lines[1], ','));
        EXPECT_NEAR(B, rec.per_dim_B.back(), 1e-12 * rec.per_dim_B.back()) << method;
    }
}

TEST_F(CliTest, ScoreSeveralParameterPairs) {
    ASSERT_EQ(cli({"construct", "-m", "5", "-s", "3", "-o", path("c.txt")}).code, kExitOk);
    const auto r = cli({"score", "--input", path("c.txt"), "--alphas", "0.5", "1", "--weight-list", "const:1",
                        "poly:2"});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_EQ(data_lines(r.out).size(), 5U);
}

TEST_F(CliTest, RandomMatricesRarelyBeatCbc) {
    const int m = 6;
    const std::size_t s = 4;
    ASSERT_EQ(cli({"construct", "-m", std::to_string(m), "-s", std::to_string(s), "--alpha", "1", "--weights", "poly:2",
                   "-o", path("c.txt")})
                  .code,
              kExitOk);
    const double cbc = read_record("c.txt").per_dim_B.back();
    std::mt19937_64 rng(17);
    int worse_or_equal = 0;
    for (int t = 0; t < 100; ++t) {
        GeneratingMatrixSet M(2, m, s);
        for (std::size_t j = 0; j < s; ++j)
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c) M.set(j, r, c, static_cast<std::uint32_t>(rng() & 1));
        std::ofstream f(path("rand.txt"));
        write_matrices(f, M);
        f.close();
        const auto r = cli({"score", "--input", path("rand.txt"), "--alpha", "1", "--weights", "poly:2"});
        ASSERT_EQ(r.code, kExitOk);
        worse_or_equal += std::stod(last_field(data_lines(r.out)[1])) >= cbc;
    }
    EXPECT_GE(worse_or_equal, 95);
}

TEST_F(CliTest, PointsExample) {
    const auto r = cli({"points", "-b", "2", "-m", "1", "-s", "1", "-p", "10", "-q", "1"});
    ASSERT_EQ(r.code, kExitOk);
    EXPECT_EQ(data_lines(r.out), (std::vector<std::string>{"2 1 1", "0", "1"}));
}

TEST_F(CliTest, PointsFromConstructionFileMatchLibrary) {
    ASSERT_EQ(cli({"construct", "-m", "5", "-s", "3", "-o", path("c.txt")}).code, kExitOk);
    ASSERT_EQ(cli({"points", "--input", path("c.txt"), "-o", path("p.txt")}).code, kExitOk);
    std::istringstream in(slurp(path("p.txt")));
    EXPECT_EQ(read_points(in), generate_points(read_record("c.txt").generating_vector()));
    const auto csv = cli({"points", "--input", path("c.txt"), "--format", "csv"});
    EXPECT_EQ(data_lines(csv.out)[0], "h,x1,x2,x3");
}

TEST_F(CliTest, ScrambleIsDeterministic) {
    const auto a = cli({"scramble", "-m", "6", "-s", "3", "--seed", "7"});
    const auto b = cli({"scramble", "-m", "6", "-s", "3", "--seed", "7"});
    const auto c = cli({"scramble", "-m", "6", "-s", "3", "--seed", "8"});
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, c.out);
    EXPECT_NE(a.out.find("scrambled"), std::string::npos);
}

TEST_F(CliTest, EstimateIsUnbiased) {
    const auto r = cli({"estimate", "--integrand", "prodlin", "--R", "1000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 2U);
    std::istringstream row(lines[1]);
    std::string id;
    double n, R, mean, var, se;
    row >> id >> n >> R >> mean >> var >> se;
    EXPECT_EQ(R, 1000);
    EXPECT_LE(std::abs(mean - 1.0), 3 * se);
}

TEST_F(CliTest, ReproduceTableOneDimensionalColumns) {
    const auto r = cli({"reproduce-table", "--table", "2", "--s-list", "1", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 1U + 2 * 13);
    int anomalies = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> f;
        std::istringstream row(lines[i]);
        for (std::string cell; std::getline(row, cell, ',');) f.push_back(cell);
        ASSERT_EQ(f.size(), 11U);
        // Our value equals the closed form exactly.
        EXPECT_EQ(f[5], f[6]);
        anomalies += f[10] == "print-anomaly";
        if (f[1] == "1" && f[3] == "16") {
            EXPECT_EQ(f[7], "9.99e-16");
            EXPECT_NEAR(std::stod(f[5]), 1.0363e-15, 1e-19);
        }
    }
    EXPECT_EQ(anomalies, 3);
}

TEST_F(CliTest, ReproduceTableOneAndThreeAgreeInOneDimension) {
    const auto t1 = cli({"reproduce-table", "1", "--s-list", "1", "--alphas", "0.5", "--m-max", "10"});
    const auto t3 = cli({"reproduce-table", "3", "--s-list", "1", "--alphas", "0.5", "--m-max", "10"});
    const auto a = data_lines(t1.out);
    const auto b = data_lines(t3.out);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 1; i < a.size(); ++i) {
        EXPECT_EQ(a[i].substr(2), b[i].substr(2));
        EXPECT_EQ(last_field(a[i]), "match");
    }
}

TEST_F(CliTest, EveryOutputEchoesResolvedConfig) {
    const auto r = cli({"score", "--input", "/dev/null"});
    EXPECT_EQ(r.code, kExitInput);
    ASSERT_EQ(cli({"construct", "-m", "7", "-s", "2", "--format", "csv", "-o", path("c.csv")}).code, kExitOk);
    const auto text = slurp(path("c.csv"));
    EXPECT_NE(text.find("# plr construct"), std::string::npos);
    EXPECT_NE(text.find("p=10000011"), std::string::npos);
    EXPECT_NE(text.find("weights=const:1"), std::string::npos);
    const auto est = cli({"estimate", "-m", "4", "-s", "2", "--R", "5", "--seed", "3"});
    EXPECT_NE(est.out.find("seed=3"), std::string::npos);
}

TEST_F(CliTest, FindModulus) {
    auto r = cli({"find-modulus", "-b", "2", "-m", "4", "--primitive"});
    EXPECT_EQ(data_lines(r.out)[0], "10011");
    r = cli({"find-modulus", "-b", "3", "-m", "2"});
    EXPECT_EQ(data_lines(r.out)[0], "101");
}

TEST_F(CliTest, ConfigurationErrors) {
    EXPECT_EQ(cli({"construct", "--alpha", "0"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "--alpha", "1.5"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "-m", "27"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "-m", "12", "--max-log2-points", "10"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "--method", "fast-cbc", "-m", "4", "-p", "11111"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "-m", "4", "-p", "10101"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "-m", "5", "-p", "10011"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "-b", "4"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "--weights", "geom:2"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "--method", "magic"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "--format", "xml"}).code, kExitConfig);
    EXPECT_EQ(cli({"construct", "--bogus"}).code, kExitConfig);
    EXPECT_EQ(cli({}).code, kExitConfig);
    EXPECT_EQ(cli({"estimate", "--R", "1"}).code, kExitConfig);
    EXPECT_EQ(cli({"estimate", "--integrand", "nope"}).code, kExitConfig);
    EXPECT_EQ(cli({"reproduce-table", "4"}).code, kExitConfig);
    EXPECT_EQ(cli({"points", "-p", "10011", "-q", "1", "-s", "2"}).code, kExitConfig);
    EXPECT_EQ(cli({"points", "-p", "10011", "-q", "10000"}).code, kExitConfig);
    const auto r = cli({"construct", "--method", "naive-cbc", "-m", "4", "-p", "11111", "-s", "2"});
    EXPECT_EQ(r.code, kExitOk) << "naive CBC accepts any irreducible modulus";
}

TEST_F(CliTest, InputErrors) {
    EXPECT_EQ(cli({"score", "--input", path("missing.txt")}).code, kExitInput);
    write("bad.txt", "2 2 1\n1 0\n0 7\n");
    EXPECT_EQ(cli({"score", "--input", path("bad.txt")}).code, kExitInput);
    write("trunc.txt", "plr-construction 1\nb 2\nm 4\n");
    EXPECT_EQ(cli({"score", "--input", path("trunc.txt")}).code, kExitInput);
    write("pts.txt", "2 1 2\n0 0\n");
    EXPECT_EQ(cli({"score", "--input", path("pts.txt"), "--kind", "points"}).code, kExitInput);
    write("mismatch.txt", "2 2 3\n1 0\n0 1\n\n1 1\n0 1\n\n0 1\n1 0\n");
    EXPECT_EQ(cli({"score", "--input", path("mismatch.txt"), "--weights", "list:1,0.5"}).code, kExitConfig);
}

TEST_F(CliTest, BinaryExitCodes) {
    const std::string bin = PLR_CLI_PATH;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    EXPECT_EQ(status("find-modulus -m 4"), 0);
    EXPECT_EQ(status("construct --alpha 2"), 2);
    EXPECT_EQ(status("score --input " + path("nothing")), 3);
    EXPECT_EQ(status("--help"), 0);
}
