#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("srm_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    Outcome run(const std::string& args) {
        const auto out = dir_ / "stdout.json";
        const std::string cmd = std::string(SRM_BINARY) + " " + args + " > " + out.string() + " 2> " +
                                (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        std::ifstream in(out);
        std::stringstream ss;
        ss << in.rdbuf();
        return {WEXITSTATUS(status), ss.str()};
    }

    json result(const Outcome& r) {
        EXPECT_EQ(r.code, 0) << r.out;
        return json::parse(r.out)["result"];
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, EvalAvarAllRepresentations) {
    const auto s = file("s.csv", "1\n2\n3\n4\n");
    const auto sp = file("a.json", R"({"kind":"avar","alpha":0.5})");
    const auto r = run("eval " + s + " --spectrum " + sp);
    const auto j = result(r);
    for (const char* k : {"quantile", "cdf", "kusuoka", "infrep"}) EXPECT_NEAR(j["values"][k].get<double>(), 3.5, 1e-10);
    EXPECT_LE(j["max_discrepancy"].get<double>(), 1e-10);
    EXPECT_EQ(j["upper_bound"], false);
    const auto full = json::parse(r.out);
    EXPECT_EQ(full["version"], SRM_VERSION);
    EXPECT_EQ(full["config_hash"].get<std::string>().size(), 16u);
}

TEST_F(Cli, EvalExpectation) {
    const auto s = file("s.csv", "1\n2\n3\n4\n");
    const auto sp = file("e.json", R"({"kind":"step","breaks":[0,1],"levels":[1]})");
    EXPECT_NEAR(result(run("eval " + s + " --spectrum " + sp))["values"]["quantile"].get<double>(), 2.5, 1e-15);
}

TEST_F(Cli, EvalNegativeSupportSkipsCdf) {
    const auto s = file("s.csv", "-1\n2\n3\n");
    const auto j = result(run("eval " + s + " --alpha 0.5"));
    EXPECT_FALSE(j["values"].contains("cdf"));
    EXPECT_FALSE(j["notes"].empty());
}

TEST_F(Cli, EvalMajorantFlagged) {
    const auto s = file("s.csv", "1\n2\n3\n4\n");
    const auto sp = file("p.json", R"({"kind":"power","gamma":2})");
    const auto j = result(run("eval " + s + " --spectrum " + sp + " --knots 4"));
    EXPECT_EQ(j["upper_bound"], true);
    EXPECT_NEAR(j["excess"].get<double>(), 0.25, 1e-15);
}

TEST_F(Cli, ValidationErrorsExitOne) {
    const auto bad = file("bad.csv", "1\nfoo\n");
    EXPECT_EQ(run("eval " + bad + " --alpha 0.5").code, 1);
    const auto s = file("s.csv", "1\n2\n");
    const auto badj = file("bad.json", "{not json");
    EXPECT_EQ(run("eval " + s + " --spectrum " + badj).code, 1);
    EXPECT_EQ(run("eval " + s).code, 1);
    EXPECT_EQ(run("eval " + s + " --alpha 1.5").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    const auto z = file("z.csv", "1\n1\n1\n");
    EXPECT_EQ(run("dual-check " + s + " " + z + " --alpha 0.5").code, 1);
}

TEST_F(Cli, DualCheck) {
    const auto s = file("s.csv", "1\n2\n3\n4\n");
    auto j = result(run("dual-check " + s + " " + file("one.csv", "1\n1\n1\n1\n") + " --alpha 0.5"));
    EXPECT_EQ(j["feasible"], true);
    EXPECT_DOUBLE_EQ(j["bound"].get<double>(), 2.5);
    EXPECT_LE(j["bound"].get<double>(), j["risk"].get<double>());

    j = result(run("dual-check " + s + " " + file("co.csv", "0\n0\n2\n2\n") + " --alpha 0.5"));
    EXPECT_EQ(j["feasible"], true);
    EXPECT_LE(std::abs(j["slack"].get<double>()), 1e-10);

    const auto two = file("two.csv", "0\n1\n");
    j = result(run("dual-check " + two + " " + file("neg.csv", "-0.5\n2.5\n") + " --alpha 0.5"));
    EXPECT_EQ(j["feasible"], false);
    EXPECT_FALSE(j["violations"].empty());
}

TEST_F(Cli, Infrep) {
    const auto s = file("s.csv", "1\n2\n3\n4\n");
    const auto j = result(run("infrep " + s + " --alpha 0.5"));
    EXPECT_NEAR(j["objective"].get<double>(), 3.5, 1e-12);
    EXPECT_NEAR(j["gap"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["constrained"]["conjugate_integral"].get<double>(), 0.0, 1e-12);
}

TEST_F(Cli, Convert) {
    auto j = result(run("convert --alpha 0.5"));
    EXPECT_EQ(j["atoms"], json::parse("[[0.5,1.0]]"));
    EXPECT_LE(j["roundtrip_residual"].get<double>(), 1e-12);

    j = result(run("convert --spectrum " + file("m.json", R"({"kind":"mixture","atoms":[[0,1]]})")));
    EXPECT_EQ(j["step"]["levels"], json::parse("[1.0]"));

    j = result(run("convert --spectrum " +
                   file("s3.json", R"({"kind":"step","breaks":[0,0.25,0.75,1],"levels":[0.5,1,1.5]})")));
    const auto atoms = j["atoms"];
    ASSERT_EQ(atoms.size(), 3u);
    EXPECT_DOUBLE_EQ(atoms[0][1].get<double>(), 0.5);
    EXPECT_DOUBLE_EQ(atoms[1][1].get<double>(), 0.75 * 0.5);
    EXPECT_DOUBLE_EQ(atoms[2][1].get<double>(), 0.25 * 0.5);
    EXPECT_EQ(j["roundtrip_residual"].get<double>(), 0.0);

    EXPECT_EQ(run("convert --spectrum " + file("bad.json", R"({"kind":"mixture","atoms":[[1,1]]})")).code, 1);
}

TEST_F(Cli, OptimizeHedge) {
    const auto sc = file("h.csv", "a,b\n0,2\n2,0\n");
    const auto j = result(run("optimize " + sc + " --alpha 0.5 --oracle"));
    EXPECT_NEAR(j["x"][0].get<double>(), 0.5, 1e-9);
    EXPECT_NEAR(j["x"][1].get<double>(), 0.5, 1e-9);
    EXPECT_NEAR(j["value"].get<double>(), 1.0, 1e-9);
    EXPECT_NEAR(j["oracle"]["value"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(j["dual_samples"]["dominated"], true);
    EXPECT_LE(j["check"]["max_discrepancy"].get<double>(), 1e-9);
}

TEST_F(Cli, OptimizeSingleColumnAndReturns) {
    const auto sc = file("one.csv", "only\n1\n3\n2\n");
    auto j = result(run("optimize " + sc + " --alpha 0.5"));
    EXPECT_NEAR(j["x"][0].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["value"].get<double>(), 8.0 / 3.0, 1e-9);

    // returns 1,3,2 become losses -1,-3,-2: AVaR_0.5 = (1/0.5)(1/6 * -2 + 1/3 * -1) = -4/3
    j = result(run("optimize " + sc + " --alpha 0.5 --returns"));
    EXPECT_NEAR(j["value"].get<double>(), -4.0 / 3.0, 1e-9);

    // vertex check: with returns the better asset (higher returns) is chosen
    const auto two = file("two.csv", "lo,hi\n0.01,0.03\n0.02,0.05\n");
    j = result(run("optimize " + two + " --alpha 0.5 --returns"));
    EXPECT_NEAR(j["x"][1].get<double>(), 1.0, 1e-9);
    j = result(run("optimize " + two + " --alpha 0.5"));
    EXPECT_NEAR(j["x"][0].get<double>(), 1.0, 1e-9);
}

TEST_F(Cli, OptimizeInfeasibleBoundsExitTwo) {
    const auto sc = file("h.csv", "a,b\n0,2\n2,0\n");
    EXPECT_EQ(run("optimize " + sc + " --alpha 0.5 --upper 0.3").code, 2);
    EXPECT_EQ(run("optimize " + file("bad.csv", "a,b\n0,x\n") + " --alpha 0.5").code, 1);
}

TEST_F(Cli, ReportsAreByteIdentical) {
    const auto sc = file("sc.csv", "a,b,c\n0.1,-0.2,0.05\n-0.3,0.4,0.0\n0.2,0.1,-0.1\n0.0,0.0,0.3\n");
    const auto sp = file("e.json", R"({"kind":"exponential","k":2})");
    const std::string args = "optimize " + sc + " --spectrum " + sp + " --oracle --oracle-step 0.05 --seed 7";
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto c = run("optimize " + sc + " --spectrum " + sp + " --oracle --oracle-step 0.05 --seed 8");
    EXPECT_NE(json::parse(a.out)["config_hash"], json::parse(c.out)["config_hash"]);
}

TEST_F(Cli, OutFlagWritesFile) {
    const auto s = file("s.csv", "1\n2\n");
    const auto target = (dir_ / "report.json").string();
    const auto r = run("eval " + s + " --alpha 0.5 --out " + target);
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(target);
    json j = json::parse(in);
    EXPECT_EQ(j["command"], "eval");
}
