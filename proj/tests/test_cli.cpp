#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gsr/cli.hpp"

namespace gsr::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() / (std::string("gsr_cli_") + info->test_suite_name() + "_" + info->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

std::string read(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;
};

Invocation cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gsr");
    std::vector<char*> argv;
    for (std::string& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

TEST(Config, ReadsKeyValueFile) {
    TempDir dir;
    write(dir.path() / "c.cfg", "# settings\npopulation = 40\n\nsurvivors=12  # trailing\nbenchmark = Nguyen-3\n");
    const auto kv = read_config_file(dir.path() / "c.cfg");
    EXPECT_EQ(kv.at("population"), "40");
    EXPECT_EQ(kv.at("survivors"), "12");
    EXPECT_EQ(kv.at("benchmark"), "Nguyen-3");
    EXPECT_EQ(kv.size(), 3u);
}

TEST(Config, FileErrors) {
    TempDir dir;
    EXPECT_THROW(read_config_file(dir.path() / "missing.cfg"), ConfigError);
    write(dir.path() / "bad.cfg", "population 40\n");
    EXPECT_THROW(read_config_file(dir.path() / "bad.cfg"), ConfigError);
    write(dir.path() / "empty_key.cfg", " = 3\n");
    EXPECT_THROW(read_config_file(dir.path() / "empty_key.cfg"), ConfigError);
}

TEST(Config, ApplySetting) {
    RunConfig cfg;
    apply_setting(cfg, "population", "50");
    apply_setting(cfg, "lambda", "0.25");
    apply_setting(cfg, "admm_max_iters", "200");
    apply_setting(cfg, "sgsr", "true");
    apply_setting(cfg, "seed", "7");
    apply_setting(cfg, "suite", "jin");
    apply_setting(cfg, "out", "elsewhere");
    EXPECT_EQ(cfg.gp.population, 50);
    EXPECT_EQ(cfg.gp.admm.lambda, 0.25);
    EXPECT_EQ(cfg.gp.admm.max_iters, 200);
    EXPECT_TRUE(cfg.gp.sgsr);
    EXPECT_EQ(cfg.seed, 7u);
    EXPECT_EQ(cfg.suite, "jin");
    EXPECT_EQ(cfg.out, fs::path("elsewhere"));
}

TEST(Config, ApplySettingRejectsBadValues) {
    RunConfig cfg;
    EXPECT_THROW(apply_setting(cfg, "population", "many"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "population", "3.5"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "lambda", "nan"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "sgsr", "maybe"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "runs", "two"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "colour", "blue"), ConfigError);
}

TEST(Config, RunSeeds) {
    RunConfig cfg;
    cfg.runs = 3;
    EXPECT_EQ(run_seeds(cfg), (std::vector<std::uint64_t>{0, 1, 2}));
    cfg.seed = 10;
    EXPECT_EQ(run_seeds(cfg), (std::vector<std::uint64_t>{10, 11, 12}));
}

TEST(Csv, HeaderAndRow) {
    EXPECT_EQ(suite_csv_header(false), "benchmark,recovery_rate,mean_rmse,median_rmse,mean_runtime_s");
    EXPECT_EQ(suite_csv_header(true),
              "benchmark,recovery_rate,mean_rmse,median_rmse,mean_runtime_s,sgsr_recovery_rate,sgsr_mean_rmse,"
              "sgsr_median_rmse,sgsr_mean_runtime_s");
    SuiteReport r;
    r.benchmark = "Jin-1";
    r.recovery_rate = 50.0;
    r.mean_rmse = 0.25;
    r.median_rmse = 0.125;
    r.mean_runtime_seconds = 2.0;
    const std::string row = suite_csv_row(r, nullptr);
    EXPECT_EQ(row.rfind("Jin-1,", 0), 0u);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 4);
    const std::string both = suite_csv_row(r, &r);
    EXPECT_EQ(std::count(both.begin(), both.end(), ','), 8);
}

TEST(Json, NonFiniteBecomesNull) {
    RunRecord r;
    r.benchmark = "Nguyen-1";
    r.best_fitness = std::numeric_limits<double>::infinity();
    const nlohmann::json j = record_to_json(r);
    EXPECT_TRUE(j.at("best_fitness").is_null());
    EXPECT_EQ(j.at("benchmark"), "Nguyen-1");
}

TEST(Verify, PrintedRelationIsExact) {
    const EquivalenceReport r = verify_relation("0.44721*y = 0.89442*sin(x1)*cos(x2)", "Nguyen-10");
    EXPECT_TRUE(r.exact);
}

TEST(Verify, DegenerateAndMalformedInput) {
    EXPECT_THROW(verify_relation("0.5*y = 0", "Nguyen-1"), std::invalid_argument);
    EXPECT_THROW(verify_relation("0 = x", "Nguyen-1"), std::invalid_argument);
    EXPECT_THROW(verify_relation("3 = x", "Nguyen-1"), std::invalid_argument);
    EXPECT_THROW(verify_relation("y = = x", "Nguyen-1"), std::invalid_argument);
    EXPECT_THROW(verify_relation("y = x", "Nguyen-100"), std::out_of_range);
}

TEST(Verify, ExitCodes) {
    TempDir dir;
    write(dir.path() / "good.txt", "0.70711*ln(y) = 0.70711*x2*ln(x1)\n");
    write(dir.path() / "wrong.txt", "y = x1*x2\n");
    write(dir.path() / "bad.txt", "y = \n");
    Invocation good = cli({"verify", (dir.path() / "good.txt").string(), "--benchmark", "Nguyen-11"});
    EXPECT_EQ(good.code, 0) << good.err;
    EXPECT_TRUE(nlohmann::json::parse(good.out).at("exact").get<bool>());
    EXPECT_EQ(cli({"verify", (dir.path() / "wrong.txt").string(), "--benchmark", "Nguyen-11"}).code, 3);
    EXPECT_EQ(cli({"verify", (dir.path() / "bad.txt").string(), "--benchmark", "Nguyen-11"}).code, 2);
    EXPECT_EQ(cli({"verify", (dir.path() / "none.txt").string(), "--benchmark", "Nguyen-11"}).code, 2);
    EXPECT_EQ(cli({"verify", (dir.path() / "good.txt").string(), "--benchmark", "Nguyen-99"}).code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"run"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"run", "--benchmark", "Nguyen-99"}).code, 2);
    EXPECT_EQ(cli({"suite", "--suite", "nguyen", "--runs", "0"}).code, 2);
    EXPECT_EQ(cli({"suite", "--suite", "feynman"}).code, 2);
    EXPECT_EQ(cli({"suite"}).code, 2);
    EXPECT_EQ(cli({"run", "--benchmark", "Nguyen-1", "--set", "survivors=1"}).code, 2);
    EXPECT_EQ(cli({"run", "--benchmark", "Nguyen-1", "--set", "population"}).code, 2);
    EXPECT_EQ(cli({"run", "--benchmark", "Nguyen-1", "--config", "/nonexistent/gsr.cfg"}).code, 2);
}

TEST(Cli, Registry) {
    const Invocation r = cli({"registry"});
    ASSERT_EQ(r.code, 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.size(), 67u);
    EXPECT_EQ(j.at(0).at("name"), "Nguyen-1");
    EXPECT_EQ(j.at(0).at("train").at("text"), "U(-1,1,20)");
}

nlohmann::json without_runtime(std::string line) {
    nlohmann::json j = nlohmann::json::parse(line);
    j.erase("runtime_seconds");
    return j;
}

TEST(Cli, RunWritesOutputsDeterministically) {
    TempDir dir;
    const std::string a = (dir.path() / "a").string();
    const std::string b = (dir.path() / "b").string();
    const Invocation ra = cli({"run", "--benchmark", "Nguyen-12*", "--seed", "2", "--max-generations", "15", "--out", a});
    const Invocation rb = cli({"run", "--benchmark", "Nguyen-12*", "--seed", "2", "--max-generations", "15", "--out", b});
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    EXPECT_EQ(without_runtime(ra.out), without_runtime(rb.out));
    EXPECT_EQ(without_runtime(read(fs::path(a) / "runs.jsonl")), without_runtime(ra.out));
    EXPECT_EQ(read(fs::path(a) / "traces" / "Nguyen-12star_seed2.jsonl"),
              read(fs::path(b) / "traces" / "Nguyen-12star_seed2.jsonl"));
    EXPECT_EQ(read(fs::path(a) / "expressions" / "Nguyen-12star_seed2.txt"),
              read(fs::path(b) / "expressions" / "Nguyen-12star_seed2.txt"));
    EXPECT_EQ(without_runtime(ra.out).at("generations"), 15);
}

TEST(Cli, ConfigFileThenSetThenFlags) {
    TempDir dir;
    write(dir.path() / "c.cfg", "benchmark = Nguyen-1\nmax_generations = 3\nseed = 5\n");
    const Invocation r = cli({"run", "--benchmark", "Nguyen-2", "--config", (dir.path() / "c.cfg").string(), "--set",
                              "seed=6", "--seed", "8", "--out", (dir.path() / "o").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const nlohmann::json j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("benchmark"), "Nguyen-2");
    EXPECT_EQ(j.at("seed"), 8);
    EXPECT_LE(j.at("generations").get<long>(), 3);
}

TEST(Cli, SuiteSummary) {
    TempDir dir;
    const Invocation r = cli({"suite", "--benchmark", "Nguyen-1", "--runs", "2", "--workers", "2", "--ablation",
                              "--max-generations", "30", "--out", dir.path().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string csv = read(dir.path() / "summary.csv");
    EXPECT_EQ(csv, r.out);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    EXPECT_EQ(csv.rfind(suite_csv_header(true) + "\nNguyen-1,", 0), 0u);
    const std::string runs = read(dir.path() / "runs.jsonl");
    EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 4);
    EXPECT_TRUE(fs::exists(dir.path() / "expressions" / "Nguyen-1_seed1_sgsr.txt"));
    EXPECT_TRUE(fs::exists(dir.path() / "traces" / "Nguyen-1_seed0.jsonl"));
}

TEST(Cli, WorkersDoNotChangeResults) {
    TempDir dir;
    const std::string one = (dir.path() / "one").string();
    const std::string three = (dir.path() / "three").string();
    ASSERT_EQ(cli({"suite", "--benchmark", "Nguyen-9", "--runs", "3", "--max-generations", "10", "--out", one}).code, 0);
    ASSERT_EQ(cli({"suite", "--benchmark", "Nguyen-9", "--runs", "3", "--workers", "3", "--max-generations", "10",
                   "--out", three})
                  .code,
              0);
    std::istringstream a(read(fs::path(one) / "runs.jsonl"));
    std::istringstream b(read(fs::path(three) / "runs.jsonl"));
    std::string la;
    std::string lb;
    int lines = 0;
    while (std::getline(a, la) && std::getline(b, lb)) {
        EXPECT_EQ(without_runtime(la), without_runtime(lb));
        ++lines;
    }
    EXPECT_EQ(lines, 3);
}

} // namespace
} // namespace gsr::cli
