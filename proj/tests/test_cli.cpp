#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HYPERSC_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(HYPERSC_DATA) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
    std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(Cli, EnvelopeAndExitZero) {
    auto r = run("delta " + data("cycle6.json") + " --exact");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], "hypersc-report/1");
    EXPECT_EQ(j["command"], "delta");
    EXPECT_EQ(j["results"]["delta_four_point"], "1");
    EXPECT_EQ(j["results"]["exit_code"], 0);
    EXPECT_EQ(j["inputs_digest"].get<std::string>().size(), 64u);
}

TEST(Cli, TextFormat) {
    auto r = run("--format text delta " + data("tree.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("delta_four_point"), std::string::npos);
    EXPECT_THROW(nlohmann::json::parse(r.out), nlohmann::json::parse_error);
}

TEST(Cli, FailingCheckExitsOne) {
    EXPECT_EQ(run("sc-check " + data("aaabbb.txt") + " --lambda 1/6").code, 1);
    EXPECT_EQ(run("sc-check " + data("aaabbb.txt") + " --lambda 1/3").code, 0);
    EXPECT_EQ(run("sc-check " + data("commutator.txt") + " --lambda 1/4 --variant cdouble").code, 0);
    EXPECT_EQ(run("graph-sc " + data("two_cycle.json") + " --lambda 1/6").code, 1);
}

TEST(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run("delta " + temp_file("bad.json", "{")).code, 2);
    EXPECT_EQ(run("delta /nonexistent/space.json").code, 2);
    EXPECT_EQ(run("no-such-command").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("gromov " + data("cycle6.json") + " a b zz").code, 2);
    EXPECT_EQ(run("sc-check " + data("aaabbb.txt") + " --lambda -1").code, 2);
    EXPECT_EQ(run("cone --circle 12 --rho 0").code, 2);
    auto neg = temp_file("neg.json", R"({"vertices":["a","b"],"edges":[["a","b",-1]]})");
    EXPECT_EQ(run("delta " + neg).code, 2);
}

TEST(Cli, ByteIdenticalAcrossRunsAndThreads) {
    const std::vector<std::string> cases{
        "delta " + data("cycle6.json") + " --float",
        "cone --circle 12 --rho 3 --delta-check",
        "coneoff " + data("coneoff_cycle.json") + " --sandwich-check",
        "axes --rank 2 --radius 3 --word ab --delta 1/10",
        "rotation --desk-model --check fundamental",
    };
    for (const auto& args : cases) {
        const auto base = run("--threads 1 " + args).out;
        ASSERT_FALSE(base.empty()) << args;
        for (int t : {1, 2, 8}) EXPECT_EQ(run("--threads " + std::to_string(t) + " " + args).out, base) << args;
    }
}

TEST(Cli, SeededSamplingIsReproducible) {
    const std::string args = "delta " + data("cycle6.json") + " --sample 50";
    EXPECT_EQ(run("--seed 7 " + args).out, run("--seed 7 " + args).out);
}

TEST(Cli, GromovProduct) {
    auto r = run("gromov " + data("cycle6.json") + " a b c");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["results"]["gromov_product"], "1");  // (2 + 1 - 1) / 2
}
