// Drives the command-line binary end to end as a subprocess.  The binary path
// arrives as argv[1] from the test harness.
#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "delta3/evaluator.hpp"

namespace {

using nlohmann::json;

std::string g_cli;
int g_run_counter = 0;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string temp_path(const std::string& suffix) {
    return testing::TempDir() + "delta3_cli_" + std::to_string(::getpid()) + "_" +
           std::to_string(g_run_counter++) + suffix;
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = temp_path(".out");
    const std::string err_path = temp_path(".err");
    const std::string cmd =
        "\"" + g_cli + "\" " + args + " >\"" + out_path + "\" 2>\"" + err_path + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

TEST(CliTest, SymmetricCohomologyExampleIsExact) {
    const auto r = run_cli("cohomology --group cyclic:2 --module trivial:2 --degree 2 --symmetric");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "{\"H\":[2],\"HS\":[]}\n");
}

TEST(CliTest, PlainCohomologyOmitsTheSymmetricField) {
    const auto r = run_cli("cohomology --group cyclic:2 --module trivial:2 --degree 2");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "{\"H\":[2]}\n");
}

TEST(CliTest, DegreeOneKeepsItsSymmetricPart) {
    const auto r = run_cli("cohomology --group cyclic:2 --module trivial:2 --degree 1 --symmetric");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "{\"H\":[2],\"HS\":[2]}\n");
}

TEST(CliTest, UnknownSubcommandIsRejectedWithUsage) {
    const auto r = run_cli("frobnicate");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli("").code, 2);
}

TEST(CliTest, MissingInputFileIsRejected) {
    const auto r = run_cli("verify-delta --input /nonexistent/delta3-no-such-file.json");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos) << r.err;
}

TEST(CliTest, MalformedInputIsRejected) {
    const std::string broken = temp_path(".json");
    spit(broken, "{ this is not json");
    EXPECT_EQ(run_cli("verify-delta --input \"" + broken + "\"").code, 2);

    const std::string wrong_shape = temp_path(".json");
    spit(wrong_shape, "[1,2,3]");
    EXPECT_EQ(run_cli("verify-algebra --input \"" + wrong_shape + "\"").code, 2);

    EXPECT_EQ(run_cli("cohomology --group cyclic:0 --module trivial:2 --degree 1").code, 2);
    EXPECT_EQ(run_cli("cohomology --group cyclic:2 --module trivial:2").code, 2);
    EXPECT_EQ(run_cli("generate nonsense-kind --group cyclic:2").code, 2);
    std::remove(broken.c_str());
    std::remove(wrong_shape.c_str());
}

TEST(CliTest, CarrierFamilyRoundTrip) {
    const auto gen = run_cli("generate T_G_0 --group symmetric:3");
    ASSERT_EQ(gen.code, 0) << gen.err;
    const std::string path = temp_path(".json");
    spit(path, gen.out);
    const auto ver = run_cli("verify-delta --input \"" + path + "\"");
    EXPECT_EQ(ver.code, 0) << ver.err;
    const json rep = json::parse(ver.out);
    EXPECT_TRUE(rep.at("pass").get<bool>());
    EXPECT_FALSE(rep.at("checks").empty());
    std::remove(path.c_str());
}

TEST(CliTest, TwistedFamilyRoundTrip) {
    const auto gen = run_cli("generate T_G_A_alpha --group cyclic:2 --module trivial:2");
    ASSERT_EQ(gen.code, 0) << gen.err;
    const std::string path = temp_path(".json");
    spit(path, gen.out);
    EXPECT_EQ(run_cli("verify-delta --input \"" + path + "\"").code, 0);
    std::remove(path.c_str());
}

TEST(CliTest, PairBasisRoundTrip) {
    const auto gen = run_cli("generate dw --group cyclic:2");
    ASSERT_EQ(gen.code, 0) << gen.err;
    const std::string path = temp_path(".json");
    spit(path, gen.out);
    const auto ver = run_cli("verify-algebra --input \"" + path + "\"");
    EXPECT_EQ(ver.code, 0) << ver.err;
    EXPECT_TRUE(json::parse(ver.out).at("pass").get<bool>());
    std::remove(path.c_str());

    const auto s1 = run_cli("generate dw --group cyclic:2 --seed 7");
    const auto s2 = run_cli("generate dw --group cyclic:2 --seed 7");
    ASSERT_EQ(s1.code, 0) << s1.err;
    EXPECT_EQ(s1.out, s2.out);
    const std::string seeded = temp_path(".json");
    spit(seeded, s1.out);
    const auto sv = run_cli("verify-algebra --input \"" + seeded + "\"");
    EXPECT_NE(sv.code, 2) << sv.err;
    EXPECT_TRUE(json::parse(sv.out).contains("pass"));
    std::remove(seeded.c_str());
}

TEST(CliTest, SymbolAlgebraRoundTrip) {
    const auto gen = run_cli("generate sixj --degree 1");
    ASSERT_EQ(gen.code, 0) << gen.err;
    const std::string path = temp_path(".json");
    spit(path, gen.out);
    EXPECT_EQ(run_cli("verify-algebra --input \"" + path + "\"").code, 0);
    std::remove(path.c_str());

    const auto rnd = run_cli("generate sixj --degree 2 --seed 3");
    ASSERT_EQ(rnd.code, 0) << rnd.err;
    const std::string rpath = temp_path(".json");
    spit(rpath, rnd.out);
    EXPECT_NE(run_cli("verify-algebra --input \"" + rpath + "\"").code, 2);
    std::remove(rpath.c_str());
}

TEST(CliTest, TriangulationGenerationAndEvaluation) {
    const auto alg = run_cli("generate dw --group cyclic:2");
    ASSERT_EQ(alg.code, 0) << alg.err;
    const std::string alg_path = temp_path(".json");
    spit(alg_path, alg.out);

    const auto tri =
        run_cli("generate triangulation --input \"" + alg_path + "\" --degree 2 --seed 5");
    ASSERT_EQ(tri.code, 0) << tri.err;
    const json doc = json::parse(tri.out);
    EXPECT_TRUE(doc.contains("algebra"));
    EXPECT_TRUE(doc.contains("triangulation"));
    const std::string doc_path = temp_path(".json");
    spit(doc_path, tri.out);

    const auto ev = run_cli("evaluate --input \"" + doc_path + "\" --seed 1 --trials 3");
    EXPECT_EQ(ev.code, 0) << ev.err;
    const json out = json::parse(ev.out);
    EXPECT_TRUE(out.at("coherent").get<bool>());
    EXPECT_EQ(out.at("trials").get<int>(), 3);
    const auto ev2 = run_cli("evaluate --input \"" + doc_path + "\" --seed 1 --trials 3");
    EXPECT_EQ(ev2.out, ev.out);
    std::remove(alg_path.c_str());
    std::remove(doc_path.c_str());
}

TEST(CliTest, GenerateTriangulationNeedsAnAlgebra) {
    EXPECT_EQ(run_cli("generate triangulation --degree 2").code, 2);
}

TEST(CliTest, TamperedCarrierFamilyFailsVerification) {
    const auto gen = run_cli("generate T_G_0 --group cyclic:2");
    ASSERT_EQ(gen.code, 0) << gen.err;
    json doc = json::parse(gen.out);
    ASSERT_GE(doc.at("P").size(), 2u);
    doc["P"][0][1] = doc["P"][1][1];  // break injectivity of the rotation table
    const std::string path = temp_path(".json");
    spit(path, doc.dump());
    const auto ver = run_cli("verify-delta --input \"" + path + "\"");
    EXPECT_EQ(ver.code, 1) << ver.err;
    EXPECT_FALSE(json::parse(ver.out).at("pass").get<bool>());
    std::remove(path.c_str());
}

TEST(CliTest, TamperedAlgebraFailsVerification) {
    const auto gen = run_cli("generate dw --group cyclic:2");
    ASSERT_EQ(gen.code, 0) << gen.err;
    json doc = json::parse(gen.out);
    ASSERT_FALSE(doc.at("m").empty());
    doc["m"][0][4] = "7";  // rescale one product coefficient
    const std::string path = temp_path(".json");
    spit(path, doc.dump());
    const auto ver = run_cli("verify-algebra --input \"" + path + "\"");
    EXPECT_EQ(ver.code, 1) << ver.err;
    EXPECT_FALSE(json::parse(ver.out).at("pass").get<bool>());

    json eval_doc;
    eval_doc["algebra"] = doc;
    eval_doc["triangulation"] = delta3::triangulation_to_json(delta3::single_cell_triangulation(0));
    const std::string doc_path = temp_path(".json");
    spit(doc_path, eval_doc.dump());
    const auto ev = run_cli("evaluate --input \"" + doc_path + "\"");
    EXPECT_EQ(ev.code, 1) << ev.err;
    std::remove(path.c_str());
    std::remove(doc_path.c_str());
}

TEST(CliTest, ClassifySchemaAndDeterminism) {
    const auto r = run_cli("classify --group cyclic:2 --module trivial:2");
    ASSERT_EQ(r.code, 0) << r.err;
    const json out = json::parse(r.out);
    EXPECT_GE(out.at("valid").get<int>(), 1);
    ASSERT_FALSE(out.at("classes").empty());
    for (const auto& cls : out.at("classes")) {
        EXPECT_TRUE(cls.contains("representative"));
        EXPECT_GE(cls.at("size").get<int>(), 1);
    }
    const auto again = run_cli("classify --group cyclic:2 --module trivial:2");
    EXPECT_EQ(again.out, r.out);
}

TEST(CliTest, ParallelVerificationMatchesSequential) {
    const auto gen = run_cli("generate T_G_0 --group cyclic:4");
    ASSERT_EQ(gen.code, 0) << gen.err;
    const std::string path = temp_path(".json");
    spit(path, gen.out);
    const auto one = run_cli("verify-delta --input \"" + path + "\" --jobs 1");
    const auto three = run_cli("verify-delta --input \"" + path + "\" --jobs 3");
    EXPECT_EQ(one.code, 0) << one.err;
    EXPECT_EQ(three.code, 0) << three.err;
    EXPECT_EQ(one.out, three.out);
    std::remove(path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_test <path-to-binary>\n");
        return 1;
    }
    g_cli = argv[1];
    return RUN_ALL_TESTS();
}
