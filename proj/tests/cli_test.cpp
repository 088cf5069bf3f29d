// Runs the built sio binary as a subprocess and checks exit codes and output.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sio/json_io.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// stdin comes from `input` through a here-string; stderr is folded into
// out when `merge_err` is set.
Result run(const std::string& args, const std::string& input = "", bool merge_err = false) {
  std::string cmd = std::string("'") + SIO_CLI_PATH + "' " + args;
  if (!input.empty()) cmd = "printf '%s' '" + input + "' | " + cmd;
  cmd += merge_err ? " 2>&1" : " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(SIO_SAMPLES_DIR) + "/" + name; }

sio::Json json_of(const Result& r) { return sio::parse_json_text(r.out); }

TEST(Cli, ValidateBitFlip) {
  const Result r = run("validate --input " + sample("bit_flip.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  for (const char* flag : {"trace_preserving", "incoherent", "strictly_incoherent", "bistochastic"})
    EXPECT_TRUE(j["class"][flag].get<bool>()) << flag;
  const auto& tp = j["transfer_params"];
  EXPECT_NEAR(tp["a"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(tp["b"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(tp["c"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(tp["d"].get<double>(), 0.7, 1e-12);
  EXPECT_NEAR(tp["z"].get<double>(), 0.7, 1e-12);
}

TEST(Cli, ValidateFromStdin) {
  const Result r = run("validate", R"({"builtin": {"name": "depolarizing", "q": 0.5}})");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(json_of(r)["transfer_params"]["z"].get<double>(), 0.5, 1e-12);
}

TEST(Cli, ValidateNonBistochasticOmitsParams) {
  const Result r = run("validate", R"({"kraus": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[1,0]],[[0,0],[0,0]]]]})");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_FALSE(j["class"]["bistochastic"].get<bool>());
  EXPECT_FALSE(j.contains("transfer_params"));
}

TEST(Cli, ValidationFailures) {
  const Result incomplete = run("validate --input " + sample("not_trace_preserving.json"), "", true);
  EXPECT_EQ(incomplete.code, 1);
  EXPECT_NE(incomplete.out.find("completeness violated"), std::string::npos) << incomplete.out;

  EXPECT_EQ(run("validate", R"({"kraus": )").code, 2);
  EXPECT_EQ(run("validate", R"({"builtin": {"name": "bit-flip", "q": 0.1}, "kraus": []})").code, 2);
  EXPECT_EQ(run("validate", R"({"builtin": {"name": "bit-flip", "q": 1.5}})").code, 1);
  EXPECT_EQ(run("validate --input /nonexistent/file.json").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("evolve --input " + sample("bit_flip.json")).code, 2);  // --state missing
}

TEST(Cli, DecomposeT3BitFlip) {
  const Result r = run("decompose --theorem t3", R"({"builtin": {"name": "bit-flip", "q": 0.5}})");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["theorem"], "t3");
  const auto& c = j["coefficients"];
  EXPECT_EQ(c.size(), 5u);
  EXPECT_NEAR(c["c_I"].get<double>(), -0.5, 1e-12);
  EXPECT_NEAR(c["c_id"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(c["c_s1"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(c["c_s2"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(c["c_s3"].get<double>(), 0.25, 1e-12);
  EXPECT_LT(j["residual"].get<double>(), 1e-12);
}

TEST(Cli, DecomposeF1ThetaQuarterTurn) {
  const Result t1 = run("decompose --theorem t1 --input " + sample("f1_theta.json"));
  ASSERT_EQ(t1.code, 0);
  const auto j = json_of(t1);
  EXPECT_EQ(j["coefficients"].size(), 9u);
  EXPECT_NEAR(j["coefficients"]["c_S"].get<double>(), 0.25, 1e-12);
  EXPECT_NEAR(j["coefficients"]["c_Sstar"].get<double>(), -0.5, 1e-12);
  EXPECT_LT(j["residual"].get<double>(), 1e-12);

  const Result t3 = run("decompose --theorem t3 --input " + sample("f1_theta.json"), "", true);
  EXPECT_EQ(t3.code, 1);
  EXPECT_NE(t3.out.find("theorem 3 inapplicable"), std::string::npos) << t3.out;

  EXPECT_EQ(run("decompose --theorem t2 --input " + sample("f1_theta.json")).code, 2);
}

TEST(Cli, DecomposeTypicalFormInputKeepsParameters) {
  const Result r = run("decompose --input " + sample("phase_flip_typical.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_NEAR(j["typical_form"]["a"][0].get<double>(), 0.5, 1e-15);
  EXPECT_LT(j["residual"].get<double>(), 1e-12);
}

TEST(Cli, Relaxing) {
  const auto report = [](const std::string& doc) {
    const Result r = run("relaxing", doc);
    EXPECT_EQ(r.code, 0);
    return json_of(r);
  };
  const auto pf = report(R"({"builtin": {"name": "phase-flip", "q": 0.5}})");
  EXPECT_NEAR(pf["lambda1"][0].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(pf["lambda2"][0].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(pf["z"].get<double>(), 1.0, 1e-12);
  EXPECT_FALSE(pf["relaxing"].get<bool>());
  EXPECT_TRUE(report(R"({"builtin": {"name": "depolarizing", "q": 0.5}})")["relaxing"].get<bool>());
  EXPECT_FALSE(report(R"({"builtin": {"name": "f1-theta", "q": 0.5, "theta": 0}})")["relaxing"].get<bool>());
  EXPECT_EQ(run("relaxing", R"({"kraus": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[1,0]],[[0,0],[0,0]]]]})").code, 1);
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string& header) {
  std::istringstream in(text);
  std::getline(in, header);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<double> row;
    std::istringstream fields(line);
    for (std::string f; std::getline(fields, f, ',');) row.push_back(std::stod(f));
    rows.push_back(row);
  }
  return rows;
}

TEST(Cli, EvolveDepolarizing) {
  const Result r = run("evolve --input " + sample("depolarizing.json") + " --state 1,0,0 --steps 10 --closed-form");
  ASSERT_EQ(r.code, 0);
  std::string header;
  const auto rows = parse_csv(r.out, header);
  EXPECT_EQ(header, "step,distance,rx,ry,rz,cf_rx,cf_ry,cf_rz,deviation");
  ASSERT_EQ(rows.size(), 11u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k][0], static_cast<double>(k));
    EXPECT_NEAR(rows[k][1], 0.5 * std::pow(0.5, static_cast<double>(k)), 1e-12);
    EXPECT_LT(rows[k][8], 1e-9);
  }
}

TEST(Cli, EvolveEdgeCases) {
  const Result zero = run("evolve --input " + sample("bit_flip.json") + " --state 0,0,1 --steps 0");
  ASSERT_EQ(zero.code, 0);
  std::string header;
  EXPECT_EQ(parse_csv(zero.out, header).size(), 1u);
  EXPECT_EQ(header, "step,distance,rx,ry,rz");
  EXPECT_EQ(run("evolve --input " + sample("bit_flip.json") + " --state 1,1,0").code, 1);
  EXPECT_EQ(run("evolve --input " + sample("bit_flip.json") + " --state 1,0").code, 2);
  EXPECT_EQ(run("evolve --input " + sample("bit_flip.json") + " --state 0,0,1 --steps 2000000").code, 1);
}

TEST(Cli, Convert) {
  const auto convertible = [](const std::string& args) {
    const Result r = run("convert " + args);
    EXPECT_EQ(r.code, 0) << args;
    return json_of(r)["convertible"].get<bool>();
  };
  EXPECT_TRUE(convertible("--from 0.6,0,0 --to 0,0.6,0"));
  EXPECT_FALSE(convertible("--from 0.6,0,0 --to 0,0.6,0 --pauli-only"));
  EXPECT_TRUE(convertible("--from 0.1,0.2,0.3 --to 0.1,0.2,0.3"));
  EXPECT_TRUE(convertible("--from 0.1,0.2,0.3 --to 0.1,0.2,0.3 --pauli-only"));

  const Result doc = run("convert --input " + sample("convert_witness.json"));
  ASSERT_EQ(doc.code, 0);
  const auto j = json_of(doc);
  EXPECT_TRUE(j["convertible"].get<bool>());
  EXPECT_EQ(j["region"]["kind"], "cylinder");
  EXPECT_NEAR(j["region"]["radius"].get<double>(), 0.6, 1e-15);

  EXPECT_EQ(run("convert --from 1,1,0 --to 0,0,0").code, 1);
  EXPECT_EQ(run("convert --from 0,0,0").code, 2);
}

TEST(Cli, Synthesize) {
  const Result ok = run("synthesize --params 0.5,0,0,0.5,0.5");
  ASSERT_EQ(ok.code, 0);
  const auto j = json_of(ok);
  EXPECT_TRUE(j["feasible"].get<bool>());
  EXPECT_LT(j["residual"].get<double>(), 1e-10);

  const Result doc = run("synthesize --input " + sample("synth_depolarizing.json"));
  ASSERT_EQ(doc.code, 0);
  EXPECT_EQ(doc.out, ok.out);

  const Result id = run("synthesize --params 1,0,0,1,1");
  ASSERT_EQ(id.code, 0);
  const auto tf = json_of(id)["typical_form"];
  EXPECT_EQ(tf["a"], sio::Json::parse("[1, 0, 0, 0]"));
  EXPECT_EQ(tf["b1"], sio::Json::parse("[1, 0]"));

  const Result bad = run("synthesize --params 1,0,0,1,0", "", true);
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("|p| exceeds |b1|^2"), std::string::npos) << bad.out;
}

TEST(Cli, OutputFileMatchesStdout) {
  const std::string path = ::testing::TempDir() + "sio_cli_out.json";
  const Result to_file = run("validate --input " + sample("bit_flip.json") + " --output " + path);
  ASSERT_EQ(to_file.code, 0);
  EXPECT_TRUE(to_file.out.empty());
  FILE* f = std::fopen(path.c_str(), "rb");
  ASSERT_NE(f, nullptr);
  std::string written;
  std::array<char, 4096> buf{};
  for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), f)) > 0;) written.append(buf.data(), n);
  std::fclose(f);
  std::remove(path.c_str());
  EXPECT_EQ(written, run("validate --input " + sample("bit_flip.json")).out);
}

TEST(Cli, Deterministic) {
  for (const std::string args : {"decompose --input " + sample("f1_theta.json"),
                                 "relaxing --input " + sample("f1_theta.json"),
                                 "evolve --closed-form --state 0.3,0.2,0.1 --input " + sample("f1_theta.json")}) {
    const Result a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, SelftestSeedChangesStreams) {
  const Result a = run("selftest --seed 7");
  const Result b = run("selftest --seed 7");
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("selftest seed=7"), std::string::npos);
}

}  // namespace
