#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reclab/serialization.hpp"
#include "reclab_cli/cli.hpp"

using namespace reclab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "reclab");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("reclab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

class DigitsEnv {
 public:
  explicit DigitsEnv(const char* value) { setenv("RECLAB_DIGITS", value, 1); }
  ~DigitsEnv() { unsetenv("RECLAB_DIGITS"); }
};

}  // namespace

TEST(Cli, ApproxChainFifteen) {
  const Outcome o = run_cli({"approx", "--alphas", "chain:15", "--Q", "1e35", "--json"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = parse_json_text(o.out);
  EXPECT_EQ(j["alphas"], "chain:15");
  EXPECT_TRUE(j["result"]["within_bounds"].get<bool>());
  const ApproximationResult r = result_from_json(j["result"]);
  EXPECT_LE(r.error, HPReal::parse("0.01"));
  EXPECT_EQ(to_json(r).dump(), j["result"].dump());
  EXPECT_NE(j["note"].get<std::string>().find("reduced row"), std::string::npos);
}

TEST(Cli, ApproxTextNamesTheRow) {
  const Outcome o = run_cli({"approx", "--alphas", "sqrt:[2,3,5]", "--Q", "1e12"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_NE(o.out.find("q = "), std::string::npos);
  EXPECT_NE(o.out.find("within_bounds = true"), std::string::npos);
  EXPECT_NE(o.out.find("note: q comes from reduced row 0"), std::string::npos);
}

TEST(Cli, AllRowsListsEveryCandidate) {
  const Outcome o =
      run_cli({"approx", "--alphas", "chain:15", "--Q", "1e35", "--json", "--all-rows"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = parse_json_text(o.out);
  ASSERT_TRUE(j["results"].is_array());
  bool seen = false;
  for (const auto& r : j["results"]) seen |= r["q"] == "84350294911456044599486768675168";
  EXPECT_TRUE(seen);
}

TEST(Cli, RelationsFindTheResonance) {
  const Outcome o = run_cli({"relations", "--values", "sqrt-sin:5"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = parse_json_text(o.out);
  EXPECT_EQ(j["count"], 1);
  EXPECT_EQ(j["relations"][0]["coeffs"], json::parse(R"(["1","0","1","0","-1"])"));
}

TEST(Cli, RelationsReportAbsence) {
  const Outcome o = run_cli({"relations", "--values", "sqrt-sin:15"});
  EXPECT_EQ(o.code, cli::kExitOther);
  EXPECT_EQ(parse_json_text(o.err)["error"], "NoRelation");
}

TEST(Cli, HuntFindsAVerifiedWitness) {
  const Outcome o = run_cli({"hunt", "--epsilon", "1e-6", "--roots", "2,3,5"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = parse_json_text(o.out);
  EXPECT_TRUE(j["verified"].get<bool>());
  EXPECT_LE(hpreal_from_json(j["gap"]), HPReal::parse("1e-6"));
}

TEST(Cli, QuantumFromFile) {
  const fs::path dir = scratch_dir("quantum");
  std::ofstream(dir / "spec.json")
      << R"({"energies": ["1", "2", "3", "4"], "amplitudes": ["0.5", "0.5", "0.5", "0.5"]})";
  const Outcome o =
      run_cli({"quantum", "--spectrum", (dir / "spec.json").string(), "--epsilon", "1e-6"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json j = parse_json_text(o.out);
  EXPECT_EQ(j["q"], "4");
  const Outcome ratio = run_cli({"approx", "--alphas",
                                 "ratio-of-energies:" + (dir / "spec.json").string(), "--Q", "1e6"});
  EXPECT_EQ(ratio.code, cli::kExitOk) << ratio.err;
  EXPECT_NE(ratio.out.find("q = 4\n"), std::string::npos);
}

TEST(Cli, ChainWritesSnapshotsAndReport) {
  const fs::path dir = scratch_dir("chain");
  const Outcome o = run_cli({"chain", "--N", "15", "--Q", "1e35", "--k", "4", "--out", dir.string()});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  for (const char* f : {"snapshot_initial.csv", "snapshot_Tpr-200.csv", "snapshot_Tpr-3.csv",
                        "snapshot_Tpr.csv", "snapshot_Tpr+3.csv", "report.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const json report = parse_json_text(slurp(dir / "report.json"));
  EXPECT_EQ(report.dump(2) + "\n", o.out);
  const auto& snaps = report["snapshots"];
  ASSERT_EQ(snaps.size(), 4u);
  EXPECT_EQ(snaps[2]["time"], "Tpr");
  const double at = hpreal_from_json(snaps[2]["deviation"]).to_double();
  EXPECT_LE(at, 0.05);
  EXPECT_GT(hpreal_from_json(snaps[0]["deviation"]).to_double(), 0.3);
  for (const auto& s : snaps) {
    EXPECT_EQ(hpreal_from_json(s["energy"]).to_decimal(10), "1.500000000");
  }
}

TEST(Cli, ChainOutputIsByteIdentical) {
  const fs::path a = scratch_dir("chain_a");
  const fs::path b = scratch_dir("chain_b");
  const std::vector<std::string> base{"chain", "--N", "6", "--Q", "1e15", "--k", "2",
                                      "--snapshots", "Tpr,Tpr+1.5,100"};
  auto args_a = base, args_b = base;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string()});
  ASSERT_EQ(run_cli(args_a).code, cli::kExitOk);
  ASSERT_EQ(run_cli(args_b).code, cli::kExitOk);
  for (const auto& entry : fs::directory_iterator(a)) {
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
  }
  EXPECT_TRUE(fs::exists(a / "snapshot_100.csv"));
}

TEST(Cli, ScalingWritesCsvAndSummary) {
  const fs::path dir = scratch_dir("scaling");
  const fs::path csv = dir / "n5.csv";
  const Outcome o = run_cli({"scaling", "--N", "5", "--Q-range", "1e20:1e40:11", "--out", csv.string()});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json summary = parse_json_text(slurp(dir / "n5.json"));
  EXPECT_EQ(summary["predicted"], "1/3");
  EXPECT_EQ(summary.dump(2) + "\n", o.out);
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind(kScalingCsvHeader, 0), 0u);
  const Outcome serial = run_cli({"scaling", "--N", "5", "--Q-range", "1e20:1e40:11", "--serial"});
  EXPECT_EQ(serial.out, text + o.out);
}

TEST(Cli, ParseErrorsExitTwoWithPosition) {
  const Outcome o = run_cli({"approx", "--alphas", "sqrt:[2,x]", "--Q", "1e10"});
  EXPECT_EQ(o.code, cli::kExitParse);
  const json e = parse_json_text(o.err);
  EXPECT_EQ(e["error"], "ParseError");
  EXPECT_EQ(e["position"], 8);
  EXPECT_EQ(run_cli({"approx", "--alphas", "bogus:1", "--Q", "10"}).code, cli::kExitParse);
  EXPECT_EQ(run_cli({"approx", "--alphas", "sqrt:[2]", "--Q", "1.5e3"}).code, cli::kExitParse);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitParse);
  EXPECT_EQ(run_cli({"approx", "--Q", "10"}).code, cli::kExitParse);
  EXPECT_EQ(run_cli({"hunt", "--epsilon", "tiny"}).code, cli::kExitParse);
}

TEST(Cli, PrecisionErrorsExitThree) {
  const Outcome o = run_cli({"approx", "--alphas", "[1.23456@3]", "--Q", "10000"});
  EXPECT_EQ(o.code, cli::kExitPrecision);
  EXPECT_EQ(parse_json_text(o.err)["error"], "AmbiguousRounding");
}

TEST(Cli, OtherErrorsExitOne) {
  EXPECT_EQ(run_cli({"chain", "--N", "5", "--Q", "1e10", "--k", "9", "--out",
                     scratch_dir("bad_k").string()})
                .code,
            cli::kExitOther);
  EXPECT_EQ(run_cli({"quantum", "--spectrum", "/nonexistent/spec.json", "--epsilon", "0.1"}).code,
            cli::kExitOther);
}

TEST(Cli, HelpExitsZero) {
  const Outcome o = run_cli({"--help"});
  EXPECT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("approx"), std::string::npos);
}

TEST(Cli, DigitsEnvironmentVariable) {
  {
    DigitsEnv env("60");
    EXPECT_EQ(cli::evaluation_digits(), 60);
    const Outcome o = run_cli({"hunt", "--epsilon", "1e-3"});
    ASSERT_EQ(o.code, cli::kExitOk) << o.err;
    EXPECT_LE(hpreal_from_json(parse_json_text(o.out)["t"]).digits(), 60);
  }
  EXPECT_EQ(cli::evaluation_digits(), cli::kDefaultEvaluationDigits);
  {
    DigitsEnv env("5");
    EXPECT_EQ(run_cli({"hunt", "--epsilon", "1e-3"}).code, cli::kExitParse);
  }
}
