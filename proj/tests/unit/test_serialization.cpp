#include <gtest/gtest.h>

#include <sstream>

#include "reclab/chain.hpp"
#include "reclab/serialization.hpp"

using namespace reclab;

namespace {

template <class T, class From>
void expect_fixpoint(const T& value, From from) {
  const std::string once = to_json(value).dump();
  const std::string twice = to_json(from(parse_json_text(once))).dump();
  EXPECT_EQ(once, twice);
}

ApproximationProblem roots_problem() {
  ApproximationProblem p;
  for (long r : {2L, 3L, 5L}) p.alphas.push_back(sqrt(HPReal(BigInt(r), 60)));
  p.Q = pow10(20);
  return p;
}

}  // namespace

TEST(Json, ScalarsAreStrings) {
  EXPECT_EQ(to_json(pow10(40)).dump(), "\"10000000000000000000000000000000000000000\"");
  EXPECT_EQ(to_json(HPReal::parse("1.41421356@9")).dump(), "\"1.41421356@9\"");
  EXPECT_EQ(bigint_from_json(to_json(BigInt(-17))), -17);
  EXPECT_THROW(bigint_from_json(json(5)), ParseError);
  EXPECT_THROW(hpreal_from_json(json::array()), ParseError);
}

TEST(Json, ProblemAndResultRoundTrip) {
  ApproximationProblem p = roots_problem();
  p.target_epsilon = HPReal::parse("1e-6");
  expect_fixpoint(p, problem_from_json);
  const ApproximationResult r = solve(roots_problem());
  expect_fixpoint(r, result_from_json);
  const ApproximationResult back = result_from_json(parse_json_text(to_json(r).dump()));
  EXPECT_EQ(back.q, r.q);
  EXPECT_EQ(back.p, r.p);
  EXPECT_EQ(back.error.to_string(), r.error.to_string());
  EXPECT_EQ(back.within_bounds(), r.within_bounds());
}

TEST(Json, BasisRoundTrip) {
  const LatticeBasis b = build_matrix(roots_problem());
  EXPECT_EQ(basis_from_json(parse_json_text(to_json(b).dump())), b);
  expect_fixpoint(b, basis_from_json);
  EXPECT_THROW(basis_from_json(parse_json_text("[[\"1\",\"2\"],[\"3\"]]")), DimensionMismatch);
}

TEST(Json, RelationRoundTrip) {
  const RelationResult r{{1, 0, 1, 0, -1}, HPReal::parse("0@120")};
  expect_fixpoint(r, relation_from_json);
}

TEST(Json, SpectrumAcceptsBothAmplitudeForms) {
  const json j = parse_json_text(
      R"({"energies": ["1", "2"], "amplitudes": ["0.6", {"re": "0", "im": "0.8"}]})");
  const QuantumSpectrum s = spectrum_from_json(j);
  ASSERT_EQ(s.amplitudes.size(), 2u);
  EXPECT_TRUE(s.amplitudes[0].im.is_zero());
  EXPECT_EQ(s.amplitudes[1].im.to_decimal(2), "0.80");
  expect_fixpoint(s, spectrum_from_json);
  EXPECT_THROW(spectrum_from_json(parse_json_text(R"({"energies": ["1"]})")), ParseError);
  EXPECT_THROW(spectrum_from_json(parse_json_text(R"({"energies": ["1"], "amplitudes": ["0.5"]})")),
               InvalidArgument);
}

TEST(Json, MalformedTextReportsOffset) {
  try {
    parse_json_text("{\"a\": [1, 2");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.position(), 0u);
  }
}

TEST(Csv, SnapshotFormat) {
  const ChainModel m = make_model(3, 30);
  const std::string csv = snapshot_csv(localized_initial_state(m, 2));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kSnapshotCsvHeader);
  std::getline(in, line);
  EXPECT_EQ(line, "site,x,p");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_NE(csv.find("\n2,1,1\n"), std::string::npos);
  EXPECT_THROW(snapshot_csv(ChainState{{HPReal(1L)}, {}}), DimensionMismatch);
}

TEST(Csv, ScalingFormatIsDeterministic) {
  ScalingOptions serial;
  serial.parallel = false;
  const auto qs = log_spaced_q(10, 20, 6);
  const ScalingRun a = scaling_sweep(5, qs);
  const ScalingRun b = scaling_sweep(5, qs, serial);
  const std::string csv = scaling_csv(a);
  EXPECT_EQ(csv, scaling_csv(b));
  EXPECT_EQ(scaling_summary(a).dump(), scaling_summary(b).dump());
  EXPECT_EQ(csv.rfind(std::string(kScalingCsvHeader) + "\nQ,q,error,log10_q,log10_inv_error\n", 0),
            0u);
  const json s = scaling_summary(a);
  EXPECT_EQ(s["predicted"], "1/3");
  EXPECT_EQ(s["relations"].size(), 1u);
  EXPECT_EQ(s["samples"], 6);
}
