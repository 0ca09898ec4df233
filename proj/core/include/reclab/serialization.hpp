#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "reclab/chain.hpp"
#include "reclab/diophantine.hpp"
#include "reclab/experiments.hpp"
#include "reclab/lattice.hpp"

namespace reclab {

using json = nlohmann::ordered_json;

// Numbers travel as decimal strings: integers in full, reals in the
// "<decimal>@<digits>" form of HPReal::to_string. Parsing failures raise
// ParseError.

json to_json(const BigInt& value);
json to_json(const HPReal& value);
BigInt bigint_from_json(const json& j);
HPReal hpreal_from_json(const json& j);

json to_json(const LatticeBasis& basis);
LatticeBasis basis_from_json(const json& j);

json to_json(const ApproximationProblem& problem);
ApproximationProblem problem_from_json(const json& j);

json to_json(const ApproximationResult& result);
ApproximationResult result_from_json(const json& j);

json to_json(const RelationResult& relation);
RelationResult relation_from_json(const json& j);

// {"energies": [...], "amplitudes": [{"re": ..., "im": ...}, ...]}
json to_json(const QuantumSpectrum& spectrum);
QuantumSpectrum spectrum_from_json(const json& j);
QuantumSpectrum load_spectrum(const std::string& path);

inline constexpr const char* kScalingCsvHeader = "# reclab scaling v1";
inline constexpr const char* kSnapshotCsvHeader = "# reclab snapshot v1";

// Q,q,error,log10_q,log10_inv_error
std::string scaling_csv(const ScalingRun& run);
// N, slope, intercept, predicted, residual, relations
json scaling_summary(const ScalingRun& run);

// site,x,p with 1-based sites; each value printed to its guaranteed digits.
std::string snapshot_csv(const ChainState& state);

json parse_json_text(const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace reclab
