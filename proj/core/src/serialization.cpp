#include "reclab/serialization.hpp"

#include <fstream>
#include <sstream>

namespace reclab {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ParseError(0, "expected JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(0, std::string("missing field '") + key + "'");
  return *it;
}

const std::string& text_of(const json& j) {
  if (!j.is_string()) throw ParseError(0, "expected a decimal string, got " + j.dump());
  return j.get_ref<const std::string&>();
}

json int_array(const IntVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

IntVector int_array_from(const json& j) {
  if (!j.is_array()) throw ParseError(0, "expected JSON array");
  IntVector out;
  for (const auto& x : j) out.push_back(bigint_from_json(x));
  return out;
}

std::string plain(const HPReal& v) {
  if (v.exact()) {
    std::string s = v.to_string();
    if (s.find('@') == std::string::npos) return s;
  }
  return v.to_decimal(std::max(v.digits(), 1));
}

}  // namespace

json to_json(const BigInt& value) { return to_string(value); }
json to_json(const HPReal& value) { return value.to_string(); }

BigInt bigint_from_json(const json& j) { return parse_bigint(text_of(j)); }
HPReal hpreal_from_json(const json& j) { return HPReal::parse(text_of(j)); }

json to_json(const LatticeBasis& basis) {
  json rows = json::array();
  for (const auto& r : basis.rows()) rows.push_back(int_array(r));
  return rows;
}

LatticeBasis basis_from_json(const json& j) {
  if (!j.is_array()) throw ParseError(0, "basis must be an array of rows");
  IntMatrix rows;
  for (const auto& r : j) rows.push_back(int_array_from(r));
  return LatticeBasis(std::move(rows));
}

json to_json(const ApproximationProblem& problem) {
  json j;
  json alphas = json::array();
  for (const auto& a : problem.alphas) alphas.push_back(to_json(a));
  j["alphas"] = std::move(alphas);
  j["Q"] = to_json(problem.Q);
  if (problem.target_epsilon) j["target_epsilon"] = to_json(*problem.target_epsilon);
  return j;
}

ApproximationProblem problem_from_json(const json& j) {
  ApproximationProblem p;
  const json& alphas = field(j, "alphas");
  if (!alphas.is_array()) throw ParseError(0, "alphas must be an array");
  for (const auto& a : alphas) p.alphas.push_back(hpreal_from_json(a));
  p.Q = bigint_from_json(field(j, "Q"));
  if (j.contains("target_epsilon")) p.target_epsilon = hpreal_from_json(j["target_epsilon"]);
  return p;
}

json to_json(const ApproximationResult& result) {
  json j;
  j["q"] = to_json(result.q);
  j["p"] = int_array(result.p);
  j["error"] = to_json(result.error);
  j["q_bound"] = to_json(result.q_bound);
  j["error_bound"] = to_json(result.error_bound);
  j["within_bounds"] = result.within_bounds();
  j["reduced_first_vector"] = int_array(result.reduced_first_vector);
  j["row_index"] = result.row_index;
  return j;
}

ApproximationResult result_from_json(const json& j) {
  ApproximationResult r;
  r.q = bigint_from_json(field(j, "q"));
  r.p = int_array_from(field(j, "p"));
  r.error = hpreal_from_json(field(j, "error"));
  r.q_bound = hpreal_from_json(field(j, "q_bound"));
  r.error_bound = hpreal_from_json(field(j, "error_bound"));
  r.reduced_first_vector = int_array_from(field(j, "reduced_first_vector"));
  const json& idx = field(j, "row_index");
  if (!idx.is_number_unsigned()) throw ParseError(0, "row_index must be a non-negative integer");
  r.row_index = idx.get<std::size_t>();
  return r;
}

json to_json(const RelationResult& relation) {
  json j;
  j["coeffs"] = int_array(relation.coeffs);
  j["residual"] = to_json(relation.residual);
  return j;
}

RelationResult relation_from_json(const json& j) {
  return {int_array_from(field(j, "coeffs")), hpreal_from_json(field(j, "residual"))};
}

json to_json(const QuantumSpectrum& spectrum) {
  json j;
  json e = json::array();
  for (const auto& v : spectrum.energies) e.push_back(to_json(v));
  json a = json::array();
  for (const auto& c : spectrum.amplitudes) {
    json z;
    z["re"] = to_json(c.re);
    z["im"] = to_json(c.im);
    a.push_back(std::move(z));
  }
  j["energies"] = std::move(e);
  j["amplitudes"] = std::move(a);
  return j;
}

QuantumSpectrum spectrum_from_json(const json& j) {
  QuantumSpectrum s;
  const json& e = field(j, "energies");
  const json& a = field(j, "amplitudes");
  if (!e.is_array() || !a.is_array()) throw ParseError(0, "energies and amplitudes must be arrays");
  for (const auto& v : e) s.energies.push_back(hpreal_from_json(v));
  for (const auto& z : a) {
    if (z.is_string()) {
      s.amplitudes.push_back({hpreal_from_json(z), HPReal(0L)});
    } else {
      s.amplitudes.push_back({hpreal_from_json(field(z, "re")),
                              z.contains("im") ? hpreal_from_json(z["im"]) : HPReal(0L)});
    }
  }
  s.validate();
  return s;
}

QuantumSpectrum load_spectrum(const std::string& path) {
  return spectrum_from_json(parse_json_text(read_text_file(path)));
}

std::string scaling_csv(const ScalingRun& run) {
  std::ostringstream out;
  out << kScalingCsvHeader << "\n";
  out << "Q,q,error,log10_q,log10_inv_error\n";
  for (const auto& s : run.samples) {
    const HPReal lq = log10(HPReal(s.q, 40));
    const HPReal le = -log10(s.error);
    out << to_string(s.Q) << "," << to_string(s.q) << "," << plain(s.error) << ","
        << plain(lq) << "," << plain(le) << "\n";
  }
  return out.str();
}

json scaling_summary(const ScalingRun& run) {
  json j;
  j["version"] = 1;
  j["N"] = run.N;
  j["samples"] = run.samples.size();
  j["slope"] = to_json(run.fit.slope);
  j["intercept"] = to_json(run.fit.intercept);
  j["residual"] = to_json(run.fit.residual);
  j["predicted"] = run.predicted_slope.get_str();
  const int d = 30;
  j["predicted_decimal"] = (HPReal(BigInt(run.predicted_slope.get_num()), d) /
                            HPReal(BigInt(run.predicted_slope.get_den()), d))
                               .to_decimal(d);
  json rel = json::array();
  for (const auto& r : run.relations) rel.push_back(to_json(r));
  j["relations"] = std::move(rel);
  return j;
}

std::string snapshot_csv(const ChainState& state) {
  if (state.x.size() != state.p.size()) throw DimensionMismatch("x and p differ in length");
  std::ostringstream out;
  out << kSnapshotCsvHeader << "\n";
  out << "site,x,p\n";
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    out << i + 1 << "," << plain(state.x[i]) << "," << plain(state.p[i]) << "\n";
  }
  return out.str();
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace reclab
