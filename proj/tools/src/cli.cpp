#include "reclab_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "reclab/alpha_spec.hpp"
#include "reclab/chain.hpp"
#include "reclab/diophantine.hpp"
#include "reclab/experiments.hpp"
#include "reclab/serialization.hpp"

namespace reclab::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParseError:
      return kExitParse;
    case ErrorKind::kInsufficientPrecision:
    case ErrorKind::kAmbiguousRounding:
      return kExitPrecision;
    case ErrorKind::kVerificationFailed:
      return kExitVerification;
    default:
      return kExitOther;
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  f << content;
}

HPReal parse_real_option(const std::string& text, const char* name) {
  try {
    return HPReal::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), std::string("--") + name + ": malformed number '" + text + "'");
  }
}

// "Tpr", "Tpr+3", "Tpr-200" are offsets from the recurrence time; a bare
// number is an absolute time.
struct SnapshotTime {
  std::string label;
  bool relative = true;
  HPReal value;
};

std::vector<SnapshotTime> parse_snapshots(const std::string& text) {
  std::vector<SnapshotTime> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    SnapshotTime s;
    s.label = item;
    try {
      if (item.rfind("Tpr", 0) == 0) {
        std::string rest = item.substr(3);
        if (rest.empty()) {
          s.value = HPReal(0L);
        } else if (rest[0] == '+') {
          s.value = HPReal::parse(rest.substr(1));
        } else if (rest[0] == '-') {
          s.value = -HPReal::parse(rest.substr(1));
        } else {
          throw ParseError(3, "expected '+' or '-' after Tpr");
        }
      } else {
        s.relative = false;
        s.value = HPReal::parse(item);
      }
    } catch (const ParseError& e) {
      throw ParseError(start + e.position(), "--snapshots: bad time '" + item + "'");
    }
    out.push_back(std::move(s));
    start = end + 1;
  }
  return out;
}

struct Context {
  std::ostream& out;
  int digits;
};

std::string row_note(const ApproximationResult& r) {
  return "q comes from reduced row " + std::to_string(r.row_index) +
         "; other rows are equally valid (see --all-rows)";
}

void cmd_approx(Context& ctx, const std::string& alphas_text, const std::string& q_text,
                bool as_json, bool all_rows) {
  const AlphaSpec spec = parse_alpha_spec(alphas_text);
  const BigInt Q = parse_scaled_integer(q_text);
  const int digits = std::max(ctx.digits, digits10(Q) + kMatrixGuardDigits);
  const ApproximationProblem problem{materialize(spec, digits), Q, std::nullopt};
  std::vector<ApproximationResult> results;
  if (all_rows) {
    results = solve_all_rows(problem);
  } else {
    results.push_back(solve(problem));
  }
  if (as_json) {
    json j;
    j["alphas"] = to_string(spec);
    j["Q"] = to_json(Q);
    if (all_rows) {
      json rows = json::array();
      for (const auto& r : results) rows.push_back(to_json(r));
      j["results"] = std::move(rows);
    } else {
      j["result"] = to_json(results.front());
      j["note"] = row_note(results.front());
    }
    ctx.out << j.dump(2) << "\n";
    return;
  }
  for (const auto& r : results) {
    if (all_rows) ctx.out << "[row " << r.row_index << "]\n";
    ctx.out << "q = " << to_string(r.q) << "\n";
    ctx.out << "error = " << r.error.to_decimal(12) << "\n";
    ctx.out << "q_bound = " << r.q_bound.to_string() << "\n";
    ctx.out << "error_bound = " << r.error_bound.to_string() << "\n";
    ctx.out << "within_bounds = " << (r.within_bounds() ? "true" : "false") << "\n";
  }
  if (!all_rows) {
    ctx.out << "note: " << row_note(results.front()) << "\n";
  }
}

void cmd_chain(Context& ctx, int N, const std::string& q_text, int k,
               const std::string& snapshots, const std::string& out_dir) {
  const BigInt Q = parse_scaled_integer(q_text);
  const std::vector<SnapshotTime> times = parse_snapshots(snapshots);
  const int digits = std::max(ctx.digits, digits10(Q) + kMatrixGuardDigits);
  const ChainModel model = make_model(N, digits);
  const ChainState initial = localized_initial_state(model, k);
  const ApproximationResult r = solve({model.ratios(), Q, std::nullopt});
  const HPReal t_pr = recurrence_time(model, r.q);

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "snapshot_initial.csv", snapshot_csv(initial));

  json report;
  report["N"] = N;
  report["k"] = k;
  report["Q"] = to_json(Q);
  report["q"] = to_json(r.q);
  report["error"] = to_json(r.error);
  report["within_bounds"] = r.within_bounds();
  report["T_pr"] = to_json(t_pr);
  report["deviation_bound"] = to_json(recurrence_deviation_bound(model, initial, r.error));
  json snaps = json::array();
  for (const auto& s : times) {
    const ChainState state = s.relative
                                 ? evolve_from_recurrence(model, initial, r.q, s.value)
                                 : evolve(model, initial, s.value);
    const std::string file = "snapshot_" + s.label + ".csv";
    write_file(fs::path(out_dir) / file, snapshot_csv(state));
    json e;
    e["time"] = s.label;
    e["file"] = file;
    e["deviation"] = to_json(deviation(state, initial));
    e["energy"] = to_json(energy(model, state));
    snaps.push_back(std::move(e));
  }
  report["snapshots"] = std::move(snaps);
  write_file(fs::path(out_dir) / "report.json", report.dump(2) + "\n");
  ctx.out << report.dump(2) << "\n";
}

void cmd_scaling(Context& ctx, int N, const std::string& range, const std::string& out_file,
                 bool serial) {
  const std::vector<BigInt> Qs = parse_q_range(range);
  ScalingOptions options;
  options.parallel = !serial;
  const ScalingRun run = scaling_sweep(N, Qs, options);
  const json summary = scaling_summary(run);
  if (!out_file.empty()) {
    const fs::path csv(out_file);
    if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
    write_file(csv, scaling_csv(run));
    fs::path js = csv;
    js.replace_extension(".json");
    write_file(js, summary.dump(2) + "\n");
  } else {
    ctx.out << scaling_csv(run);
  }
  ctx.out << summary.dump(2) << "\n";
}

void cmd_hunt(Context& ctx, const std::string& eps_text, const std::string& roots_text) {
  const HPReal eps = parse_real_option(eps_text, "epsilon");
  std::vector<long> roots;
  try {
    roots = parse_int_list(roots_text);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), "--roots: expected a comma-separated integer list");
  }
  const ChallengeResult c = h_challenge(eps, roots, ctx.digits);
  json j;
  j["epsilon"] = to_json(eps);
  j["roots"] = roots;
  j["Q"] = to_json(c.Q);
  j["q"] = to_json(c.q);
  j["t"] = to_json(c.t);
  j["h"] = to_json(c.h);
  j["gap"] = to_json(c.gap);
  j["attempts"] = c.attempts;
  j["verified"] = true;
  ctx.out << j.dump(2) << "\n";
}

void cmd_relations(Context& ctx, const std::string& values_text, const std::string& thr_text,
                   const std::string& bound_text) {
  const AlphaSpec spec = parse_alpha_spec(values_text);
  const HPReal threshold = parse_real_option(thr_text, "threshold");
  const BigInt bound = parse_scaled_integer(bound_text);
  // Enough digits to resolve the threshold after scaling by the largest
  // candidate coefficients.
  const int need = static_cast<int>(std::max(-threshold.log10_abs(), 0.0)) + 40;
  const int probe = static_cast<int>(materialize(spec, 20).size());
  const int digits = std::max({ctx.digits, need, probe * digits10(bound) + 40});
  const std::vector<HPReal> values = materialize(spec, digits);
  const auto found = find_integer_relations(values, threshold, bound);
  if (found.empty()) {
    throw NoRelation("no integer relation with coefficients up to " + to_string(bound) +
                     " below " + threshold.to_string());
  }
  json j;
  j["values"] = to_string(spec);
  j["threshold"] = to_json(threshold);
  j["coeff_bound"] = to_json(bound);
  json rel = json::array();
  for (const auto& r : found) rel.push_back(to_json(r));
  j["count"] = found.size();
  j["relations"] = std::move(rel);
  ctx.out << j.dump(2) << "\n";
}

void cmd_quantum(Context& ctx, const std::string& path, const std::string& eps_text) {
  const QuantumSpectrum spectrum = load_spectrum(path);
  const HPReal eps = parse_real_option(eps_text, "epsilon");
  const QuantumRecurrence r = quantum_recurrence(spectrum, eps, ctx.digits);
  json j;
  j["levels"] = spectrum.energies.size();
  j["epsilon"] = to_json(eps);
  j["Q"] = to_json(r.Q);
  j["q"] = to_json(r.q);
  j["t"] = to_json(r.t);
  j["distance"] = to_json(r.distance);
  j["distance_direct"] = to_json(quantum_distance_direct(spectrum, r.t));
  j["attempts"] = r.attempts;
  j["verified"] = true;
  ctx.out << j.dump(2) << "\n";
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message,
                  long position = -1) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  if (position >= 0) j["position"] = position;
  err << j.dump() << "\n";
}

}  // namespace

int evaluation_digits() {
  const char* env = std::getenv("RECLAB_DIGITS");
  if (env == nullptr || *env == '\0') return kDefaultEvaluationDigits;
  const BigInt d = parse_scaled_integer(env);
  if (d < 10 || d > 100000) throw ParseError(0, "RECLAB_DIGITS must be in 10..100000");
  return static_cast<int>(d.get_si());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurrence-time laboratory: simultaneous Diophantine approximation by lattice reduction"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string alphas, q_text = "1e35", snapshots = "Tpr-200,Tpr-3,Tpr,Tpr+3", out_path;
  std::string range = "1e20:1e40:21", epsilon, roots = "2,3,5", values;
  std::string threshold = "1e-30", bound = "1e6", spectrum;
  int N = 15, k = 4;
  bool as_json = false, serial = false, all_rows = false;

  auto* approx = app.add_subcommand("approx", "Find q with every q*alpha_i near an integer");
  approx->add_option("--alphas", alphas, "alpha specification")->required();
  approx->add_option("--Q", q_text, "lattice parameter Q (e.g. 1e35)")->required();
  approx->add_flag("--json", as_json, "print the result as JSON");
  approx->add_flag("--all-rows", all_rows, "report every reduced row with nonzero q");

  auto* chain = app.add_subcommand("chain", "Recurrence of the harmonic chain and snapshots");
  chain->add_option("--N", N, "number of masses")->required();
  chain->add_option("--Q", q_text, "lattice parameter Q")->required();
  chain->add_option("--k", k, "initially displaced site (1-based)")->required();
  chain->add_option("--snapshots", snapshots, "times, e.g. Tpr-200,Tpr-3,Tpr,Tpr+3")
      ->capture_default_str();
  chain->add_option("--out", out_path, "output directory")->required();

  auto* scaling = app.add_subcommand("scaling", "Error-versus-q sweep with a log-log fit");
  scaling->add_option("--N", N, "number of masses")->required();
  scaling->add_option("--Q-range", range, "first:last:count, log-spaced")->capture_default_str();
  scaling->add_option("--out", out_path, "CSV output file; summary goes next to it as .json");
  scaling->add_flag("--serial", serial, "run the solves one after another");

  auto* hunt = app.add_subcommand("hunt", "Find t with cos t + sum cos(sqrt(r) t) near its maximum");
  hunt->add_option("--epsilon", epsilon, "allowed shortfall from the maximum")->required();
  hunt->add_option("--roots", roots, "comma-separated square-free integers")->capture_default_str();

  auto* relations = app.add_subcommand("relations", "Small integer relations among values");
  relations->add_option("--values", values, "value specification")->required();
  relations->add_option("--threshold", threshold, "largest accepted residual")->capture_default_str();
  relations->add_option("--bound", bound, "largest accepted coefficient")->capture_default_str();

  auto* quantum = app.add_subcommand("quantum", "Quantum recurrence for a discrete spectrum");
  quantum->add_option("--spectrum", spectrum, "spectrum JSON file")->required();
  quantum->add_option("--epsilon", epsilon, "target distance")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "ParseError", e.what());
    return kExitParse;
  }

  try {
    Context ctx{out, evaluation_digits()};
    if (*approx) cmd_approx(ctx, alphas, q_text, as_json, all_rows);
    if (*chain) cmd_chain(ctx, N, q_text, k, snapshots, out_path);
    if (*scaling) cmd_scaling(ctx, N, range, out_path, serial);
    if (*hunt) cmd_hunt(ctx, epsilon, roots);
    if (*relations) cmd_relations(ctx, values, threshold, bound);
    if (*quantum) cmd_quantum(ctx, spectrum, epsilon);
  } catch (const ParseError& e) {
    report_error(err, "ParseError", e.what(), static_cast<long>(e.position()));
    return kExitParse;
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    report_error(err, "IOError", e.what());
    return kExitOther;
  }
  return kExitOk;
}

}  // namespace reclab::cli
