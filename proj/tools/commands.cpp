#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "triqubit/classifier.hpp"
#include "triqubit/entropy.hpp"
#include "triqubit/io.hpp"
#include "triqubit/optimizer.hpp"
#include "triqubit/slocc.hpp"
#include "triqubit/state.hpp"

namespace triqubit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

std::string fixed6_list(const std::vector<double>& v, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fixed6(v[i]);
  }
  return out;
}

std::string ranks_text(const LocalRankVector& r) {
  return "(" + std::to_string(r.ranks[0]) + "," + std::to_string(r.ranks[1]) + "," +
         std::to_string(r.ranks[2]) + ")";
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Optimizer config file (key=value lines)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "RNG seed (overrides the config)");
  cmd->add_flag("--json", c.json, "Print JSON instead of text");
  cmd->add_option("--out", c.out_dir, "Directory for report files");
}

OptConfig load_config(const Common& c) {
  OptConfig cfg = c.config_path.empty() ? OptConfig{} : load_config_file(c.config_path);
  if (c.seed) cfg.rng_seed = *c.seed;
  return cfg;
}

RunManifest start_manifest(const std::string& command, const OptConfig& cfg, const Common& c) {
  RunManifest m = RunManifest::begin(command, cfg);
  if (!c.config_path.empty()) m.arguments["config"] = c.config_path;
  if (c.seed) m.arguments["seed"] = std::to_string(*c.seed);
  return m;
}

json manifest_json(const RunManifest& m) { return json::parse(manifest_to_json(m)); }

void write_report(const std::string& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f.flush()) throw std::runtime_error("write failed for " + path.string());
}

const char* verdict(const EntropyProfile& p, double threshold) {
  if (p.genuine) return "genuine";
  const bool all_zero =
      std::all_of(p.entropies.begin(), p.entropies.end(), [&](double s) { return s <= threshold; });
  return all_zero ? "fully separable" : "partially separable";
}

// ------------------------------------------------------------------ measure

struct MeasureArgs {
  Common common;
  std::string file;
  double zero_threshold = kDefaultZeroThreshold;
};

int cmd_measure(const MeasureArgs& a, std::ostream& out) {
  const PureState state = load_state_file(a.file);
  const EntropyProfile profile = measure(state, a.zero_threshold);
  const std::string v = verdict(profile, a.zero_threshold);
  RunManifest m = start_manifest("measure", OptConfig{}, a.common);
  m.arguments["state_file"] = a.file;
  m.arguments["zero_threshold"] = format_double(a.zero_threshold);
  m.finish();

  if (a.common.json || !a.common.out_dir.empty()) {
    const json doc = {{"qubits", state.num_qubits()},
                      {"entropies", profile.entropies},
                      {"value", profile.value},
                      {"genuine", profile.genuine},
                      {"separability", v},
                      {"manifest", manifest_json(m)}};
    if (!a.common.out_dir.empty()) write_report(a.common.out_dir, "measure.json", doc.dump(2) + "\n");
    if (a.common.json) {
      out << doc.dump(2) << '\n';
      return kOk;
    }
  }
  for (std::size_t i = 0; i < profile.entropies.size(); ++i) {
    out << "S" << i + 1 << " = " << fixed6(profile.entropies[i]) << '\n';
  }
  out << "E = " << fixed6(profile.value);
  if (!profile.genuine) out << " (" << v << ")";
  out << '\n';
  return kOk;
}

// ----------------------------------------------------------------- optimize

struct OptimizeArgs {
  Common common;
  std::string terms;
};

void print_cluster(std::ostream& out, const TermCombination& c, const OptResult& r, std::size_t n) {
  out << "#" << n << " E = " << fixed6(r.value) << "  " << (r.interior ? "interior" : "boundary");
  if (!r.boundary_terms.empty()) {
    out << " (vanishing:";
    for (auto j : r.boundary_terms) out << ' ' << c[j].label();
    out << ')';
  }
  out << "  runs " << r.multiplicity << '\n';
  out << "   moduli " << fixed6_list(r.best_point.moduli) << '\n';
  out << "   phases " << fixed6_list(r.best_point.phases) << '\n';
  if (r.phase_relation) {
    out << "   alpha-beta-gamma = " << fixed6(*r.phase_relation) << "  cos = " << fixed6(std::cos(*r.phase_relation))
        << '\n';
  }
}

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  const TermCombination comb = TermCombination::parse(a.terms);
  if (comb.size() < 2) throw std::invalid_argument("--terms needs at least two labels");
  const OptConfig cfg = load_config(a.common);
  RunManifest m = start_manifest("optimize", cfg, a.common);
  m.arguments["terms"] = comb.to_string();
  const SeparabilityClass sep = separability_class(comb);
  const Extrema ex = maximize(comb, cfg);
  m.finish();
  if (sep.kind == Separability::kGenuine && ex.converged_runs == 0) {
    throw NumericFailure("no optimizer run converged; raise max_iters or num_starts");
  }

  const std::string doc = extrema_to_json(comb, ex, m);
  if (!a.common.out_dir.empty()) {
    std::string name = comb.to_string();
    std::replace(name.begin(), name.end(), ',', '_');
    write_report(a.common.out_dir, "optimize_" + name + ".json", doc + "\n");
  }
  if (a.common.json) {
    out << doc << '\n';
    return kOk;
  }
  out << "combination " << comb.to_string() << "  type " << classify_type(comb).name() << "  "
      << to_string(sep.kind) << '\n';
  if (sep.kind != Separability::kGenuine) {
    out << "E = 0.000000 identically (" << to_string(sep.kind) << ")\n";
    return kOk;
  }
  out << "runs " << ex.runs << ", converged " << ex.converged_runs << ", separable " << ex.separable_runs
      << ", phase saddles " << ex.phase_saddle_runs << '\n';
  for (std::size_t i = 0; i < ex.clusters.size(); ++i) print_cluster(out, comb, ex.clusters[i], i + 1);
  if (const OptResult* best = ex.best_interior()) {
    out << "best interior E = " << fixed6(best->value) << '\n';
  } else {
    out << "no interior extremum found\n";
  }
  return kOk;
}

// ------------------------------------------------------------------- survey

struct SurveyArgs {
  Common common;
  int k = 0;
};

int cmd_survey(const SurveyArgs& a, std::ostream& out) {
  if (a.k < 2 || a.k > 8) throw std::invalid_argument("--k must be in 2..8");
  const OptConfig cfg = load_config(a.common);
  RunManifest m = start_manifest("survey", cfg, a.common);
  m.arguments["k"] = std::to_string(a.k);
  const SurveyReport report = survey(a.k, cfg);
  m.finish();
  for (const auto& e : report.entries) {
    for (const auto& o : e.orbits) {
      if (o.optimized && o.extrema.converged_runs == 0) {
        throw NumericFailure("no optimizer run converged for " + o.representative.to_string());
      }
    }
  }

  const std::string doc = survey_to_json(report, m);
  if (!a.common.out_dir.empty()) {
    const std::string stem = "survey_k" + std::to_string(a.k);
    write_report(a.common.out_dir, stem + ".json", doc + "\n");
    write_report(a.common.out_dir, stem + ".csv", survey_to_csv(report, m));
  }
  if (a.common.json) {
    out << doc << '\n';
    return kOk;
  }
  out << "k = " << a.k << ": " << report.total() << " combinations\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %5s  %-20s %-8s %s\n", "type", "count", "separability", "interior",
                "extremal E (* interior)");
  out << line;
  for (const auto& e : report.entries) {
    std::string values;
    for (const auto& o : e.orbits) {
      for (const auto& c : o.extrema.clusters) {
        if (!values.empty()) values += ", ";
        values += fixed6(c.value) + (c.interior ? "*" : "");
      }
    }
    const bool genuine = e.separability == Separability::kGenuine;
    std::snprintf(line, sizeof line, "%-10s %5zu  %-20s %-8s ", e.label.name().c_str(), e.count,
                  to_string(e.separability), genuine ? (e.has_interior() ? "Yes" : "No") : "-");
    out << line << (values.empty() ? "-" : values) << '\n';
  }
  for (const auto& e : report.entries) {
    if (const OptResult* w = e.witness()) {
      out << "witness " << e.label.name() << ": E = " << fixed6(w->value) << " at moduli "
          << fixed6_list(w->best_point.moduli) << '\n';
    }
  }
  return kOk;
}

// --------------------------------------------------------------------- fig1

struct Fig1Args {
  Common common;
  std::vector<double> coeffs;
};

int cmd_fig1(const Fig1Args& a, std::ostream& out) {
  const double A = a.coeffs[0], B = a.coeffs[1], C = a.coeffs[2], D = a.coeffs[3];
  for (double v : a.coeffs) {
    if (!(v >= 0.0)) throw std::invalid_argument("coefficients must be nonnegative");
  }
  const double n2 = A * A + B * B + C * C + D * D;
  if (std::abs(n2 - 1.0) > 1e-6) {
    throw std::invalid_argument("a^2 + b^2 + c^2 + d^2 = " + format_double(n2) + ", expected 1 within 1e-6");
  }
  const double x = A * B / 3.0;
  const double y = C * D / (2.0 * std::sqrt(3.0));
  const double bc = B * C / (3.0 * std::sqrt(2.0));
  const double ac = A * C / (3.0 * std::sqrt(2.0));
  const bool relation_applies = std::abs(A - B) <= 1e-6;

  RunManifest m = start_manifest("fig1", OptConfig{}, a.common);
  m.arguments["coefficients"] = format_double(A) + "," + format_double(B) + "," + format_double(C) + "," +
                                format_double(D);
  m.finish();
  const json doc = {{"x", x},
                    {"y", y},
                    {"bc_weight", bc},
                    {"ac_weight", ac},
                    {"residual_bc", x - bc},
                    {"residual_ac", x - ac},
                    {"relation_applies", relation_applies},
                    {"manifest", manifest_json(m)}};
  if (!a.common.out_dir.empty()) {
    std::string csv = "# command=fig1\n# coefficients=" + m.arguments["coefficients"] + "\n# version=" +
                      m.version + "\nedge,weight\n";
    csv += "x," + format_double(x) + "\ny," + format_double(y) + "\nbc," + format_double(bc) + "\nac," +
           format_double(ac) + "\n";
    write_report(a.common.out_dir, "fig1.csv", csv);
  }
  if (a.common.json) {
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << "x = " << fixed6(x) << '\n' << "y = " << fixed6(y) << '\n';
  out << "|ab|/3 - |bc|/(3 sqrt2) = " << fixed6(x - bc) << '\n';
  out << "|ab|/3 - |ac|/(3 sqrt2) = " << fixed6(x - ac) << '\n';
  if (!relation_applies) out << "(the two relations are expected to hold only when |a| = |b|)\n";
  return kOk;
}

// ---------------------------------------------------------------- extremals

struct ExtremalRow {
  const char* name;
  const char* terms;
  const char* form;
};

constexpr ExtremalRow kExtremalRows[] = {
    {"GHZ", "W1,W1bar", "a|000> + b|111>"},
    {"W", "W2bar,W3bar,W4bar", "a|001> + b|010> + c|100>"},
    {"III4", "W2,W3,W4,W4bar", "a|110> + b|101> + c|011> + d|100>"},
};

int cmd_extremals(const Common& c, std::ostream& out) {
  const OptConfig cfg = load_config(c);
  RunManifest m = start_manifest("extremals", cfg, c);
  json rows = json::array();
  std::string text;
  char line[200];
  std::snprintf(line, sizeof line, "%-5s %-36s %-9s %-8s %s\n", "type", "canonical form", "E", "ranks", "moduli");
  text += line;
  for (const auto& row : kExtremalRows) {
    const TermCombination comb = TermCombination::parse(row.terms);
    const Extrema ex = maximize(comb, cfg);
    const OptResult* w = ex.best_interior();
    if (!w) throw NumericFailure(std::string("no interior extremum found for ") + row.terms);
    const PureState state = build_state(comb, w->best_point.moduli, w->best_point.phases);
    const LocalRankVector ranks = local_ranks(state);
    std::snprintf(line, sizeof line, "%-5s %-36s %-9s %-8s %s\n", row.name, row.form, fixed6(w->value).c_str(),
                  ranks_text(ranks).c_str(), fixed6_list(w->best_point.moduli).c_str());
    text += line;
    rows.push_back({{"type", row.name},
                    {"terms", comb.to_string()},
                    {"canonical_form", row.form},
                    {"value", w->value},
                    {"moduli", w->best_point.moduli},
                    {"phases", w->best_point.phases},
                    {"local_ranks", ranks.ranks}});
  }
  m.finish();
  const json doc = {{"extremals", rows}, {"manifest", manifest_json(m)}};
  if (!c.out_dir.empty()) write_report(c.out_dir, "extremals.json", doc.dump(2) + "\n");
  if (c.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << text;
  }
  return kOk;
}

// --------------------------------------------------------------- slocc-scan

struct ScanArgs {
  Common common;
  std::string file;
  std::size_t samples = 100;
  std::string operators = "unitary";
};

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  const PureState state = load_state_file(a.file);
  const std::uint64_t seed = a.common.seed.value_or(1);
  const OperatorSampler sampler = a.operators == "unitary" ? unitary_sampler(state.num_qubits())
                                                           : gaussian_ilo_sampler(state.num_qubits());
  OptConfig cfg;
  cfg.rng_seed = seed;
  RunManifest m = start_manifest("slocc-scan", cfg, a.common);
  m.arguments["state_file"] = a.file;
  m.arguments["samples"] = std::to_string(a.samples);
  m.arguments["operators"] = a.operators;
  const auto samples = slocc_measure_scan(state, sampler, a.samples, seed);
  m.finish();

  const std::string csv = scan_to_csv(samples, m);
  if (!a.common.out_dir.empty()) write_report(a.common.out_dir, "slocc_scan.csv", csv);
  if (a.common.json) {
    json list = json::array();
    for (const auto& s : samples) {
      list.push_back({{"sample", s.index},
                      {"operator_seed", s.operator_seed},
                      {"E_before", s.e_before},
                      {"E_after", s.e_after},
                      {"ranks_before", s.ranks_before.ranks},
                      {"ranks_after", s.ranks_after.ranks}});
    }
    out << json{{"samples", list}, {"manifest", manifest_json(m)}}.dump(2) << '\n';
    return kOk;
  }
  double lo = samples.empty() ? 0.0 : samples.front().e_after, hi = lo;
  std::size_t preserved = 0;
  for (const auto& s : samples) {
    lo = std::min(lo, s.e_after);
    hi = std::max(hi, s.e_after);
    if (s.ranks_before == s.ranks_after) ++preserved;
  }
  out << "E before = " << fixed6(samples.empty() ? measure(state).value : samples.front().e_before) << '\n';
  out << "E after in [" << fixed6(lo) << ", " << fixed6(hi) << "] over " << samples.size() << " " << a.operators
      << " samples\n";
  out << "local ranks preserved in " << preserved << "/" << samples.size() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Average reduced entropy of pure qubit states and triqubit term-combination surveys", "triqubit"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  MeasureArgs measure_args;
  auto* measure_cmd = app.add_subcommand("measure", "Entropies and E of a state file");
  measure_cmd->add_option("state_file", measure_args.file, "State file")->required()->check(CLI::ExistingFile);
  measure_cmd->add_option("--zero-threshold", measure_args.zero_threshold, "Entropies at or below count as zero");
  add_common(measure_cmd, measure_args.common);

  OptimizeArgs optimize_args;
  auto* optimize_cmd = app.add_subcommand("optimize", "Stationary points of E over one term combination");
  optimize_cmd->add_option("--terms", optimize_args.terms, "Comma-separated labels, e.g. W2,W3,W4,W4bar")
      ->required();
  add_common(optimize_cmd, optimize_args.common);

  SurveyArgs survey_args;
  auto* survey_cmd = app.add_subcommand("survey", "Classify and optimize every k-term combination");
  survey_cmd->add_option("--k", survey_args.k, "Number of terms (2..8)")->required();
  add_common(survey_cmd, survey_args.common);

  Fig1Args fig1_args;
  auto* fig1_cmd = app.add_subcommand("fig1", "Edge weights x = |ab|/3 and y = |cd|/(2 sqrt3)");
  fig1_cmd->add_option("coefficients", fig1_args.coeffs, "a b c d")->required()->expected(4);
  add_common(fig1_cmd, fig1_args.common);

  Common extremal_args;
  auto* extremals_cmd = app.add_subcommand("extremals", "The GHZ, W and III4 extremal forms");
  add_common(extremals_cmd, extremal_args);

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("slocc-scan", "E and local ranks under random local operators");
  scan_cmd->add_option("state_file", scan_args.file, "Triqubit state file")->required()->check(CLI::ExistingFile);
  scan_cmd->add_option("--samples", scan_args.samples, "Number of operators");
  scan_cmd->add_option("--operators", scan_args.operators, "unitary or ilo")
      ->check(CLI::IsMember({"unitary", "ilo"}));
  add_common(scan_cmd, scan_args.common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*measure_cmd) return cmd_measure(measure_args, out);
    if (*optimize_cmd) return cmd_optimize(optimize_args, out);
    if (*survey_cmd) return cmd_survey(survey_args, out);
    if (*fig1_cmd) return cmd_fig1(fig1_args, out);
    if (*extremals_cmd) return cmd_extremals(extremal_args, out);
    if (*scan_cmd) return cmd_scan(scan_args, out);
  } catch (const NumericFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace triqubit::cli
