#include "triqubit/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "triqubit/entropy.hpp"

#ifndef TRIQUBIT_VERSION
#define TRIQUBIT_VERSION "0.0.0"
#endif

namespace triqubit {

using nlohmann::json;

ParseError::ParseError(std::string source, int line, int column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  int column = 1;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_integer(std::string_view s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// -------------------------------------------------------------- state files

PureState parse_state(std::string_view text, std::string_view source) {
  const std::string src(source);
  enum class Form { kUnknown, kBits, kTerms } form = Form::kUnknown;
  int num_qubits = 0;
  Amplitudes amps;
  std::vector<BasisTerm> terms;
  std::vector<double> moduli, phases;

  const auto lines = split_lines(text);
  int line_no = 0;
  for (const auto line : lines) {
    ++line_no;
    const auto tok = tokenize(line);
    if (tok.empty()) continue;
    const auto fail = [&](const Token& t, const std::string& msg) -> ParseError {
      return ParseError(src, line_no, t.column, msg);
    };

    if (tok[0].text == "qubits") {
      if (form != Form::kUnknown) throw fail(tok[0], "'qubits' header must come before any entry");
      if (tok.size() != 2) throw fail(tok[0], "expected 'qubits N'");
      const auto n = to_integer<int>(tok[1].text);
      if (!n || *n < 2 || *n > kMaxQubits) {
        throw fail(tok[1], "qubit count must be an integer in 2.." + std::to_string(kMaxQubits));
      }
      num_qubits = *n;
      amps.assign(std::size_t{1} << num_qubits, Complex{});
      form = Form::kBits;
      continue;
    }

    const char head = static_cast<char>(std::tolower(static_cast<unsigned char>(tok[0].text[0])));
    if (head == 'w') {
      if (form == Form::kBits) throw fail(tok[0], "term entries cannot follow a 'qubits' header");
      form = Form::kTerms;
      if (tok.size() != 3) throw fail(tok[0], "expected '<term> <modulus> <phase>'");
      BasisTerm term;
      try {
        term = BasisTerm::parse(tok[0].text);
      } catch (const std::invalid_argument& e) {
        throw fail(tok[0], e.what());
      }
      if (std::find(terms.begin(), terms.end(), term) != terms.end()) {
        throw fail(tok[0], "duplicate term " + term.label());
      }
      const auto m = to_double(tok[1].text);
      if (!m || *m < 0.0) throw fail(tok[1], "modulus must be a nonnegative number");
      const auto p = to_double(tok[2].text);
      if (!p) throw fail(tok[2], "phase must be a number (radians)");
      terms.push_back(term);
      moduli.push_back(*m);
      phases.push_back(*p);
      continue;
    }

    if (form != Form::kBits) {
      throw fail(tok[0], "expected 'qubits N' header or a term label such as W2 or W2bar");
    }
    if (tok.size() != 3) throw fail(tok[0], "expected '<bits> <real> <imag>'");
    const auto bits = tok[0].text;
    if (static_cast<int>(bits.size()) != num_qubits) {
      throw fail(tok[0], "bit string must have " + std::to_string(num_qubits) + " digits");
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1') {
        throw ParseError(src, line_no, tok[0].column + static_cast<int>(i), "bit string may only contain 0 and 1");
      }
      index = (index << 1) | static_cast<std::size_t>(bits[i] - '0');
    }
    const auto re = to_double(tok[1].text);
    if (!re) throw fail(tok[1], "real part must be a number");
    const auto im = to_double(tok[2].text);
    if (!im) throw fail(tok[2], "imaginary part must be a number");
    if (amps[index] != Complex{}) throw fail(tok[0], "duplicate entry for |" + std::string(bits) + ">");
    amps[index] = Complex(*re, *im);
  }

  const int last = std::max(line_no, 1);
  try {
    if (form == Form::kBits) return PureState(num_qubits, std::move(amps));
    if (form == Form::kTerms) return build_state(TermCombination(terms), moduli, phases);
  } catch (const std::invalid_argument& e) {
    throw ParseError(src, last, 1, e.what());
  }
  throw ParseError(src, last, 1, "no state entries found");
}

PureState load_state_file(const std::filesystem::path& path) {
  return parse_state(read_file(path), path.string());
}

std::string format_state_file(const PureState& state) {
  std::ostringstream out;
  out << "qubits " << state.num_qubits() << '\n';
  for (std::size_t x = 0; x < state.dimension(); ++x) {
    if (state[x] == Complex{}) continue;
    std::string bits(static_cast<std::size_t>(state.num_qubits()), '0');
    for (int q = 0; q < state.num_qubits(); ++q) {
      if ((x >> (state.num_qubits() - 1 - q)) & 1u) bits[static_cast<std::size_t>(q)] = '1';
    }
    out << bits << ' ' << format_double(state[x].real()) << ' ' << format_double(state[x].imag()) << '\n';
  }
  return out.str();
}

// ------------------------------------------------------------------- config

OptConfig parse_config(std::string_view text, std::string_view source) {
  const std::string src(source);
  OptConfig cfg;
  int line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(src, line_no, static_cast<int>(first) + 1, "expected key=value");
    }
    auto trim = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t");
      if (b == std::string_view::npos) return std::string_view{};
      const auto e = s.find_last_not_of(" \t");
      return s.substr(b, e - b + 1);
    };
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const int vcol = static_cast<int>(line.find_first_not_of(" \t", eq + 1)) + 1;
    const auto bad = [&](const std::string& what) {
      return ParseError(src, line_no, vcol > 0 ? vcol : static_cast<int>(eq) + 2, what);
    };
    const auto real = [&]() {
      const auto v = to_double(value);
      if (!v) throw bad("'" + std::string(key) + "' needs a number");
      return *v;
    };
    if (key == "num_starts" || key == "max_iters") {
      const auto v = to_integer<int>(value);
      if (!v) throw bad("'" + std::string(key) + "' needs an integer");
      (key == "num_starts" ? cfg.num_starts : cfg.max_iters) = *v;
    } else if (key == "rng_seed") {
      const auto v = to_integer<std::uint64_t>(value);
      if (!v) throw bad("'rng_seed' needs a nonnegative integer");
      cfg.rng_seed = *v;
    } else if (key == "stationarity_tol") {
      cfg.stationarity_tol = real();
    } else if (key == "boundary_tol") {
      cfg.boundary_tol = real();
    } else if (key == "cluster_tol") {
      cfg.cluster_tol = real();
    } else if (key == "snap_tol") {
      cfg.snap_tol = real();
    } else if (key == "separable_floor") {
      cfg.separable_floor = real();
    } else if (key == "point_tol") {
      cfg.point_tol = real();
    } else if (key == "phase_curvature_tol") {
      cfg.phase_curvature_tol = real();
    } else if (key == "inject_seeds") {
      if (value == "true" || value == "1") {
        cfg.inject_seeds = true;
      } else if (value == "false" || value == "0") {
        cfg.inject_seeds = false;
      } else {
        throw bad("'inject_seeds' needs true or false");
      }
    } else {
      throw ParseError(src, line_no, static_cast<int>(first) + 1, "unknown key '" + std::string(key) + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(src, std::max(line_no, 1), 1, e.what());
  }
  return cfg;
}

OptConfig load_config_file(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

std::map<std::string, std::string> config_snapshot(const OptConfig& c) {
  return {
      {"num_starts", std::to_string(c.num_starts)},
      {"max_iters", std::to_string(c.max_iters)},
      {"stationarity_tol", format_double(c.stationarity_tol)},
      {"boundary_tol", format_double(c.boundary_tol)},
      {"cluster_tol", format_double(c.cluster_tol)},
      {"rng_seed", std::to_string(c.rng_seed)},
      {"snap_tol", format_double(c.snap_tol)},
      {"separable_floor", format_double(c.separable_floor)},
      {"point_tol", format_double(c.point_tol)},
      {"phase_curvature_tol", format_double(c.phase_curvature_tol)},
      {"inject_seeds", c.inject_seeds ? "true" : "false"},
  };
}

std::string format_config(const OptConfig& config) {
  std::string out;
  for (const auto& [k, v] : config_snapshot(config)) out += k + "=" + v + "\n";
  return out;
}

// ----------------------------------------------------------------- manifest

std::string library_version() { return TRIQUBIT_VERSION; }

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest RunManifest::begin(std::string command, const OptConfig& config) {
  RunManifest m;
  m.command = std::move(command);
  m.config = config_snapshot(config);
  m.rng_seed = config.rng_seed;
  m.version = library_version();
  m.started_at = utc_timestamp();
  return m;
}

void RunManifest::finish() { finished_at = utc_timestamp(); }

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

// ------------------------------------------------------------ serialization

namespace {

json manifest_json(const RunManifest& m) {
  return {{"command", m.command},   {"arguments", m.arguments}, {"config", m.config},
          {"rng_seed", m.rng_seed}, {"version", m.version},     {"started_at", m.started_at},
          {"finished_at", m.finished_at}};
}

json result_json(const TermCombination& combination, const OptResult& r) {
  json boundary = json::array();
  for (auto j : r.boundary_terms) boundary.push_back(combination[j].label());
  json terms = json::array();
  for (const auto& t : combination.terms()) terms.push_back(t.label());
  return {
      {"value", r.value},
      {"interior", r.interior},
      {"gradient_norm", r.gradient_norm},
      {"terms", terms},
      {"moduli", r.best_point.moduli},
      {"phases", r.best_point.phases},
      {"boundary_terms", boundary},
      {"phase_relation", r.phase_relation ? json(*r.phase_relation) : json(nullptr)},
      {"entropies", r.entropies},
      {"multiplicity", r.multiplicity},
      {"distinct_points", r.distinct_points},
  };
}

json extrema_body(const TermCombination& combination, const Extrema& e) {
  json list = json::array();
  for (const auto& c : e.clusters) list.push_back(result_json(combination, c));
  return {{"combination", combination.to_string()},
          {"runs", e.runs},
          {"converged_runs", e.converged_runs},
          {"separable_runs", e.separable_runs},
          {"phase_saddle_runs", e.phase_saddle_runs},
          {"has_interior", e.has_interior()},
          {"extrema", list}};
}

struct EntryColumns {
  std::vector<double> values;
  std::vector<bool> interior;
  std::vector<double> witness;
};

EntryColumns entry_columns(const SurveyEntry& entry) {
  EntryColumns cols;
  for (const auto& o : entry.orbits) {
    for (const auto& c : o.extrema.clusters) {
      cols.values.push_back(c.value);
      cols.interior.push_back(c.interior);
    }
  }
  if (const OptResult* w = entry.witness()) cols.witness = w->best_point.moduli;
  return cols;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += f(v[i]);
  }
  return out;
}

}  // namespace

std::string manifest_to_json(const RunManifest& manifest) { return manifest_json(manifest).dump(); }

std::string extrema_to_json(const TermCombination& combination, const Extrema& extrema,
                            const RunManifest& manifest) {
  json doc = extrema_body(combination, extrema);
  doc["manifest"] = manifest_json(manifest);
  return doc.dump(2);
}

std::string survey_to_json(const SurveyReport& report, const RunManifest& manifest) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json orbits = json::array();
    for (const auto& o : e.orbits) {
      orbits.push_back({{"representative", o.representative.to_string()},
                        {"orbit_size", o.orbit_size},
                        {"optimized", o.optimized},
                        {"result", extrema_body(o.representative, o.extrema)}});
    }
    const auto cols = entry_columns(e);
    json witness = nullptr;
    if (const OptResult* w = e.witness()) {
      for (const auto& o : e.orbits) {
        if (o.extrema.best_interior() == w) witness = result_json(o.representative, *w);
      }
    }
    entries.push_back({{"type", e.label.name()},
                       {"count", e.count},
                       {"separability", to_string(e.separability)},
                       {"has_interior", e.has_interior()},
                       {"extremal_E_values", cols.values},
                       {"interior_flags", cols.interior},
                       {"witness_coefficients", cols.witness},
                       {"witness", witness},
                       {"orbits", orbits}});
  }
  json doc = {{"k", report.k}, {"total", report.total()}, {"entries", entries},
              {"manifest", manifest_json(manifest)}};
  return doc.dump(2);
}

std::string survey_to_csv(const SurveyReport& report, const RunManifest& manifest) {
  std::ostringstream out;
  out << "# command=" << manifest.command << '\n';
  for (const auto& [k, v] : manifest.arguments) out << "# arg." << k << '=' << v << '\n';
  for (const auto& [k, v] : manifest.config) out << "# config." << k << '=' << v << '\n';
  out << "# rng_seed=" << manifest.rng_seed << '\n';
  out << "# version=" << manifest.version << '\n';
  out << "# started_at=" << manifest.started_at << '\n';
  out << "# finished_at=" << manifest.finished_at << '\n';
  out << "k,type,count,extremal_E_values,interior_flags,witness_coefficients\n";
  for (const auto& e : report.entries) {
    const auto cols = entry_columns(e);
    out << report.k << ',' << e.label.name() << ',' << e.count << ','
        << join(cols.values, format_double) << ','
        << join(cols.interior, [](bool b) { return std::string(b ? "1" : "0"); }) << ','
        << join(cols.witness, format_double) << '\n';
  }
  return out.str();
}

std::string scan_to_csv(const std::vector<ScanSample>& samples, const RunManifest& manifest) {
  std::ostringstream out;
  out << "# command=" << manifest.command << '\n';
  for (const auto& [k, v] : manifest.arguments) out << "# arg." << k << '=' << v << '\n';
  out << "# rng_seed=" << manifest.rng_seed << '\n';
  out << "# version=" << manifest.version << '\n';
  out << "sample,operator_seed,E_before,E_after,ranks_before,ranks_after,ranks_preserved\n";
  const auto ranks = [](const LocalRankVector& r) {
    return std::to_string(r.ranks[0]) + ";" + std::to_string(r.ranks[1]) + ";" + std::to_string(r.ranks[2]);
  };
  for (const auto& s : samples) {
    out << s.index << ',' << s.operator_seed << ',' << format_double(s.e_before) << ','
        << format_double(s.e_after) << ',' << ranks(s.ranks_before) << ',' << ranks(s.ranks_after) << ','
        << (s.ranks_before == s.ranks_after ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace triqubit
