#include "gaa/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gaa/error.hpp"

#ifndef GAA_VERSION_STRING
#define GAA_VERSION_STRING "0.0.0"
#endif

namespace gaa {

std::string tool_version() { return GAA_VERSION_STRING; }

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Provenance make_provenance(const Json& config, std::uint64_t seed) {
  return {tool_version(), config_hash(config), seed};
}

Json to_json(const Provenance& p) {
  return Json{{"tool", "gaa"}, {"version", p.tool_version}, {"config_hash", p.config_hash},
              {"seed", p.seed}};
}

std::string csv_comment(const Provenance& p) {
  return "# tool=gaa version=" + p.tool_version + " config=" + p.config_hash +
         " seed=" + std::to_string(p.seed) + "\n";
}

namespace {

template <typename T>
T field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw InvalidInput(std::string("missing field '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const LayeredGraph& g) {
  Json weights = Json::array();
  for (std::size_t l = 0; l + 1 < g.layer_count(); ++l) {
    Json table = Json::array();
    for (int a = 0; a < g.layer_size(l); ++a) {
      Json row = Json::array();
      for (int b = 0; b < g.layer_size(l + 1); ++b) row.push_back(g.weight(l, a, b));
      table.push_back(std::move(row));
    }
    weights.push_back(std::move(table));
  }
  return Json{{"version", kGraphFormatVersion},
              {"layer_sizes", std::vector<int>(g.layer_sizes().begin(), g.layer_sizes().end())},
              {"R", g.max_weight()},
              {"seed", g.seed()},
              {"weights", std::move(weights)}};
}

LayeredGraph graph_from_json(const Json& doc) {
  const int version = field<int>(doc, "version");
  if (version != kGraphFormatVersion) {
    throw InvalidInput("unsupported graph format version " + std::to_string(version));
  }
  auto sizes = field<std::vector<int>>(doc, "layer_sizes");
  const auto nested = field<std::vector<std::vector<std::vector<std::int64_t>>>>(doc, "weights");
  if (sizes.size() < 2 || nested.size() != sizes.size() - 1) {
    throw InvalidInput("weights must hold one table per adjacent layer pair");
  }
  std::vector<std::vector<std::int64_t>> flat;
  for (std::size_t l = 0; l < nested.size(); ++l) {
    if (nested[l].size() != static_cast<std::size_t>(sizes[l])) throw InvalidInput("table row count");
    std::vector<std::int64_t> table;
    for (const auto& row : nested[l]) {
      if (row.size() != static_cast<std::size_t>(sizes[l + 1])) throw InvalidInput("table column count");
      table.insert(table.end(), row.begin(), row.end());
    }
    flat.push_back(std::move(table));
  }
  return LayeredGraph(std::move(sizes), field<std::int64_t>(doc, "R"),
                      field<std::uint64_t>(doc, "seed"), std::move(flat));
}

Json to_json(const TspInstance& inst) {
  Json weights = Json::array();
  for (int j = 0; j < inst.size(); ++j) {
    Json row = Json::array();
    for (int k = 0; k < inst.size(); ++k) row.push_back(inst.weight(j, k));
    weights.push_back(std::move(row));
  }
  return Json{{"n", inst.size()}, {"R", inst.max_weight()}, {"seed", inst.seed()},
              {"weights", std::move(weights)}};
}

TspInstance tsp_from_json(const Json& doc) {
  const int n = field<int>(doc, "n");
  const auto nested = field<std::vector<std::vector<std::int64_t>>>(doc, "weights");
  if (n < 2 || nested.size() != static_cast<std::size_t>(n)) throw InvalidInput("weights must be n x n");
  std::vector<std::int64_t> flat;
  for (const auto& row : nested) {
    if (row.size() != static_cast<std::size_t>(n)) throw InvalidInput("weights must be n x n");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return TspInstance(n, field<std::int64_t>(doc, "R"), field<std::uint64_t>(doc, "seed"),
                     std::move(flat));
}

std::string to_string(ScaleMode mode) { return mode == ScaleMode::weights ? "weights" : "phases"; }

ScaleMode parse_scale_mode(const std::string& text) {
  if (text == "weights") return ScaleMode::weights;
  if (text == "phases") return ScaleMode::phases;
  throw InvalidInput("unknown scale mode '" + text + "'");
}

std::string spectrum_csv(const PhaseSpectrum& s, const Provenance& p) {
  std::string out = csv_comment(p);
  out += "weight,population\n";
  for (const auto& c : s.classes()) {
    out += format_real(c.value);
    out += ',';
    out += std::to_string(c.population);
    out += '\n';
  }
  return out;
}

Json spectrum_header(const PhaseSpectrum& s) {
  return Json{{"scale_mode", to_string(s.mode())}, {"total", s.total()}, {"n_classes", s.size()}};
}

PhaseSpectrum spectrum_from_csv(const std::string& text, ScaleMode mode) {
  std::istringstream in(text);
  std::string line;
  std::vector<SpectrumClass> classes;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("weight", 0) == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("spectrum row without comma: " + line);
    try {
      classes.push_back({std::stod(line.substr(0, comma)), std::stoull(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw InvalidInput("malformed spectrum row: " + line);
    }
  }
  if (classes.empty()) throw InvalidInput("spectrum file holds no rows");
  return PhaseSpectrum(std::move(classes), mode);
}

std::string to_string(Termination t) { return t == Termination::rebound ? "rebound" : "step_cap"; }

std::string trace_csv(const AmplificationTrace& trace, const Provenance& p) {
  std::string out = csv_comment(p);
  out += "step,p_s,prob_min_state,prob_min_class,mean_re,mean_im\n";
  for (const auto& s : trace.steps) {
    out += std::to_string(s.step) + ',' + format_real(s.p_s) + ',' + format_real(s.prob_min_state) +
           ',' + format_real(s.prob_min_class) + ',' + format_real(s.mean_point.real()) + ',' +
           format_real(s.mean_point.imag()) + '\n';
  }
  return out;
}

Json trace_summary(const AmplificationTrace& trace) {
  return Json{{"p_m", trace.p_m},
              {"s_m", trace.s_m},
              {"terminated_by", to_string(trace.terminated_by)},
              {"steps", trace.steps.size()},
              {"target_class", trace.target_class},
              {"target_population", trace.target_population}};
}

std::string sweep_csv(const SweepResult& sweep, const Provenance& p) {
  std::string out = csv_comment(p);
  out += "p_s,target,p_m,s_m\n";
  for (const auto& r : sweep.grid) {
    out += format_real(r.p_s) + ',' + to_string(r.target) + ',' + format_real(r.p_m) + ',' +
           std::to_string(r.s_m) + '\n';
  }
  return out;
}

Json gates_json(const PhaseCircuit& circuit) {
  Json out = Json::array();
  for (const auto& gate : circuit.gates()) {
    Json pattern = Json::object();
    for (const auto& [q, bit] : gate.pattern) pattern[std::to_string(q)] = bit;
    out.push_back(Json{{"pattern", std::move(pattern)}, {"phase", gate.phase}});
  }
  return out;
}

Json to_json(const GaussianFit& fit) {
  return Json{{"alpha", fit.alpha}, {"mu", fit.mu}, {"sigma", fit.sigma}, {"r_corr", fit.r_corr}};
}

Json to_json(const SpectrumStats& st) {
  return Json{{"sigma", st.sigma},     {"sigma_prime", st.sigma_prime}, {"n_classes", st.n_classes},
              {"pop_min", st.pop_min}, {"w_min", st.w_min},             {"w_max", st.w_max}};
}

namespace {

std::string family_name(InstanceFamily f) { return f == InstanceFamily::tsp ? "tsp" : "layered"; }

Json outcome_json(const std::optional<StrategyOutcome>& o) {
  if (!o) return nullptr;
  return Json{{"p_m", o->p_m}, {"s_m", o->s_m}, {"p_s", o->p_s}, {"p_succ", o->p_succ}};
}

}  // namespace

Json study_json(const StudyReport& report) {
  const auto& c = report.config;
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    trials.push_back(Json{{"trial", t.trial},
                          {"seed", t.seed},
                          {"total", t.total},
                          {"n_classes", t.n_classes},
                          {"w_min", t.w_min},
                          {"w_max", t.w_max},
                          {"sigma", t.sigma},
                          {"sigma_prime", t.sigma_prime},
                          {"full_range_p_s", t.full_range_p_s},
                          {"stepwise", outcome_json(t.stepwise)},
                          {"single", outcome_json(t.single)},
                          {"average", outcome_json(t.average)}});
  }
  Json summaries = Json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back(Json{{"strategy", s.name},
                             {"mean_p_m", s.mean_p_m},
                             {"min_p_m", s.min_p_m},
                             {"max_p_m", s.max_p_m},
                             {"top90_interval", {s.lo90_p_m, s.max_p_m}},
                             {"fraction_below_half", s.fraction_below_half},
                             {"mean_s_m", s.mean_s_m},
                             {"mean_p_succ", s.mean_p_succ}});
  }
  return Json{{"family", family_name(c.family)},
              {"n", c.n},
              {"l", c.l},
              {"R", c.r_weight},
              {"trials", c.trials},
              {"seed", c.seed},
              {"average_p_s", report.average_p_s},
              {"mean_sigma_prime", report.mean_sigma_prime},
              {"summary", std::move(summaries)},
              {"per_trial", std::move(trials)}};
}

std::string study_csv(const StudyReport& report, const Provenance& p) {
  std::string out = csv_comment(p);
  out += "trial,seed,total,n_classes,w_min,w_max,sigma,sigma_prime,full_range_p_s";
  for (const char* name : {"stepwise", "single", "average"}) {
    for (const char* col : {"p_m", "s_m", "p_s", "p_succ"}) {
      out += std::string(",") + name + "_" + col;
    }
  }
  out += '\n';
  auto cells = [&out](const std::optional<StrategyOutcome>& o) {
    if (!o) {
      out += ",,,,";
      return;
    }
    out += ',' + format_real(o->p_m) + ',' + std::to_string(o->s_m) + ',' + format_real(o->p_s) +
           ',' + format_real(o->p_succ);
  };
  for (const auto& t : report.trials) {
    out += std::to_string(t.trial) + ',' + std::to_string(t.seed) + ',' + std::to_string(t.total) +
           ',' + std::to_string(t.n_classes) + ',' + format_real(t.w_min) + ',' +
           format_real(t.w_max) + ',' + format_real(t.sigma) + ',' + format_real(t.sigma_prime) +
           ',' + format_real(t.full_range_p_s);
    cells(t.stepwise);
    cells(t.single);
    cells(t.average);
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace gaa
