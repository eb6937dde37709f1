// gaa: experiment runner for the amplitude amplification lab.
//
// Every subcommand resolves its parameters from defaults, an optional
// --config JSON file and explicit flags (in that order), writes the resolved
// config next to its outputs and stamps every artifact with the tool
// version, the config hash and the seed.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaa/circuitcheck.hpp"
#include "gaa/engine.hpp"
#include "gaa/error.hpp"
#include "gaa/graphs.hpp"
#include "gaa/io.hpp"
#include "gaa/rng.hpp"
#include "gaa/search.hpp"
#include "gaa/spectrum.hpp"
#include "gaa/tsp.hpp"

namespace fs = std::filesystem;
using gaa::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitCap = 4;

enum class Kind { integer, uinteger, real, text };

struct Param {
  std::string key;
  Kind kind;
  Json fallback;
  std::string help;
};

struct Context {
  Json config;  // resolved, including out and threads
  fs::path out;
  unsigned threads = 0;
  gaa::Provenance provenance;
};

using Handler = std::function<void(Context&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  Handler run;
};

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (auto& c : s) {
    if (c == '_') c = '-';
  }
  return "--" + s;
}

Json parse_value(const std::string& key, const std::string& text, Kind kind) {
  std::size_t used = 0;
  try {
    switch (kind) {
      case Kind::integer: {
        const long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
        break;
      }
      case Kind::uinteger: {
        if (!text.empty() && text[0] == '-') break;
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) return v;
        break;
      }
      case Kind::real: {
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
        break;
      }
      case Kind::text:
        return text;
    }
  } catch (const std::logic_error&) {
  }
  throw gaa::InvalidInput("bad value '" + text + "' for " + key);
}

Json coerce(const std::string& key, const Json& v, Kind kind) {
  const bool ok = (kind == Kind::text && v.is_string()) ||
                  (kind == Kind::integer && v.is_number_integer()) ||
                  (kind == Kind::uinteger && v.is_number_unsigned()) ||
                  (kind == Kind::real && v.is_number());
  if (!ok) throw gaa::InvalidInput("config key '" + key + "' has the wrong type");
  if (kind == Kind::real) return v.get<double>();
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_value("list", s, Kind::real).get<double>());
  if (out.empty()) throw gaa::InvalidInput("empty list '" + text + "'");
  return out;
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& s : split_list(text)) {
    out.push_back(static_cast<int>(parse_value("list", s, Kind::integer).get<long long>()));
  }
  if (out.empty()) throw gaa::InvalidInput("empty list '" + text + "'");
  return out;
}

template <typename T>
T get(const Context& ctx, const char* key) {
  return ctx.config.at(key).get<T>();
}

void write_outputs_config(const Context& ctx) {
  gaa::write_json_file(ctx.out / "config.json", ctx.config);
}

Json stamped(Json doc, const Context& ctx) {
  doc["provenance"] = gaa::to_json(ctx.provenance);
  return doc;
}

// ---- instances -----------------------------------------------------------

std::vector<Param> instance_params() {
  return {
      {"instance", Kind::text, "", "instance JSON written by generate"},
      {"spectrum", Kind::text, "", "spectrum CSV (weight,population)"},
      {"family", Kind::text, "layered", "layered | tsp"},
      {"n", Kind::integer, 6, "nodes per layer, or cities"},
      {"l", Kind::integer, 10, "layer count"},
      {"layers", Kind::text, "", "explicit layer sizes, e.g. 2,4,4,2 (overrides n, l)"},
      {"R", Kind::integer, 100, "maximum edge weight"},
      {"seed", Kind::uinteger, 1, "generator seed"},
      {"path_cap", Kind::uinteger, gaa::kDefaultPathCap, "largest enumerable path count"},
      {"city_cap", Kind::integer, gaa::kDefaultCityCap, "largest enumerable city count"},
  };
}

struct Instance {
  std::optional<gaa::LayeredGraph> graph;
  std::optional<gaa::TspInstance> tsp;
  std::optional<gaa::PhaseSpectrum> spectrum;
};

Instance load_instance(const Context& ctx) {
  Instance inst;
  const auto spectrum_path = get<std::string>(ctx, "spectrum");
  const auto instance_path = get<std::string>(ctx, "instance");
  if (!spectrum_path.empty()) {
    inst.spectrum = gaa::spectrum_from_csv(gaa::read_text_file(spectrum_path), gaa::ScaleMode::weights);
    return inst;
  }
  if (!instance_path.empty()) {
    const Json doc = gaa::read_json_file(instance_path);
    if (doc.contains("layer_sizes")) {
      inst.graph = gaa::graph_from_json(doc);
    } else {
      inst.tsp = gaa::tsp_from_json(doc);
    }
    return inst;
  }
  const auto family = get<std::string>(ctx, "family");
  const auto n = get<int>(ctx, "n");
  const auto r = get<std::int64_t>(ctx, "R");
  const auto seed = get<std::uint64_t>(ctx, "seed");
  if (family == "tsp") {
    inst.tsp = gaa::generate_tsp(n, r, seed);
  } else if (family == "layered") {
    const auto layers = get<std::string>(ctx, "layers");
    std::vector<int> sizes = layers.empty()
                                 ? std::vector<int>(static_cast<std::size_t>(get<int>(ctx, "l")), n)
                                 : int_list(layers);
    inst.graph = gaa::generate_graph(std::move(sizes), r, seed);
  } else {
    throw gaa::InvalidInput("unknown family '" + family + "'");
  }
  return inst;
}

gaa::PhaseSpectrum spectrum_of(const Instance& inst, const Context& ctx) {
  if (inst.spectrum) return *inst.spectrum;
  if (inst.graph) return gaa::enumerate_spectrum(*inst.graph, get<std::uint64_t>(ctx, "path_cap"));
  return gaa::enumerate_tsp_spectrum(*inst.tsp, get<int>(ctx, "city_cap"));
}

int resolve_cap(const Context& ctx) { return get<int>(ctx, "steps"); }

std::optional<int> optional_cap(const Context& ctx) {
  const int cap = resolve_cap(ctx);
  if (cap < 0) throw gaa::InvalidInput("steps must be >= 0 (0 = default cap)");
  return cap == 0 ? std::nullopt : std::optional<int>(cap);
}

// ---- subcommands ---------------------------------------------------------

void cmd_generate(Context& ctx) {
  const Instance inst = load_instance(ctx);
  Json doc = inst.graph ? gaa::to_json(*inst.graph) : gaa::to_json(*inst.tsp);
  gaa::write_json_file(ctx.out / "instance.json", stamped(std::move(doc), ctx));
}

void cmd_solve(Context& ctx) {
  const Instance inst = load_instance(ctx);
  if (!inst.graph) throw gaa::InvalidInput("solve needs a layered graph");
  const auto objective_name = get<std::string>(ctx, "objective");
  gaa::Objective objective;
  if (objective_name == "min") {
    objective = gaa::Objective::minimize;
  } else if (objective_name == "max") {
    objective = gaa::Objective::maximize;
  } else {
    throw gaa::InvalidInput("objective must be min or max");
  }
  const auto r = gaa::classical_solve(*inst.graph, objective);
  Json doc{{"objective", objective_name},
           {"best_weight", r.best_weight},
           {"best_path", r.best_path.nodes},
           {"queries", r.queries},
           {"edge_count", inst.graph->edge_count()}};
  gaa::write_json_file(ctx.out / "solve.json", stamped(std::move(doc), ctx));
}

void cmd_spectrum(Context& ctx) {
  const Instance inst = load_instance(ctx);
  const auto s = spectrum_of(inst, ctx);
  gaa::write_text_file(ctx.out / "spectrum.csv", gaa::spectrum_csv(s, ctx.provenance));
  Json doc{{"header", gaa::spectrum_header(s)}, {"stats", gaa::to_json(gaa::stats(s))}};
  if (s.size() >= 2) doc["full_range_p_s"] = gaa::full_range_scale(s);
  if (inst.graph) doc["expected_mean"] = gaa::expected_mean(*inst.graph);
  doc["weighted_mean"] = gaa::weighted_mean(s);
  if (s.size() >= 3) doc["fit"] = gaa::to_json(gaa::fit_gaussian(s));
  gaa::write_json_file(ctx.out / "spectrum.json", stamped(std::move(doc), ctx));
}

double scale_or_full_range(const Context& ctx, const gaa::PhaseSpectrum& s) {
  const double p = get<double>(ctx, "p_s");
  if (p < 0.0) throw gaa::InvalidInput("p_s must be >= 0 (0 = full-range scale)");
  return p > 0.0 ? p : gaa::full_range_scale(s);
}

void cmd_amplify(Context& ctx) {
  const auto s = spectrum_of(load_instance(ctx), ctx);
  gaa::RunOptions options;
  options.step_cap = optional_cap(ctx);
  options.target = gaa::to_target(gaa::parse_target_tag(get<std::string>(ctx, "target")));
  const auto stop = get<std::string>(ctx, "stop");
  if (stop == "full_window") {
    options.stop = gaa::StopRule::full_window;
  } else if (stop != "rebound") {
    throw gaa::InvalidInput("stop must be rebound or full_window");
  }
  const double p_s = scale_or_full_range(ctx, s);
  const auto trace = gaa::run(s, p_s, options);
  gaa::write_text_file(ctx.out / "trace.csv", gaa::trace_csv(trace, ctx.provenance));
  Json doc = gaa::trace_summary(trace);
  doc["p_s"] = p_s;
  gaa::write_json_file(ctx.out / "amplify.json", stamped(std::move(doc), ctx));
}

std::vector<gaa::TargetTag> target_list(const std::string& text) {
  std::vector<gaa::TargetTag> out;
  for (const auto& t : split_list(text)) out.push_back(gaa::parse_target_tag(t));
  if (out.empty()) throw gaa::InvalidInput("no sweep targets");
  return out;
}

void cmd_sweep(Context& ctx) {
  const auto s = spectrum_of(load_instance(ctx), ctx);
  const double p0 = gaa::full_range_scale(s);
  const auto targets = target_list(get<std::string>(ctx, "targets"));
  gaa::SweepOptions options;
  options.threads = ctx.threads;
  options.step_cap = optional_cap(ctx);
  const auto sweep = gaa::sweep_ps(s, get<double>(ctx, "lo") * p0, get<double>(ctx, "hi") * p0,
                                   get<int>(ctx, "points"), targets, options);
  gaa::write_text_file(ctx.out / "sweep.csv", gaa::sweep_csv(sweep, ctx.provenance));
  Json best = Json::object();
  for (auto t : targets) {
    const auto row = sweep.best(t);
    best[gaa::to_string(t)] = Json{{"p_s", row.p_s}, {"p_m", row.p_m}, {"s_m", row.s_m}};
  }
  Json doc{{"full_range_p_s", p0}, {"rows", sweep.grid.size()}, {"best", std::move(best)}};
  gaa::write_json_file(ctx.out / "sweep.json", stamped(std::move(doc), ctx));
}

void cmd_stepwise(Context& ctx) {
  const auto s = spectrum_of(load_instance(ctx), ctx);
  gaa::StepwiseOptions options;
  options.window = get<double>(ctx, "window");
  options.resolution = get<int>(ctx, "resolution");
  options.step_cap = optional_cap(ctx);
  options.target = gaa::to_target(gaa::parse_target_tag(get<std::string>(ctx, "target")));
  const auto r = gaa::optimize_stepwise(s, options);
  gaa::write_text_file(ctx.out / "stepwise.csv", gaa::trace_csv(r.trace, ctx.provenance));
  const auto values = r.schedule.values();
  Json doc = gaa::trace_summary(r.trace);
  doc["full_range_p_s"] = gaa::full_range_scale(s);
  doc["schedule_min"] = *std::min_element(values.begin(), values.end());
  doc["schedule_max"] = *std::max_element(values.begin(), values.end());
  gaa::write_json_file(ctx.out / "stepwise.json", stamped(std::move(doc), ctx));
}

void cmd_batch(Context& ctx) {
  gaa::BatchConfig c;
  const auto family = get<std::string>(ctx, "family");
  if (family == "tsp") {
    c.family = gaa::InstanceFamily::tsp;
  } else if (family != "layered") {
    throw gaa::InvalidInput("unknown family '" + family + "'");
  }
  c.n = get<int>(ctx, "n");
  c.l = get<int>(ctx, "l");
  c.r_weight = get<std::int64_t>(ctx, "R");
  c.trials = get<int>(ctx, "trials");
  c.seed = get<std::uint64_t>(ctx, "seed");
  c.strategies = {false, false, false};
  for (const auto& name : split_list(get<std::string>(ctx, "strategies"))) {
    if (name == "stepwise") {
      c.strategies.stepwise = true;
    } else if (name == "single") {
      c.strategies.single = true;
    } else if (name == "average") {
      c.strategies.average = true;
    } else {
      throw gaa::InvalidInput("unknown strategy '" + name + "'");
    }
  }
  c.sweep_points = get<int>(ctx, "points");
  c.sweep_lo = get<double>(ctx, "lo");
  c.sweep_hi = get<double>(ctx, "hi");
  c.stepwise.window = get<double>(ctx, "window");
  c.stepwise.resolution = get<int>(ctx, "resolution");
  c.threads = ctx.threads;
  const auto report = gaa::batch_study(c);
  gaa::write_json_file(ctx.out / "study.json", stamped(gaa::study_json(report), ctx));
  gaa::write_text_file(ctx.out / "study.csv", gaa::study_csv(report, ctx.provenance));
}

// States sharing the target's phase modulo 2pi evolve with the target's
// amplitude, so they are boosted together.
std::uint64_t states_at_target_phase(const gaa::PhaseSpectrum& s, std::size_t target) {
  std::uint64_t count = 0;
  for (const auto& c : s.classes()) {
    if (std::abs(std::remainder(c.value - s[target].value, gaa::kTwoPi)) < 1e-12) count += c.population;
  }
  return count;
}

void cmd_synth(Context& ctx) {
  const auto model = get<std::string>(ctx, "model");
  if (model != "long" && model != "short") throw gaa::InvalidInput("model must be long or short");
  const int phases = get<int>(ctx, "phases");
  const auto total = get<std::uint64_t>(ctx, "total");
  const int sweep_points = get<int>(ctx, "sweep_points");
  const gaa::TargetTag min_tag[] = {gaa::TargetTag::min};

  std::string csv = gaa::csv_comment(ctx.provenance);
  csv += "sigma,total,n_classes,pop_min,sigma_prime,p_s,p_m,s_m,p_m_shared";
  if (sweep_points > 0) csv += ",sweep_p_s,sweep_p_m,sweep_s_m";
  csv += '\n';
  Json rows = Json::array();
  for (double sigma : real_list(get<std::string>(ctx, "sigma"))) {
    const auto s = model == "long" ? gaa::synth_long_tail(sigma, phases, total)
                                   : gaa::synth_short_tail(sigma, phases, total);
    const auto st = gaa::stats(s);
    Json row{{"sigma", sigma},
             {"total", s.total()},
             {"n_classes", s.size()},
             {"pop_min", st.pop_min},
             {"sigma_prime", st.sigma_prime}};
    std::string line = gaa::format_real(sigma) + ',' + std::to_string(s.total()) + ',' +
                       std::to_string(s.size()) + ',' + std::to_string(st.pop_min) + ',' +
                       gaa::format_real(st.sigma_prime);
    if (s.size() < 2) {
      row["note"] = "single class: nothing to amplify";
      line += ",,,,";
      if (sweep_points > 0) line += ",,,";
    } else {
      // Long-tail phases already span the circle; short-tail ones are
      // stretched onto [0, 2pi] first.
      const auto rescaled = model == "short" ? gaa::rescale_full_range(s) : gaa::Rescaled{s, 1.0};
      const auto trace = gaa::run(rescaled.spectrum, 1.0);
      const double shared =
          trace.p_m * static_cast<double>(states_at_target_phase(rescaled.spectrum, trace.target_class));
      row["p_s"] = rescaled.p_s;
      row["p_m"] = trace.p_m;
      row["s_m"] = trace.s_m;
      row["p_m_shared"] = shared;
      line += ',' + gaa::format_real(rescaled.p_s) + ',' + gaa::format_real(trace.p_m) + ',' +
              std::to_string(trace.s_m) + ',' + gaa::format_real(shared);
      if (sweep_points > 0) {
        gaa::SweepOptions options;
        options.threads = ctx.threads;
        const double p0 = gaa::full_range_scale(s);
        const auto best = gaa::sweep_ps(s, get<double>(ctx, "lo") * p0, get<double>(ctx, "hi") * p0,
                                        sweep_points, min_tag, options)
                              .best(gaa::TargetTag::min);
        row["sweep"] = Json{{"p_s", best.p_s}, {"p_m", best.p_m}, {"s_m", best.s_m}};
        line += ',' + gaa::format_real(best.p_s) + ',' + gaa::format_real(best.p_m) + ',' +
                std::to_string(best.s_m);
      }
    }
    csv += line + '\n';
    rows.push_back(std::move(row));
  }
  gaa::write_text_file(ctx.out / "synth.csv", csv);
  gaa::write_json_file(ctx.out / "synth.json", stamped(Json{{"model", model}, {"rows", std::move(rows)}}, ctx));
}

void cmd_twomark(Context& ctx) {
  const int n = get<int>(ctx, "qubits");
  const auto curve = gaa::two_marked_curve(n, get<int>(ctx, "theta_points"), optional_cap(ctx));
  std::string csv = gaa::csv_comment(ctx.provenance);
  csv += "theta,p_m_ones,s_m_ones,p_m_zeros,s_m_zeros,cos_form_ones,cos_form_zeros\n";
  double worst = 0.0;
  for (const auto& p : curve) {
    const double ones = 0.5 * (std::cos(p.theta) + 1.0);
    const double zeros = 0.5 * (std::cos(p.theta - std::numbers::pi) + 1.0);
    worst = std::max(worst, std::abs(p.p_m_ones - ones));
    csv += gaa::format_real(p.theta) + ',' + gaa::format_real(p.p_m_ones) + ',' +
           std::to_string(p.s_m_ones) + ',' + gaa::format_real(p.p_m_zeros) + ',' +
           std::to_string(p.s_m_zeros) + ',' + gaa::format_real(ones) + ',' + gaa::format_real(zeros) +
           '\n';
  }
  gaa::write_text_file(ctx.out / "twomark.csv", csv);
  Json doc{{"qubits", n},
           {"step_window", optional_cap(ctx).value_or(gaa::two_marked_window(n))},
           {"max_deviation_ones", worst}};
  gaa::write_json_file(ctx.out / "twomark.json", stamped(std::move(doc), ctx));
}

void cmd_verify(Context& ctx) {
  const int seeds = get<int>(ctx, "seeds");
  const double p_s = get<double>(ctx, "p_s");
  const auto seed = get<std::uint64_t>(ctx, "seed");
  const int n = get<int>(ctx, "n");
  Json rows = Json::array();
  double worst_phase = 0.0;
  double worst_inverse = 0.0;
  double worst_flat = 0.0;
  bool gates_written = false;
  for (int layers : int_list(get<std::string>(ctx, "layer_counts"))) {
    for (int i = 0; i < seeds; ++i) {
      const auto graph_seed = gaa::mix_seed(seed, static_cast<std::uint64_t>(layers * 1000 + i));
      const auto g = gaa::generate_graph(std::vector<int>(static_cast<std::size_t>(layers), n),
                                         get<std::int64_t>(ctx, "R"), graph_seed);
      const auto circuit = gaa::build_up_circuit(g, p_s);
      if (!gates_written) {
        gaa::write_json_file(ctx.out / "gates.json", gaa::gates_json(circuit));
        gates_written = true;
      }
      const double phase_error = gaa::verify_oracle(g, p_s);

      const auto start = gaa::QubitState::uniform(circuit.n_qubits);
      const auto back = gaa::apply_circuit(gaa::apply_circuit(start, circuit), circuit.inverse());
      double inverse_error = 0.0;
      for (std::size_t k = 0; k < back.amplitudes().size(); ++k) {
        inverse_error = std::max(inverse_error, std::abs(back.amplitudes()[k] - start.amplitudes()[k]));
      }

      // Every basis probability of the full statevector against the
      // probability of one state of its weight class.
      const auto spectrum = gaa::enumerate_spectrum(g);
      std::map<double, std::size_t> class_of;
      for (std::size_t c = 0; c < spectrum.size(); ++c) class_of[spectrum[c].value] = c;
      std::vector<std::size_t> basis_class(std::size_t{1} << circuit.n_qubits);
      for (std::uint64_t b = 0; b < basis_class.size(); ++b) {
        basis_class[b] = class_of.at(static_cast<double>(gaa::path_weight(g, gaa::decode_basis(g, b))));
      }
      gaa::FlatSimulator flat(g);
      auto packed = gaa::init_uniform(spectrum);
      double flat_error = 0.0;
      const int steps = get<int>(ctx, "flat_steps");
      for (int k = 0; k < steps; ++k) {
        flat.step(p_s);
        packed = gaa::apply_diffusion(gaa::apply_oracle(std::move(packed), spectrum, p_s));
        for (std::uint64_t b = 0; b < basis_class.size(); ++b) {
          flat_error = std::max(flat_error, std::abs(flat.state().probability(b) -
                                                     packed.state_probability(basis_class[b])));
        }
      }
      worst_phase = std::max(worst_phase, phase_error);
      worst_inverse = std::max(worst_inverse, inverse_error);
      worst_flat = std::max(worst_flat, flat_error);
      rows.push_back(Json{{"layers", layers},
                          {"seed", graph_seed},
                          {"qubits", circuit.n_qubits},
                          {"gates", circuit.gate_count()},
                          {"tranches", circuit.tranches.size()},
                          {"max_phase_error", phase_error},
                          {"inverse_error", inverse_error},
                          {"flat_steps_compared", steps},
                          {"flat_vs_engine", flat_error}});
    }
  }
  Json doc{{"max_phase_error", worst_phase},
           {"max_inverse_error", worst_inverse},
           {"max_flat_vs_engine", worst_flat},
           {"graphs", std::move(rows)}};
  gaa::write_json_file(ctx.out / "verify.json", stamped(std::move(doc), ctx));
}

std::vector<Command> commands() {
  auto with = [](std::vector<Param> base, std::vector<Param> extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
  };
  const Param steps{"steps", Kind::integer, 0, "step cap (0 = default)"};
  const Param target{"target", Kind::text, "min", "min | second_min | max"};
  return {
      {"generate", "generate a layered graph or TSP instance", instance_params(), cmd_generate},
      {"solve", "classical layer-by-layer solver",
       with(instance_params(), {{"objective", Kind::text, "min", "min | max"}}), cmd_solve},
      {"spectrum", "enumerate the weight spectrum and fit a gaussian", instance_params(), cmd_spectrum},
      {"amplify", "single amplification run with full trace",
       with(instance_params(), {{"p_s", Kind::real, 0.0, "phase scale (0 = full-range scale)"},
                                target,
                                steps,
                                {"stop", Kind::text, "rebound", "rebound | full_window"}}),
       cmd_amplify},
      {"sweep", "constant p_s sweep",
       with(instance_params(), {{"lo", Kind::real, 0.5, "lower end, multiple of the full-range scale"},
                                {"hi", Kind::real, 1.5, "upper end, multiple of the full-range scale"},
                                {"points", Kind::integer, 1001, "coarse grid points"},
                                {"targets", Kind::text, "min,second_min", "comma-separated targets"},
                                steps}),
       cmd_sweep},
      {"stepwise", "per-step p_s optimizer",
       with(instance_params(), {{"window", Kind::real, 0.2, "relative search window"},
                                {"resolution", Kind::integer, 41, "candidates per step"},
                                target,
                                steps}),
       cmd_stepwise},
      {"batch", "statistical study over seeded instances",
       {{"family", Kind::text, "layered", "layered | tsp"},
        {"n", Kind::integer, 6, "nodes per layer, or cities"},
        {"l", Kind::integer, 10, "layer count (layered only)"},
        {"R", Kind::integer, 100, "maximum edge weight"},
        {"trials", Kind::integer, 20, "instances"},
        {"seed", Kind::uinteger, 1, "study seed"},
        {"strategies", Kind::text, "stepwise,single,average", "comma-separated strategies"},
        {"points", Kind::integer, 401, "sweep grid points for single-optimal p_s"},
        {"lo", Kind::real, 0.5, "sweep lower end"},
        {"hi", Kind::real, 1.5, "sweep upper end"},
        {"window", Kind::real, 0.2, "stepwise window"},
        {"resolution", Kind::integer, 41, "stepwise candidates"}},
       cmd_batch},
      {"synth", "synthetic long/short tail spectra",
       {{"model", Kind::text, "long", "long | short"},
        {"sigma", Kind::text, "0", "sigma value or comma-separated list"},
        {"phases", Kind::integer, 700, "grid points on the circle"},
        {"total", Kind::uinteger, 60000000, "target Hilbert space size"},
        {"sweep_points", Kind::integer, 0, "also sweep p_s with this many points (0 = off)"},
        {"lo", Kind::real, 0.5, "sweep lower end"},
        {"hi", Kind::real, 1.5, "sweep upper end"},
        {"seed", Kind::uinteger, 0, "recorded only; synthesis is deterministic"}},
       cmd_synth},
      {"twomark", "two-marked oracle theta curve",
       {{"qubits", Kind::integer, 20, "register size"},
        {"theta_points", Kind::integer, 25, "theta grid over [0, pi]"},
        {"steps", Kind::integer, 0, "step window (0 = default)"},
        {"seed", Kind::uinteger, 0, "recorded only"}},
       cmd_twomark},
      {"verify", "gate-level oracle checks and flat simulation cross-check",
       {{"n", Kind::integer, 2, "nodes per layer (power of two)"},
        {"layer_counts", Kind::text, "3,4,5", "layer counts to test"},
        {"seeds", Kind::integer, 20, "graphs per layer count"},
        {"R", Kind::integer, 100, "maximum edge weight"},
        {"p_s", Kind::real, 0.01, "phase scale"},
        {"flat_steps", Kind::integer, 50, "steps compared against the packed engine"},
        {"seed", Kind::uinteger, 1, "base seed"}},
       cmd_verify},
  };
}

void emit_error(const std::string& kind, const std::string& message, int code) {
  const Json record{{"error", Json{{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << record.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaussian amplitude amplification lab"};
  app.set_version_flag("--version", gaa::tool_version());
  app.require_subcommand(1);

  const auto cmds = commands();
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::map<std::string, CLI::Option*>> opts;
  std::map<std::string, std::string> config_path;
  std::map<std::string, std::string> out_dir;
  std::map<std::string, std::string> threads;
  std::map<std::string, CLI::App*> subs;
  for (const auto& cmd : cmds) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    subs[cmd.name] = sub;
    for (const auto& p : cmd.params) {
      opts[cmd.name][p.key] = sub->add_option(flag_name(p.key), raw[cmd.name][p.key], p.help);
    }
    opts[cmd.name]["config"] = sub->add_option("--config", config_path[cmd.name], "JSON config file");
    opts[cmd.name]["out"] = sub->add_option("--out", out_dir[cmd.name], "output directory");
    opts[cmd.name]["threads"] =
        sub->add_option("--threads", threads[cmd.name], "worker threads (0 = all cores)");
  }

  if (argc > 1 && argv[1][0] != '-' && subs.count(argv[1]) == 0) {
    emit_error("usage", std::string("unknown subcommand '") + argv[1] + "'", kExitUsage);
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("usage", e.what(), kExitUsage);
    return kExitUsage;
  }

  const Command* cmd = nullptr;
  for (const auto& c : cmds) {
    if (subs[c.name]->parsed()) cmd = &c;
  }
  if (cmd == nullptr) {
    emit_error("usage", "no subcommand given", kExitUsage);
    return kExitUsage;
  }

  try {
    Context ctx;
    Json cfg = Json::object();
    cfg["command"] = cmd->name;
    for (const auto& p : cmd->params) cfg[p.key] = p.fallback;
    const char* env_out = std::getenv("GAA_OUT_DIR");
    cfg["out"] = env_out != nullptr && *env_out != '\0' ? env_out : ".";
    cfg["threads"] = 0;

    if (opts[cmd->name]["config"]->count() > 0) {
      const Json file = gaa::read_json_file(config_path[cmd->name]);
      if (!file.is_object()) throw gaa::InvalidInput("config file must hold a JSON object");
      for (const auto& [key, value] : file.items()) {
        // A config written by another subcommand may seed this one; its
        // shared keys apply and the command name is replaced.
        if (key == "command") continue;
        if (key == "out") {
          cfg["out"] = coerce(key, value, Kind::text);
          continue;
        }
        if (key == "threads") {
          cfg["threads"] = coerce(key, value, Kind::integer);
          continue;
        }
        const auto it = std::find_if(cmd->params.begin(), cmd->params.end(),
                                     [&](const Param& p) { return p.key == key; });
        if (it == cmd->params.end()) throw gaa::InvalidInput("unknown config key '" + key + "'");
        cfg[key] = coerce(key, value, it->kind);
      }
    }
    for (const auto& p : cmd->params) {
      if (opts[cmd->name][p.key]->count() > 0) cfg[p.key] = parse_value(p.key, raw[cmd->name][p.key], p.kind);
    }
    if (opts[cmd->name]["out"]->count() > 0) cfg["out"] = out_dir[cmd->name];
    if (opts[cmd->name]["threads"]->count() > 0) {
      cfg["threads"] = parse_value("threads", threads[cmd->name], Kind::integer);
    }
    if (cfg["threads"].get<long long>() < 0) throw gaa::InvalidInput("threads must be >= 0");

    // Output location and thread count do not change results, so they stay
    // out of the hash.
    Json hashed = cfg;
    hashed.erase("out");
    hashed.erase("threads");
    ctx.config = cfg;
    ctx.out = cfg["out"].get<std::string>();
    ctx.threads = static_cast<unsigned>(cfg["threads"].get<long long>());
    const std::uint64_t seed = cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : 0;
    ctx.provenance = gaa::make_provenance(hashed, seed);

    fs::create_directories(ctx.out);
    write_outputs_config(ctx);
    cmd->run(ctx);
    return kExitOk;
  } catch (const gaa::InvalidInput& e) {
    emit_error("invalid_input", e.what(), kExitInvalid);
    return kExitInvalid;
  } catch (const gaa::CapExceeded& e) {
    emit_error("cap_exceeded", e.what(), kExitCap);
    return kExitCap;
  } catch (const std::exception& e) {
    emit_error("error", e.what(), kExitOther);
    return kExitOther;
  }
}
