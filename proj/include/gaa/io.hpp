#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "gaa/circuitcheck.hpp"
#include "gaa/engine.hpp"
#include "gaa/graphs.hpp"
#include "gaa/search.hpp"
#include "gaa/spectrum.hpp"
#include "gaa/tsp.hpp"

namespace gaa {

using Json = nlohmann::ordered_json;

/// Stamped on every artifact.
struct Provenance {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

inline constexpr int kGraphFormatVersion = 1;

std::string tool_version();

/// FNV-1a 64 over the compact dump of `config`, as 16 hex digits. Key order
/// is the insertion order of the ordered document.
std::string config_hash(const Json& config);
Provenance make_provenance(const Json& config, std::uint64_t seed);
Json to_json(const Provenance& p);
/// "# tool=gaa version=... config=... seed=..." with a trailing newline.
std::string csv_comment(const Provenance& p);

Json to_json(const LayeredGraph& g);
LayeredGraph graph_from_json(const Json& doc);
Json to_json(const TspInstance& inst);
TspInstance tsp_from_json(const Json& doc);

std::string to_string(ScaleMode mode);
ScaleMode parse_scale_mode(const std::string& text);

/// weight,population rows.
std::string spectrum_csv(const PhaseSpectrum& s, const Provenance& p);
Json spectrum_header(const PhaseSpectrum& s);
/// Reads spectrum_csv output; '#' lines are skipped.
PhaseSpectrum spectrum_from_csv(const std::string& text, ScaleMode mode);

std::string to_string(Termination t);
/// step,p_s,prob_min_state,prob_min_class,mean_re,mean_im rows.
std::string trace_csv(const AmplificationTrace& trace, const Provenance& p);
Json trace_summary(const AmplificationTrace& trace);

std::string sweep_csv(const SweepResult& sweep, const Provenance& p);

/// [{pattern: {qubit: bit}, phase}] over every tranche in order.
Json gates_json(const PhaseCircuit& circuit);

Json to_json(const GaussianFit& fit);
Json to_json(const SpectrumStats& st);

Json study_json(const StudyReport& report);
/// One row per trial, strategy columns left empty when not run.
std::string study_csv(const StudyReport& report, const Provenance& p);

/// %.17g, so values round-trip exactly.
std::string format_real(double x);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

}  // namespace gaa
