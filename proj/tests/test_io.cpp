#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"

#include "gaa/error.hpp"
#include "gaa/io.hpp"

#include "generators.hpp"

TEST_CASE("graph documents round-trip") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    const auto g = gen::random_graph(rng, 5, 5);
    const auto doc = gaa::to_json(g);
    CHECK(doc["version"] == gaa::kGraphFormatVersion);
    CHECK(gaa::graph_from_json(gaa::Json::parse(doc.dump())) == g);
  }
  auto doc = gaa::to_json(gaa::generate_graph({2, 2}, 5, 1));
  doc["version"] = 99;
  CHECK_THROWS_AS(gaa::graph_from_json(doc), gaa::InvalidInput);
  doc = gaa::to_json(gaa::generate_graph({2, 2}, 5, 1));
  doc.erase("weights");
  CHECK_THROWS_AS(gaa::graph_from_json(doc), gaa::InvalidInput);
}

TEST_CASE("tsp documents round-trip") {
  const auto inst = gaa::generate_tsp(7, 100, 5);
  CHECK(gaa::tsp_from_json(gaa::Json::parse(gaa::to_json(inst).dump())) == inst);
}

TEST_CASE("spectrum csv round-trips") {
  std::mt19937_64 rng(42);
  const gaa::Provenance p{"0.1.0", "0123456789abcdef", 7};
  for (int i = 0; i < 20; ++i) {
    const auto s = gen::random_weight_spectrum(rng);
    const auto text = gaa::spectrum_csv(s, p);
    CHECK(text.rfind("# tool=gaa version=0.1.0 config=0123456789abcdef seed=7\n", 0) == 0);
    CHECK(gaa::spectrum_from_csv(text, gaa::ScaleMode::weights) == s);
  }
  CHECK_THROWS_AS(gaa::spectrum_from_csv("weight,population\n", gaa::ScaleMode::weights), gaa::InvalidInput);
  CHECK_THROWS_AS(gaa::spectrum_from_csv("weight,population\n1;2\n", gaa::ScaleMode::weights), gaa::InvalidInput);
}

TEST_CASE("reals print with round-trip precision") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(std::stod(gaa::format_real(x)) == x);
  }
}

TEST_CASE("config hash") {
  gaa::Json a{{"command", "sweep"}, {"points", 11}};
  gaa::Json b{{"command", "sweep"}, {"points", 12}};
  CHECK(gaa::config_hash(a).size() == 16);
  CHECK(gaa::config_hash(a) == gaa::config_hash(gaa::Json::parse(a.dump())));
  CHECK(gaa::config_hash(a) != gaa::config_hash(b));
  // FNV-1a 64 of the empty object "{}".
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : std::string("{}")) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char want[17];
  std::snprintf(want, sizeof want, "%016llx", static_cast<unsigned long long>(h));
  CHECK(gaa::config_hash(gaa::Json::object()) == want);
  const auto prov = gaa::make_provenance(a, 3);
  CHECK(prov.tool_version == gaa::tool_version());
  CHECK(gaa::to_json(prov)["seed"] == 3);
}

TEST_CASE("trace and sweep csv layouts") {
  const auto s = gaa::grover_spectrum(64);
  gaa::RunOptions o;
  o.target = gaa::Target::at(1);
  const auto trace = gaa::run(s, 1.0, o);
  const gaa::Provenance p{"v", "h", 1};
  const auto csv = gaa::trace_csv(trace, p);
  CHECK(csv.find("step,p_s,prob_min_state,prob_min_class,mean_re,mean_im\n") != std::string::npos);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == trace.steps.size() + 2);
  const auto summary = gaa::trace_summary(trace);
  CHECK(summary["s_m"] == trace.s_m);
  CHECK(summary["terminated_by"] == "rebound");
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "gaa_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  gaa::write_json_file(dir / "a.json", gaa::Json{{"x", 1}});
  CHECK(gaa::read_json_file(dir / "a.json")["x"] == 1);
  CHECK(gaa::read_text_file(dir / "a.json").back() == '\n');
  gaa::write_text_file(dir / "b.txt", "not json");
  CHECK_THROWS_AS(gaa::read_json_file(dir / "b.txt"), gaa::InvalidInput);
  CHECK_THROWS_AS(gaa::read_text_file(dir / "missing"), gaa::InvalidInput);
  std::filesystem::remove_all(dir.parent_path());
}
