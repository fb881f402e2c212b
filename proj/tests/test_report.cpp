#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "trine/report.hpp"

using namespace trine;

static BundleConfig small_config() {
  BundleConfig cfg;
  cfg.search.lmax = 9;
  cfg.search.exhaustive_cutoff = 7;
  cfg.search.samples_per_L = 40;
  cfg.grid_max = 5;
  cfg.rt_lmax = 9;
  cfg.rt_masks = {{1, 3}, {3, 1}, {3, 3}};
  return cfg;
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("fixture trace") {
  const auto j = nlohmann::json::parse(trace_json({1, 1, 3, "ABA"}, {}, kDefaultMaxSteps));
  CHECK(j["run"]["T"] == 3);
  CHECK(j["run"]["states"] == nlohmann::json::array({"ACA", "CBC", "BAB"}));
  CHECK(j["run"]["mirror"] == "CAC");
  CHECK(j["fullCycle"] == 6);
  CHECK(j["ipf"]["K"] == 2);
  CHECK(j["ipf"]["light"] == true);

  const auto degenerate = nlohmann::json::parse(trace_json({1, 1, 3, "AAA"}, {}, kDefaultMaxSteps));
  CHECK(degenerate["ipf"] == "degenerate");
}

TEST_CASE("bundle is deterministic and self-describing") {
  const BundleConfig cfg = small_config();
  const Bundle a = build_bundle(cfg), b = build_bundle(cfg);
  CHECK(a == b);
  for (const char* f : {"grid.csv", "scounts.csv", "coincidence_N4.csv", "coincidence_N5.csv", "rt/1_3.rt",
                        "traces/1_1_L3_ABA.json", "manifest.json"})
    CHECK_MESSAGE(a.count(f), f);

  const auto manifest = nlohmann::json::parse(a.at("manifest.json"));
  CHECK(manifest["configHash"] == fnv1a_hex(bundle_config_text(cfg)));
  for (const auto& [path, hash] : manifest["files"].items()) CHECK(hash == fnv1a_hex(a.at(path)));

  BundleConfig other = cfg;
  other.search.seed = 2;
  CHECK(nlohmann::json::parse(build_bundle(other).at("manifest.json"))["configHash"] != manifest["configHash"]);

  const auto dir = std::filesystem::temp_directory_path() / "trine_bundle_test";
  std::filesystem::remove_all(dir);
  write_bundle(a, dir.string());
  std::ifstream in(dir / "rt" / "1_3.rt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a.at("rt/1_3.rt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("s-counts csv") {
  rt::Table t(3);
  t.insert({rt::Value(1), rt::Value(1), rt::Value(4)});
  const std::string csv = s_counts_csv({t}, {"x"});
  CHECK(csv ==
        "table,N,CR,class,kind,s+0,s+1,s+2,s-0,s-1,s-2,s0+0,s0+1,s0+2,s0-0,s0-1,s0-2\n"
        "x,3,1,Small,CompletelyCorrect2nd,0,1,0,0,1,0,0,1,0,0,0,0\n");
}
