#include "trine/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace trine {

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string bundle_config_text(const BundleConfig& cfg) {
  std::string s = config_fingerprint(cfg.search) + ";grid=" + std::to_string(cfg.grid_max) +
                  ";rtLmax=" + std::to_string(cfg.rt_lmax) + ";rt=";
  for (const auto& [n, m] : cfg.rt_masks) s += std::to_string(n) + "," + std::to_string(m) + " ";
  s += ";traces=";
  for (const auto& t : cfg.traces)
    s += std::to_string(t.n) + "," + std::to_string(t.m) + "," + std::to_string(t.L) + "," + t.start + " ";
  return s;
}

std::string s_counts_csv(const std::vector<rt::Table>& tables, const std::vector<std::string>& names) {
  static const char* kCols[] = {"+0", "+1", "+2", "-0", "-1", "-2"};
  std::string out = "table,N,CR,class,kind";
  for (const char* c : kCols) out += std::string(",s") + c;
  for (const char* c : kCols) out += std::string(",s0") + c;
  out += "\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    const rt::SCounts s = rt::s_counts(t);
    out += names[i] + "," + std::to_string(t.N()) + "," + std::to_string(t.CR()) + "," + to_string(rt::classify(t)) +
           "," + to_string(rt::kind(t));
    for (std::size_t v : s.other) out += "," + std::to_string(v);
    for (std::size_t v : s.zero) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

std::string trace_json(const TraceSpec& spec, const IpfConfig& ipf, std::size_t max_steps) {
  const Mask mask(spec.n, spec.m);
  const MixedGraph g = build_graph(mask, spec.L).graph;
  const Coloring start = Coloring::parse(spec.start);
  const RunRecord run = run_to_mirror(g, start, max_steps);
  const RunRecord crun = run_to_mirror(g, complement(start), max_steps);
  nlohmann::ordered_json j;
  j["mask"] = {spec.n, spec.m};
  j["L"] = spec.L;
  j["run"] = nlohmann::ordered_json::parse(run.to_json());
  j["complementRun"] = nlohmann::ordered_json::parse(crun.to_json());
  j["fullCycle"] = full_cycle(g, start, max_steps).size();
  if (run.degenerate() || crun.degenerate())
    j["ipf"] = "degenerate";
  else
    j["ipf"] = nlohmann::ordered_json::parse(check_ipf(run, crun, ipf).to_json());
  return j.dump(2) + "\n";
}

Bundle build_bundle(const BundleConfig& cfg) {
  Bundle files;
  files["grid.csv"] = verdict_grid(cfg.grid_max, cfg.grid_max, cfg.search).to_csv();

  SearchConfig rt_cfg = cfg.search;
  rt_cfg.lmax = cfg.rt_lmax;
  std::vector<rt::Table> tables;
  std::vector<std::string> names;
  for (const auto& [n, m] : cfg.rt_masks) {
    const std::string name = "[" + std::to_string(n) + "," + std::to_string(m) + "]";
    tables.push_back(rt::extract_table(Mask(n, m), rt_cfg));
    names.push_back(name);
    files["rt/" + std::to_string(n) + "_" + std::to_string(m) + ".rt"] = tables.back().to_text();
  }
  files["scounts.csv"] = s_counts_csv(tables, names);

  // Coincidence matrices are only defined among tables of equal width.
  std::map<std::size_t, std::vector<std::size_t>> by_width;
  for (std::size_t i = 0; i < tables.size(); ++i) by_width[tables[i].N()].push_back(i);
  for (const auto& [N, idx] : by_width) {
    std::vector<rt::Table> group;
    std::vector<std::string> group_names;
    for (std::size_t i : idx) {
      group.push_back(tables[i]);
      group_names.push_back(names[i]);
    }
    files["coincidence_N" + std::to_string(N) + ".csv"] = rt::coincidence_matrix(group, group_names).to_csv();
  }

  for (const TraceSpec& t : cfg.traces)
    files["traces/" + std::to_string(t.n) + "_" + std::to_string(t.m) + "_L" + std::to_string(t.L) + "_" + t.start +
          ".json"] = trace_json(t, cfg.search.ipf, cfg.search.max_steps);

  nlohmann::ordered_json manifest;
  const std::string config = bundle_config_text(cfg);
  manifest["config"] = config;
  manifest["configHash"] = fnv1a_hex(config);
  manifest["experimental"] = "rt/*.rt, scounts.csv and coincidence_N*.csv come from the next-slot reconstruction";
  auto& list = manifest["files"] = nlohmann::ordered_json::object();
  for (const auto& [path, body] : files) list[path] = fnv1a_hex(body);
  files["manifest.json"] = manifest.dump(2) + "\n";
  return files;
}

void write_bundle(const Bundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  for (const auto& [path, body] : bundle) {
    const fs::path p = fs::path(dir) / path;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << body;
  }
}

}  // namespace trine
