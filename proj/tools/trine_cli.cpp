// trine: command-line front end for the automaton, the mask search and the
// table algebra. Exit codes: 0 ok, 1 error, 2 mask found incorrect.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "trine/ac23.hpp"
#include "trine/report.hpp"
#include "trine/rt.hpp"

using namespace trine;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

rt::Table load_table(const std::string& path) {
  try {
    return rt::Table::parse(slurp(path));
  } catch (const rt::FormatError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<rt::Table> load_tables(const std::vector<std::string>& paths) {
  std::vector<rt::Table> out;
  for (const auto& p : paths) out.push_back(load_table(p));
  return out;
}

struct Flags {
  SearchConfig cfg;
  std::string level = "light", cond1 = "complemented";
  int threads = -1;

  void finish() {
    cfg.ipf.level = parse_check_level(level);
    cfg.ipf.cond1 = parse_cond1_reading(cond1);
    if (cfg.lmin < 3) throw std::invalid_argument("--lmin must be at least 3");
    if (cfg.lmax < cfg.lmin) throw std::invalid_argument("--lmax must be >= --lmin");
    if (threads >= 0) {
      cfg.threads = threads;
    } else if (const char* env = std::getenv("TRINE_THREADS")) {
      cfg.threads = std::atoi(env);
    }
  }
};

void add_config(CLI::App& app, Flags& f) {
  app.add_option("--lmin", f.cfg.lmin, "smallest ring size")->capture_default_str();
  app.add_option("--lmax", f.cfg.lmax, "largest ring size")->capture_default_str();
  app.add_option("--cutoff", f.cfg.exhaustive_cutoff, "ring sizes up to this are searched exhaustively")
      ->capture_default_str();
  app.add_option("--samples", f.cfg.samples_per_L, "sampled starts per larger ring size")->capture_default_str();
  app.add_option("--seed", f.cfg.seed, "sampling seed")->capture_default_str();
  app.add_option("--level", f.level, "light or full")->capture_default_str();
  app.add_option("--cond1", f.cond1, "complemented or raw reading of condition [1]")->capture_default_str();
  app.add_option("--time-origin", f.cfg.ipf.time_origin, "time origin for the phase parity")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  app.add_option("--max-steps", f.cfg.max_steps, "give up on a run after this many steps")->capture_default_str();
  app.add_option("--budget", f.cfg.budget, "cap on start pairs per mask, 0 = none")->capture_default_str();
  app.add_option("--threads", f.threads, "worker threads (default: TRINE_THREADS or all cores)");
}

int cmd_trace(const std::string& mask_text, std::size_t L, const std::string& graph_file, const std::string& start,
              const std::string& out_dir, const Flags& f) {
  std::optional<MixedGraph> g;
  if (!graph_file.empty()) {
    g = MixedGraph::from_json(slurp(graph_file));
  } else {
    if (mask_text.empty() || L == 0) throw std::invalid_argument("trace needs --graph FILE or --mask n,m with --L");
    g = build_graph(parse_mask(mask_text), L).graph;
  }
  const Coloring s = Coloring::parse(start);
  if (s.size() != g->node_count())
    throw std::invalid_argument("start has " + std::to_string(s.size()) + " nodes, graph has " +
                                std::to_string(g->node_count()));
  const RunRecord run = run_to_mirror(*g, s, f.cfg.max_steps);
  const RunRecord crun = run_to_mirror(*g, complement(s), f.cfg.max_steps);

  std::string ipf;
  if (run.degenerate() || crun.degenerate()) {
    std::cerr << "degenerate start: T=" << run.period() << ", complement T=" << crun.period()
              << "; IPF needs T > 2\n";
  } else {
    ipf = check_ipf(run, crun, f.cfg.ipf).to_json();
  }
  if (out_dir.empty()) {
    std::cout << run.to_json() << "\n";
    if (!ipf.empty()) std::cout << ipf << "\n";
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  emit(run.to_json() + "\n", out_dir + "/run.json");
  emit(run.to_csv(), out_dir + "/run.csv");
  emit(crun.to_json() + "\n", out_dir + "/complement_run.json");
  emit(crun.to_csv(), out_dir + "/complement_run.csv");
  if (!ipf.empty()) emit(ipf + "\n", out_dir + "/ipf.json");
  std::cout << "T=" << run.period() << " Tbar=" << crun.period() << " written to " << out_dir << "\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Three-color reversible automata: runs, IPF checks, mask search, resolution tables"};
  app.require_subcommand(1);
  Flags f;

  // trace
  auto* trace = app.add_subcommand("trace", "run a start coloring to its mirror point and check IPF");
  std::string t_mask, t_graph, t_start, t_out;
  std::size_t t_L = 0;
  trace->add_option("--mask", t_mask, "mask as n,m");
  trace->add_option("--L", t_L, "ring size");
  trace->add_option("--graph", t_graph, "graph JSON file instead of a mask");
  trace->add_option("--start", t_start, "start coloring over A,B")->required();
  trace->add_option("--out", t_out, "directory for trace files (default: print)");
  add_config(*trace, f);

  // check-mask
  auto* check = app.add_subcommand("check-mask", "search for an IPF failure of one mask");
  std::uint32_t c_n = 1, c_m = 1;
  bool c_serial = false;
  std::string c_json;
  check->add_option("--n", c_n, "left mask integer")->required();
  check->add_option("--m", c_m, "right mask integer")->required();
  check->add_flag("--serial", c_serial, "use the single-threaded reference engine");
  check->add_option("--json", c_json, "write the verdict JSON here");
  add_config(*check, f);

  // grid
  auto* grid = app.add_subcommand("grid", "verdicts for all odd masks up to --max");
  std::uint32_t g_max = 7;
  std::string g_out, g_json, g_checkpoint;
  grid->add_option("--max", g_max, "largest n and m (odd)")->capture_default_str();
  grid->add_option("--out", g_out, "CSV output (default: print)");
  grid->add_option("--json", g_json, "JSON output");
  grid->add_option("--checkpoint", g_checkpoint, "JSON-lines file for resuming an interrupted grid");
  add_config(*grid, f);

  // rt
  auto* rtc = app.add_subcommand("rt", "resolution table tools");
  rtc->require_subcommand(1);
  std::string r_out, r_hyp = "next-slot", r_steps;
  std::vector<std::string> r_files;
  std::uint32_t r_n = 1, r_m = 3;
  std::size_t r_k = 2;

  auto* r_extract = rtc->add_subcommand("extract", "EXPERIMENTAL: rebuild a table from verified runs");
  r_extract->add_option("--n", r_n)->required();
  r_extract->add_option("--m", r_m)->required();
  r_extract->add_option("--hypothesis", r_hyp, "next-slot or phase-diff")->capture_default_str();
  r_extract->add_option("--out", r_out);
  add_config(*r_extract, f);

  auto* r_expand = rtc->add_subcommand("expand", "write the six subtables");
  r_expand->add_option("file", r_files)->required()->expected(1);
  r_expand->add_option("--out", r_out, "output prefix (default: print)");

  auto* r_classify = rtc->add_subcommand("classify", "value class and kind");
  r_classify->add_option("files", r_files)->required();

  auto* r_scounts = rtc->add_subcommand("scounts", "value counts as CSV");
  r_scounts->add_option("files", r_files)->required();
  r_scounts->add_option("--out", r_out);

  auto* r_intersect = rtc->add_subcommand("intersect", "rows common to both tables");
  auto* r_union = rtc->add_subcommand("union", "rows of either table");
  auto* r_includes = rtc->add_subcommand("includes", "does the first table contain the second");
  for (auto* sc : {r_intersect, r_union, r_includes}) {
    sc->add_option("files", r_files)->required()->expected(2);
    sc->add_option("--out", r_out);
  }

  auto* r_reflect = rtc->add_subcommand("reflect", "re-express a table on the reflected mask");
  r_reflect->add_option("file", r_files)->required()->expected(1);
  r_reflect->add_option("--out", r_out);

  auto* r_integral = rtc->add_subcommand("integral", "check compatibility and fold into one table");
  r_integral->add_option("files", r_files)->required();
  r_integral->add_option("--out", r_out);

  auto* r_coincide = rtc->add_subcommand("coincide", "coincidence matrix as CSV");
  r_coincide->add_option("files", r_files)->required();
  r_coincide->add_option("--out", r_out);

  auto* r_build = rtc->add_subcommand("build-1-2k1", "table of mask (1, 2^k-1) by induction");
  r_build->add_option("--k", r_k)->required();
  r_build->add_option("--step-table", r_steps, "step table file")->required();
  r_build->add_option("--out", r_out);

  // bundle
  auto* bundle = app.add_subcommand("bundle", "write the full report bundle");
  BundleConfig b_cfg;
  std::string b_out;
  bundle->add_option("--out", b_out, "output directory")->required();
  bundle->add_option("--grid-max", b_cfg.grid_max)->capture_default_str();
  bundle->add_option("--rt-lmax", b_cfg.rt_lmax)->capture_default_str();
  add_config(*bundle, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  f.finish();

  if (trace->parsed()) return cmd_trace(t_mask, t_L, t_graph, t_start, t_out, f);

  if (check->parsed()) {
    const Mask mask(c_n, c_m);
    const MaskVerdict v = c_serial ? classify_mask_serial(mask, f.cfg) : classify_mask(mask, f.cfg);
    if (!c_json.empty()) emit(v.to_json() + "\n", c_json);
    std::cout << mask.str() << " N=" << mask.N() << " " << to_string(v.status);
    if (v.witness)
      std::cout << " witness L=" << v.witness->L << " start=" << v.witness->start
                << " condition=" << v.witness->condition;
    if (v.budget_exhausted) std::cout << " (budget exhausted)";
    std::cout << "\n";
    for (const auto& w : v.degenerate_failures)
      std::cout << "  degenerate ring L=" << w.L << " start=" << w.start << " condition=" << w.condition << "\n";
    return v.status == MaskStatus::Incorrect ? 2 : 0;
  }

  if (grid->parsed()) {
    GridOptions opt;
    opt.checkpoint = g_checkpoint;
    opt.on_cell = [](const MaskVerdict& v) { std::cerr << v.mask.str() << " " << to_string(v.status) << "\n"; };
    const VerdictGrid vg = verdict_grid(g_max, g_max, f.cfg, opt);
    emit(vg.to_csv(), g_out);
    if (!g_json.empty()) emit(vg.to_json() + "\n", g_json);
    return 0;
  }

  if (bundle->parsed()) {
    b_cfg.search = f.cfg;
    const Bundle files = build_bundle(b_cfg);
    write_bundle(files, b_out);
    std::cout << files.size() << " files written to " << b_out << "\n";
    return 0;
  }

  if (r_extract->parsed()) {
    rt::Table t = rt::extract_table(Mask(r_n, r_m), f.cfg, rt::parse_hypothesis(r_hyp));
    emit(t.to_text(), r_out);
    std::cerr << "EXPERIMENTAL reconstruction (" << r_hyp << "): C_R=" << t.CR() << "\n";
    return 0;
  }
  if (r_expand->parsed()) {
    const auto subs = rt::expand_subtables(load_table(r_files[0]));
    const auto all = rt::Substitution::all();
    for (std::size_t i = 0; i < 6; ++i) {
      const std::string label = all[i].label();
      if (r_out.empty())
        std::cout << "# subtable " << label << "\n" << subs[i].to_text();
      else
        emit(subs[i].to_text(), r_out + label + ".rt");
    }
    return 0;
  }
  if (r_classify->parsed()) {
    for (const auto& p : r_files) {
      const rt::Table t = load_table(p);
      std::cout << p << " N=" << t.N() << " C_R=" << t.CR() << " class=" << to_string(rt::classify(t))
                << " kind=" << to_string(rt::kind(t)) << "\n";
    }
    return 0;
  }
  if (r_scounts->parsed()) {
    emit(s_counts_csv(load_tables(r_files), r_files), r_out);
    return 0;
  }
  if (r_intersect->parsed() || r_union->parsed()) {
    const auto ts = load_tables(r_files);
    const rt::Table t = r_intersect->parsed() ? rt::intersect(ts[0], ts[1]) : rt::unite(ts[0], ts[1]);
    emit(t.to_text(), r_out);
    std::cerr << "C_R=" << t.CR() << "\n";
    return 0;
  }
  if (r_includes->parsed()) {
    const auto ts = load_tables(r_files);
    std::cout << (rt::includes(ts[0], ts[1]) ? "true" : "false") << "\n";
    return 0;
  }
  if (r_reflect->parsed()) {
    const rt::Table t = load_table(r_files[0]);
    if (!t.mask_tag) throw std::invalid_argument("reflect needs a table whose header names its mask");
    emit(rt::reflect(t, Mask(t.mask_tag->first, t.mask_tag->second)).to_text(), r_out);
    return 0;
  }
  if (r_integral->parsed()) {
    const auto ts = load_tables(r_files);
    const rt::IntegralTable it = rt::compatibility(ts);
    emit(it.table.to_text(), r_out);
    std::cerr << "fold order:";
    for (std::size_t i = 0; i < it.order.size(); ++i) std::cerr << " " << r_files[it.order[i]] << "->" << it.steps[i];
    std::cerr << "\nC_R=" << it.table.CR() << "\n";
    return 0;
  }
  if (r_coincide->parsed()) {
    emit(rt::coincidence_matrix(load_tables(r_files), r_files).to_csv(), r_out);
    return 0;
  }
  if (r_build->parsed()) {
    const rt::StepTable st = rt::StepTable::parse(slurp(r_steps));
    const rt::Table t = rt::build_1_2k1(r_k, st);
    emit(t.to_text(), r_out);
    std::cerr << "C_R=" << t.CR() << " kind=" << to_string(rt::kind(t)) << "\n";
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}
