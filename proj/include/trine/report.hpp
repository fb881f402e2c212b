#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "trine/ac23.hpp"
#include "trine/rt.hpp"

namespace trine {

struct TraceSpec {
  std::uint32_t n = 1, m = 1;
  std::size_t L = 3;
  std::string start;  // {A,B} coloring
};

struct BundleConfig {
  SearchConfig search;
  /// Grid over odd n,m <= grid_max.
  std::uint32_t grid_max = 7;
  /// Masks whose tables are extracted; tables use search.lmin..rt_lmax.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rt_masks{{1, 3}, {3, 1}, {3, 3}, {1, 7}, {3, 5}, {5, 3}};
  std::size_t rt_lmax = 12;
  std::vector<TraceSpec> traces{{1, 1, 3, "ABA"}};
};

/// 64-bit FNV-1a, written as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// Every bundle file keyed by relative path; manifest.json lists the others
/// with their hashes and the config hash.
using Bundle = std::map<std::string, std::string>;

std::string bundle_config_text(const BundleConfig& cfg);
Bundle build_bundle(const BundleConfig& cfg);
void write_bundle(const Bundle& bundle, const std::string& dir);

/// Header table,N,CR,class,kind, then the 12 value counts.
std::string s_counts_csv(const std::vector<rt::Table>& tables, const std::vector<std::string>& names);

std::string trace_json(const TraceSpec& spec, const IpfConfig& ipf, std::size_t max_steps);

}  // namespace trine
