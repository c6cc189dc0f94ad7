#pragma once

// Batch runs: enumerate the cyclic designs for each v, search each for
// disjoint representatives, persist one certificate per design.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "novak/design.hpp"

namespace novak {

struct CampaignSpec {
  std::vector<std::uint32_t> vs;
  std::uint32_t k = 3;
  std::uint32_t lambda = 1;
  bool enumerate = true;
  bool search = true;
  bool pipeline = false;
  std::optional<std::uint64_t> max_designs;  ///< per v
  std::uint64_t enumeration_nodes = 1'000'000'000;
  std::uint64_t search_nodes = 10'000'000;
  int workers = 1;
  std::string output_dir = ".";
  std::uint64_t seed = 1;

  struct Injected {
    std::string label;
    CyclicDesign design;
  };
  std::vector<Injected> injected;

  /// DomainError on an empty range, non-positive budgets or workers.
  void check() const;
};

struct CampaignRow {
  std::string label;  ///< "v=13" or the injected label
  std::uint32_t v = 0;
  std::uint32_t lambda = 1;
  std::size_t designs = 0;
  std::size_t feasible = 0;
  std::size_t infeasible = 0;
  std::size_t timeouts = 0;
  bool enumeration_exhaustive = true;
  std::size_t reused = 0;             ///< certificates found on disk
  std::uint64_t new_search_nodes = 0;
  std::uint64_t new_enumeration_nodes = 0;
  std::size_t pipeline_completed = 0;
  bool counterexample = false;        ///< infeasible with lambda = 1, k = 3, v = 1 (mod 6)
};

struct CampaignSummary {
  std::vector<CampaignRow> rows;
  std::uint64_t new_search_nodes() const noexcept;
  std::uint64_t new_enumeration_nodes() const noexcept;
};

CampaignSummary run_campaign(const CampaignSpec& spec);

/// Fixed-width text table.
std::string format_summary(const CampaignSummary& summary, bool colour = false);
nlohmann::json to_json(const CampaignSummary& summary);

}  // namespace novak
