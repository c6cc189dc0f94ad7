#pragma once

// Backtracking over base blocks by smallest deficient difference. Shared by
// the serial and root-split enumerators and the small-v STS constructor.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "novak/core.hpp"

namespace novak::detail {

class DifferenceSearch {
 public:
  /// Called with the chosen blocks (each in its {0,d,...} form) at every
  /// complete family. Return false to stop.
  using Visitor = std::function<bool(const std::vector<std::vector<Residue>>&)>;

  DifferenceSearch(Modulus v, std::uint32_t k, std::uint32_t lambda,
                   std::vector<std::uint32_t> initial_counts = {});

  /// Candidate order for the elements after {0, d}; defaults to 1..v-1.
  void set_candidate_order(std::vector<Residue> order);
  void set_node_limit(std::uint64_t limit) { node_limit_ = limit; }

  /// Full search from the current state. Returns false if stopped early.
  bool run(const Visitor& visit);

  /// Complete first blocks at the root, in search order.
  std::vector<std::vector<Residue>> root_branches();

  /// Search the subtree below one root branch.
  bool run_branch(const std::vector<Residue>& first_block, const Visitor& visit);

  std::uint64_t nodes() const noexcept { return nodes_; }
  bool hit_node_limit() const noexcept { return hit_limit_; }

 private:
  bool dfs();
  bool choose_more(std::size_t from, std::uint32_t remaining, Residue target);
  bool try_add(Residue c);  // applies differences of c against current_; undoes on failure
  void remove_last();
  Residue smallest_deficient() const noexcept;
  bool count_node();

  Modulus v_;
  std::uint32_t k_;
  std::uint32_t lambda_;
  std::vector<std::uint32_t> counts_;
  std::vector<Residue> order_;

  std::vector<Residue> current_;                 // block under construction
  std::vector<std::vector<Residue>> chosen_;     // completed blocks, sorted
  std::vector<Residue> chosen_target_;           // difference each block covered

  const Visitor* visit_ = nullptr;
  bool collect_roots_ = false;
  std::vector<std::vector<Residue>> roots_;

  std::uint64_t nodes_ = 0;
  std::uint64_t node_limit_ = std::numeric_limits<std::uint64_t>::max();
  bool hit_limit_ = false;
};

}  // namespace novak::detail
