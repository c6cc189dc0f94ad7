#pragma once

// Partial parallel classes of a cyclic design and the greedy repair step.
//
// With s = floor((k-1)/lambda), T_a(P) is the set of orbits meeting P in
// exactly a blocks, tau_a(P) = |T_a(P)| and
//   d(P) = sum_{a=0}^{s-2} (s-1-a) tau_a(P).

#include <cstdint>
#include <optional>
#include <vector>

#include "novak/design.hpp"

namespace novak {

struct ClassBlock {
  std::size_t orbit = 0;
  Residue translate = 0;
  Block block;
};

/// A set of pairwise disjoint design blocks, each tagged with its orbit.
/// Holds a non-owning pointer to the design, which must outlive it.
class PartialParallelClass {
 public:
  explicit PartialParallelClass(const CyclicDesign& design);

  const CyclicDesign& design() const noexcept { return *design_; }
  std::uint32_t s() const noexcept { return s_; }

  /// True if base_orbit + t is disjoint from every block of the class.
  bool fits(const Block& block) const noexcept;

  /// Throws PreconditionError if the block meets the class or is present.
  void insert(std::size_t orbit, Residue t);
  /// Throws PreconditionError if the block is absent.
  void erase(std::size_t orbit, Residue t);

  std::size_t size() const noexcept { return live_; }
  std::uint32_t count(std::size_t orbit) const noexcept { return per_orbit_[orbit]; }
  std::uint64_t tau(std::uint32_t a) const noexcept {
    return a < tau_.size() ? tau_[a] : 0;
  }
  std::int64_t potential() const noexcept { return potential_; }
  std::int64_t recompute_potential() const;

  /// Entry id of the block covering `point`, if any.
  std::optional<std::size_t> owner(Residue point) const noexcept;
  const ClassBlock& entry(std::size_t id) const { return *entries_.at(id); }
  const std::vector<std::size_t>& entries_of(std::size_t orbit) const {
    return by_orbit_.at(orbit);
  }

  /// Blocks sorted by (orbit, translate).
  std::vector<ClassBlock> blocks() const;
  std::size_t points_used() const noexcept { return live_ * design_->k(); }

  /// Recomputes disjointness, per-orbit counts, tau and d from scratch.
  bool check_invariants() const;

 private:
  std::int64_t weight(std::uint32_t a) const noexcept {
    return a + 2 <= s_ ? static_cast<std::int64_t>(s_ - 1 - a) : 0;
  }
  void move_count(std::size_t orbit, std::uint32_t from, std::uint32_t to);

  const CyclicDesign* design_;
  std::uint32_t s_;
  std::vector<std::optional<ClassBlock>> entries_;
  std::vector<std::size_t> free_;
  std::vector<std::int64_t> owner_;  // point -> entry id or -1
  std::vector<std::vector<std::size_t>> by_orbit_;
  std::vector<std::uint32_t> per_orbit_;
  std::vector<std::uint64_t> tau_;
  std::int64_t potential_ = 0;
  std::size_t live_ = 0;
};

/// floor((k-1)/lambda).
std::uint32_t class_parameter_s(const CyclicDesign& design) noexcept;

enum class BlockQuality { good, bad };

/// GOOD iff, for every orbit i, the block meets at most one block of P in
/// orbit i, and meets none when |P ∩ B_i| < s. The block's own orbit index
/// does not enter the rule.
BlockQuality classify_block(const PartialParallelClass& cls, const Block& block,
                            std::size_t orbit = 0);

/// Number of P-good blocks in one orbit.
std::size_t count_good_blocks(const PartialParallelClass& cls, std::size_t orbit);

struct RepairStep {
  std::size_t orbit = 0;       ///< deficient orbit j
  Residue translate = 0;       ///< B_j = base_j + translate
  std::size_t removed = 0;     ///< |Q|
  std::int64_t potential_before = 0;
  std::int64_t potential_after = 0;
  std::uint64_t tau_before = 0;  ///< tau_{s-1}
  std::uint64_t tau_after = 0;
};

struct RepairResult {
  PartialParallelClass repaired;
  std::vector<RepairStep> steps;
  std::int64_t initial_potential = 0;  ///< d(P')
  std::uint64_t initial_tau = 0;       ///< tau_{s-1}(P')
  std::uint64_t final_tau = 0;         ///< tau_{s-1}(P'')
  std::int64_t bound = 0;              ///< (k+1) d(P') + tau_{s-1}(P')
};

struct RepairOptions {
  /// Verify up front that every deficient orbit has more than
  /// k^2 (ks-k+1)(d(P')-1) good blocks.
  bool check_precondition = true;
};

/// Repeatedly takes the lowest-index orbit j with fewer than s-1 blocks, adds
/// its lexicographically least P-good block B_j and drops the blocks of P
/// meeting B_j, until d = 0. Each step must lower d by exactly one and raise
/// tau_{s-1} by at most k+1; the final bound
///   tau_{s-1}(P'') <= (k+1) d(P') + tau_{s-1}(P')
/// is asserted (InconsistencyError). PreconditionError names the orbit when
/// P' has more than s blocks in some orbit, the good-block counts are too
/// small, or no good block is left. DomainError unless s >= 2.
RepairResult greedy_repair(const PartialParallelClass& start, const RepairOptions& options = {});

}  // namespace novak
