#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "novak/design.hpp"
#include "novak/families.hpp"

namespace novak {

struct EnumerationBudget {
  std::optional<std::uint64_t> max_solutions;  ///< unlimited when empty
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  /// Drop families whose sorted multiset of canonical orbit representatives
  /// was already emitted.
  bool canonical_only = true;
  /// Additionally identify F with uF for units u of Z_v.
  bool quotient_multipliers = false;

  void check() const;  ///< DomainError unless caps are positive
};

struct EnumerationSummary {
  std::uint64_t solutions = 0;
  std::uint64_t nodes = 0;
  bool hit_solution_cap = false;
  bool hit_node_cap = false;

  /// True when the search space was exhausted.
  bool exhaustive() const noexcept { return !hit_solution_cap && !hit_node_cap; }
};

/// Return false to stop the enumeration early.
using FamilySink = std::function<bool(const DifferenceFamily&)>;
using DesignSink = std::function<bool(const CyclicDesign&)>;

/// Canonical key of a family: sorted canonical orbit representatives.
std::vector<Block> family_key(const std::vector<Block>& blocks, Modulus v);

/// Same key minimized over all multipliers x -> ux, gcd(u,v) = 1.
std::vector<Block> multiplier_key(const std::vector<Block>& blocks, Modulus v);

/// Streams every (v,k,lambda)-CDF, each with base blocks in canonical form and
/// sorted. Backtracking covers the smallest deficient difference d with a
/// block containing {0, d} and prunes any difference multiplicity above
/// lambda. Requires lambda(v-1) = 0 (mod k(k-1)), else DomainError.
EnumerationSummary enumerate_cdfs(Modulus v, std::uint32_t k, std::uint32_t lambda,
                                  const EnumerationBudget& budget,
                                  const FamilySink& sink);

/// Root-split variant: the first-level branches are searched concurrently
/// and merged by canonical key in branch order. With no caps hit, the
/// emitted sequence equals the serial enumeration.
EnumerationSummary enumerate_cdfs_parallel(Modulus v, std::uint32_t k,
                                           std::uint32_t lambda,
                                           const EnumerationBudget& budget,
                                           const FamilySink& sink);

std::vector<DifferenceFamily> collect_cdfs(Modulus v, std::uint32_t k,
                                           std::uint32_t lambda,
                                           const EnumerationBudget& budget,
                                           EnumerationSummary* summary = nullptr);

/// Cyclic STS(v). v = 1 (mod 6): developments of (v,3,1)-CDFs.
/// v = 3 (mod 6): the short orbit of {0, v/3, 2v/3} followed by full orbits
/// whose differences cover Z_v minus {0, v/3, 2v/3} once. Nothing is emitted
/// for other v (and the search itself finds nothing for v = 9).
EnumerationSummary enumerate_cyclic_sts(std::uint32_t v, const EnumerationBudget& budget,
                                        const DesignSink& sink);

std::vector<CyclicDesign> collect_cyclic_sts(std::uint32_t v,
                                             const EnumerationBudget& budget,
                                             EnumerationSummary* summary = nullptr);

/// One (v,3,1)-CDF for v = 1 (mod 6), v >= 7, verified with is_cdf before it
/// is returned. Below v = 100 a seeded backtracking search is used, above it
/// randomized hill-climbing on difference coverage with restarts. Throws
/// RetryExhaustedError when the restart budget runs out.
DifferenceFamily construct_sts_cdf(std::uint32_t v, std::uint64_t seed = 1,
                                   std::uint32_t max_restarts = 50);

/// The design whose orbit list repeats every orbit of dev F `copies` times,
/// copy-major. Index lambda*copies. PreconditionError unless F is a CDF.
CyclicDesign superimpose(const DifferenceFamily& family, std::uint32_t copies);

/// First (k(k-1)+1, k, 1)-CDF found by the enumerator. DomainError when none
/// exists.
DifferenceFamily planar_difference_set(std::uint32_t k);

/// `copies` superimposed copies of the planar difference set design; any two
/// of its blocks meet, so it has no disjoint system of representatives.
CyclicDesign superimposed_counterexample(std::uint32_t k, std::uint32_t copies);

}  // namespace novak
